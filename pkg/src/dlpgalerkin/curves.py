"""Closed piecewise-smooth contours with corners and the test curves built from them.

A contour with ``q`` arcs is parametrized on [0, 1) so that arc k covers
[k/q, (k+1)/q]; the breakpoints ``k/q`` are the corner points. Every arc is
described on its own local parameter ``u`` in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Arc:
    """One smooth arc: position and first two derivatives in the local parameter."""

    f: Callable
    df: Callable
    ddf: Callable

    def rotated(self, w: complex) -> "Arc":
        return Arc(lambda u: w * self.f(u), lambda u: w * self.df(u), lambda u: w * self.ddf(u))


class Corner(NamedTuple):
    s: float
    point: complex
    theta: float
    beta: float


@dataclass(frozen=True)
class Contour:
    arcs: tuple
    name: str = "contour"
    smooth: bool = False
    theta: float | None = None

    @property
    def q(self) -> int:
        return len(self.arcs)

    def _locate(self, s):
        s = np.mod(np.asarray(s, dtype=float), 1.0)
        k = np.minimum(np.floor(s * self.q).astype(int), self.q - 1)
        return k, s * self.q - k

    def _apply(self, s, which, scale):
        scalar = np.ndim(s) == 0
        k, u = self._locate(s)
        k, u = np.atleast_1d(k), np.atleast_1d(u)
        out = np.empty(u.shape, dtype=complex)
        for i, arc in enumerate(self.arcs):
            mask = k == i
            if mask.any():
                out[mask] = getattr(arc, which)(u[mask])
        out *= scale
        return complex(out[0]) if scalar else out

    def eval(self, s):
        """Point ``gamma(s)``; s is reduced modulo 1."""
        return self._apply(s, "f", 1.0)

    def deriv1(self, s):
        """``gamma'(s)``; right-sided at breakpoints."""
        return self._apply(s, "df", self.q)

    def deriv2(self, s):
        """``gamma''(s)``; right-sided at breakpoints."""
        return self._apply(s, "ddf", self.q ** 2)

    def arc_index(self, s):
        return self._locate(s)[0]

    def one_sided_tangents(self, k: int):
        """``(gamma'(k/q - 0), gamma'(k/q + 0))``."""
        left = self.q * complex(self.arcs[(k - 1) % self.q].df(np.array([1.0]))[0])
        right = self.q * complex(self.arcs[k % self.q].df(np.array([0.0]))[0])
        return left, right

    def corners(self) -> list:
        return [complex(self.arcs[k].f(np.array([0.0]))[0]) for k in range(self.q)]

    def corner_angles(self) -> list:
        return corner_angles(self)

    def corner_report(self) -> list:
        """Position, opening angle and tangent inclination at every breakpoint."""
        out = []
        for k, (theta, pt) in enumerate(zip(self.corner_angles(), self.corners())):
            _, right = self.one_sided_tangents(k)
            beta = float(np.mod(np.angle(right), TWO_PI))
            out.append(Corner(k / self.q, pt, theta, beta))
        return out

    def validate(self, rtol: float = 1e-10, samples: int = 257):
        """Check closure, matching derivative magnitudes at corners and regularity."""
        u = np.linspace(0.0, 1.0, samples)
        scale = 1.0
        for k in range(self.q):
            end = complex(self.arcs[k - 1].f(np.array([1.0]))[0])
            start = complex(self.arcs[k].f(np.array([0.0]))[0])
            scale = max(scale, abs(start))
            if abs(end - start) > 1e-12 * max(1.0, abs(start)):
                raise ValueError(f"{self.name}: arcs do not join at s={k}/{self.q}")
            left, right = self.one_sided_tangents(k)
            if left == 0 or right == 0:
                raise ValueError(f"{self.name}: zero one-sided tangent at s={k}/{self.q}")
            if abs(abs(left) - abs(right)) > rtol * max(abs(left), abs(right)):
                raise ValueError(
                    f"{self.name}: |gamma'| jumps at s={k}/{self.q} ({abs(left)} vs {abs(right)})"
                )
        for arc in self.arcs:
            if np.any(np.abs(arc.df(u)) == 0.0):
                raise ValueError(f"{self.name}: vanishing derivative on an arc")
        return self


def corner_angles(contour: Contour) -> list:
    """Opening angles in (0, 2 pi) at the breakpoints ``k/q``.

    The angle is ``arg(-gamma'(tau - 0) / gamma'(tau + 0))`` taken in
    (0, 2 pi): the interior angle swept from the outgoing semi-tangent to the
    reversed incoming one. Smooth breakpoints give pi.
    """
    out = []
    for k in range(contour.q):
        left, right = contour.one_sided_tangents(k)
        if left == 0 or right == 0:
            raise ValueError(f"zero one-sided tangent at s={k}/{contour.q}")
        if contour.smooth:
            out.append(np.pi)
            continue
        ang = float(np.mod(np.angle(-left / right), TWO_PI))
        out.append(ang)
    return out


# ---------------------------------------------------------------------------
# arc builders


def _ellipse(a, b, s):
    return a * np.cos(TWO_PI * s) + 1j * b * np.sin(TWO_PI * s)


def _ellipse_d1(a, b, s):
    return TWO_PI * (-a * np.sin(TWO_PI * s) + 1j * b * np.cos(TWO_PI * s))


def ellipse_arc(a, b, start, span) -> Arc:
    c1, c2 = TWO_PI * span, (TWO_PI * span) ** 2

    def f(u):
        return _ellipse(a, b, start + span * u)

    def df(u):
        t = TWO_PI * (start + span * u)
        return c1 * (-a * np.sin(t) + 1j * b * np.cos(t))

    def ddf(u):
        t = TWO_PI * (start + span * u)
        return -c2 * (a * np.cos(t) + 1j * b * np.sin(t))

    return Arc(f, df, ddf)


def hermite_arc(A, B, t0, t1) -> Arc:
    """Cubic with ``H(0)=A, H(1)=B, H'(0)=t0, H'(1)=t1``."""
    c = (A, t0, 3 * (B - A) - 2 * t0 - t1, 2 * (A - B) + t0 + t1)
    return Arc(
        lambda u: c[0] + u * (c[1] + u * (c[2] + u * c[3])),
        lambda u: c[1] + u * (2 * c[2] + 3 * u * c[3]),
        lambda u: 2 * c[2] + 6 * u * c[3],
    )


def _check_theta(theta):
    if not 0.0 < theta < TWO_PI:
        raise ValueError(f"opening angle must lie in (0, 2 pi), got {theta}")


def _check_axes(a, b):
    if a <= 0 or b <= 0:
        raise ValueError(f"semi-axes must be positive, got a={a}, b={b}")


# ---------------------------------------------------------------------------
# contours


def make_ellipse(a: float = 3.0, b: float = 4.0) -> Contour:
    _check_axes(a, b)
    return Contour((ellipse_arc(a, b, 0.0, 1.0),), name=f"ellipse({a},{b})", smooth=True).validate()


def _cut_ellipse(a, b, kept, name):
    """Ellipse pieces joined by inward-dipping Hermite arcs.

    ``kept`` lists (start, span) ranges of the ellipse parameter that are
    kept; each is followed by a cubic running to the start of the next one.
    The cubic leaves towards the origin and arrives pointing away from it,
    with speeds matching the neighbouring ellipse pieces.
    """
    arcs = []
    for i, (start, span) in enumerate(kept):
        arcs.append(ellipse_arc(a, b, start, span))
        nstart, nspan = kept[(i + 1) % len(kept)]
        A = _ellipse(a, b, start + span)
        B = _ellipse(a, b, nstart)
        t0 = span * abs(_ellipse_d1(a, b, start + span)) * (-A / abs(A))
        t1 = nspan * abs(_ellipse_d1(a, b, nstart)) * (B / abs(B))
        arcs.append(hermite_arc(A, B, t0, t1))
    return Contour(tuple(arcs), name=name).validate()


def make_pacman(a: float = 3.0, b: float = 4.0) -> Contour:
    """Ellipse with the part s in [3/8, 5/8] replaced by a cubic mouth (q = 2)."""
    _check_axes(a, b)
    return _cut_ellipse(a, b, [(5 / 8, 3 / 4)], f"pacman({a},{b})")


def make_battleax(a: float = 3.0, b: float = 4.0) -> Contour:
    """Ellipse with s in [3/8, 5/8] and [7/8, 9/8] replaced by cubics (q = 4)."""
    _check_axes(a, b)
    return _cut_ellipse(a, b, [(1 / 8, 1 / 4), (5 / 8, 1 / 4)], f"battleax({a},{b})")


def make_l1(theta: float) -> Contour:
    """One-corner curve ``sin(pi s) exp(i theta (s - 1/2))``."""
    _check_theta(theta)
    ia = 1j * theta

    def f(u):
        return np.sin(np.pi * u) * np.exp(ia * (u - 0.5))

    def df(u):
        e = np.exp(ia * (u - 0.5))
        return (np.pi * np.cos(np.pi * u) + ia * np.sin(np.pi * u)) * e

    def ddf(u):
        e = np.exp(ia * (u - 0.5))
        return ((ia ** 2 - np.pi ** 2) * np.sin(np.pi * u) + 2 * ia * np.pi * np.cos(np.pi * u)) * e

    return Contour((Arc(f, df, ddf),), name=f"l1({theta / np.pi:g}pi)", theta=theta).validate()


def make_l2(theta: float) -> Contour:
    """Two-corner curve made of two circular arcs meeting at angle theta."""
    _check_theta(theta)
    c = 0.5 / np.tan(theta / 2)
    r = 0.5 / np.sin(theta / 2)
    ia = 1j * theta

    first = Arc(
        lambda u: -c + r * np.exp(ia * (u - 0.5)),
        lambda u: r * ia * np.exp(ia * (u - 0.5)),
        lambda u: r * ia ** 2 * np.exp(ia * (u - 0.5)),
    )
    # the second branch is the first one reflected through the origin
    return Contour((first, first.rotated(-1.0)), name=f"l2({theta / np.pi:g}pi)", theta=theta).validate()


def l4_tangents(theta: float):
    """End tangents ``(P'(0), P'(1))`` of the first side of the 4-corner curve."""
    a = 3 * np.sin(3 * np.pi / 4 + theta / 2) + 3j * np.cos(3 * np.pi / 4 + theta / 2)
    b = 3 * np.sin(np.pi / 4 - theta / 2) + 3j * np.cos(np.pi / 4 - theta / 2)
    # `a` is the semi-tangent at A pointing back along the curve; the cubic
    # leaves A along -a, which makes the side mirror-symmetric and the corner angle theta
    return -a, b


def make_l4(theta: float) -> Contour:
    """Four-corner curve: a cubic from 1-i to 1+i and its rotations by i, -1, -i."""
    _check_theta(theta)
    t0, t1 = l4_tangents(theta)
    side = hermite_arc(1 - 1j, 1 + 1j, t0, t1)
    arcs = tuple(side.rotated(1j ** k) for k in range(4))
    return Contour(arcs, name=f"l4({theta / np.pi:g}pi)", theta=theta).validate()


CURVES = {
    "ellipse": make_ellipse,
    "pacman": make_pacman,
    "battleax": make_battleax,
    "l1": make_l1,
    "l2": make_l2,
    "l4": make_l4,
}
