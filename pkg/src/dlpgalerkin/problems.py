"""Right-hand sides used in the experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NAMES = ("f1", "f2", "f3", "custom-constant", "custom-trig")


def ellipse_point(s, a=3.0, b=4.0) -> complex:
    return complex(a * np.cos(2 * np.pi * s) + 1j * b * np.sin(2 * np.pi * s))


@dataclass(frozen=True)
class RhsSpec:
    """A named boundary function ``f(z)``.

    ``f3`` needs the reference point ``z0`` that fixes its jump line
    ``Im z = Im z0``. The custom entries are ``f = value`` and
    ``f = Re z + value``; the latter restricts to a trigonometric polynomial
    on circles.
    """

    name: str
    z0: complex | None = None
    value: complex = 0.0

    def __post_init__(self):
        if self.name not in NAMES:
            raise ValueError(f"unknown right-hand side {self.name!r}; expected one of {NAMES}")
        if self.name == "f3" and self.z0 is None:
            raise ValueError("f3 requires a reference point z0")

    def __call__(self, z):
        return rhs_eval(self, z)

    @property
    def threshold(self):
        """Imaginary part where the function jumps, or None if continuous."""
        if self.name == "f2":
            return 0.0
        if self.name == "f3":
            return self.z0.imag
        return None


def make_rhs(name: str, a: float = 3.0, b: float = 4.0, value: complex | None = None) -> RhsSpec:
    """RhsSpec with the usual defaults; f3 jumps on the line through ``gamma_e(3/8)``."""
    if name == "f3":
        return RhsSpec(name, z0=ellipse_point(3 / 8, a, b))
    if name == "custom-constant":
        return RhsSpec(name, value=1.0 if value is None else value)
    if name == "custom-trig":
        return RhsSpec(name, value=2.0 if value is None else value)
    return RhsSpec(name)


def rhs_eval(spec: RhsSpec, z):
    z = np.asarray(z, dtype=complex)
    if spec.name == "f1":
        out = -z * np.abs(z)
    elif spec.name == "f2":
        out = np.where(z.imag < 0, -1 + 1j * z, 1 + 1j * z)
    elif spec.name == "f3":
        out = np.where(z.imag < spec.z0.imag, -2 + 1j * z, 2 + 1j * z)
    elif spec.name == "custom-constant":
        out = np.full(z.shape, spec.value, dtype=complex)
    else:
        out = z.real + spec.value
    return complex(out) if out.ndim == 0 else out


def jump_parameters(contour, spec: RhsSpec, samples: int = 4096, tol: float = 1e-13) -> list:
    """Parameters in [0, 1) where ``spec`` switches branch along the contour.

    Sign changes of ``Im gamma(s) - threshold`` are bracketed on a uniform
    grid and refined by bisection.
    """
    level = spec.threshold
    if level is None:
        return []

    def side(s):
        return np.asarray(contour.eval(s)).imag >= level

    grid = np.arange(samples + 1) / samples
    vals = side(grid[:-1])
    vals = np.append(vals, vals[0])
    out = []
    for i in np.nonzero(vals[:-1] != vals[1:])[0]:
        lo, hi = grid[i], grid[i + 1]
        left = vals[i]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if side(mid) == left:
                lo = mid
            else:
                hi = mid
        out.append(float(np.mod(0.5 * (lo + hi), 1.0)))
    return sorted(out)
