"""Double layer potential on a parametrized contour.

With the contour parametrized counterclockwise, the operator acts on a
density ``w`` defined on the parameter interval as

    (V w)(sigma) = int_0^1 k(sigma, s) w(s) ds,
    k(sigma, s) = Im( gamma'(s) / (gamma(s) - gamma(sigma)) ) / pi,

so that ``V 1 = 1`` at smooth points. The kernel is real and bounded on each
smooth arc; on the diagonal it tends to ``Im(gamma''/gamma') / (2 pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Contour
from .quadrature import composite_rule, unit_rule

# same-arc pairs closer than this get gamma(s) - gamma(sigma) by integrating gamma'
_CLOSE = 1e-2
_CLOSE_POINTS = 12


@dataclass(frozen=True)
class KernelParams:
    contour: Contour
    delta: float = 1e-7
    m: int = 40
    r: int = 24

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("diagonal threshold must be positive")
        if self.m % self.contour.q:
            raise ValueError(f"panel count m={self.m} must be a multiple of q={self.contour.q}")

    def nodes(self):
        return composite_rule(self.m, self.r)


class _Samples:
    """Contour data at a fixed set of parameters."""

    __slots__ = ("s", "z", "dz", "ddz", "arc")

    def __init__(self, contour, s):
        self.s = np.mod(np.asarray(s, dtype=float).ravel(), 1.0)
        self.z = contour.eval(self.s)
        self.dz = contour.deriv1(self.s)
        self.ddz = contour.deriv2(self.s)
        self.arc = contour.arc_index(self.s)


def _close_differences(contour, sigma, h):
    x, w = unit_rule(_CLOSE_POINTS)
    t = sigma[:, None] + h[:, None] * x[None, :]
    return h * (contour.deriv1(t.ravel()).reshape(t.shape) @ w)


def _kernel(contour, sig: _Samples, src: _Samples, delta):
    diff = src.z[None, :] - sig.z[:, None]
    step = src.s[None, :] - sig.s[:, None]
    if contour.smooth:
        step = step - np.round(step)
        same = np.ones(step.shape, dtype=bool)
    else:
        same = sig.arc[:, None] == src.arc[None, :]
    gap = np.abs(step)
    near = (gap < delta) & same
    close = (gap < _CLOSE) & same & ~near
    if close.any():
        i, j = np.nonzero(close)
        diff[i, j] = _close_differences(contour, sig.s[i], step[i, j])
    bad = (diff == 0) & ~near
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(f"contour self-intersects: gamma({sig.s[i]}) == gamma({src.s[j]})")
    with np.errstate(divide="ignore", invalid="ignore"):
        k = (src.dz[None, :] / diff).imag / np.pi
    if near.any():
        limit = (sig.ddz / sig.dz).imag / (2 * np.pi)
        k = np.where(near, limit[:, None], k)
    return k


def kernel(contour: Contour, sigma, s, delta: float = 1e-7):
    """Double layer kernel ``k(sigma, s)``; arrays broadcast as an outer product.

    Scalars give a float, 1-d arrays a ``(len(sigma), len(s))`` matrix.
    """
    scalar = np.ndim(sigma) == 0 and np.ndim(s) == 0
    k = _kernel(contour, _Samples(contour, sigma), _Samples(contour, s), delta)
    return float(k[0, 0]) if scalar else k


def kernel_matrix(contour: Contour, sigma, s, delta: float = 1e-7) -> np.ndarray:
    return _kernel(contour, _Samples(contour, sigma), _Samples(contour, s), delta)


def apply_V(params: KernelParams, density, sigma):
    """Composite-quadrature value of ``(V w)(sigma)``.

    ``density`` is a callable taking an array of parameters.
    """
    s, w = params.nodes()
    vals = w * np.asarray(density(s), dtype=complex)
    out = kernel_matrix(params.contour, np.atleast_1d(sigma), s, params.delta) @ vals
    return complex(out[0]) if np.ndim(sigma) == 0 else out


def apply_A(params: KernelParams, density, sigma):
    """``(I + V) w`` at sigma."""
    own = np.asarray(density(np.atleast_1d(np.asarray(sigma, dtype=float))), dtype=complex)
    out = own + np.atleast_1d(apply_V(params, density, np.atleast_1d(sigma)))
    return complex(out[0]) if np.ndim(sigma) == 0 else out


def gauss_integral(params: KernelParams, sigma):
    """``int_0^1 k(sigma, s) ds`` by the composite rule; 1 at smooth points."""
    s, w = params.nodes()
    return kernel_matrix(params.contour, np.atleast_1d(sigma), s, params.delta) @ w
