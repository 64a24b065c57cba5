"""Cardinal B-splines on uniform meshes and the corner-avoiding spline spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .quadrature import unit_rule


def bspline_eval(d: int, x):
    """Cardinal B-spline of degree ``d`` supported on [0, d+1].

    Degree 0 is the indicator of [0, 1); higher degrees are built with the
    degree-raising recurrence, which agrees with repeated convolution by
    that indicator.
    """
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    x = np.asarray(x, dtype=float)
    # N[i] holds the degree-k B-spline with knots i..i+k+1
    N = [((x >= i) & (x < i + 1)).astype(float) for i in range(d + 1)]
    for k in range(1, d + 1):
        N = [
            ((x - i) * N[i] + (i + k + 1 - x) * N[i + 1]) / k
            for i in range(d + 1 - k)
        ]
    out = N[0]
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def nu(d: int) -> float:
    """Normalization constant ``(int_0^{d+1} B_d(s)^2 ds)^(-1/2)``."""
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    eps, w = unit_rule(d + 2)  # exact for the degree-2d pieces
    total = sum(np.sum(w * bspline_eval(d, c + eps) ** 2) for c in range(d + 1))
    return float(total ** -0.5)


def index_set(n: int, d: int, q: int) -> np.ndarray:
    """Indices j in 0..n-d-1 whose support (j/n, (j+d+1)/n) holds no corner k/q.

    Corners that only touch a support endpoint do not disqualify j.
    """
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    if q < 1 or n % q:
        raise ValueError(f"corner count q={q} must divide n={n}")
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    # k/q in (j/n, (j+d+1)/n)  <=>  j*q < k*n < (j+d+1)*q ; integer arithmetic
    j = np.arange(n - d)
    kn = np.arange(q + 1)[None, :] * n
    bad = ((j[:, None] * q < kn) & (kn < (j[:, None] + d + 1) * q)).any(axis=1)
    return j[~bad]


@dataclass(frozen=True)
class SplineBasis:
    """Normalized splines ``nu_d sqrt(n) B_d(n s - j)`` for j in I(n, d)."""

    d: int
    n: int
    q: int = 1
    index_set: tuple = field(init=False)
    nu: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(int(j) for j in index_set(self.n, self.d, self.q)))
        object.__setattr__(self, "nu", nu(self.d))

    @property
    def size(self) -> int:
        return len(self.index_set)

    @property
    def scale(self) -> float:
        return self.nu * np.sqrt(self.n)

    def support(self, j):
        return j / self.n, (j + self.d + 1) / self.n

    def basis_at(self, j: int, s):
        """Value of the j-th normalized basis function at parameter ``s`` in [0, 1]."""
        if j not in self._positions:
            raise ValueError(f"index {j} is not in I(n={self.n}, d={self.d})")
        return self.scale * bspline_eval(self.d, self.n * np.asarray(s, dtype=float) - j)

    @property
    def _positions(self):
        return _positions(self.index_set)

    def position(self, j: int) -> int:
        """Row/column position of index j in the sorted index set."""
        return self._positions[j]

    def design_matrix(self, s) -> np.ndarray:
        """Dense matrix of basis values, one row per point of ``s``."""
        s = np.asarray(s, dtype=float)
        idx = np.asarray(self.index_set)
        return self.scale * bspline_eval(self.d, self.n * s[:, None] - idx[None, :])


@lru_cache(maxsize=64)
def _positions(index_set):
    return {j: p for p, j in enumerate(index_set)}
