"""Spline Galerkin discretization of ``(I + V) w = f`` on a contour.

The unknown is expanded in the normalized splines of a ``SplineBasis`` and the
equation is tested against the same splines in the parameter-domain scalar
product ``(f, g) = int_0^1 f(gamma(s)) conj(g(gamma(s))) ds``. Outer integrals
use one Gauss-Legendre rule per spline support, inner integrals (the action
of V) the composite panel rule.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .curves import Contour
from .dlp import kernel_matrix
from .quadrature import composite_rule, unit_rule
from .splines import SplineBasis, bspline_eval

_CHUNK = 2 ** 21  # kernel entries evaluated per block


class SingularSystemError(ArithmeticError):
    """The Galerkin matrix is numerically singular."""


@dataclass
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    basis: SplineBasis
    contour: Contour
    m: int
    r: int
    # outer quadrature: points (N, P) and weights premultiplied by the test spline
    points: np.ndarray = field(repr=False)
    test_weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def project(self, f) -> np.ndarray:
        """Right-hand side ``(f, phi_j)`` for a boundary function ``f(z)``."""
        z = self.contour.eval(self.points.ravel()).reshape(self.points.shape)
        fz = np.asarray(f(z), dtype=complex)
        return np.sum(self.test_weights * fz, axis=1)

    def with_rhs(self, f) -> "GalerkinSystem":
        return GalerkinSystem(
            self.matrix, self.project(f), self.basis, self.contour,
            self.m, self.r, self.points, self.test_weights,
        )


@dataclass
class GalerkinSolution:
    coefficients: np.ndarray
    basis: SplineBasis
    contour: Contour
    residual: float = 0.0

    def __call__(self, s):
        return evaluate_solution(self, s)


def _outer_rule(basis: SplineBasis, points: int, split: bool):
    idx = np.asarray(basis.index_set, dtype=float)[:, None]
    n, d = basis.n, basis.d
    eps, w = unit_rule(points)
    if split:
        cells = np.arange(d + 1)[:, None]
        local = (cells + eps[None, :]).ravel()
        weights = np.tile(w, d + 1) / n
    else:
        local = (d + 1) * eps
        weights = (d + 1) * w / n
    t = (idx + local[None, :]) / n
    return t, np.broadcast_to(weights, t.shape)


def assemble(
    contour: Contour,
    d: int,
    n: int,
    f=None,
    m: int = 40,
    r: int = 24,
    outer_points: int = 24,
    split_outer: bool = False,
    delta: float = 1e-7,
) -> GalerkinSystem:
    """Build the Galerkin matrix ``((I + V) phi_k, phi_j)`` and right-hand side.

    ``f`` is a function of the boundary point z (complex array in, complex
    array out); ``None`` gives a zero right-hand side, which is enough for
    condition-number studies.
    """
    q = contour.q
    if n % q:
        raise ValueError(f"n={n} must be a multiple of the corner count q={q}")
    if m % q:
        raise ValueError(f"panel count m={m} must be a multiple of q={q}")
    basis = SplineBasis(d, n, q)
    if basis.size == 0:
        raise ValueError(f"empty index set for n={n}, d={d}, q={q}")
    if n > 512 and m < n / 8:
        warnings.warn(
            f"n={n} with only m={m} panels; the inner quadrature resolves the "
            f"splines poorly, m >= {int(np.ceil(n / 8))} is recommended",
            stacklevel=2,
        )

    J = np.asarray(basis.index_set)
    N = len(J)
    t, W = _outer_rule(basis, outer_points, split_outer)
    own = basis.scale * bspline_eval(d, n * t - J[:, None])
    tw = W * own

    # identity part: the test spline only overlaps neighbours within d indices
    gram = np.zeros((N, N))
    for off in range(-d, d + 1):
        pos = np.searchsorted(J, J + off)
        ok = (pos < N) & (J[np.minimum(pos, N - 1)] == J + off)
        rows = np.nonzero(ok)[0]
        other = basis.scale * bspline_eval(d, n * t[rows] - (J[rows] + off)[:, None])
        gram[rows, pos[rows]] = np.sum(tw[rows] * other, axis=1)

    s, w = composite_rule(m, r)
    trial = w[:, None] * basis.design_matrix(s)
    P = t.shape[1]
    rows_per_block = max(1, _CHUNK // (P * len(s)))
    reduced = np.empty((N, len(s)))
    for a in range(0, N, rows_per_block):
        b = min(N, a + rows_per_block)
        K = kernel_matrix(contour, t[a:b].ravel(), s, delta).reshape(b - a, P, len(s))
        reduced[a:b] = np.einsum("jp,jpi->ji", tw[a:b], K)
    matrix = (gram + reduced @ trial).astype(complex)

    system = GalerkinSystem(matrix, np.zeros(N, dtype=complex), basis, contour, m, r, t, tw)
    if f is not None:
        system.rhs = system.project(f)
    return system


def solve(system: GalerkinSystem, rtol: float = 1e-10) -> GalerkinSolution:
    """Solve by LU with partial pivoting; singular matrices raise SingularSystemError."""
    M, b = system.matrix, system.rhs
    norm = np.linalg.norm(M, np.inf)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < 1e-14 * norm:
        raise SingularSystemError(f"pivot below 1e-14 * ||M|| for a {M.shape[0]}x{M.shape[0]} system")
    a = scipy.linalg.lu_solve((lu, piv), b)
    denom = norm * np.linalg.norm(a, np.inf) + np.linalg.norm(b, np.inf)
    residual = np.linalg.norm(M @ a - b, np.inf) / denom if denom > 0 else 0.0
    if residual >= rtol:
        raise SingularSystemError(f"relative residual {residual:.3e} exceeds {rtol:g}")
    return GalerkinSolution(a, system.basis, system.contour, float(residual))


def evaluate_solution(sol: GalerkinSolution, s):
    """``sum_j a_j phi_nj(s)`` summed over the at most d+1 splines covering s."""
    basis = sol.basis
    n, d = basis.n, basis.d
    full = np.zeros(n, dtype=complex)
    full[np.asarray(basis.index_set)] = sol.coefficients
    s = np.mod(np.asarray(s, dtype=float), 1.0)
    x = n * s
    base = np.floor(x).astype(int)
    out = np.zeros(np.shape(s), dtype=complex)
    for off in range(d + 1):
        j = base - off
        ok = (j >= 0) & (j < n)
        jj = np.where(ok, j, 0)
        out += np.where(ok, full[jj] * bspline_eval(d, x - jj), 0.0)
    out *= basis.scale
    return complex(out) if out.ndim == 0 else out


def condition_number(system_or_matrix) -> float:
    """Spectral condition number ``sigma_max / sigma_min`` from a full SVD."""
    M = getattr(system_or_matrix, "matrix", system_or_matrix)
    sv = np.linalg.svd(np.asarray(M), compute_uv=False)
    if sv[-1] == 0:
        return float("inf")
    return float(sv[0] / sv[-1])


def error_mesh(q: int, h0: float = 1 / 128, h: float = 1e-3) -> np.ndarray:
    """Equispaced points ``k/q + h0 : h : (k+1)/q - h0`` on each arc, concatenated."""
    count = int(np.floor((1.0 / q - 2 * h0) / h + 1e-9)) + 1
    steps = h0 + h * np.arange(count)
    return np.concatenate([k / q + steps for k in range(q)])


def relative_difference(fine, coarse, mesh) -> float:
    top = np.linalg.norm(fine(mesh) - coarse(mesh))
    bottom = np.linalg.norm(fine(mesh))
    if bottom == 0:
        raise ZeroDivisionError("the finer solution vanishes on the mesh; E_n is undefined")
    return float(top / bottom)


def convergence_table(contour, f, d, n_list, h0=1 / 128, h=1e-3, **kw):
    """``[(n, E_n)]`` with ``E_n = |w_2n - w_n| / |w_2n|`` on the error mesh.

    Solutions are shared between neighbouring entries of ``n_list``.
    """
    mesh = error_mesh(contour.q, h0, h)
    cache = {}

    def sol(n):
        if n not in cache:
            cache[n] = solve(assemble(contour, d, n, f, **kw))
        return cache[n]

    return [(n, relative_difference(sol(2 * n), sol(n), mesh)) for n in n_list]


def convergence_metric(contour, f, d, n, h0=1 / 128, h=1e-3, **kw) -> float:
    return convergence_table(contour, f, d, [n], h0, h, **kw)[0][1]
