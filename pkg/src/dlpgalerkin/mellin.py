"""Finite sections of the local corner operators.

Near a corner of opening angle theta the double layer equation becomes, on
two copies of the half axis, the block operator ``[[I, N], [N, I]]`` with the
Mellin convolution

    (N w)(sigma) = int_0^inf k(sigma / s) w(s) ds / s,
    k(u) = u sin(theta) / (2 pi |1 - u e^{i theta}|^2).

Projected onto the splines ``B_d(s - j)``, j >= 0, and written in
coefficients, N becomes ``X = E^{-1} B`` with Gram matrix E and Galerkin
matrix B. Truncating to N x N blocks gives the finite sections whose
smallest singular values are tracked as N grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .quadrature import unit_rule
from .splines import bspline_eval, nu

_CHUNK = 2 ** 22


def k_theta(theta: float, u):
    """Mellin kernel ``u sin(theta) / (2 pi (1 - 2 u cos(theta) + u^2))`` for u > 0."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("the Mellin kernel is defined for u > 0 only")
    out = u * np.sin(theta) / (2 * np.pi * (1.0 - 2.0 * u * np.cos(theta) + u * u))
    return out if out.ndim else float(out)


def _pair_kernel(theta, sigma, s):
    # k(sigma/s)/s written without the division by s
    st, ct = np.sin(theta), np.cos(theta)
    return sigma * st / (2 * np.pi * (s * s - 2.0 * s * sigma * ct + sigma * sigma))


def gram_matrix(d: int, M: int) -> np.ndarray:
    """Normalized Gram matrix ``nu_d^2 int B_d(s-j) B_d(s-k) ds``, j, k < M (banded Toeplitz)."""
    eps, w = unit_rule(d + 2)
    x = (np.arange(d + 1)[:, None] + eps[None, :]).ravel()
    wx = np.tile(w, d + 1)
    col = np.zeros(M)
    base = bspline_eval(d, x)
    for off in range(min(d + 1, M)):
        col[off] = nu(d) ** 2 * np.sum(wx * base * bspline_eval(d, x - off))
    return scipy.linalg.toeplitz(col)


def _origin_cell(theta, d, r):
    """``int_0^1 int_0^1 K(sigma, s) B_d(sigma) B_d(s)`` via a Duffy split of the square."""
    x, wx = unit_rule(r)
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(wx, wx)
    # sigma = x, s = x y  (s <= sigma);  jacobian x cancels the 1/x of K
    low = _pair_kernel(theta, 1.0, Y) * bspline_eval(d, X) * bspline_eval(d, X * Y)
    # s = x, sigma = x y  (sigma <= s)
    high = _pair_kernel(theta, Y, 1.0) * bspline_eval(d, X * Y) * bspline_eval(d, X)
    return float(np.sum(W * (low + high)))


def n_theta_matrix(theta: float, d: int, M: int, r: int = 24) -> np.ndarray:
    """Galerkin matrix ``B_jk = nu_d^2 (N B_d(. - k), B_d(. - j))`` for j, k < M.

    Both integrals use r Gauss points on every unit interval of the supports.
    The cell at the origin, where the kernel is homogeneous of degree -1,
    is integrated after a Duffy split.
    """
    eps, w = unit_rule(r)
    cells = M + d
    x = (np.arange(cells)[:, None] + eps[None, :]).ravel()
    wx = np.tile(w, cells)
    cell_of = np.repeat(np.arange(cells), r)
    # basis values: point p belongs to cell c, nonzero for j in c-d..c
    idx = np.arange(M)
    phi = bspline_eval(d, x[:, None] - idx[None, :]) * wx[:, None]

    B = np.zeros((M, M))
    rows_per_block = max(1, _CHUNK // len(x))
    for a in range(0, len(x), rows_per_block):
        b = min(len(x), a + rows_per_block)
        K = _pair_kernel(theta, x[a:b, None], x[None, :])
        # origin cell handled separately
        K[(cell_of[a:b] == 0)[:, None] & (cell_of == 0)[None, :]] = 0.0
        B += phi[a:b].T @ (K @ phi)
    B[0, 0] += _origin_cell(theta, d, r)
    return nu(d) ** 2 * B


@dataclass(frozen=True)
class FiniteSection:
    theta: float
    d: int
    N: int
    M: int
    block: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        I = np.eye(self.N)
        return np.block([[I, self.block], [self.block, I]])

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)

    def block_singular_values(self) -> np.ndarray:
        """Singular values through ``I + X`` and ``I - X``; equal to those of the full section."""
        I = np.eye(self.N)
        sv = np.concatenate([
            np.linalg.svd(I + self.block, compute_uv=False),
            np.linalg.svd(I - self.block, compute_uv=False),
        ])
        return np.sort(sv)[::-1]

    def cond(self) -> float:
        sv = self.singular_values()
        return float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")

    def sigma_min(self) -> float:
        return float(self.singular_values()[-1])


def finite_section(theta: float, d: int, N: int, M: int | None = None, r: int = 24) -> FiniteSection:
    """N x N section of the coefficient matrix ``E^{-1} B``, built on M >= N + 2(d+1) indices."""
    if not 0.0 < theta < 2 * np.pi:
        raise ValueError(f"opening angle must lie in (0, 2 pi), got {theta}")
    if M is None:
        M = N + 2 * (d + 1)
    if M < N + 2 * (d + 1):
        raise ValueError(f"build size M={M} must be at least N + 2(d+1) = {N + 2 * (d + 1)}")
    B = n_theta_matrix(theta, d, M, r)
    if d == 0:
        X = B
    else:
        E = gram_matrix(d, M)
        X = scipy.linalg.solve(E, B, assume_a="pos")
    return FiniteSection(theta, d, N, M, X[:N, :N].copy())


class SectionStats(NamedTuple):
    N: int
    cond: float
    sigma_min: float


def section_conditioning(theta: float, d: int, sizes, r: int = 24) -> list:
    """``(N, cond_2, sigma_min)`` of the finite sections for increasing N.

    All sections are cut from one matrix built for the largest N.
    """
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("section sizes must be increasing")
    big = finite_section(theta, d, sizes[-1], r=r)
    out = []
    for N in sizes:
        sec = FiniteSection(theta, d, N, big.M, big.block[:N, :N])
        sv = sec.singular_values()
        smin = float(sv[-1])
        out.append(SectionStats(N, float(sv[0] / smin) if smin > 0 else float("inf"), smin))
    return out


def is_invertible(stats, threshold: float = 1e-3, drift: float = 0.05) -> bool:
    """Finite-section verdict: sigma_min above ``threshold`` and settled over the last doubling."""
    if stats[-1].sigma_min <= threshold:
        return False
    if len(stats) < 2:
        return True
    prev, last = stats[-2].sigma_min, stats[-1].sigma_min
    return abs(last - prev) / prev < drift
