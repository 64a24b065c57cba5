"""Gauss-Legendre rules and the composite panel rule used for the inner integrals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class GaussRule:
    """An r-point Gauss-Legendre rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def r(self) -> int:
        return len(self.nodes)


def _legendre_with_derivative(r, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, r + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # p1 = P_r, p0 = P_{r-1}
    dp = r * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def gauss_legendre(r: int, tol: float = 1e-15, maxiter: int = 100) -> GaussRule:
    """Nodes and weights of the r-point Gauss-Legendre rule.

    The nodes are the roots of the Legendre polynomial ``P_r``, found by
    Newton iteration started from Chebyshev-like initial guesses. Weights
    are ``2 / ((1 - x^2) P_r'(x)^2)``.
    """
    if r < 1:
        raise ValueError(f"point count must be >= 1, got {r}")
    if r == 1:
        nodes, weights = np.array([0.0]), np.array([2.0])
    else:
        i = np.arange(1, r + 1)
        x = np.cos(np.pi * (i - 0.25) / (r + 0.5))
        for _ in range(maxiter):
            p, dp = _legendre_with_derivative(r, x)
            dx = p / dp
            x = x - dx
            if np.max(np.abs(dx)) < tol:
                break
        _, dp = _legendre_with_derivative(r, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        order = np.argsort(x)
        x, w = x[order], w[order]
        # enforce exact symmetry about 0
        nodes = 0.5 * (x - x[::-1])
        weights = 0.5 * (w + w[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussRule(nodes, weights)


def scaled_rule(rule: GaussRule, a: float, b: float):
    """Map ``rule`` affinely onto [a, b]; returns ``(nodes, weights)``."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    half = 0.5 * (b - a)
    return a + half * (rule.nodes + 1.0), half * rule.weights


def unit_rule(r: int):
    """The r-point rule on [0, 1]."""
    return scaled_rule(gauss_legendre(r), 0.0, 1.0)


@lru_cache(maxsize=None)
def _composite(m, r):
    eps, w = unit_rule(r)
    nodes = ((np.arange(m)[:, None] + eps[None, :]) / m).ravel()
    weights = np.tile(w / m, m)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_rule(m: int = 40, r: int = 24):
    """Composite rule on [0, 1] with ``m`` equal panels of ``r`` Gauss points.

    Nodes are ``(l + eps_p) / m`` and weights ``w_p / m``, panel by panel.
    """
    if m < 1:
        raise ValueError(f"panel count must be >= 1, got {m}")
    return _composite(int(m), int(r))
