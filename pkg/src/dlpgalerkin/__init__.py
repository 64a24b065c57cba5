"""Spline Galerkin methods for the double layer potential equation on contours with corners."""

from .curves import (
    Contour, corner_angles, make_battleax, make_ellipse, make_l1, make_l2, make_l4, make_pacman,
)
from .dlp import KernelParams, apply_A, apply_V, kernel
from .galerkin import (
    GalerkinSolution, GalerkinSystem, SingularSystemError, assemble, condition_number,
    convergence_metric, convergence_table, evaluate_solution, solve,
)
from .mellin import FiniteSection, finite_section, gram_matrix, k_theta, n_theta_matrix, section_conditioning
from .problems import RhsSpec, make_rhs, rhs_eval
from .quadrature import GaussRule, composite_rule, gauss_legendre, scaled_rule
from .splines import SplineBasis, bspline_eval, index_set, nu

__version__ = "0.1.0"
