"""Holomorphic series on the unit ball of C^n: fractional derivatives,
regular-variation weights, weighted Besov norms, a Bergman-type operator
with anti-holomorphic symbol and numerical checks of its boundedness."""
from .fraccalc import D, frac_derivative, frac_integral, radial_derivative
from .norms import DivergenceError, NormResult, besov_norm, bloch_norm, sup_norm
from .operators import OperatorSpec, apply, apply_M, apply_T_exact, apply_T_quad, bergman_constant
from .quadrature import (BallRule, SphereRule, build_ball_rule, integrate_ball, mc_sphere_rule,
                         monte_carlo_sphere, product_sphere_rule)
from .series import HoloSeries, evaluate, kernel_series, multiply
from .weights import WeightS, piecewise_weight, power_weight, weight_star

__version__ = "0.1.0"
