"""
The Bergman-type operator with anti-holomorphic symbol
======================================================

T f(z) integrates (1-|xi|^2)^a conj(h(xi)) f(xi) against the kernel
(1 - <z, xi>)^(-(n+a+1)).  Expanding the kernel in powers of <z, xi>
turns T into a contraction against monomial moments; the same value
can be obtained by integrating the definition directly.
"""

import numpy as np

from ballbesov import HoloSeries, OperatorSpec, apply_T_exact, apply_T_quad, bergman_constant, evaluate
from ballbesov.operators import kernel_identity_target, reproducing_check
from ballbesov.series import kernel_series

# h = 1 + z1 and f = z1^2 in two variables, weight exponent a = 1.
h = HoloSeries(2, 1, {(0, 0): 1.0, (1, 0): 1.0})
f = HoloSeries.monomial((2, 0))
spec = OperatorSpec.for_T(h, 1.0, 8)

Tf = apply_T_exact(spec, f)
print("T f =", Tf)

# %%
# The direct quadrature agrees with the coefficient path.
Z = np.array([[0.3, 0.2j], [0.0, -0.5], [0.6, 0.0]])
print("exact:", evaluate(Tf, Z))
print("quad: ", apply_T_quad(spec, f, Z))

# %%
# Applied to the kernel at tau, T returns conj(h(tau)) times the same
# kernel divided by C(n, a).  This is what lets |h(tau)| be read off
# from norms of T f_tau.
tau = np.array([0.6, 0.0])
K = 40
out = apply_T_exact(OperatorSpec(h, 1.0, K, K - 1), kernel_series(tau, 2 + 1.0 + 1, K))
target = kernel_identity_target(h, tau, 1.0, K - 1)
print("kernel identity residual:", out.distance(target), " C(2, 1) =", bergman_constant(2, 1.0))

# %%
# The reproducing formula for Df with m = 2, by both paths.
g = HoloSeries(2, 2, {(2, 0): 1.0, (0, 1): 1.0})
print("reproducing residual, exact path:", reproducing_check(g, 2.0, Z))
print("reproducing residual, quadrature:", reproducing_check(g, 2.0, Z, method="quad"))
