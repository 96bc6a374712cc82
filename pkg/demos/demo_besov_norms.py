"""
Weighted Besov norms
====================

The norm integrates (1-|z|^2)^p |Df|^p against w(1-|z|)(1-|z|^2)^(-n-1).
For p = 2 and a power weight it reduces to a sum over coefficients;
otherwise it is computed by slice quadrature with a refinement check.
"""

import math

import numpy as np

from ballbesov import DivergenceError, HoloSeries, besov_norm, bloch_norm, kernel_series, power_weight

z = HoloSeries.monomial((1,))
one = power_weight(0.0)

# %%
# f(z) = z in one variable: Df = 2z and the norm squared is
# 4 int |z|^2 dnu = 2, so the norm is sqrt(2).
exact = besov_norm(z, 2.0, one)
quad = besov_norm(z, 2.0, one, method="quadrature")
print(f"exact {exact.value:.15f}  quadrature {quad.value:.15f}  sqrt 2 {math.sqrt(2):.15f}")

# %%
# A power weight w(t) = t^e moves the boundary exponent to p - n - 1 + e.
# With w = 1 and p = 1 the integral diverges for every nonzero f.
try:
    besov_norm(z, 1.0, one)
except DivergenceError as exc:
    print("p = 1, w = 1:", exc)
w = power_weight(-0.5)           # w(t) = t^(1/2)
print("p = 1, w = t^0.5:", besov_norm(z, 1.0, w).value)

# %%
# Kernel truncations at tau near the sphere have large norms; the
# quadrature result carries a refined value and a convergence flag.
for t in (0.3, 0.6, 0.9):
    f = kernel_series(np.array([t]), 2.0, 40)
    res = besov_norm(f, 1.5, w)
    print(f"tau={t}: norm {res.value:.6f}  refined {res.refined_value:.6f}  converged {res.convergence_flag}")

# %%
# The Bloch endpoint: sup (1-|z|^2) |Df(z)| w(1-|z|).  For f = z and w = 1
# the supremum of 2r(1-r^2) is 4/(3 sqrt 3).
print("Bloch norm of z:", bloch_norm(z, one), " closed form:", 4 / (3 * math.sqrt(3)))
