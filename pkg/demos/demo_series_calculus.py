"""
Series on the ball and the fractional derivative
================================================

A holomorphic function on the unit ball is stored as a truncated sum of
monomials.  D^a multiplies the degree-k part by (k+1)^a, so D = I + R
where R is the radial derivative.  This script walks through the
algebra on small examples.
"""

import numpy as np

from ballbesov import HoloSeries, frac_derivative, frac_integral, multiply, radial_derivative

# A polynomial in two variables: f = 1 + 2 z1 - i z1 z2^2
f = HoloSeries(2, 3, {(0, 0): 1.0, (1, 0): 2.0, (1, 2): -1j})
print("f       =", f)

# %%
# The derivative scales by degree + 1, the radial derivative by degree.
Df = frac_derivative(f, 1.0)
Rf = radial_derivative(f)
print("D f     =", Df)
print("R f     =", Rf)
print("|Df - (f + Rf)|  =", Df.distance(f + Rf, "max"))

# %%
# Fractional orders compose, and the integral of the same order undoes them.
half = frac_derivative(frac_derivative(f, 0.5), 0.5)
print("D^.5 D^.5 f vs D f:", half.distance(Df, "max"))
print("D^-3.7 D^3.7 f vs f:", frac_integral(frac_derivative(f, 3.7), 3.7).distance(f, "max"))

# %%
# The product rule for D differs from Leibniz by a correction -fg,
# because D = I + R and only R is a derivation.
g = HoloSeries(2, 2, {(0, 1): 0.5, (2, 0): 1.0 + 1.0j})
K = 5
lhs = frac_derivative(multiply(f, g, K), 1.0)
rhs = multiply(g, Df, K) + multiply(f, frac_derivative(g, 1.0), K) - multiply(f, g, K)
print("D(fg) - (g Df + f Dg - fg):", lhs.distance(rhs, "max"))

# %%
# Evaluation works on batches of points.
Z = np.array([[0.0, 0.0], [0.3, 0.4j], [-0.5, 0.1]])
print("f(Z)    =", f(Z))
