"""
The weighted kernel estimate near the sphere
============================================

The integral of (1-|zeta|^2)^a w(1-|zeta|) |1 - <z, zeta>|^(-(b+n+1))
is compared with w(1-|z|^2) / (1-|z|^2)^(b-a) as z approaches the
sphere.  Inside the hypotheses the ratio stays bounded; outside them it
grows.  The ratio can also approach its limit slowly, which matters for
any finite-window test of boundedness.
"""

import numpy as np

from ballbesov import power_weight
from ballbesov.validation import aitken_limit, lemma4_radii, lemma4_table

# %%
# Three parameter triples that satisfy the hypotheses.
for a, b, e, label in [(0.0, 1.0, 0.0, "w=1"), (1.0, 2.0, -0.5, "w=t^0.5"), (0.5, 2.0, -1.0, "w=t")]:
    rows = lemma4_table(a, b, power_weight(e), 1, lemma4_radii(20))
    ratios = [r[3] for r in rows]
    print(f"a={a} b={b} {label}")
    for j in (4, 7, 10, 14, 20):
        print(f"   j={j:2d}  r=1-2^-{j:<2d}  ratio {ratios[j]:.6f}")
    print(f"   extrapolated limit {aitken_limit(ratios):.6f}")

# %%
# With a weight the ratio creeps toward its limit: the gap to the limit
# shrinks by about 2^(-1/2) per halving of 1 - r.
rows = lemma4_table(1.0, 2.0, power_weight(-0.5), 1, lemma4_radii(20))
ratios = np.array([r[3] for r in rows])
gap = aitken_limit(list(ratios)) - ratios
print("gap ratios:", np.round(gap[9:20] / gap[8:19], 4))

# %%
# Outside the hypotheses (b - a below the weight's lower index) the
# ratio grows without bound.
rows = lemma4_table(0.0, 0.5, power_weight(-1.0), 1, lemma4_radii(14))
print("exploratory ratios:", np.round([r[3] for r in rows], 3))
