"""
Exact solutions from the zero seed
==================================

Evaluate the closed-form families, check where they are real and where they
blow up, and write a profile that can be plotted externally.
"""

import numpy as np

from coupled_kdv.darboux import (
    AnalyticFamily,
    SpectralParams,
    WaveConstants,
    classify,
    r_family,
    singular_loci,
    two_component,
)

# The one-soliton of scalar KdV sits in the middle slot of the two-component
# solution; with c1 = c2 it is 2 a^2 sech^2(a (x + a^2 t)).
x = np.linspace(-6, 6, 7)
f21, u11, u21 = two_component(SpectralParams.from_a(1.0), WaveConstants(), x, np.zeros_like(x))
print("u11 on a coarse grid:", np.round(u11.real, 4))

# The three-component r-family: d1 = d2 = r/2 with c1 = c2 = 1/2.
f, u, v = r_family(2.0, 0.5, 0.0, 0.0)
print(f"r-family at the origin: f={f.item():g}, u={u.item():.6f} (40/3), v={v.item():.6f} (-32/3)")

# r < 1 gives regular waves, r > 1 gives poles.
window = ((-3.0, 3.0), (-0.5, 0.5))
for r in (0.5, 1.0, 2.0):
    cls = classify(SpectralParams.from_a(2.0), WaveConstants.r_family(r), window)
    loci = singular_loci(2.0, r, window)
    print(f"r={r}: real={cls.is_real} singular={cls.is_singular} loci found={len(loci)}")
    if loci:
        print("   first locus:", tuple(round(c, 6) for c in loci[0]))

# Imaginary spectral parameter: reality depends on the constants.
p = SpectralParams.from_lambda(-2j)
for consts in (WaveConstants(), WaveConstants(1, 1, 2, 2)):
    cls = classify(p, consts, ((-2.0, 2.0), (-0.2, 0.2)))
    print(f"lambda=-2i, constants={consts}: real={cls.is_real}")

# A descriptor bundles the choice and can be sampled anywhere.
fam = AnalyticFamily("r", a=1.0, r=0.5)
vals = fam.evaluate(np.linspace(-10, 10, 5), np.zeros(5))
for label, col in vals.items():
    print(label, np.round(col.real, 5))
