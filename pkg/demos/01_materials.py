"""Material coefficients: the preset table and the 51CrV4 steel model."""

import numpy as np

from dnrate.materials import PRESETS, preset, steel_cp, steel_cp_branches, steel_lambda

for name in PRESETS:
    m = preset(name)
    print(f"{name:6s} lambda={m.lam:<8g} alpha={m.alpha:<12.6g} D={m.d:.4e}")

# The steel model is a cubic conductivity and a smooth minimum of two
# heat capacity branches.  Temperatures are in Kelvin.
for theta in (900.0, 1145.0):
    c1, c2 = steel_cp_branches(theta)
    print(f"steel at {theta:.0f} K: lambda={steel_lambda(theta):.4f} "
          f"cp={steel_cp(theta):.2f} (branches {c1:.1f}, {c2:.1f})")

# 900 K lies between the branches; the smooth minimum follows the lower one,
# so cp(900 K) is about 783 and not 1368.4 as quoted for the flat plate.
# Evaluating at 900 C - 273.15 gives yet another value.
print("cp(626.85) =", round(float(steel_cp(626.85)), 2))
theta = np.linspace(273, 1500, 7)
print("cp over [273, 1500] K:", np.round(steel_cp(theta), 1))
