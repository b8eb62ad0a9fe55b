"""The interpolation inequality on sampled matrices, then the local principle.

First we compare a sampled lower bound of ||T||_Phi with the upper bound
C ||T||_{Phi_theta}^(1-theta) ||T||_2^theta on random Toeplitz truncations.
Then we run the localisation pipeline on three symbols: a nonvanishing
one of winding 0, the shift chi_1, and 1 + chi_1, which vanishes at -pi.

Run: python3 demos/03_interpolation_and_localisation.py
"""

from __future__ import annotations

import math

import numpy as np

from orlicz_toeplitz import (LocalAssignment, LocalEntry, PowerLog, TrigPoly, build_phi_theta,
                            interpolation_bound_check, localise, toeplitz)
from orlicz_toeplitz.orlicz_space import AscentConfig

phi = PowerLog(2, 1)
pt = build_phi_theta(phi, 0.3)
rng = np.random.default_rng(3)
mats = np.stack([toeplitz(TrigPoly.random(rng, 3), 12) for _ in range(20)])
rep = interpolation_bound_check(mats, phi, pt, seed=1, ascent=AscentConfig(starts=16, steps=100))
print(f"interpolation inequality on 20 matrices: violations={rep.violations}, "
      f"largest lhs/rhs={rep.max_ratio:.3f}, C={pt.c_interp:.4f}")

taus = -math.pi + 2 * math.pi * np.arange(32) / 32
smooth = TrigPoly.constant(3.0) + TrigPoly.random(np.random.default_rng(5), 3, scale=0.3)
cases = {
    "3 + small trig polynomial": (smooth, LocalAssignment.pointwise_constant(smooth, taus)),
    "chi_1 (represented by itself)": (TrigPoly.chi(1), LocalAssignment(
        tuple(LocalEntry(float(t), TrigPoly.chi(1)) for t in taus))),
    "1 + chi_1": (TrigPoly.constant(1.0) + TrigPoly.chi(1),
                  LocalAssignment.pointwise_constant(TrigPoly.constant(1.0) + TrigPoly.chi(1), taus)),
}
print()
for name, (a, asg) in cases.items():
    out = localise(a, phi, asg)
    windings = {r["certificate"]["winding"] for r in out.rows}
    print(f"{name:32s} verdict={out.verdict:10s} exit={out.exit_code} local windings={sorted(windings, key=str)}")
