"""Indices of t^p log^q(1+t) and the interpolating function Phi_theta.

For each family we estimate the six Matuszewska-Orlicz indices, pick a
theta inside the admissible range and build Phi_theta.  For pure powers
the result is again a power with the predicted exponent; for the
logarithmic families we report the constants c1, c2 and the index report
of Phi_theta itself.

Run: python3 demos/01_indices_and_phi_theta.py
"""

from __future__ import annotations

import numpy as np

from orlicz_toeplitz import Power, PowerLog, build_phi_theta, matuszewska_orlicz_indices, theta_range

print("indices")
for p, q in [(2, 0), (2, 1), (1.5, 0.5), (3, 2)]:
    rep = matuszewska_orlicz_indices(PowerLog(p, q))
    print(f"  p={p:<4} q={q:<4} alpha={rep.alpha:.4f} beta={rep.beta:.4f} "
          f"(alpha0={rep.alpha0:.3f}, alpha_inf={rep.alpha_inf:.3f})")

print("\nPhi_theta for powers: measured vs predicted exponent")
t = np.geomspace(1e-3, 1e3, 7)
for p in (1.5, 2.0, 4.0):
    hi = theta_range(matuszewska_orlicz_indices(Power(p)))[1]
    theta = hi / 2
    pt = build_phi_theta(Power(p), theta)
    slope = np.polyfit(np.log(t), np.log(pt.phi_theta(t)), 1)[0]
    pred = 1 / ((1 / p - theta / 2) / (1 - theta))
    print(f"  p={p:<4} theta={theta:.3f} slope={slope:.6f} predicted={pred:.6f} c_interp={pt.c_interp:.6f}")

print("\nPhi_theta for t^2 log(1+t)")
phi = PowerLog(2, 1)
for theta in (0.1, 0.3, 0.5):
    pt = build_phi_theta(phi, theta)
    r = pt.index_report
    print(f"  theta={theta}: c1={pt.c1:.6f} c2={pt.c2:.6f} C={pt.c_interp:.6f} "
          f"alpha={r.alpha:.3f} beta={r.beta:.3f} breakpoints={len(pt.envelope.breakpoints)}")
