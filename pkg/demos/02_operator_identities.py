"""Finite truncations of Toeplitz, Laurent and Hankel operators.

We check the product identity T(ab) = T(a)T(b) + H(a)H(b~) on a window,
watch sigma_max(T_N(a)) climb to sup|a|, and look at how the Hankel
operator of a continuous non-smooth symbol is approximated by Hankel
operators of its Fejer means.

Run: python3 demos/02_operator_identities.py
"""

from __future__ import annotations

import math

import numpy as np

from orlicz_toeplitz import (TrigPoly, hankel_fejer_decay, l2_multiplier_consistency, symbol_from_json,
                            widom_residual)

rng = np.random.default_rng(0)
worst = max(widom_residual(TrigPoly.random(rng, 5), TrigPoly.random(rng, 5), N=40, window=20) for _ in range(20))
print(f"product identity, 20 random pairs of degree 5: max residual {worst:.2e}")

a = TrigPoly.random(np.random.default_rng(1), 3)
rep = l2_multiplier_consistency(a)
print(f"\nsup|a| = {rep.sup_norm:.6f}")
for n, v in zip(rep.Ns, rep.toeplitz):
    print(f"  N={n:4d}  sigma_max(T_N(a)) = {v:.6f}")

hat = symbol_from_json({"kind": "piecewise", "pieces": [
    {"from": -math.pi, "to": 0.0, "expr": "-theta"}, {"from": 0.0, "to": math.pi, "expr": "theta"}]})
print("\nHankel approximation of |theta| by Fejer means")
for row in hankel_fejer_decay(hat):
    print(f"  n={row['n']:3d}  ||H(a) - H(a_n)|| = {row['hankel']:.4f}")
