"""Effective resistance, the Green matrix and the free field on a small torus.

Run: python3 demos/01_resistance_and_fields.py
"""

import numpy as np

from covertime import build_gff, estimate_M, fixture, refine

net = fixture("torus8")
print(net.describe()["vertices"], "vertices, base", net.base_id)

# Variances of the field are resistances to the base vertex.
R = net.resistance_matrix
print("max R_eff          ", round(net.max_resistance, 4))
print("var eta == R(v0, .)", np.allclose(np.diag(net.green), R[net.base]))

# Subdividing every edge into N pieces of conductance N c leaves resistances alone.
ref = refine(net, 3)
print("refined vertices   ", ref.network.n)
print("same resistances   ", np.allclose(ref.network.resistance_matrix[: net.n, : net.n], R))

est = estimate_M(build_gff(net), 100_000, seed=1)
print(f"M_hat = {est.M_hat:.4f} +/- {est.std_error:.4f},  |E| M^2 = {net.edge_count_equivalent * est.M_hat**2:.1f}")
