"""Local times at an inverse local time, next to the squared shifted field.

Prints quantiles of both sides of the isomorphism at one vertex, then the
full report with KS tests over coordinates and min/max/sum.
"""

import math

import numpy as np

from covertime import fixture
from covertime.verify import _local_times_and_fields, verify_ray_knight

net = fixture("cycle4")
t = 1.0
walk, eta, eta_p = _local_times_and_fields(net, t, 50_000, seed=3, workers=1)

x = 2
lhs = walk.local_time[:, x] + 0.5 * eta[:, x] ** 2
rhs = 0.5 * (eta_p[:, x] + math.sqrt(2 * t)) ** 2
q = [0.1, 0.25, 0.5, 0.75, 0.9]
print("quantile   L + eta^2/2   (eta' + sqrt(2t))^2/2")
for p, a, b in zip(q, np.quantile(lhs, q), np.quantile(rhs, q)):
    print(f"  {p:4.2f}     {a:9.4f}      {b:9.4f}")

print()
print("\n".join(verify_ray_knight(net, t, 50_000, seed=3).summary_lines()))
