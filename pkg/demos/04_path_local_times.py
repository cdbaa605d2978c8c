"""Walk on the unit path 0..N from N to 0: local times against exponential laws.

The local time at k has the exponential law with mean a_k = k here
(half of |W_{a_k}|^2).  The report's gating checks use mean 2k and fail;
the half-scale diagnostics pass.
"""

from covertime import pathkit
from covertime.verify import verify_conditioned_path, verify_first_ray_knight

rep = verify_first_ray_knight(pathkit.unit_path(8), 50_000, seed=2)
for k, mean in enumerate(rep.diagnostics["mean_local_time"], start=1):
    print(f"k={k}  mean local time {mean:6.3f}   a_k = {k}")

print()
print("conditioned-path conductances, N=3, r=1:", pathkit.conditioned_conductances(3, 1.0).conductances)
print("\n".join(verify_conditioned_path(3, 1.0, 50_000, seed=2).summary_lines()))
