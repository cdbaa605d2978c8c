"""Cover times of complete graphs against |E| M^2.

On K_n the ratio t_cov / (|E| M^2) is 2 H_{n-1} / m_n^2 with m_n the
expected maximum of n standard normals, which falls towards 1 slowly.
"""

import math

from scipy.integrate import quad
from scipy.special import ndtr

from covertime import fixture
from covertime.verify import verify_sandwich


def m(n):
    pdf = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    return quad(lambda x: x * n * ndtr(x) ** (n - 1) * pdf(x), -12, 12)[0]


sizes = (8, 16, 32, 64)
nets = {f"k{n}": fixture(f"k{n}") for n in sizes}
rep = verify_sandwich(nets, 2000, seed=5, starts={k: [0] for k in nets})
print(" n    t_cov     |E|M^2    ratio   closed form")
for n, row in zip(sizes, rep.diagnostics["rows"]):
    exact = 2 * sum(1 / k for k in range(1, n)) / m(n) ** 2
    print(f"{n:3d} {row['t_cov']:8.2f} {row['edges'] * row['M_hat'] ** 2:9.2f}   {row['rho']:.3f}    {exact:.3f}")
