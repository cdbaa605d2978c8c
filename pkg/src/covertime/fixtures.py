"""Built-in test networks, addressable by name from the command line."""

from __future__ import annotations

import re

import numpy as np

from .network import ElectricalNetwork, build_network


def two_vertex(c: float = 1.0) -> ElectricalNetwork:
    return build_network([("a", "b", c)], "a")


def triangle() -> ElectricalNetwork:
    return build_network([("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)], "a")


def path(n_edges: int, c: float = 1.0) -> ElectricalNetwork:
    return build_network([(str(k), str(k + 1), c) for k in range(n_edges)], "0")


def cycle(n: int, conductances=None) -> ElectricalNetwork:
    cs = np.ones(n) if conductances is None else np.asarray(conductances, dtype=float)
    return build_network([(str(k), str((k + 1) % n), cs[k]) for k in range(n)], "0")


def random_cycle4(seed: int = 2024) -> ElectricalNetwork:
    """4-cycle with conductances drawn uniformly from [0.5, 2]."""
    rng = np.random.default_rng(seed)
    return cycle(4, rng.uniform(0.5, 2.0, size=4))


def star(leaves: int) -> ElectricalNetwork:
    return build_network([("hub", f"leaf{k}", 1.0) for k in range(leaves)], "hub")


def complete(n: int) -> ElectricalNetwork:
    return build_network([(str(i), str(j), 1.0) for i in range(n) for j in range(i + 1, n)], "0")


def torus(side: int) -> ElectricalNetwork:
    edges = []
    for i in range(side):
        for j in range(side):
            edges.append((f"{i},{j}", f"{(i + 1) % side},{j}", 1.0))
            edges.append((f"{i},{j}", f"{i},{(j + 1) % side}", 1.0))
    return build_network(edges, "0,0")


def single_vertex() -> ElectricalNetwork:
    return build_network([("a", "a", 1.0)], "a")


_STATIC = {
    "two_vertex": two_vertex,
    "single_edge": two_vertex,
    "triangle": triangle,
    "k3": triangle,
    "cycle4": random_cycle4,
    "star5": lambda: star(5),
    "torus8": lambda: torus(8),
    "single_vertex": single_vertex,
}

DEFAULT_FIXTURES = ("two_vertex", "triangle", "cycle4", "star5", "k16", "torus8")


def fixture(name: str) -> ElectricalNetwork:
    """Look up a fixture: the static names above, ``k<n>``, ``path<n>``, ``cycle<n>``, ``star<n>``, ``torus<n>``."""
    key = name.strip().lower()
    if key in _STATIC:
        return _STATIC[key]()
    m = re.fullmatch(r"(k|path|cycle|star|torus)(\d+)", key)
    if m:
        kind, size = m.group(1), int(m.group(2))
        builders = {"k": complete, "path": path, "cycle": cycle, "star": star, "torus": torus}
        if size >= (2 if kind != "path" else 1):
            return builders[kind](size)
    raise KeyError(f"unknown fixture {name!r}")
