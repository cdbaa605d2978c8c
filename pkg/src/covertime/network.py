"""Electrical networks: construction, Laplacian algebra, effective resistance
and edge refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.linalg
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DisconnectedGraph,
    GraphFormatError,
    NonpositiveConductance,
    SolverFailure,
    UnknownBaseVertex,
    UnknownVertex,
)

Vertex = Hashable


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ElectricalNetwork:
    """Weighted undirected graph with a distinguished base vertex.

    Parallel edges are merged (conductances add).  Self-loop conductance is
    kept per vertex: it counts once towards the vertex total ``c_x`` and
    produces a lazy self-jump, but never enters the Laplacian.
    """

    ids: tuple[str, ...]
    base: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_c: np.ndarray
    loop_c: np.ndarray

    # -- identity -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.ids)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.ids)}

    def idx(self, v: Vertex) -> int:
        """Dense index of a vertex given by id (or already an index)."""
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < self.n:
                return int(v)
            raise UnknownVertex(f"vertex index {v} out of range")
        try:
            return self.index[str(v)]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    @property
    def base_id(self) -> str:
        return self.ids[self.base]

    def with_base(self, v: Vertex) -> "ElectricalNetwork":
        return ElectricalNetwork(self.ids, self.idx(v), self.edge_u, self.edge_v, self.edge_c, self.loop_c)

    # -- conductances ---------------------------------------------------
    @cached_property
    def vertex_conductance(self) -> np.ndarray:
        """Total conductance ``c_x`` at each vertex."""
        c = self.loop_c.astype(float).copy()
        np.add.at(c, self.edge_u, self.edge_c)
        np.add.at(c, self.edge_v, self.edge_c)
        return _frozen(c)

    @property
    def c_tot(self) -> float:
        """Sum of ``c_xy`` over ordered pairs, i.e. ``sum_x c_x``."""
        return float(self.vertex_conductance.sum())

    @property
    def edge_count(self) -> int:
        return int(len(self.edge_c) + np.count_nonzero(self.loop_c))

    @property
    def edge_count_equivalent(self) -> float:
        """``c_tot / 2``; equals ``|E|`` for loop-free unit-conductance graphs."""
        return self.c_tot / 2.0

    def conductance(self, x: Vertex, y: Vertex) -> float:
        i, j = self.idx(x), self.idx(y)
        if i == j:
            return float(self.loop_c[i])
        hit = ((self.edge_u == i) & (self.edge_v == j)) | ((self.edge_u == j) & (self.edge_v == i))
        return float(self.edge_c[hit].sum())

    def neighbors(self, x: Vertex) -> list[int]:
        i = self.idx(x)
        out = np.concatenate([self.edge_v[self.edge_u == i], self.edge_u[self.edge_v == i]])
        return sorted(int(j) for j in out)

    # -- linear algebra -------------------------------------------------
    @cached_property
    def laplacian(self) -> np.ndarray:
        n = self.n
        L = np.zeros((n, n))
        np.add.at(L, (self.edge_u, self.edge_v), -self.edge_c)
        np.add.at(L, (self.edge_v, self.edge_u), -self.edge_c)
        L[np.diag_indices(n)] = -L.sum(axis=1)
        return _frozen(L)

    @cached_property
    def free(self) -> np.ndarray:
        """Indices of all vertices except the base, in increasing order."""
        return _frozen(np.delete(np.arange(self.n), self.base))

    @cached_property
    def _grounded_factor(self):
        free = self.free
        if len(free) == 0:
            return None
        Lg = self.laplacian[np.ix_(free, free)]
        try:
            return scipy.linalg.cho_factor(Lg, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(f"grounded Laplacian is not positive definite: {exc}") from exc

    def solve_grounded(self, rhs: np.ndarray) -> np.ndarray:
        """Solve ``L_g phi = rhs`` on the free vertices; returns full-length ``phi`` with ``phi[base] = 0``."""
        rhs = np.asarray(rhs, dtype=float)
        phi = np.zeros(rhs.shape)
        factor = self._grounded_factor
        if factor is None:
            return phi
        b = rhs[self.free]
        sol = scipy.linalg.cho_solve(factor, b, check_finite=False)
        Lg = self.laplacian[np.ix_(self.free, self.free)]
        resid = np.linalg.norm(Lg @ sol - b) / max(np.linalg.norm(b), 1e-300)
        if not np.all(np.isfinite(sol)) or resid > 1e-8:
            raise SolverFailure(f"grounded solve residual {resid:.3g} exceeds tolerance")
        phi[self.free] = sol
        return phi

    @cached_property
    def green(self) -> np.ndarray:
        """Inverse grounded Laplacian, padded with a zero row/column at the base."""
        G = self.solve_grounded(np.eye(self.n))
        G[self.base, :] = 0.0
        return _frozen(0.5 * (G + G.T))

    @cached_property
    def resistance_matrix(self) -> np.ndarray:
        G = self.green
        d = np.diag(G)
        R = d[:, None] + d[None, :] - 2.0 * G
        R[np.diag_indices(self.n)] = 0.0
        return _frozen(np.maximum(R, 0.0))

    @property
    def max_resistance(self) -> float:
        return float(self.resistance_matrix.max()) if self.n > 1 else 0.0

    # -- walk tables ----------------------------------------------------
    @cached_property
    def transition_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR jump table ``(indptr, targets, cumulative probabilities)``.

        Self-loops appear as a jump to the same vertex with probability
        ``c_loop / c_x``.
        """
        n = self.n
        rows = np.concatenate([self.edge_u, self.edge_v, np.flatnonzero(self.loop_c)])
        cols = np.concatenate([self.edge_v, self.edge_u, np.flatnonzero(self.loop_c)])
        vals = np.concatenate([self.edge_c, self.edge_c, self.loop_c[self.loop_c > 0]])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        indptr = np.cumsum(indptr)
        cum = np.empty(len(vals))
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            if hi > lo:
                cum[lo:hi] = np.cumsum(vals[lo:hi]) / vals[lo:hi].sum()
                cum[hi - 1] = 1.0
        return _frozen(indptr), _frozen(cols.astype(np.int64)), _frozen(cum)

    def edge_list(self) -> list[tuple[str, str, float]]:
        out = [(self.ids[u], self.ids[v], float(c)) for u, v, c in zip(self.edge_u, self.edge_v, self.edge_c)]
        out += [(self.ids[i], self.ids[i], float(self.loop_c[i])) for i in np.flatnonzero(self.loop_c)]
        return out

    def describe(self) -> dict:
        return {
            "vertices": len(self.ids),
            "edges": self.edge_count,
            "base_vertex": self.base_id,
            "c_tot": self.c_tot,
            "vertex_ids": list(self.ids),
        }


def build_network(edges: Iterable[tuple[Vertex, Vertex, float]], v0: Vertex) -> ElectricalNetwork:
    """Build a network from ``(x, y, c)`` triples; duplicates merge in parallel."""
    ids: dict[str, int] = {}
    merged: dict[tuple[int, int], float] = {}
    loops: dict[int, float] = {}
    for item in edges:
        x, y, c = item
        c = float(c)
        if not math.isfinite(c) or c <= 0:
            raise NonpositiveConductance(f"conductance of ({x}, {y}) must be positive and finite, got {c}")
        i = ids.setdefault(str(x), len(ids))
        j = ids.setdefault(str(y), len(ids))
        if i == j:
            loops[i] = loops.get(i, 0.0) + c
        else:
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0.0) + c
    if not ids:
        raise GraphFormatError("edge list is empty")
    if str(v0) not in ids:
        raise UnknownBaseVertex(f"base vertex {v0!r} does not appear in the edge list")
    n = len(ids)
    keys = list(merged)
    eu = np.array([k[0] for k in keys], dtype=np.int64)
    ev = np.array([k[1] for k in keys], dtype=np.int64)
    ec = np.array([merged[k] for k in keys], dtype=float)
    if n > 1:
        adj = coo_matrix((np.ones(len(eu)), (eu, ev)), shape=(n, n))
        ncomp, _ = connected_components(adj, directed=False)
        if ncomp != 1:
            raise DisconnectedGraph(f"network has {ncomp} connected components")
    lc = np.zeros(n)
    for i, c in loops.items():
        lc[i] = c
    return ElectricalNetwork(
        ids=tuple(ids),
        base=ids[str(v0)],
        edge_u=_frozen(eu),
        edge_v=_frozen(ev),
        edge_c=_frozen(ec),
        loop_c=_frozen(lc),
    )


def effective_resistance(net: ElectricalNetwork, x: Vertex, y: Vertex) -> float:
    """Effective resistance by unit current injection at ``x``, extraction at ``y``."""
    i, j = net.idx(x), net.idx(y)
    if i == j:
        return 0.0
    current = np.zeros(net.n)
    current[i] += 1.0
    current[j] -= 1.0
    phi = net.solve_grounded(current)
    return float(phi[i] - phi[j])


def commute_time_identity_rhs(net: ElectricalNetwork, x: Vertex, y: Vertex) -> float:
    """Predicted mean commute time ``c_tot * R_eff(x, y)``."""
    if net.idx(x) == net.idx(y):
        raise ValueError("commute time needs two distinct vertices")
    return net.c_tot * effective_resistance(net, x, y)


# ----------------------------------------------------------------------
# refinement


@dataclass(frozen=True, eq=False)
class Refinement:
    """The network with every edge replaced by an ``N``-edge path.

    Parent vertices keep their indices in ``network``; the interior vertices
    of parent edge ``e`` are ``edge_paths[e, 1:-1]``.
    """

    parent: ElectricalNetwork
    N: int
    network: ElectricalNetwork
    edge_paths: np.ndarray

    def edge_index(self, x: Vertex, y: Vertex) -> tuple[int, bool]:
        i, j = self.parent.idx(x), self.parent.idx(y)
        p = self.parent
        hit = np.flatnonzero((p.edge_u == i) & (p.edge_v == j))
        if len(hit):
            return int(hit[0]), False
        hit = np.flatnonzero((p.edge_u == j) & (p.edge_v == i))
        if len(hit):
            return int(hit[0]), True
        raise UnknownVertex(f"({x}, {y}) is not an edge of the parent network")

    def path(self, x: Vertex, y: Vertex) -> np.ndarray:
        """Child indices of ``v_{xy,0} = x, ..., v_{xy,N} = y``."""
        e, flipped = self.edge_index(x, y)
        p = self.edge_paths[e]
        return p[::-1].copy() if flipped else p.copy()

    def sub_vertex(self, x: Vertex, y: Vertex, i: int) -> int:
        if not 0 <= i <= self.N:
            raise ValueError(f"sub-vertex position {i} outside 0..{self.N}")
        return int(self.path(x, y)[i])

    @property
    def parent_vertices(self) -> np.ndarray:
        return np.arange(self.parent.n)


def refine(net: ElectricalNetwork, N: int) -> Refinement:
    """Subdivide each edge into ``N`` sub-edges of conductance ``N * c_xy``.

    Self-loops stay unrefined with conductance scaled by ``N`` so the jump
    probabilities at parent vertices are unchanged.
    """
    if int(N) != N or N < 2:
        raise ValueError("refinement count N must be an integer >= 2")
    N = int(N)
    ids = list(net.ids)
    taken = set(ids)
    edges: list[tuple[str, str, float]] = []
    paths = np.empty((len(net.edge_c), N + 1), dtype=np.int64)
    for e, (u, v, c) in enumerate(zip(net.edge_u, net.edge_v, net.edge_c)):
        chain = [int(u)]
        for i in range(1, N):
            name = f"{net.ids[u]}~{net.ids[v]}#{i}"
            while name in taken:
                name += "'"
            taken.add(name)
            chain.append(len(ids))
            ids.append(name)
        chain.append(int(v))
        paths[e] = chain
        edges += [(ids[a], ids[b], N * float(c)) for a, b in zip(chain[:-1], chain[1:])]
    edges += [(net.ids[i], net.ids[i], N * float(net.loop_c[i])) for i in np.flatnonzero(net.loop_c)]
    child = build_network(edges, net.base_id) if edges else net
    # build_network assigns indices by first appearance; restore our ordering
    order = [child.idx(v) for v in ids]
    child = _reindex(child, ids, order)
    return Refinement(parent=net, N=N, network=child, edge_paths=_frozen(paths))


def _reindex(net: ElectricalNetwork, ids: Sequence[str], order: Sequence[int]) -> ElectricalNetwork:
    new_of_old = np.empty(len(order), dtype=np.int64)
    new_of_old[np.asarray(order)] = np.arange(len(order))
    eu, ev = new_of_old[net.edge_u], new_of_old[net.edge_v]
    lo, hi = np.minimum(eu, ev), np.maximum(eu, ev)
    lc = np.zeros(len(order))
    lc[new_of_old] = net.loop_c
    return ElectricalNetwork(
        ids=tuple(ids),
        base=int(new_of_old[net.base]),
        edge_u=_frozen(lo),
        edge_v=_frozen(hi),
        edge_c=net.edge_c,
        loop_c=_frozen(lc),
    )


# ----------------------------------------------------------------------
# text format


def parse_graph(text: str) -> ElectricalNetwork:
    """Parse the ``x y c`` edge-list format with a single ``v0 <id>`` directive."""
    edges = []
    v0 = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v0":
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'v0 <id>'")
            if v0 is not None:
                raise GraphFormatError(f"line {lineno}: duplicate v0 directive")
            v0 = parts[1]
            continue
        if len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'x y c', got {raw!r}")
        try:
            c = float(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: bad conductance {parts[2]!r}") from None
        if not math.isfinite(c) or c <= 0:
            raise NonpositiveConductance(f"line {lineno}: conductance must be positive and finite, got {parts[2]}")
        edges.append((parts[0], parts[1], c))
    if v0 is None:
        raise GraphFormatError("missing 'v0 <id>' directive")
    if not edges:
        raise GraphFormatError("no edges")
    return build_network(edges, v0)


def read_graph(path: str | Path) -> ElectricalNetwork:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def format_graph(net: ElectricalNetwork) -> str:
    lines = [f"v0 {net.base_id}"]
    lines += [f"{x} {y} {c!r}" for x, y, c in net.edge_list()]
    return "\n".join(lines) + "\n"
