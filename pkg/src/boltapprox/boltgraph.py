"""Closed bolts as cycles of a two-layer digraph.

Every point ``x`` gets a PLUS node ``x`` and a MINUS node ``n + x``. PLUS
nodes link to MINUS nodes of the same s-class, MINUS nodes link to PLUS nodes
of the same p-class, never to the same point. Reading a directed cycle from a
PLUS node gives a closed bolt whose first link is an s-link, and the mean of
the node weights ``+f`` / ``-f`` along the cycle is its bolt functional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .bolt import Bolt, bolt_functional, validate_bolt
from .exceptions import GuardExceeded, InputError, ZeroResidual
from .space import FiniteQuotientSpace, check_function

__all__ = [
    "BoltGraph",
    "DualResult",
    "build_graph",
    "max_mean_cycle",
    "has_closed_bolt",
    "find_extremal_bolt",
    "enumerate_closed_bolts",
]

PLUS, MINUS = 0, 1


def _class_pairs(labels):
    """All ordered pairs ``(x, y)``, ``x != y``, sharing a label."""
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    tails, heads = [], []
    for members in np.split(order, bounds):
        k = members.size
        if k < 2:
            continue
        x, y = np.meshgrid(members, members, indexing="ij")
        off = ~np.eye(k, dtype=bool)
        tails.append(x[off])
        heads.append(y[off])
    if not tails:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(tails), np.concatenate(heads)


@dataclass(frozen=True, eq=False)
class BoltGraph:
    space: FiniteQuotientSpace
    weights: np.ndarray
    tails: np.ndarray
    heads: np.ndarray

    @property
    def n_nodes(self) -> int:
        return 2 * self.space.n

    @property
    def n_edges(self) -> int:
        return int(self.tails.size)

    def node(self, point: int, layer: int) -> int:
        return point + layer * self.space.n

    def point_of(self, node: int) -> tuple[int, int]:
        n = self.space.n
        return node % n, node // n

    def adjacency(self) -> csr_matrix:
        data = np.ones(self.n_edges, dtype=np.int8)
        return csr_matrix(
            (data, (self.tails, self.heads)), shape=(self.n_nodes, self.n_nodes)
        )


@dataclass(frozen=True)
class DualResult:
    value: float
    witness: Optional[Bolt]
    no_cycle: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "no_cycle": self.no_cycle,
            "bolt": None if self.witness is None else self.witness.to_dict(),
        }


def build_graph(space: FiniteQuotientSpace, f=None) -> BoltGraph:
    """Bolt graph of ``space``; node weights come from ``f`` (zeros if omitted)."""
    n = space.n
    f = np.zeros(n) if f is None else check_function(space, f)
    s_t, s_h = _class_pairs(space.s_class)
    p_t, p_h = _class_pairs(space.p_class)
    tails = np.concatenate([s_t, p_t + n])
    heads = np.concatenate([s_h + n, p_h])
    weights = np.concatenate([f, -f])
    for arr in (tails, heads, weights):
        arr.setflags(write=False)
    return BoltGraph(space, weights, tails, heads)


def _cycle_to_bolt(graph: BoltGraph, cycle) -> Bolt:
    n = graph.space.n
    start = next(i for i, v in enumerate(cycle) if v < n)
    cycle = list(cycle[start:]) + list(cycle[:start])
    return validate_bolt(graph.space, [v % n for v in cycle], closed=True)


def _karp(local_tails, local_heads, w, m):
    """Karp's table for one strongly connected component with ``m`` nodes.

    Returns the per-node scores ``min_k (D_m - D_k) / (m - k)`` (NaN where
    ``D_m`` is undefined) and the predecessor table.
    """
    order = np.argsort(local_heads, kind="stable")
    tails = local_tails[order]
    heads = local_heads[order]
    starts = np.flatnonzero(np.r_[True, np.diff(heads) != 0])
    seg_heads = heads[starts]
    positions = np.arange(tails.size)
    seg_of_edge = np.repeat(np.arange(starts.size), np.diff(np.r_[starts, tails.size]))
    edge_w = w[tails]

    D = np.full((m + 1, m), -np.inf)
    defined = np.zeros((m + 1, m), dtype=bool)
    pred = np.full((m + 1, m), -1, dtype=np.int64)
    D[0, 0] = 0.0
    defined[0, 0] = True
    for k in range(1, m + 1):
        live = defined[k - 1, tails]
        cand = np.where(live, D[k - 1, tails] + edge_w, -np.inf)
        best = np.maximum.reduceat(cand, starts)
        seg_live = np.logical_or.reduceat(live, starts)
        hit = live & (cand == best[seg_of_edge])
        first = np.minimum.reduceat(np.where(hit, positions, tails.size), starts)
        D[k, seg_heads[seg_live]] = best[seg_live]
        defined[k, seg_heads[seg_live]] = True
        pred[k, seg_heads[seg_live]] = tails[first[seg_live]]

    scores = np.full(m, np.nan)
    for v in np.flatnonzero(defined[m]):
        ks = np.flatnonzero(defined[:m, v])
        scores[v] = np.min((D[m, v] - D[ks, v]) / (m - ks))
    return scores, pred


def _walk_cycle(pred, m, v):
    """A cycle on the optimal length-``m`` walk ending at ``v``."""
    walk = [v]
    for k in range(m, 0, -1):
        v = int(pred[k, v])
        walk.append(v)
    walk.reverse()
    seen = {}
    for j, node in enumerate(walk):
        if node in seen:
            return walk[seen[node]:j]
        seen[node] = j
    raise AssertionError("walk of m edges over m nodes must repeat a node")


def max_mean_cycle(graph: BoltGraph) -> DualResult:
    """Largest mean node weight over directed cycles, i.e. over closed bolts.

    An acyclic graph reports ``value = 0`` with ``no_cycle = True``.
    """
    n_comp, comp = connected_components(graph.adjacency(), directed=True, connection="strong")
    same = comp[graph.tails] == comp[graph.heads]
    sizes = np.bincount(comp, minlength=n_comp)

    best_value, best_bolt = None, None
    for c in range(n_comp):
        m = int(sizes[c])
        if m < 2:
            continue
        nodes = np.flatnonzero(comp == c)
        local = np.full(graph.n_nodes, -1, dtype=np.int64)
        local[nodes] = np.arange(m)
        mask = same & (comp[graph.tails] == c)
        scores, pred = _karp(
            local[graph.tails[mask]], local[graph.heads[mask]], graph.weights[nodes], m
        )
        target = np.nanmax(scores)
        slack = 1e-12 * (1.0 + abs(target))
        comp_value, comp_bolt = None, None
        # ties or rounding can hand back a slightly worse cycle; try further nodes
        for v in np.argsort(-np.nan_to_num(scores, nan=-np.inf), kind="stable"):
            if np.isnan(scores[v]):
                break
            cycle = [int(nodes[i]) for i in _walk_cycle(pred, m, int(v))]
            bolt = _cycle_to_bolt(graph, cycle)
            value = bolt_functional(bolt, graph.weights[: graph.space.n])
            if comp_value is None or value > comp_value:
                comp_value, comp_bolt = value, bolt
            if comp_value >= target - slack:
                break
        if best_value is None or comp_value > best_value:
            best_value, best_bolt = comp_value, comp_bolt

    if best_bolt is None:
        return DualResult(0.0, None, True)
    return DualResult(float(best_value), best_bolt, False)


def _find_cycle(n_nodes, indptr, indices, allowed):
    """Iterative three-colour DFS; returns one directed cycle or ``None``."""
    color = np.zeros(n_nodes, dtype=np.int8)
    parent = np.full(n_nodes, -1, dtype=np.int64)
    for root in np.flatnonzero(allowed):
        if color[root]:
            continue
        color[root] = 1
        stack = [(int(root), int(indptr[root]))]
        while stack:
            v, pos = stack[-1]
            if pos == indptr[v + 1]:
                color[v] = 2
                stack.pop()
                continue
            stack[-1] = (v, pos + 1)
            w = int(indices[pos])
            if not allowed[w] or color[w] == 2:
                continue
            if color[w] == 1:
                cycle = [v]
                while cycle[-1] != w:
                    cycle.append(int(parent[cycle[-1]]))
                cycle.reverse()
                return cycle
            color[w] = 1
            parent[w] = v
            stack.append((w, int(indptr[w])))
    return None


def has_closed_bolt(space: FiniteQuotientSpace) -> bool:
    graph = build_graph(space)
    adj = graph.adjacency()
    allowed = np.ones(graph.n_nodes, dtype=bool)
    return _find_cycle(graph.n_nodes, adj.indptr, adj.indices, allowed) is not None


def find_extremal_bolt(space: FiniteQuotientSpace, residual, tol: float = 1e-9) -> Optional[Bolt]:
    """A closed bolt on which ``residual`` alternates between about ``+-max|residual|``.

    PLUS positions need ``residual >= M - tol`` and MINUS positions
    ``residual <= -M + tol`` where ``M`` is the sup norm. Returns ``None`` if
    no such cycle exists.
    """
    r = check_function(space, residual)
    M = float(np.max(np.abs(r)))
    if M == 0.0:
        raise ZeroResidual("residual vanishes identically")
    if not tol > 0:
        raise InputError("tol must be positive")
    graph = build_graph(space, r)
    allowed = np.concatenate([r >= M - tol, r <= -M + tol])
    adj = graph.adjacency()
    cycle = _find_cycle(graph.n_nodes, adj.indptr, adj.indices, allowed)
    return None if cycle is None else _cycle_to_bolt(graph, cycle)


def _canonical_rotation(points):
    return min(points[k:] + points[:k] for k in range(len(points)))


def enumerate_closed_bolts(space: FiniteQuotientSpace, max_len: int) -> list[Bolt]:
    """Every closed bolt of length at most ``max_len``, up to rotation.

    Bolts come from simple cycles of the bolt graph; each is reported once,
    rotated to its lexicographically smallest point sequence. Longer closed
    walks split into these cycles and carry no new functional values.
    """
    if max_len < 2 or max_len % 2:
        raise InputError("max_len must be a positive even integer")
    if space.n > 12 or max_len > 10:
        raise GuardExceeded("enumeration limited to n <= 12 and max_len <= 10")
    graph = build_graph(space)
    adj = graph.adjacency()
    succ = [adj.indices[adj.indptr[v]:adj.indptr[v + 1]].tolist() for v in range(graph.n_nodes)]
    n = space.n
    found = set()

    def extend(start, path, on_path):
        v = path[-1]
        for w in succ[v]:
            if w == start:
                found.add(_canonical_rotation(tuple(x % n for x in path)))
            elif w > start and w not in on_path and len(path) < max_len:
                path.append(w)
                on_path.add(w)
                extend(start, path, on_path)
                on_path.discard(w)
                path.pop()

    for start in range(graph.n_nodes):
        extend(start, [start], {start})
    return [validate_bolt(space, pts, closed=True) for pts in sorted(found)]
