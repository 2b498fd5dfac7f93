"""Exact brute-force width oracles for graphs with at most 20 vertices.

All three share the bitmask tables of ``_kernels``; witnesses are rebuilt from the
tables with smallest-id choices, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ._kernels import subset_table
from .decomposition import ROOT, EliminationForest, PathDecomposition
from .graph import Graph

MAX_ORACLE_N = 20

Witness = Union[EliminationForest, PathDecomposition, tuple]


class OracleLimitError(ValueError):
    """Graph too large for an exponential oracle."""


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: Witness | None = None


def _check_size(g: Graph) -> None:
    if g.n > MAX_ORACLE_N:
        raise OracleLimitError(f"exact oracles accept n <= {MAX_ORACLE_N}, got n = {g.n}")


def _bits(mask: int):
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def _mask_components(g: Graph, S: int) -> list[int]:
    nbr = g.neighbor_masks
    out = []
    rest = S
    while rest:
        comp = rest & -rest
        while True:
            ext = comp
            for v in _bits(comp):
                ext |= nbr[v]
            ext &= S
            if ext == comp:
                break
            comp = ext
        out.append(comp)
        rest &= ~comp
    return out


def exact_treedepth(g: Graph, backend: str | None = None) -> OracleResult:
    """Treedepth with an optimal elimination forest as witness.

    td(S) is the max over components for disconnected S and 1 + min_v td(S - v)
    for connected S; the forest roots each component at the first optimal v.
    """
    _check_size(g)
    td = subset_table("treedepth", g.neighbor_masks, backend)
    parent = [ROOT] * g.n
    stack = [(c, ROOT) for c in _mask_components(g, (1 << g.n) - 1)]
    while stack:
        S, up = stack.pop()
        want = int(td[S]) - 1
        for v in _bits(S):
            if int(td[S ^ (1 << v)]) == want:
                break
        parent[v] = up
        stack.extend((c, v) for c in _mask_components(g, S ^ (1 << v)))
    return OracleResult(int(td[-1]), EliminationForest(tuple(parent)))


def exact_pathwidth(g: Graph, backend: str | None = None) -> OracleResult:
    """Pathwidth as vertex separation number, with the decomposition of an optimal ordering.

    For an ordering v_1..v_n the bag of v_i is v_i plus the earlier vertices that
    still have a neighbor among v_i..v_n.
    """
    _check_size(g)
    vs = subset_table("vertex_separation", g.neighbor_masks, backend)
    nbr = g.neighbor_masks
    S = (1 << g.n) - 1
    value = int(vs[S])
    order = []
    while S:
        # any v with vs[S - v] <= vs[S] can be the last vertex of an optimal order of S
        target = int(vs[S])
        for v in _bits(S):
            if int(vs[S ^ (1 << v)]) <= target:
                break
        order.append(v)
        S ^= 1 << v
    order.reverse()
    bags = []
    placed = 0
    full = (1 << g.n) - 1
    for v in order:
        later = full & ~placed
        bags.append([u for u in _bits(placed) if nbr[u] & later] + [v])
        placed |= 1 << v
    pd = PathDecomposition.from_bags(bags)
    if pd.width != value:
        raise AssertionError(f"pathwidth witness has width {pd.width}, table says {value}")
    return OracleResult(value, pd)


def longest_path_order(g: Graph, backend: str | None = None) -> OracleResult:
    """Maximum number of vertices on a simple path; the witness is one such path."""
    _check_size(g)
    end = subset_table("path_ends", g.neighbor_masks, backend)
    reach = np.flatnonzero(end)
    sizes = np.zeros(reach.shape, np.int64)
    for v in range(g.n):
        sizes += (reach >> v) & 1
    best_S = int(reach[np.argmax(sizes)])
    best_size = int(sizes.max())
    nbr = g.neighbor_masks
    S = best_S
    v = next(_bits(int(end[S])))
    path = [v]
    while S != 1 << v:
        prev_S = S ^ (1 << v)
        u = next(_bits(int(end[prev_S]) & nbr[v]))
        path.append(u)
        S, v = prev_S, u
    path.reverse()
    return OracleResult(best_size, tuple(path))


def min_b(path_order: int) -> int:
    """Smallest b with ``2**b > path_order``."""
    if path_order < 1:
        raise ValueError("path order must be positive")
    return path_order.bit_length()
