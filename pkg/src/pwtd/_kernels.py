"""Subset dynamic programs over vertex bitmasks.

Every table is indexed by a mask ``S`` of ``n <= 20`` vertices.  Each kernel has a
numba loop (masks in increasing order, so ``S - {v}`` is always ready) and a numpy
version that sweeps popcount layers with vectorized updates.  Both return
identical arrays.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, resolve_backend

INF = np.int8(127)


# -- numba loops -------------------------------------------------------------------

@njit
def _treedepth_loop(nbr, n):
    size = 1 << n
    td = np.zeros(size, np.int8)
    for S in range(1, size):
        comp = S & -S
        while True:
            ext = comp
            for v in range(n):
                if (comp >> v) & 1:
                    ext |= nbr[v]
            ext &= S
            if ext == comp:
                break
            comp = ext
        if comp != S:
            a = td[comp]
            b = td[S ^ comp]
            td[S] = a if a > b else b
        else:
            best = 127
            for v in range(n):
                if (S >> v) & 1:
                    c = td[S ^ (1 << v)]
                    if c < best:
                        best = c
            td[S] = best + 1
    return td


@njit
def _vsep_loop(nbr, n):
    size = 1 << n
    vs = np.zeros(size, np.int8)
    for S in range(1, size):
        bnd = 0
        best = 127
        for v in range(n):
            if (S >> v) & 1:
                if nbr[v] & ~S:
                    bnd += 1
                c = vs[S ^ (1 << v)]
                if c < best:
                    best = c
        vs[S] = bnd if bnd > best else best
    return vs


@njit
def _path_end_loop(nbr, n):
    size = 1 << n
    end = np.zeros(size, np.int64)
    for S in range(1, size):
        if S & (S - 1) == 0:
            end[S] = S
            continue
        e = 0
        for v in range(n):
            bit = 1 << v
            if S & bit and end[S ^ bit] & nbr[v]:
                e |= bit
        end[S] = e
    return end


# -- numpy layered sweeps -------------------------------------------------------------

def _layers(n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    masks = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(masks.shape, np.int64)
    for v in range(n):
        pc += (masks >> v) & 1
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(n + 2))
    return masks, [order[bounds[k]:bounds[k + 1]].astype(np.int64) for k in range(n + 1)]


def _components_of_lowest(masks: np.ndarray, nbr: np.ndarray, n: int) -> np.ndarray:
    comp = masks & -masks
    for _ in range(n):
        ext = comp.copy()
        for v in range(n):
            ext |= np.where((comp >> v) & 1 == 1, nbr[v], 0)
        ext &= masks
        if np.array_equal(ext, comp):
            break
        comp = ext
    return comp


def _treedepth_np(nbr: np.ndarray, n: int) -> np.ndarray:
    masks, layers = _layers(n)
    comp = _components_of_lowest(masks, nbr, n)
    td = np.zeros(1 << n, np.int8)
    for S in layers[1:]:
        c = comp[S]
        conn = c == S
        Sd, cd = S[~conn], c[~conn]
        td[Sd] = np.maximum(td[cd], td[Sd ^ cd])
        Sc = S[conn]
        best = np.full(Sc.shape, INF, np.int8)
        for v in range(n):
            bit = np.int64(1 << v)
            cand = np.where(Sc & bit != 0, td[Sc ^ bit], INF)
            np.minimum(best, cand, out=best)
        td[Sc] = best + 1
    return td


def _vsep_np(nbr: np.ndarray, n: int) -> np.ndarray:
    masks, layers = _layers(n)
    bnd = np.zeros(masks.shape, np.int8)
    for v in range(n):
        bnd += (((masks >> v) & 1 == 1) & (nbr[v] & ~masks != 0)).astype(np.int8)
    vs = np.zeros(1 << n, np.int8)
    for S in layers[1:]:
        best = np.full(S.shape, INF, np.int8)
        for v in range(n):
            bit = np.int64(1 << v)
            cand = np.where(S & bit != 0, vs[S ^ bit], INF)
            np.minimum(best, cand, out=best)
        vs[S] = np.maximum(bnd[S], best)
    return vs


def _path_end_np(nbr: np.ndarray, n: int) -> np.ndarray:
    _, layers = _layers(n)
    end = np.zeros(1 << n, np.int64)
    if n:
        end[layers[1]] = layers[1]
    for S in layers[2:]:
        e = np.zeros(S.shape, np.int64)
        for v in range(n):
            bit = np.int64(1 << v)
            ok = (S & bit != 0) & (end[S ^ bit] & nbr[v] != 0)
            e |= np.where(ok, bit, 0)
        end[S] = e
    return end


# -- dispatch -----------------------------------------------------------------------------

_TABLES = {
    "treedepth": (_treedepth_loop, _treedepth_np),
    "vertex_separation": (_vsep_loop, _vsep_np),
    "path_ends": (_path_end_loop, _path_end_np),
}


def subset_table(kind: str, neighbor_masks, backend: str | None = None) -> np.ndarray:
    """Run the ``kind`` subset DP for a graph given by its neighbor bitmasks.

    ``treedepth``: treedepth of each induced subgraph.  ``vertex_separation``:
    least max-boundary over orderings of each vertex set placed first.
    ``path_ends``: bitmask of vertices ending a Hamiltonian path of each subset.
    """
    loop, vectorized = _TABLES[kind]
    nbr = np.asarray(neighbor_masks, dtype=np.int64)
    n = len(nbr)
    if resolve_backend(backend) == "numba":
        return loop(nbr, n)
    return vectorized(nbr, n)
