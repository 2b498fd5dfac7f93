"""Vertex-disjoint linkages, linked path decompositions and nested linkage families.

Flows run on the vertex-split digraph (``v_in -> v_out`` with capacity one, all
other arcs unbounded), so every minimum cut is a vertex set.  Augmenting paths
come from BFS that scans arcs in increasing vertex id, which keeps linkages and
everything built from them reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .decomposition import Interval, PathDecomposition, validate_path_decomposition
from .graph import Graph

_SRC, _SNK = 0, 1


def _vin(v: int) -> int:
    return 2 * v + 2


def _vout(v: int) -> int:
    return 2 * v + 3


class NotLinkedError(ValueError):
    """A linkage the decomposition promises does not exist."""


class RepairError(AssertionError):
    """The linkedness repair failed to make progress (an implementation bug)."""


@dataclass(frozen=True)
class Linkage:
    """Pairwise vertex-disjoint paths, each from ``A`` to ``B``."""

    paths: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)


@dataclass(frozen=True)
class Cut:
    """A vertex set separating ``A`` from ``B``; ``len(vertices)`` equals the max flow."""

    vertices: frozenset[int]


def _max_linkage(
    g: Graph, A: Iterable[int], B: Iterable[int], allowed: Iterable[int], limit: int
) -> tuple[list[list[int]], frozenset[int] | None]:
    """Up to ``limit`` disjoint A-B paths inside ``allowed``; a minimum cut if fewer exist."""
    allowed = set(allowed)
    A, B = sorted(set(A)), sorted(set(B))
    big = len(allowed) + 1
    res: dict[int, dict[int, int]] = {_SRC: {}, _SNK: {}}
    orig: dict[tuple[int, int], int] = {}

    def arc(u: int, w: int, c: int) -> None:
        res.setdefault(u, {})
        res.setdefault(w, {})
        res[u][w] = res[u].get(w, 0) + c
        res[w].setdefault(u, 0)
        orig[u, w] = orig.get((u, w), 0) + c

    for v in sorted(allowed):
        arc(_vin(v), _vout(v), 1)
        for w in g.adjacency[v]:
            if w in allowed:
                arc(_vout(v), _vin(w), big)
    for a in A:
        arc(_SRC, _vin(a), big)
    for b in B:
        arc(_vout(b), _SNK, big)
    order = {u: sorted(nb) for u, nb in res.items()}

    flow = 0
    reached: dict[int, int] = {}
    while flow < limit:
        reached = {_SRC: _SRC}
        queue = deque([_SRC])
        while queue and _SNK not in reached:
            u = queue.popleft()
            for w in order[u]:
                if w not in reached and res[u][w] > 0:
                    reached[w] = u
                    queue.append(w)
        if _SNK not in reached:
            break
        w = _SNK
        while w != _SRC:
            u = reached[w]
            res[u][w] -= 1
            res[w][u] += 1
            w = u
        flow += 1

    paths = []
    for a in A:
        if orig[_SRC, _vin(a)] - res[_SRC][_vin(a)] <= 0:
            continue
        path = [a]
        node = _vout(a)
        while True:
            nxt = next(
                w for w in order[node]
                if orig.get((node, w), 0) - res[node][w] > 0
            )
            if nxt == _SNK:
                break
            v = (nxt - 2) // 2
            path.append(v)
            node = _vout(v)
        paths.append(path)
    if len(paths) != flow:
        raise AssertionError("flow decomposition lost a path")
    if flow >= limit:
        return paths, None
    cut = frozenset(v for v in allowed if _vin(v) in reached and _vout(v) not in reached)
    if len(cut) != flow:
        raise AssertionError(f"cut of size {len(cut)} against flow {flow}")
    return paths, cut


def vertex_disjoint_linkage(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    k: int,
    allowed: Iterable[int] | None = None,
) -> Linkage | Cut:
    """A k-linkage between ``A`` and ``B`` inside ``allowed``, or a cut of size < k.

    A path may be a single vertex of ``A & B``.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    A, B = set(A), set(B)
    allowed = set(g.vertices) if allowed is None else set(allowed)
    if not (A <= allowed and B <= allowed):
        raise ValueError("A and B must lie inside the allowed vertex set")
    paths, cut = _max_linkage(g, A, B, allowed, k)
    if cut is not None:
        return Cut(cut)
    return Linkage(tuple(tuple(p) for p in paths))


# -- linkedness -----------------------------------------------------------------------

@dataclass(frozen=True)
class PairFlow:
    t: int
    t2: int
    k: int
    flow: int
    cut: frozenset[int] | None = None


def _pair_minima(pd: PathDecomposition) -> list[list[int]]:
    sizes = [len(b) for b in pd.bags]
    p = len(sizes)
    mins = [[0] * p for _ in range(p)]
    for t in range(p):
        cur = sizes[t]
        for t2 in range(t, p):
            cur = min(cur, sizes[t2])
            mins[t][t2] = cur
    return mins


def _pairs(pd: PathDecomposition, maximal_only: bool):
    p = len(pd)
    mins = _pair_minima(pd)
    for t in range(p):
        for t2 in range(t + 1, p):
            k = mins[t][t2]
            if k == 0:
                continue
            if maximal_only:
                if t > 0 and mins[t - 1][t2] == k:
                    continue
                if t2 + 1 < p and mins[t][t2 + 1] == k:
                    continue
            yield t, t2, k


def linkedness_certificate(g: Graph, pd: PathDecomposition, maximal_only: bool = False) -> list[PairFlow]:
    """Achieved flow (capped at the pair's minimum bag size) for every bag pair."""
    out = []
    everything = range(g.n)
    for t, t2, k in _pairs(pd, maximal_only):
        paths, cut = _max_linkage(g, pd.bags[t], pd.bags[t2], everything, k)
        out.append(PairFlow(t, t2, k, len(paths), cut))
    return out


def check_linked(g: Graph, pd: PathDecomposition, maximal_only: bool = False) -> list[PairFlow]:
    """Every bag pair whose flow falls short of the minimum bag size between them.

    An empty list means ``pd`` is linked.  ``maximal_only`` skips pairs that can
    be widened without lowering their minimum; it finds a violation whenever one
    exists but may report fewer of them.
    """
    return [pf for pf in linkedness_certificate(g, pd, maximal_only) if pf.cut is not None]


def is_linked(g: Graph, pd: PathDecomposition) -> bool:
    return not check_linked(g, pd, maximal_only=True)


# -- repair -----------------------------------------------------------------------------

def reduce_bags(pd: PathDecomposition) -> PathDecomposition:
    """Drop bags contained in a neighboring bag until none is."""
    bags = [frozenset(b) for b in pd.bags]
    changed = True
    while changed and len(bags) > 1:
        changed = False
        for s in range(len(bags)):
            if (s > 0 and bags[s] <= bags[s - 1]) or (s + 1 < len(bags) and bags[s] <= bags[s + 1]):
                del bags[s]
                changed = True
                break
    return PathDecomposition.from_bags(bags)


def expand_adhesions(pd: PathDecomposition) -> PathDecomposition:
    """Insert ``B_s & B_{s+1}`` between consecutive bags (unless it equals one of them)."""
    out = [pd.bag_sets[0]] if len(pd) else []
    for s in range(1, len(pd)):
        left, right = pd.bag_sets[s - 1], pd.bag_sets[s]
        meet = left & right
        if meet != left and meet != right:
            out.append(meet)
        out.append(right)
    return PathDecomposition.from_bags(out)


def fatness(pd: PathDecomposition, top: int) -> tuple[int, ...]:
    """Bag counts by size from ``top`` down to 0; smaller tuples are leaner."""
    counts = [0] * (top + 1)
    for bag in pd.bags:
        counts[len(bag)] += 1
    return tuple(reversed(counts))


def separator_surgery(g: Graph, pd: PathDecomposition, t: int, t2: int, k: int) -> PathDecomposition:
    """Split ``pd`` along a minimum separator between ``B_t`` and ``B_t2`` (smaller than ``k``).

    With S the separator, side A holds the components of G - S reaching ``B_t``
    (plus stray components left of ``t2``) and side B the rest.  The Menger paths
    through S give, for each x in S, a segment Q_x inside A and R_x inside B.  Bags
    ``0..t2`` keep their A-part with R_x contracted onto x, bags ``t+1..`` keep
    their B-part with Q_x contracted onto x; the two runs meet at the bag S.  No bag
    grows.
    """
    Bt, Bt2 = pd.bag_sets[t], pd.bag_sets[t2]
    paths, cut = _max_linkage(g, Bt, Bt2, range(g.n), k)
    if cut is None:
        raise ValueError(f"bags {t} and {t2} are {k}-linked; nothing to repair")
    S = cut
    side_a: set[int] = set()
    side_b: set[int] = set()
    for comp in g.induced_components(v for v in g.vertices if v not in S):
        cs = set(comp)
        if cs & Bt:
            side_a |= cs
        elif cs & Bt2:
            side_b |= cs
        elif min(pd.first[v] for v in comp) > t2:
            side_b |= cs
        else:
            side_a |= cs
    q_seg: dict[int, list[int]] = {}
    r_seg: dict[int, list[int]] = {}
    for path in paths:
        hits = [i for i, v in enumerate(path) if v in S]
        if len(hits) != 1:
            raise RepairError(f"Menger path {path} meets the separator {sorted(S)} {len(hits)} times")
        i = hits[0]
        x = path[i]
        q_seg[x] = path[: i + 1]
        r_seg[x] = path[i:]
    bags = []
    for s in range(t2 + 1):
        bag = pd.bag_sets[s]
        bags.append((bag & side_a) | {x for x in S if bag.intersection(r_seg[x])})
    for s in range(t + 1, len(pd)):
        bag = pd.bag_sets[s]
        bags.append((bag & side_b) | {x for x in S if bag.intersection(q_seg[x])})
    out = PathDecomposition.from_bags(bags)
    validate_path_decomposition(g, out)
    return out


@dataclass
class RepairResult:
    pd: PathDecomposition
    iterations: int = 0
    bound: int = 0
    potentials: list[tuple[int, ...]] = field(default_factory=list)


def repair_linked(g: Graph, pd: PathDecomposition) -> RepairResult:
    """Make ``pd`` linked without increasing its width.

    Linked input comes back unchanged.  Otherwise the decomposition is reduced
    (no bag inside a neighbor), expanded with adhesion bags, and the first
    violating pair is cut apart by :func:`separator_surgery`.  Each step must
    strictly lower the fatness of the reduced decomposition; a reduced
    decomposition has at most n bags, so fewer than ``(n+1)**(width+1)`` steps
    can happen.
    """
    validate_path_decomposition(g, pd)
    if is_linked(g, pd):
        return RepairResult(pd)
    top = pd.width + 1
    bound = (g.n + 1) ** top
    reduced = reduce_bags(PathDecomposition(tuple(b for b in pd.bags if b)))
    result = RepairResult(pd, bound=bound, potentials=[fatness(reduced, top)])
    while True:
        expanded = expand_adhesions(reduced)
        bad = check_linked(g, expanded)
        if not bad:
            result.pd = expanded
            return result
        first = bad[0]
        cut_open = separator_surgery(g, expanded, first.t, first.t2, first.k)
        nxt = reduce_bags(PathDecomposition(tuple(b for b in cut_open.bags if b)))
        pot = fatness(nxt, top)
        if not pot < result.potentials[-1]:
            raise RepairError(
                f"surgery on bags ({first.t}, {first.t2}) did not lower fatness: "
                f"{result.potentials[-1]} -> {pot}"
            )
        result.potentials.append(pot)
        result.iterations += 1
        if result.iterations >= bound:
            raise RepairError("repair exceeded its potential bound")
        reduced = nxt


def make_linked(g: Graph, pd: PathDecomposition) -> PathDecomposition:
    return repair_linked(g, pd).pd


# -- nested linkage family ---------------------------------------------------------------

def trim_path(path: Sequence[int], left_bag: frozenset[int], right_bag: frozenset[int]) -> tuple[int, ...]:
    """Subpath from the last vertex in ``left_bag`` to the next vertex in ``right_bag``."""
    starts = [i for i, v in enumerate(path) if v in left_bag]
    if not starts:
        raise NotLinkedError(f"path {list(path)} never meets the left bag")
    p = starts[-1]
    for q in range(p, len(path)):
        if path[q] in right_bag:
            return tuple(path[p: q + 1])
    raise NotLinkedError(f"path {list(path)} never reaches the right bag after position {p}")


class LinkageFamily:
    """Lazily fixed k-linkages between the end bags of intervals.

    An interval's linkage for ``k`` is trimmed from its parent's linkage when the
    parent has one, so vertex sets nest along the split tree; otherwise it is
    computed fresh inside ``B(I)``.
    """

    def __init__(self, g: Graph, pd: PathDecomposition):
        self.g = g
        self.pd = pd
        self.entries: dict[tuple[Interval, int], Linkage] = {}
        self.origin: dict[tuple[Interval, int], str] = {}

    def _fresh(self, iv: Interval, k: int) -> Linkage:
        pd = self.pd
        found = vertex_disjoint_linkage(
            self.g, pd.bags[iv.lo], pd.bags[iv.hi], k, allowed=pd.union(iv)
        )
        if isinstance(found, Cut):
            raise NotLinkedError(
                f"no {k}-linkage between bags {iv.lo} and {iv.hi}; cut {sorted(found.vertices)}"
            )
        return found

    def trimmed(self, parent: Interval, iv: Interval, k: int) -> Linkage:
        """The parent's k-linkage trimmed to ``iv`` (not stored)."""
        base = self.get(parent, k)
        left, right = self.pd.bag_sets[iv.lo], self.pd.bag_sets[iv.hi]
        return Linkage(tuple(trim_path(path, left, right) for path in base.paths))

    def get(self, iv: Interval, k: int, parent: Interval | None = None) -> Linkage:
        key = (iv, k)
        if key in self.entries:
            return self.entries[key]
        if not 1 <= k <= self.pd.level(iv):
            raise ValueError(f"k={k} outside 1..level({iv})={self.pd.level(iv)}")
        if parent is not None and not iv.issubset(parent):
            raise ValueError(f"{iv} is not inside its parent {parent}")
        if parent is not None and k <= self.pd.level(parent):
            link = self.trimmed(parent, iv, k)
            self.origin[key] = f"trim{parent}"
        else:
            link = self._fresh(iv, k)
            self.origin[key] = "fresh"
        self.entries[key] = link
        return link

    def vertex_set(self, iv: Interval, k: int) -> frozenset[int]:
        return self.entries[iv, k].vertex_set

    def nesting_violations(self) -> list[tuple[Interval, Interval, int]]:
        """Stored pairs ``(I', k), (I, k)`` with ``I' ⊆ I`` whose vertex sets do not nest."""
        out = []
        keys = sorted(self.entries)
        for inner, k in keys:
            for outer, k2 in keys:
                if k2 == k and inner != outer and inner.issubset(outer):
                    if not self.vertex_set(inner, k) <= self.vertex_set(outer, k):
                        out.append((inner, outer, k))
        return out


def family_get(
    fam: LinkageFamily, g: Graph, pd: PathDecomposition, iv: Interval, parent: Interval | None, k: int
) -> Linkage:
    if fam.g is not g or fam.pd is not pd:
        raise ValueError("family belongs to a different graph or decomposition")
    return fam.get(iv, k, parent)
