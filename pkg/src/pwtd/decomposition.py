"""Path decompositions, elimination forests, their validators and interval bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .graph import Graph

ROOT = -1
"""Parent marker for forest roots; the sentinel root is never a vertex id."""


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: tuple

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


class DecompositionError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(map(str, violations[:5])) + (" ..." if len(violations) > 5 else ""))


class ForestError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(map(str, violations[:5])) + (" ..." if len(violations) > 5 else ""))


@dataclass(frozen=True, order=True)
class Interval:
    """Inclusive range ``[lo, hi]`` of bag indices."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi or self.lo < 0:
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, t: object) -> bool:
        return isinstance(t, int) and self.lo <= t <= self.hi

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def sub_interval(lo: int, hi: int) -> Interval | None:
    """``Interval(lo, hi)`` or None when the range is empty."""
    return Interval(lo, hi) if lo <= hi else None


@dataclass(frozen=True)
class PathDecomposition:
    """Bags laid out left to right; each bag is a sorted tuple of vertex ids."""

    bags: tuple[tuple[int, ...], ...]

    @classmethod
    def from_bags(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        return cls(tuple(tuple(sorted(set(int(v) for v in bag))) for bag in bags))

    def __len__(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @cached_property
    def bag_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(b) for b in self.bags)

    @cached_property
    def first(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t, bag in enumerate(self.bags):
            for v in bag:
                out.setdefault(v, t)
        return out

    @cached_property
    def last(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t, bag in enumerate(self.bags):
            for v in bag:
                out[v] = t
        return out

    def whole(self) -> Interval:
        return Interval(0, len(self.bags) - 1)

    def union(self, nodes: Iterable[int]) -> frozenset[int]:
        """``B(X)``: union of the bags of the given nodes."""
        out: set[int] = set()
        for t in nodes:
            out.update(self.bags[t])
        return frozenset(out)

    def level(self, iv: Interval) -> int:
        return min(len(self.bags[t]) for t in iv)

    def interior(self, iv: Interval) -> frozenset[int]:
        """Vertices occurring only in bags of ``iv``."""
        first, last = self.first, self.last
        return frozenset(v for v in self.union(iv) if first[v] >= iv.lo and last[v] <= iv.hi)


@dataclass(frozen=True)
class IntervalStats:
    level: int
    interior: frozenset[int]
    boundary_union: frozenset[int]


def interval_stats(pd: PathDecomposition, iv: Interval) -> IntervalStats:
    """Level, interior and bag union of ``iv``, by literal set algebra."""
    if iv.hi >= len(pd):
        raise ValueError(f"interval {iv} outside a decomposition with {len(pd)} bags")
    inside = pd.union(iv)
    outside = pd.union(t for t in range(len(pd)) if t not in iv)
    return IntervalStats(pd.level(iv), inside - outside, inside)


def pd_violations(g: Graph, pd: PathDecomposition) -> list[Violation]:
    out = []
    for t, bag in enumerate(pd.bags):
        for v in bag:
            if not 0 <= v < g.n:
                out.append(Violation("unknown-vertex", (t, v)))
    if out:
        return out
    for v in g.vertices:
        if v not in pd.first:
            out.append(Violation("missing-vertex", (v,)))
    for u, v in g.edges:
        if not any(u in s and v in s for s in pd.bag_sets):
            out.append(Violation("uncovered-edge", (u, v)))
    for v in sorted(pd.first):
        lo, hi = pd.first[v], pd.last[v]
        gaps = [t for t in range(lo, hi + 1) if v not in pd.bag_sets[t]]
        if gaps:
            out.append(Violation("non-contiguous", (v, tuple(gaps))))
    return out


def validate_path_decomposition(g: Graph, pd: PathDecomposition) -> int:
    """Return the width of ``pd`` or raise DecompositionError listing every violation."""
    violations = pd_violations(g, pd)
    if violations:
        raise DecompositionError(violations)
    return pd.width


def normalize(pd: PathDecomposition) -> PathDecomposition:
    """Drop empty bags at either end and collapse runs of interior empty bags to one.

    Interior empty bags separate components and must survive for linkedness.
    """
    bags = list(pd.bags)
    while bags and not bags[0]:
        bags.pop(0)
    while bags and not bags[-1]:
        bags.pop()
    out: list[tuple[int, ...]] = []
    for bag in bags:
        if not bag and out and not out[-1]:
            continue
        out.append(bag)
    return PathDecomposition(tuple(out))


# -- elimination forests --------------------------------------------------------

@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest on ``0..n-1`` given by a parent array (``ROOT`` for roots)."""

    parent: tuple[int, ...]
    _depth: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.parent)
        depth = [0] * n
        for v in range(n):
            if depth[v]:
                continue
            chain = []
            u = v
            on_chain = set()
            while u != ROOT:
                if not 0 <= u < n:
                    raise ForestError([Violation("unknown-parent", (v, u))])
                if depth[u]:
                    break
                if u in on_chain:
                    raise ForestError([Violation("cycle", tuple(chain))])
                on_chain.add(u)
                chain.append(u)
                u = self.parent[u]
            base = 0 if u == ROOT else depth[u]
            for w in reversed(chain):
                base += 1
                depth[w] = base
        object.__setattr__(self, "_depth", tuple(depth))

    @classmethod
    def from_parents(cls, parent: Sequence[int]) -> "EliminationForest":
        return cls(tuple(int(p) for p in parent))

    @property
    def n(self) -> int:
        return len(self.parent)

    def depth(self, v: int) -> int:
        """Vertices on the root-to-``v`` path, ``v`` included."""
        return self._depth[v]

    @property
    def height(self) -> int:
        return max(self._depth, default=0)

    @property
    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p == ROOT]

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when ``u`` lies on the root-to-``v`` path (``u == v`` counts)."""
        du = self._depth[u]
        while self._depth[v] > du:
            v = self.parent[v]
        return u == v


def forest_violations(g: Graph, ef: EliminationForest) -> list[Violation]:
    if ef.n != g.n:
        return [Violation("vertex-count", (ef.n, g.n))]
    return [
        Violation("edge-not-ancestral", (u, v))
        for u, v in g.edges
        if not (ef.is_ancestor(u, v) or ef.is_ancestor(v, u))
    ]


def validate_elimination_forest(g: Graph, ef: EliminationForest) -> int:
    """Return the height of ``ef`` or raise ForestError listing offending edges."""
    violations = forest_violations(g, ef)
    if violations:
        raise ForestError(violations)
    return ef.height


# -- text formats -----------------------------------------------------------------

def serialize_pd(pd: PathDecomposition) -> str:
    return "".join((" ".join(map(str, bag)) if bag else "-") + "\n" for bag in pd.bags)


def parse_pd(text: str) -> PathDecomposition:
    """One bag per line, space-separated ids; ``-`` is an empty bag, ``#`` a comment."""
    bags = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "-":
            bags.append(())
            continue
        try:
            bags.append([int(x) for x in line.split()])
        except ValueError:
            raise ValueError(f"line {lineno}: bad bag {raw.strip()!r}") from None
    return PathDecomposition.from_bags(bags)


def serialize_forest(ef: EliminationForest) -> str:
    lines = [f"{v} {p}" for v, p in enumerate(ef.parent)]
    lines.append(f"height {ef.height}")
    return "\n".join(lines) + "\n"


def parse_forest(text: str) -> EliminationForest:
    entries: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("height"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<v> <parent>', got {raw.strip()!r}")
        entries[int(parts[0])] = int(parts[1])
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise ValueError("forest must list every vertex 0..n-1 exactly once")
    return EliminationForest(tuple(entries[v] for v in range(n)))


def forest_to_dot(ef: EliminationForest, name: str = "F") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    by_depth: dict[int, list[int]] = {}
    for v in range(ef.n):
        by_depth.setdefault(ef.depth(v), []).append(v)
    for d in sorted(by_depth):
        lines.append(f"  {{ rank=same; {' '.join(map(str, by_depth[d]))} }}")
    for v, p in enumerate(ef.parent):
        if p != ROOT:
            lines.append(f"  {p} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
