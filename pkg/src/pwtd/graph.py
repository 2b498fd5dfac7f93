"""Simple undirected graphs, test-family generators and the edge-list format."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed edge-list text or inconsistent graph data."""


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on vertices ``0..n-1``.

    ``edges`` is normalized to a sorted tuple of ``(u, v)`` pairs with ``u < v``.
    Construct through :meth:`from_edges` unless the edges are already normal.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphFormatError(f"graph needs at least one vertex, got n={self.n}")
        prev = None
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) is not normalized or out of range for n={self.n}")
            if prev is not None and (u, v) <= prev:
                raise GraphFormatError("edges must be sorted and distinct")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphFormatError(f"vertex id {x} out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, tuple(sorted(norm)))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as a bitmask (bit ``v`` set for neighbor ``v``)."""
        return tuple(sum(1 << w for w in nb) for nb in self.adjacency)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.neighbor_masks[u] >> v & 1)

    def induced_components(self, vertices: Iterable[int]) -> list[list[int]]:
        """Connected components of the subgraph induced by ``vertices``, each sorted."""
        allowed = set(vertices)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


# -- text formats -------------------------------------------------------------

_HEADER = re.compile(r"^n\s*(?:=\s*|\s+)(\d+)$")


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    The first content line is ``n <int>`` (``n=<int>`` is accepted too), then one
    ``<u> <v>`` pair per line.  ``#`` starts a comment; ``;`` may replace newlines.
    Duplicate edges collapse; loops and out-of-range ids raise GraphFormatError.
    """
    n = None
    pairs = []
    for lineno, raw in enumerate(re.split(r"[\n;]", text), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            match = _HEADER.match(line)
            if not match:
                raise GraphFormatError(f"line {lineno}: expected header 'n <int>', got {raw.strip()!r}")
            n = int(match.group(1))
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {lineno}: expected '<u> <v>', got {raw.strip()!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise GraphFormatError("missing 'n <int>' header")
    return Graph.from_edges(n, pairs)


def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f'  {v} [label="{v}"];' for v in g.vertices)
    lines.extend(f"  {u} -- {v};" for u, v in g.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- generators -----------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """The single randomness source: numpy's PCG64 bit generator seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def blowup_graph(b: int, c: int) -> Graph:
    """Path on ``2**(b-c)`` cliques of size ``2**(c-1)``, consecutive cliques fully joined.

    Clique ``i`` occupies ids ``[i*s, (i+1)*s)`` with ``s = 2**(c-1)``.
    """
    if not b > c >= 1:
        raise ValueError(f"blowup needs b > c >= 1, got b={b}, c={c}")
    size = 2 ** (c - 1)
    blocks = 2 ** (b - c)
    edges = []
    for i in range(blocks):
        here = range(i * size, (i + 1) * size)
        edges.extend(itertools.combinations(here, 2))
        if i + 1 < blocks:
            nxt = range((i + 1) * size, (i + 2) * size)
            edges.extend(itertools.product(here, nxt))
    return Graph.from_edges(size * blocks, edges)


def random_bounded_pw(n: int, a: int, p: float, seed: int) -> tuple[Graph, list[list[int]]]:
    """Random graph with a witness path decomposition of width < ``a``.

    A window of at most ``a`` vertices slides over ``0..n-1``: each step shrinks
    it, grows it, or swaps one random member for the next fresh vertex, and the
    window after every step is recorded as a bag.  Each vertex pair sharing a bag
    becomes an edge with probability ``p`` (sampled once per pair).
    """
    if not 1 <= a <= n:
        raise ValueError(f"random_bounded_pw needs 1 <= a <= n, got a={a}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    window = [0]
    fresh = 1
    bags = [[0]]
    while fresh < n:
        r = rng.random()
        if len(window) > 1 and r < 0.2:
            window.pop(int(rng.integers(len(window))))
        elif len(window) < a and r < 0.6:
            window.append(fresh)
            fresh += 1
        else:
            if len(window) >= a:
                window.pop(int(rng.integers(len(window))))
            window.append(fresh)
            fresh += 1
        bags.append(sorted(window))
    sampled: set[tuple[int, int]] = set()
    edges = []
    for bag in bags:
        for pair in itertools.combinations(bag, 2):
            if pair in sampled:
                continue
            sampled.add(pair)
            if rng.random() < p:
                edges.append(pair)
    return Graph.from_edges(n, edges), bags


FAMILIES = ("path", "cycle", "clique", "empty", "blowup", "random_bounded_pw")


def generate(kind: str, params: dict[str, float], seed: int = 0) -> tuple[Graph, list[list[int]]]:
    """Build a graph of a named family together with a witness decomposition (bag lists).

    Deterministic in ``(kind, params, seed)``; only ``random_bounded_pw`` uses the seed.
    """
    def need(*names: str) -> list:
        missing = [x for x in names if x not in params]
        if missing:
            raise ValueError(f"family {kind!r} needs parameters {missing}")
        return [params[x] for x in names]

    if kind == "path":
        (n,) = map(int, need("n"))
        bags = [[i, i + 1] for i in range(n - 1)] or [[0]]
        return path_graph(n), bags
    if kind == "cycle":
        (n,) = map(int, need("n"))
        g = cycle_graph(n)
        return g, [[0, i, i + 1] for i in range(1, n - 1)]
    if kind == "clique":
        (n,) = map(int, need("n"))
        return clique_graph(n), [list(range(n))]
    if kind == "empty":
        (n,) = map(int, need("n"))
        return Graph.from_edges(n, []), [[v] for v in range(n)]
    if kind == "blowup":
        b, c = map(int, need("b", "c"))
        g = blowup_graph(b, c)
        size = 2 ** (c - 1)
        blocks = g.n // size
        if blocks == 1:
            return g, [list(range(g.n))]
        return g, [list(range(i * size, (i + 2) * size)) for i in range(blocks - 1)]
    if kind == "random_bounded_pw":
        n, a = map(int, need("n", "a"))
        (p,) = need("p")
        return random_bounded_pw(n, a, float(p), seed)
    raise ValueError(f"unknown graph family {kind!r}; expected one of {', '.join(FAMILIES)}")
