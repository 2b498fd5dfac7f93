"""Round-based construction of an elimination forest of height at most 10ab.

The tree grows from a sentinel root (``R_STAR``, not a vertex).  Each round takes
the leftmost active interval of unprocessed bags, hangs one representative of
every not-yet-absorbed linkage below the interval's anchor, picks one or two
separating bags by comparing left/right weights, hangs their missing vertices
below that, and splits the interval into at most three smaller ones.

Weights are exact: ``W(J, T) = prod_{i<=l} (x_i + 1)`` replaces the base-2 log sum,
and every inequality of the form ``depth/5 + log W <= c`` is checked as
``2**depth * W**5 <= 2**(5c)`` on Python integers.

Per-round audit names (T, T', T'' are the tree before the round, after the
representatives, and after the separating bags; ``l`` is the level, ``k = l - m``):

    bags_hold_m_tree_vertices   every bag of I meets T in at least m vertices
    remainders_in_interior      L_i - T  is inside  L_i - B(X)  is inside interior(I)
    x_double_entry              x_i counted with and without the interior agree
    weight_covers_2^k           W(I, T) >= 2**k
    small_bags_miss_le_2k       a small bag misses at most 2k vertices of T'
    comparator_monotone         left weights rise, right weights fall along small nodes
    added_le_4k, anchor_depth_le_5k
                                separating bags add at most 4k vertices; depth grows by at most 5k
    tree_on_anchor_path[J]      B(J) meets T'' only on the root path of the new anchor
    weight_budget[J]            2**depth * W(J)**5 <= 2**(5(b+1)l_J) * (l_J!)**5
    left/right_le_complement    W(L) <= W(R_t1), W(R) <= W(L_t2), both against T'
    middle_dominated            W(M, T'') <= W(M, T) <= W(I, T)
    middle_level_gain           level(M) >= l + k + 1
    split_counts[J]             x_i(I) >= x_i(J) + x_i(complement) + [i > m]
    side_weight_drop[J]         W(J, T'') * 2**k <= W(I, T)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .decomposition import (
    ROOT,
    DecompositionError,
    EliminationForest,
    Interval,
    PathDecomposition,
    forest_violations,
    normalize,
    sub_interval,
    validate_path_decomposition,
)
from .graph import Graph
from .linkage import LinkageFamily, NotLinkedError, check_linked
from .oracles import MAX_ORACLE_N, longest_path_order

R_STAR = ROOT
AuditMode = Literal["off", "final", "per-round"]
AUDIT_MODES = ("off", "final", "per-round")


class PreconditionError(ValueError):
    """Input breaks a promise the construction relies on (exit code 2)."""


class InvariantViolation(AssertionError):
    """An audited inequality failed; carries the trace up to the failing round (exit code 3)."""

    def __init__(self, check: str, detail: str, trace: list | None = None):
        self.check = check
        self.detail = detail
        self.trace = trace or []
        super().__init__(f"{check}: {detail}")


@dataclass
class RoundTrace:
    index: int
    interval: Interval
    anchor: int
    ell: int
    m: int
    k: int
    representatives: list[int]
    small_nodes: list[int]
    case: str
    t1: int | None
    t2: int | None
    added_bag_vertices: list[int]
    anchor_after: int
    children: list[Interval]
    weight_I: int
    weights: dict[int, tuple[int, int]]
    audits: dict[str, bool] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "round": self.index,
            "interval": [self.interval.lo, self.interval.hi],
            "anchor": _vertex_label(self.anchor),
            "ell": self.ell,
            "m": self.m,
            "k": self.k,
            "representatives": self.representatives,
            "small_nodes": self.small_nodes,
            "case": self.case,
            "t1": self.t1,
            "t2": self.t2,
            "added_bag_vertices": self.added_bag_vertices,
            "anchor_after": _vertex_label(self.anchor_after),
            "children": [[c.lo, c.hi] for c in self.children],
            "weight_I": str(self.weight_I),
            "weights": {str(t): {"left": str(wl), "right": str(wr)} for t, (wl, wr) in self.weights.items()},
            "audits": self.audits,
        }


def _vertex_label(v: int) -> int | str:
    return "r*" if v == R_STAR else v


@dataclass
class BuilderState:
    g: Graph
    pd: PathDecomposition
    fam: LinkageFamily
    a: int
    b: int
    parent: dict[int, int] = field(default_factory=dict)
    depth: dict[int, int] = field(default_factory=lambda: {R_STAR: 0})
    X: set[int] = field(default_factory=set)
    active: list[tuple[Interval, int]] = field(default_factory=list)
    parent_interval: dict[Interval, Interval | None] = field(default_factory=dict)

    @property
    def in_tree(self) -> frozenset[int]:
        return frozenset(self.parent)

    def attach(self, v: int, under: int) -> None:
        self.parent[v] = under
        self.depth[v] = self.depth[under] + 1

    def root_path(self, v: int) -> set[int]:
        """Graph vertices on the path from the sentinel to ``v``."""
        out = set()
        while v != R_STAR:
            out.add(v)
            v = self.parent[v]
        return out

    def forest(self) -> EliminationForest:
        return EliminationForest(tuple(self.parent[v] for v in range(self.g.n)))


@dataclass
class AuditReport:
    mode: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    final: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class BuildResult:
    forest: EliminationForest
    trace: list[RoundTrace]
    audit: AuditReport
    a: int
    b: int
    easy_case: bool
    pd: PathDecomposition

    @property
    def height(self) -> int:
        return self.forest.height

    @property
    def bound(self) -> int:
        return 10 * self.a * self.b


class _Auditor:
    def __init__(self, report: AuditReport, per_round: bool, trace: list[RoundTrace]):
        self.report = report
        self.per_round = per_round
        self.trace = trace
        self.current: dict[str, bool] = {}

    def __call__(self, name: str, ok: bool, detail: str = "") -> None:
        self.report.checks += 1
        self.current[name] = self.current.get(name, True) and bool(ok)
        if not ok:
            self.report.failures.append(f"{name}: {detail}")
            raise InvariantViolation(name, detail, self.trace)


def _weight(xs: list[int]) -> int:
    out = 1
    for x in xs:
        out *= x + 1
    return out


def _within_budget(depth: int, weight: int, ell: int, b: int) -> bool:
    # depth/5 + log W <= (b+1) ell + log(ell!)
    return (1 << depth) * weight ** 5 <= (1 << (5 * (b + 1) * ell)) * math.factorial(ell) ** 5


class _Round:
    """Weight bookkeeping for one interval, against a fixed tree snapshot."""

    def __init__(self, state: BuilderState, I: Interval):
        self.state = state
        self.I = I
        self.pd = state.pd
        self.fam = state.fam

    def linkage_vs(self, J: Interval, i: int) -> frozenset[int]:
        if J == self.I or (J, i) in self.fam.entries:
            return self.fam.get(J, i).vertex_set
        return self.fam.trimmed(self.I, J, i).vertex_set

    def xs(self, J: Interval | None, ell: int, tree: frozenset[int], stored: bool = False) -> list[int]:
        if J is None:
            return [0] * ell
        inner = self.pd.interior(J)
        out = []
        for i in range(1, ell + 1):
            vs = self.fam.get(J, i).vertex_set if stored else self.linkage_vs(J, i)
            out.append(len((vs - tree) & inner))
        return out

    def weight(self, J: Interval | None, ell: int, tree: frozenset[int]) -> int:
        return _weight(self.xs(J, ell, tree))


def _register(state: BuilderState, J: Interval, parent: Interval | None) -> None:
    state.parent_interval[J] = parent
    for i in range(1, state.pd.level(J) + 1):
        state.fam.get(J, i, parent)


def initial_state(g: Graph, pd: PathDecomposition, fam: LinkageFamily, b: int, audit: AuditMode = "per-round") -> BuilderState:
    """Sentinel-only tree, X empty, the whole decomposition as the one active interval."""
    state = BuilderState(g, pd, fam, a=pd.width + 1, b=b)
    whole = pd.whole()
    try:
        _register(state, whole, None)
    except NotLinkedError as exc:
        raise PreconditionError(f"decomposition is not linked: {exc}") from exc
    state.active = [(whole, R_STAR)]
    ell = pd.level(whole)
    rnd = _Round(state, whole)
    weight = rnd.weight(whole, ell, frozenset())
    # initial bound: w_ell <= b*ell + log(ell!)
    if weight > (1 << (b * ell)) * math.factorial(ell):
        raise PreconditionError(
            f"initial weight {weight} exceeds 2^(b*l)*l! = {(1 << (b * ell)) * math.factorial(ell)}; b={b} is too small"
        )
    if audit == "per-round" and not _within_budget(0, weight, ell, b):
        raise InvariantViolation("weight_budget[initial]", f"W={weight}, l={ell}, b={b}")
    return state


def run_round(state: BuilderState, I: Interval, index: int, auditor: _Auditor | None = None) -> RoundTrace:
    """Process one active interval ``I``; mutates ``state`` and returns the round's trace."""
    check = auditor if auditor is not None and auditor.per_round else (lambda *a, **k: None)
    if auditor is not None:
        auditor.current = {}
    pd, fam = state.pd, state.fam
    anchor = dict(state.active)[I]
    state.active = [(J, v) for J, v in state.active if J != I]
    rnd = _Round(state, I)
    ell = pd.level(I)
    T0 = state.in_tree
    interior_I = pd.interior(I)
    links = [fam.get(I, i).vertex_set for i in range(1, ell + 1)]

    m = max([0] + [i for i in range(1, ell + 1) if not links[i - 1] - T0])
    k = ell - m
    check("bags_hold_m_tree_vertices", all(len(pd.bag_sets[t] & T0) >= m for t in I), f"some bag of {I} has fewer than m={m} tree vertices")
    BX = pd.union(state.X)
    leaving = [i for i, vs in enumerate(links, 1) if not (vs - T0) <= (vs - BX) <= interior_I]
    check("remainders_in_interior", not leaving, f"linkages {leaving} of {I} leave the interior")
    xs_I = rnd.xs(I, ell, T0, stored=True)
    check("x_double_entry", xs_I == [len(vs - T0) for vs in links], f"x counts {xs_I}")
    W_I = _weight(xs_I)
    check("weight_covers_2^k", W_I >= 1 << k, f"W={W_I} < 2^k, k={k}")

    # representatives, one per unabsorbed linkage, as a chain below the anchor
    reps = [min(links[i - 1] - T0) for i in range(m + 1, ell + 1)]
    cur = anchor
    new_vertices = []
    for r in reps:
        if r not in state.parent:
            state.attach(r, cur)
            new_vertices.append(r)
            cur = r
    v1 = cur
    T1 = state.in_tree

    small = [t for t in I if len(pd.bags[t]) <= ell + k]
    check("small_exists", bool(small), f"no small node in {I}")
    for t in small:
        check("small_bags_miss_le_2k", len(pd.bag_sets[t] - T1) <= 2 * k, f"bag {t} misses more than 2k vertices")

    weights = {}
    for t in small:
        weights[t] = (
            rnd.weight(sub_interval(I.lo, t - 1), ell, T1),
            rnd.weight(sub_interval(t + 1, I.hi), ell, T1),
        )
    lefts = [weights[t][0] for t in small]
    rights = [weights[t][1] for t in small]
    check(
        "comparator_monotone",
        all(x <= y for x, y in zip(lefts, lefts[1:])) and all(x >= y for x, y in zip(rights, rights[1:])),
        f"weights along small nodes: {lefts} / {rights}",
    )
    le = [t for t in small if weights[t][0] <= weights[t][1]]
    gt = [t for t in small if weights[t][0] > weights[t][1]]
    t1 = max(le) if le else None
    t2 = min(gt) if gt else None
    if t2 is None:
        case = "L+M"
        L, M, R = sub_interval(I.lo, t1 - 1), sub_interval(t1 + 1, I.hi), None
    elif t1 is None:
        case = "M+R"
        L, M, R = None, sub_interval(I.lo, t2 - 1), sub_interval(t2 + 1, I.hi)
    else:
        case = "L+M+R"
        check(
            "t1_before_t2",
            t1 < t2 and not any(t1 < t < t2 for t in small),
            f"t1={t1}, t2={t2}, small={small}",
        )
        L, M, R = sub_interval(I.lo, t1 - 1), sub_interval(t1 + 1, t2 - 1), sub_interval(t2 + 1, I.hi)

    added = []
    for t in (t1, t2):
        if t is not None:
            added.extend(v for v in pd.bags[t] if v not in T1 and v not in added)
    cur = v1
    for v in added:
        state.attach(v, cur)
        new_vertices.append(v)
        cur = v
    v2 = cur
    T2 = state.in_tree
    check("added_le_4k", len(added) <= 4 * k, f"added {len(added)} > 4k={4 * k}")
    check("anchor_depth_le_5k", state.depth[v2] <= state.depth[anchor] + 5 * k, f"depth {state.depth[v2]} vs {state.depth[anchor]}+5k")

    state.X.update(t for t in (t1, t2) if t is not None)
    children = [J for J in (L, M, R) if J is not None]
    for J in children:
        _register(state, J, I)
    state.active = sorted(state.active + [(J, v2) for J in children])

    if auditor is not None and auditor.per_round:
        on_path = state.root_path(v2)
        for name, J in zip("LMR", (L, M, R)):
            if J is None:
                continue
            check(f"tree_on_anchor_path[{name}]", (pd.union(J) & T2) <= on_path, f"{J} has tree vertices off the anchor path")
            ellJ = pd.level(J)
            WJ = _weight(rnd.xs(J, ellJ, T2, stored=True))
            check(f"weight_budget[{name}]", _within_budget(state.depth[v2], WJ, ellJ, state.b), f"{J}: depth {state.depth[v2]}, W={WJ}, l={ellJ}")
        Wd = lambda J, T: rnd.weight(J, ell, T)  # noqa: E731
        if L is not None:
            Lbar = sub_interval(t1 + 1, I.hi)
            check("left_le_complement", Wd(L, T1) <= Wd(Lbar, T1), f"W(L)={Wd(L, T1)} > W(Lbar)={Wd(Lbar, T1)}")
            _check_split(check, rnd, "L", L, Lbar, ell, m, xs_I, T1)
            check("side_weight_drop[L]", Wd(L, T2) << k <= W_I, f"W(L,T'')*2^k={Wd(L, T2) << k} > W(I,T)={W_I}")
        if R is not None:
            Rbar = sub_interval(I.lo, t2 - 1)
            check("right_le_complement", Wd(R, T1) <= Wd(Rbar, T1), f"W(R)={Wd(R, T1)} > W(Rbar)={Wd(Rbar, T1)}")
            _check_split(check, rnd, "R", R, Rbar, ell, m, xs_I, T1)
            check("side_weight_drop[R]", Wd(R, T2) << k <= W_I, f"W(R,T'')*2^k={Wd(R, T2) << k} > W(I,T)={W_I}")
        if M is not None:
            check("middle_dominated", Wd(M, T2) <= Wd(M, T0) <= W_I, f"W(M) not dominated by W(I)={W_I}")
            check("middle_level_gain", pd.level(M) >= ell + k + 1, f"level(M)={pd.level(M)} < l+k+1={ell + k + 1}")
        bound = (1 << state.depth[anchor]) * W_I ** 5
        for v in new_vertices:
            check("depth_chain", state.depth[v] <= state.depth[v2] and (1 << state.depth[v]) <= bound, f"vertex {v}")
            path = state.root_path(v)
            check(
                "partial_elimination",
                all(w in path or v in state.root_path(w) for w in state.g.adjacency[v] if w in state.parent),
                f"vertex {v} has a tree neighbor that is neither ancestor nor descendant",
            )
        check("BX_in_tree", pd.union(state.X) <= T2, "B(X) not inside the tree")
        check("active_maximal", [J for J, _ in state.active] == _maximal_free(len(pd), state.X), "active family drifted")

    return RoundTrace(
        index=index,
        interval=I,
        anchor=anchor,
        ell=ell,
        m=m,
        k=k,
        representatives=reps,
        small_nodes=small,
        case=case,
        t1=t1,
        t2=t2,
        added_bag_vertices=added,
        anchor_after=v2,
        children=children,
        weight_I=W_I,
        weights=weights,
        audits=dict(auditor.current) if auditor is not None else {},
    )


def _check_split(check, rnd: _Round, name: str, J: Interval, Jbar: Interval | None, ell: int, m: int, xs_I: list[int], T1) -> None:
    xs_J = rnd.xs(J, ell, T1)
    xs_bar = rnd.xs(Jbar, ell, T1)
    ok = all(xs_I[i - 1] >= xs_J[i - 1] + xs_bar[i - 1] + (1 if i > m else 0) for i in range(1, ell + 1))
    check(f"split_counts[{name}]", ok, f"x(I)={xs_I}, x({name})={xs_J}, x(bar)={xs_bar}, m={m}")


def _maximal_free(p: int, X: set[int]) -> list[Interval]:
    out = []
    lo = None
    for t in range(p + 1):
        if t < p and t not in X:
            if lo is None:
                lo = t
        elif lo is not None:
            out.append(Interval(lo, t - 1))
            lo = None
    return out


def dfs_forest(g: Graph) -> EliminationForest:
    """Depth-first spanning forest, roots and neighbors in increasing id order."""
    parent = [ROOT] * g.n
    seen = [False] * g.n
    for root in g.vertices:
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, iter(g.adjacency[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    stack.append((w, iter(g.adjacency[w])))
                    break
            else:
                stack.pop()
    return EliminationForest(tuple(parent))


def sharper_bound_holds(height: int, a: int, b: int) -> bool:
    """``height <= 5ab + 5a log a + 5a`` in the form ``2^h <= 2^(5ab) a^(5a) 2^(5a)``."""
    return (1 << height) <= (1 << (5 * a * b)) * a ** (5 * a) * (1 << (5 * a))


def build(
    g: Graph,
    pd: PathDecomposition,
    b: int,
    audit: AuditMode = "final",
    check_paths: bool = True,
) -> BuildResult:
    """Elimination forest of ``g`` with height at most ``10ab``, ``a = width(pd) + 1``.

    ``pd`` must be a linked path decomposition of ``g`` and ``g`` must have no
    path on ``2**b`` vertices; the latter is verified by the exact oracle when
    ``check_paths`` is set and ``g`` is small enough.
    """
    if audit not in AUDIT_MODES:
        raise ValueError(f"audit must be one of {AUDIT_MODES}")
    try:
        validate_path_decomposition(g, pd)
    except DecompositionError as exc:
        raise PreconditionError(f"invalid path decomposition: {exc}") from exc
    pd = normalize(pd)
    if b < 0:
        raise PreconditionError(f"b must be non-negative, got {b}")
    if check_paths and g.n <= MAX_ORACLE_N:
        longest = longest_path_order(g)
        if longest.value >= 1 << b:
            raise PreconditionError(f"graph has a path on {longest.value} >= 2^{b} vertices: {list(longest.witness)}")
    a = pd.width + 1
    report = AuditReport(mode=audit)
    trace: list[RoundTrace] = []

    if (1 << b) < 2 * a:
        forest = dfs_forest(g)
        if forest.height >= 1 << b:
            raise PreconditionError(f"depth-first forest has height {forest.height} >= 2^b = {1 << b}; b is too small")
        result = BuildResult(forest, trace, report, a, b, True, pd)
        _final_certificate(g, result, report, None)
        return result

    bad = check_linked(g, pd, maximal_only=True)
    if bad:
        v = bad[0]
        raise PreconditionError(f"decomposition is not linked: bags {v.t},{v.t2} need {v.k} paths, cut {sorted(v.cut)}")
    fam = LinkageFamily(g, pd)
    state = initial_state(g, pd, fam, b, audit)
    auditor = _Auditor(report, audit == "per-round", trace)
    index = 0
    while state.active:
        I = state.active[0][0]
        trace.append(run_round(state, I, index, auditor))
        index += 1
        if index > len(pd):
            raise InvariantViolation("termination", f"more than {len(pd)} rounds", trace)
    missing = [v for v in g.vertices if v not in state.parent]
    if missing:
        raise InvariantViolation("coverage", f"vertices never added: {missing}", trace)
    result = BuildResult(state.forest(), trace, report, a, b, False, pd)
    _final_certificate(g, result, report, fam)
    return result


def _final_certificate(g: Graph, result: BuildResult, report: AuditReport, fam: LinkageFamily | None) -> None:
    if report.mode == "off":
        return
    checks = {
        "forest_valid": not forest_violations(g, result.forest),
        "height_le_10ab": result.height <= result.bound,
        "sharper_bound": sharper_bound_holds(result.height, result.a, result.b),
    }
    if result.easy_case:
        checks["easy_height_lt_2^b"] = result.height < 1 << result.b
    if fam is not None and report.mode == "per-round":
        checks["family_nesting"] = not fam.nesting_violations()
    report.final = checks
    report.checks += len(checks)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        report.failures.extend(failed)
        raise InvariantViolation(failed[0], f"final certificate failed: {failed}", result.trace)
