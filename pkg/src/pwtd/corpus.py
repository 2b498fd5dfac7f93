"""Seeded corpora: generate, decompose, link, build, and cross-check against the oracles.

Per-row seeds come from ``numpy.random.SeedSequence(seed).spawn(count)``; each
row's generator is PCG64 seeded with the first word of its child sequence, so a
row can be replayed alone from ``row_seed``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .builder import AUDIT_MODES, InvariantViolation, PreconditionError, build
from .decomposition import forest_violations
from .graph import generate, make_rng, serialize_graph
from .linkage import check_linked, repair_linked
from .oracles import exact_pathwidth, exact_treedepth, longest_path_order, min_b

CORPUS_FAMILIES = ("random_bounded_pw", "blowup")
REPORT_VERSION = 1


@dataclass
class CorpusConfig:
    family: str = "random_bounded_pw"
    count: int = 200
    seed: int = 0
    n_max: int = 12
    a_max: int = 4
    b: int | None = None
    p: float = 0.5
    audit: str = "final"

    def __post_init__(self) -> None:
        if self.family not in CORPUS_FAMILIES:
            raise ValueError(f"corpus family must be one of {CORPUS_FAMILIES}, got {self.family!r}")
        if self.audit not in AUDIT_MODES:
            raise ValueError(f"audit must be one of {AUDIT_MODES}")
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if self.family == "random_bounded_pw" and not (1 <= self.n_max <= 20 and self.a_max >= 1):
            raise ValueError("random_bounded_pw corpus needs 1 <= n_max <= 20 and a_max >= 1")


@dataclass
class Row:
    index: int
    family: str
    params: dict
    row_seed: int
    n: int = 0
    a: int = 0
    b: int = 0
    pw: int = 0
    td_exact: int = 0
    longest_path: int = 0
    height: int = 0
    bound: int = 0
    easy_case: bool = False
    repair_iterations: int = 0
    rounds: int = 0
    audits_ok: bool = False
    checks: dict = field(default_factory=dict)
    ok: bool = False
    error: str | None = None
    error_kind: str | None = None
    replay: dict | None = None


@dataclass
class CorpusReport:
    config: CorpusConfig
    rows: list[Row]
    traces: dict[int, list[dict]]

    @property
    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.ok]

    @property
    def exit_code(self) -> int:
        kinds = {r.error_kind for r in self.failures}
        if "invariant" in kinds:
            return 3
        if "precondition" in kinds:
            return 2
        return 1 if self.failures else 0

    def to_jsonl(self) -> str:
        lines = [json.dumps({"kind": "config", "version": REPORT_VERSION, **asdict(self.config)}, sort_keys=True)]
        for r in self.rows:
            lines.append(json.dumps({"kind": "row", **asdict(r)}, sort_keys=True))
        summary = {"kind": "summary", "rows": len(self.rows), "failures": len(self.failures), "exit_code": self.exit_code}
        lines.append(json.dumps(summary, sort_keys=True))
        return "\n".join(lines) + "\n"

    def traces_json(self) -> str:
        doc = {"version": REPORT_VERSION, "traces": {str(i): t for i, t in sorted(self.traces.items())}}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def to_table(self) -> str:
        head = f"{'#':>4} {'n':>3} {'a':>2} {'b':>2} {'pw':>3} {'td':>3} {'height':>6} {'10ab':>5} audits  status"
        out = [head, "-" * len(head)]
        for r in self.rows:
            status = "ok" if r.ok else f"FAIL ({r.error_kind}: {r.error})"
            out.append(
                f"{r.index:>4} {r.n:>3} {r.a:>2} {r.b:>2} {r.pw:>3} {r.td_exact:>3} {r.height:>6} {r.bound:>5} "
                f"{'pass' if r.audits_ok else 'FAIL':<6}  {status}"
            )
        out.append(f"{len(self.rows)} rows, {len(self.failures)} failures")
        return "\n".join(out) + "\n"


def row_seeds(seed: int, count: int) -> list[int]:
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def _plan(config: CorpusConfig) -> list[tuple[dict, int]]:
    if config.family == "blowup":
        b_max = config.b if config.b is not None else 5
        return [({"b": b, "c": c}, 0) for b in range(2, b_max + 1) for c in range(1, b)]
    plan = []
    for rs in row_seeds(config.seed, config.count):
        rng = make_rng(rs)
        n = int(rng.integers(1, config.n_max + 1))
        a = int(rng.integers(1, min(config.a_max, n) + 1))
        plan.append(({"n": n, "a": a, "p": config.p}, rs))
    return plan


def run_row(config: CorpusConfig, index: int, params: dict, row_seed: int) -> tuple[Row, list[dict]]:
    """Run one corpus row; failures are recorded on the row, never raised."""
    row = Row(index=index, family=config.family, params=dict(params), row_seed=row_seed)
    g, _ = generate(config.family, params, row_seed)
    row.n = g.n
    pd = None
    trace: list = []
    try:
        pw = exact_pathwidth(g)
        row.pw = pw.value
        row.td_exact = exact_treedepth(g).value
        row.longest_path = longest_path_order(g).value
        repaired = repair_linked(g, pw.witness)
        pd = repaired.pd
        row.repair_iterations = repaired.iterations
        row.b = config.b if config.b is not None and config.family != "blowup" else min_b(row.longest_path)
        result = build(g, pd, row.b, audit=config.audit)
        trace = result.trace
        row.a, row.height, row.bound = result.a, result.height, result.bound
        row.easy_case = result.easy_case
        row.rounds = len(result.trace)
        row.audits_ok = result.audit.passed
        checks = {
            "linked": not check_linked(g, pd, maximal_only=True),
            "width_kept": pd.width == pw.value,
            "forest_valid": not forest_violations(g, result.forest),
            "td_le_height": row.td_exact <= row.height,
            "height_le_10ab": row.height <= row.bound,
            "sharper_bound": (1 << row.height) <= (1 << (5 * row.a * row.b)) * row.a ** (5 * row.a) * (1 << (5 * row.a)),
            "pw_lt_td": row.pw + 1 <= row.td_exact,
            "td_gt_log_path": (1 << row.td_exact) > row.longest_path,
        }
        if config.family == "blowup":
            c = params["c"]
            checks["blowup_pw"] = row.pw == (1 << c) - 1
            checks["blowup_n"] = row.n == 1 << (params["b"] - 1)
            checks["blowup_td"] = 2 * row.td_exact >= (1 << c) * (params["b"] - c)
        row.checks = checks
        failed = [k for k, v in checks.items() if not v]
        row.ok = row.audits_ok and not failed
        if failed:
            row.error_kind, row.error = "property", ",".join(failed)
    except PreconditionError as exc:
        row.error_kind, row.error = "precondition", f"seed {row_seed}: {exc}"
    except InvariantViolation as exc:
        row.error_kind, row.error = "invariant", f"seed {row_seed}: {exc}"
        trace = exc.trace
    records = [t.to_record() for t in trace]
    if not row.ok:
        row.replay = {
            "graph": serialize_graph(g),
            "pd": [list(bag) for bag in pd.bags] if pd is not None else None,
            "trace": records,
        }
    return row, records


def run_corpus(config: CorpusConfig) -> CorpusReport:
    rows, traces = [], {}
    for index, (params, rs) in enumerate(_plan(config)):
        row, records = run_row(config, index, params, rs)
        rows.append(row)
        traces[index] = records
    return CorpusReport(config, rows, traces)
