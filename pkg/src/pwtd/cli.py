"""Command line entry point: ``pwtd {generate,oracle,link,build,verify,corpus}``.

Exit codes: 0 success, 1 verification or property failure, 2 precondition
breach (bad input, missing promise), 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .builder import AUDIT_MODES, InvariantViolation, PreconditionError, build
from .corpus import CORPUS_FAMILIES, REPORT_VERSION, CorpusConfig, run_corpus
from .decomposition import (
    DecompositionError,
    PathDecomposition,
    forest_to_dot,
    forest_violations,
    parse_forest,
    parse_pd,
    pd_violations,
    serialize_forest,
    serialize_pd,
)
from .graph import FAMILIES, GraphFormatError, generate, graph_to_dot, parse_graph, serialize_graph
from .linkage import check_linked, repair_linked
from .oracles import MAX_ORACLE_N, OracleLimitError, exact_pathwidth, exact_treedepth, longest_path_order, min_b

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 1, 2, 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_graph(path: str):
    return parse_graph(Path(path).read_text())


def cmd_generate(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("a", args.a), ("b", args.b), ("c", args.c), ("p", args.p)) if v is not None}
    g, bags = generate(args.family, params, args.seed)
    _write(args.out, graph_to_dot(g) if args.dot else serialize_graph(g))
    if args.pd_out:
        Path(args.pd_out).write_text(serialize_pd(PathDecomposition.from_bags(bags)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    kinds = ["treedepth", "pathwidth", "longest-path"] if args.kind == "all" else [args.kind]
    for kind in kinds:
        if kind == "treedepth":
            res = exact_treedepth(g, args.backend)
            print(f"treedepth {res.value}")
            if args.witness:
                sys.stdout.write(serialize_forest(res.witness))
        elif kind == "pathwidth":
            res = exact_pathwidth(g, args.backend)
            print(f"pathwidth {res.value}")
            if args.witness:
                sys.stdout.write(serialize_pd(res.witness))
        else:
            res = longest_path_order(g, args.backend)
            print(f"longest-path {res.value}")
            print(f"min-b {min_b(res.value)}")
            if args.witness:
                print("path " + " ".join(map(str, res.witness)))
    return EXIT_OK


def cmd_link(args) -> int:
    g = _read_graph(args.graph)
    pd = parse_pd(Path(args.pd).read_text())
    bad = pd_violations(g, pd)
    if bad:
        raise DecompositionError(bad)
    result = repair_linked(g, pd)
    _write(args.out, serialize_pd(result.pd))
    print(
        f"linked width={result.pd.width} bags={len(result.pd)} iterations={result.iterations} bound={result.bound}",
        file=sys.stderr,
    )
    return EXIT_OK


def _resolve_inputs(g, pd_arg: str, b_arg: str):
    if pd_arg == "auto":
        if g.n > MAX_ORACLE_N:
            raise PreconditionError(f"--pd auto needs n <= {MAX_ORACLE_N}; supply a decomposition")
        pd = exact_pathwidth(g).witness
    else:
        pd = parse_pd(Path(pd_arg).read_text())
        bad = pd_violations(g, pd)
        if bad:
            raise PreconditionError(f"invalid path decomposition: {'; '.join(map(str, bad[:5]))}")
    pd = repair_linked(g, pd).pd
    if b_arg == "auto":
        if g.n > MAX_ORACLE_N:
            raise PreconditionError(f"--b auto needs n <= {MAX_ORACLE_N}; pass --b explicitly")
        b = min_b(longest_path_order(g).value)
    else:
        b = int(b_arg)
    return pd, b


def _trace_doc(g, result, rounds) -> dict:
    return {
        "version": REPORT_VERSION,
        "n": g.n,
        "a": result.a,
        "b": result.b,
        "easy_case": result.easy_case,
        "height": result.height,
        "bound": result.bound,
        "audit_mode": result.audit.mode,
        "audit_checks": result.audit.checks,
        "final": result.audit.final,
        "rounds": rounds,
    }


def cmd_build(args) -> int:
    g = _read_graph(args.graph)
    pd, b = _resolve_inputs(g, args.pd, args.b)
    try:
        result = build(g, pd, b, audit=args.audit, check_paths=not args.no_path_check)
    except InvariantViolation as exc:
        if args.trace:
            doc = {"version": REPORT_VERSION, "failed_check": exc.check, "detail": exc.detail,
                   "rounds": [t.to_record() for t in exc.trace]}
            Path(args.trace).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
        raise
    if args.trace:
        doc = _trace_doc(g, result, [t.to_record() for t in result.trace])
        Path(args.trace).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    text = forest_to_dot(result.forest) if args.dot else serialize_forest(result.forest)
    _write(args.forest, text)
    print(
        f"height={result.height} bound={result.bound} a={result.a} b={result.b} "
        f"rounds={len(result.trace)} easy_case={result.easy_case}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    ok = True
    if args.pd:
        pd = parse_pd(Path(args.pd).read_text())
        bad = pd_violations(g, pd)
        for v in bad:
            print(f"pd: {v}")
        if not bad:
            linked = not check_linked(g, pd)
            print(f"pd valid width={pd.width} linked={linked}")
            ok = ok and (linked or not args.require_linked)
        ok = ok and not bad
    if args.forest:
        ef = parse_forest(Path(args.forest).read_text())
        bad = forest_violations(g, ef)
        for v in bad:
            print(f"forest: {v}")
        if not bad:
            print(f"forest valid height={ef.height}")
            if args.max_height is not None and ef.height > args.max_height:
                print(f"forest height {ef.height} exceeds {args.max_height}")
                ok = False
        ok = ok and not bad
    return EXIT_OK if ok else EXIT_FAIL


def cmd_corpus(args) -> int:
    config = CorpusConfig(
        family=args.family,
        count=args.count,
        seed=args.seed,
        n_max=args.n_max,
        a_max=args.a,
        b=args.b,
        p=args.p,
        audit=args.audit,
    )
    report = run_corpus(config)
    if args.out:
        Path(args.out).write_text(report.to_jsonl())
    if args.trace:
        Path(args.trace).write_text(report.traces_json())
    sys.stdout.write(report.to_table())
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwtd", description="Bounded-height elimination forests from linked path decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a graph of a named family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="graph file (default stdout)")
    p.add_argument("--pd-out", help="also write the family's witness decomposition")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of the edge-list format")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="exact treedepth / pathwidth / longest path (n <= 20)")
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", choices=["treedepth", "pathwidth", "longest-path", "all"], default="all")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--backend", choices=["numba", "numpy"])
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("link", help="repair a path decomposition into a linked one of no larger width")
    p.add_argument("--graph", required=True)
    p.add_argument("--pd", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("build", help="build an elimination forest of height <= 10ab")
    p.add_argument("--graph", required=True)
    p.add_argument("--pd", default="auto", help="decomposition file, or 'auto' for an optimal one (n <= 20)")
    p.add_argument("--auto", dest="pd", action="store_const", const="auto", help="same as --pd auto")
    p.add_argument("--b", default="auto", help="path exponent b, or 'auto' for the least valid one (n <= 20)")
    p.add_argument("--trace", help="write the round trace as JSON")
    p.add_argument("--forest", help="forest output file (default stdout)")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--audit", choices=AUDIT_MODES, default="final")
    p.add_argument("--no-path-check", action="store_true", help="skip the exact longest-path precondition check")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="validate a decomposition and/or elimination forest")
    p.add_argument("--graph", required=True)
    p.add_argument("--pd")
    p.add_argument("--forest")
    p.add_argument("--require-linked", action="store_true")
    p.add_argument("--max-height", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="run a seeded corpus and report")
    p.add_argument("--family", choices=CORPUS_FAMILIES, default="random_bounded_pw")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--a", type=int, default=4, help="largest bag size (random family)")
    p.add_argument("--b", type=int, help="b override (random family) or largest b (blowup sweep)")
    p.add_argument("--p", type=float, default=0.5, help="edge probability inside a bag")
    p.add_argument("--out", help="JSONL report file")
    p.add_argument("--trace", help="JSON file with every row's round trace")
    p.add_argument("--audit", choices=AUDIT_MODES, default="final")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (GraphFormatError, DecompositionError, OracleLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
