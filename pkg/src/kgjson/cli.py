"""``kgjson`` command line: generate, convert, query, bench, verify.

Data goes to stdout (or ``--out``), human-readable text to stderr.  Exit
status: 0 success, 1 verification or benchmark failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, generator
from .engine import Strategy, compatible_strategies, execute, oracle_execute
from .errors import KgJsonError, ResultMismatch, StrategyMismatch
from .jsondoc import DEFAULT_MAX_DOC_BYTES, Representation, parse_ndjson, serialize_ndjson
from .ntriples import apply_prefix_map, parse_ntriples, read_prefix_map, write_ntriples
from .query import parse_query
from .representations import DEFAULT_MAX_DEPTH, build, check_equivalence, extract_triples
from .store import load

USAGE, FAILURE, OK = 2, 1, 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _representation(args):
    picked = [r for r in Representation if getattr(args, r.value, False)]
    if args.repr:
        picked.append(Representation(args.repr))
    if len(set(picked)) != 1:
        raise _UsageError("choose exactly one representation (--repr snv|dt|cnv)")
    return picked[0]


class _UsageError(Exception):
    pass


def _add_repr(p):
    p.add_argument("--repr", choices=[r.value for r in Representation])
    g = p.add_mutually_exclusive_group()
    for r in Representation:
        g.add_argument(f"--{r.value}", action="store_true", help=f"same as --repr {r.value}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kgjson", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic e-commerce graph as N-Triples")
    g.add_argument("--products", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--heterogeneity", type=float, default=0.0)
    g.add_argument("--out", default="-")

    c = sub.add_parser("convert", help="N-Triples to an NDJSON document collection")
    c.add_argument("--in", dest="input", required=True)
    _add_repr(c)
    c.add_argument("--out", default="-")
    c.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    c.add_argument("--max-doc-bytes", type=int, default=DEFAULT_MAX_DOC_BYTES)
    c.add_argument("--prefix-map")

    q = sub.add_parser("query", help="run a SELECT query over an NDJSON collection")
    q.add_argument("--in", dest="input", required=True)
    _add_repr(q)
    q.add_argument("--query", required=True)
    q.add_argument("--strategy", choices=[s.value for s in Strategy if s is not Strategy.ORACLE],
                   default=Strategy.AUTO.value)
    q.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    q.add_argument("--out", default="-")

    b = sub.add_parser("bench", help="time the generated workload on all representations")
    b.add_argument("--kg", required=True)
    b.add_argument("--runs", type=int, default=bench.DEFAULT_RUNS)
    b.add_argument("--timeout-ms", type=float, default=bench.DEFAULT_TIMEOUT_MS)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--format", choices=["csv", "text"], default="csv")
    b.add_argument("--out", default="-")

    v = sub.add_parser("verify", help="round trips, equivalence and strategy/oracle agreement")
    v.add_argument("--kg", required=True)
    v.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    v.add_argument("--queries", type=int, default=20, help="random queries to cross-check")
    v.add_argument("--seed", type=int, default=0)
    return ap


def _cmd_generate(args):
    cfg = generator.GeneratorConfig(args.products, args.seed, args.heterogeneity)
    _write(args.out, write_ntriples(generator.generate_kg(cfg)))
    return OK


def _cmd_convert(args):
    rep = _representation(args)
    kg = parse_ntriples(_read(args.input))
    if args.prefix_map:
        kg = apply_prefix_map(kg, read_prefix_map(_read(args.prefix_map)))
    coll = build(kg, rep, args.max_depth, args.max_doc_bytes)
    _write(args.out, serialize_ndjson(coll))
    print(f"{len(coll)} {rep} documents", file=sys.stderr)
    return OK


def _cmd_query(args):
    rep = _representation(args)
    strategy = Strategy(args.strategy)
    if strategy not in compatible_strategies(rep) and strategy is not Strategy.AUTO:
        raise StrategyMismatch(strategy, rep)
    q = parse_query(_read(args.query))
    store = load(parse_ndjson(_read(args.input), rep), args.max_depth)
    result, counters = execute(store, q, strategy)
    _write(args.out, result.to_tsv())
    print(" ".join(f"{k}={v}" for k, v in counters.as_dict().items()), file=sys.stderr)
    return OK


def _stores(kg, max_depth=DEFAULT_MAX_DEPTH):
    return [load(build(kg, r, max_depth), max_depth) for r in Representation]


def _cmd_bench(args):
    kg = parse_ntriples(_read(args.kg))
    try:
        workload = generator.generate_workload(generator.GeneratorConfig(1, args.seed), kg)
    except RuntimeError as exc:
        print(f"kgjson: {exc}", file=sys.stderr)
        return FAILURE
    try:
        report = bench.run_benchmark(_stores(kg), workload, args.runs,
                                     timeout_ms=args.timeout_ms)
    except ResultMismatch as exc:
        print(f"result mismatch: {exc}", file=sys.stderr)
        return FAILURE
    _write(args.out, bench.emit_report(report, args.format))
    return OK


def _cmd_verify(args):
    kg = parse_ntriples(_read(args.kg))
    colls = {r: build(kg, r, args.max_depth) for r in Representation}
    failures = []
    for r, coll in colls.items():
        back = parse_ndjson(serialize_ndjson(coll), r)
        if extract_triples(back) != kg:
            failures.append(f"{r} round trip lost triples")
    reps = list(Representation)
    equivalent = True
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            if not check_equivalence(colls[a], colls[b], trace=False).equivalent:
                equivalent = False
                failures.append(f"{a} and {b} are not equivalent")
    stores = [load(colls[r], args.max_depth) for r in reps]
    checked = 0
    if kg.triples:
        for k in range(args.queries):
            q = generator.random_query(kg, args.seed + k)
            expected = oracle_execute(kg, q)
            for store in stores:
                for s in compatible_strategies(store.representation):
                    try:
                        got, _ = execute(store, q, s)
                    except KgJsonError as exc:
                        failures.append(f"{store.representation}/{s.value}: {exc}")
                        continue
                    checked += 1
                    if got != expected:
                        failures.append(f"{store.representation}/{s.value} disagrees with the "
                                        f"oracle on:\n{q.to_text()}")
    counts = ", ".join(f"{len(colls[r])} {r} docs" for r in reps)
    print(f"{counts}, equivalent: {'yes' if equivalent else 'no'}", file=sys.stderr)
    print(f"{checked} strategy executions checked against the oracle", file=sys.stderr)
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    return FAILURE if failures else OK


_COMMANDS = {"generate": _cmd_generate, "convert": _cmd_convert, "query": _cmd_query,
             "bench": _cmd_bench, "verify": _cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return _COMMANDS[args.command](args)
    except (_UsageError, StrategyMismatch) as exc:
        print(f"kgjson: {type(exc).__name__ if isinstance(exc, KgJsonError) else 'error'}: "
              f"{exc}", file=sys.stderr)
        return USAGE
    except (OSError, KgJsonError, ValueError) as exc:
        print(f"kgjson: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
