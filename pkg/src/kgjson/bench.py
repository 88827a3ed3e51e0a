"""Measurement protocol: repeated timed runs per (store, strategy), digest cross-checks, CSV."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Sequence

from .engine import Strategy, compatible_strategies, execute
from .errors import QueryTimeout, ResultMismatch
from .query import classify_query
from .store import OpCounters, Store

DEFAULT_RUNS = 5
DEFAULT_TIMEOUT_MS = 60_000
COUNTER_COLUMNS = ("indexProbes", "docsFetched", "entriesScanned", "bindingsMaterialized")
_COUNTER_FIELDS = dict(zip(COUNTER_COLUMNS, OpCounters.REPORTED))


@dataclass
class BenchRow:
    query_id: str
    kind: str
    representation: str
    strategy: str
    run_times_ms: list[float]
    mean_ms: float
    counters: dict = field(default_factory=dict)
    digest: str = ""
    timed_out: bool = False


@dataclass
class BenchReport:
    runs: int = DEFAULT_RUNS
    rows: list[BenchRow] = field(default_factory=list)

    def select(self, query_id=None, representation=None, strategy=None) -> list[BenchRow]:
        return [r for r in self.rows
                if (query_id is None or r.query_id == query_id)
                and (representation is None or r.representation == str(representation))
                and (strategy is None or r.strategy == Strategy(strategy).value)]

    def mean(self, query_id, representation, strategy) -> float:
        (row,) = self.select(query_id, representation, strategy)
        return row.mean_ms


def _time_query(store, q, strategy, runs, timeout_ms):
    times = []
    result = counters = None
    for _ in range(runs):
        started = time.perf_counter()
        try:
            result, counters = execute(store, q, strategy, timeout=timeout_ms / 1000.0)
        except QueryTimeout:
            return [0.0] * runs, None, OpCounters(), True
        times.append((time.perf_counter() - started) * 1000.0)
    return times, result, counters, False


def run_benchmark(stores: Sequence[Store], workload, runs: int = DEFAULT_RUNS,
                  strategies: Sequence[Strategy | str] | None = None,
                  timeout_ms: float = DEFAULT_TIMEOUT_MS) -> BenchReport:
    """Run every workload query ``runs`` times on each store and strategy.

    ``strategies=None`` means every strategy compatible with a store; an
    explicit list is filtered down to the compatible ones.  A run that hits the
    timeout marks its whole cell as zeros with ``timed_out`` set.  Differing
    result digests for one query raise :class:`ResultMismatch`.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    report = BenchReport(runs)
    for query_id, q, *rest in workload:
        kind = rest[0] if rest else classify_query(q).kind
        first = None
        for store in stores:
            allowed = compatible_strategies(store.representation)
            chosen = allowed if strategies is None else [
                s for s in map(Strategy, strategies) if s in allowed or s is Strategy.AUTO]
            for strategy in chosen:
                times, result, counters, timed_out = _time_query(store, q, strategy, runs,
                                                                 timeout_ms)
                digest = "" if timed_out else result.digest()
                label = f"{store.representation}/{strategy.value}"
                if digest:
                    if first is None:
                        first = (label, digest)
                    elif digest != first[1]:
                        raise ResultMismatch(query_id, first[0], label)
                mean = sum(times) / len(times)
                report.rows.append(BenchRow(query_id, kind, str(store.representation),
                                            strategy.value, times, mean, counters.as_dict(),
                                            digest, timed_out))
    return report


def _header(runs):
    return ["queryId", "kind", "representation", "strategy",
            *(f"run{i}" for i in range(1, runs + 1)), "meanMs", *COUNTER_COLUMNS,
            "digest", "timedOut"]


def emit_report(report: BenchReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_header(report.runs))
        for r in report.rows:
            w.writerow([r.query_id, r.kind, r.representation, r.strategy,
                        *(repr(t) for t in r.run_times_ms), repr(r.mean_ms),
                        *(r.counters.get(_COUNTER_FIELDS[c], 0) for c in COUNTER_COLUMNS),
                        r.digest, "true" if r.timed_out else "false"])
        return buf.getvalue()
    if fmt in ("text", "text-table"):
        cols = ["query", "kind", "repr", "strategy", "mean ms", "probes", "docs", "scanned",
                "bindings", "note"]
        lines = [[r.query_id, r.kind, r.representation, r.strategy, f"{r.mean_ms:.3f}",
                  *(str(r.counters.get(f, 0)) for f in OpCounters.REPORTED),
                  "timeout" if r.timed_out else ""] for r in report.rows]
        widths = [max(len(x) for x in col) for col in zip(cols, *lines)]
        out = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
               for row in [cols, *lines]]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def read_report(text: str) -> BenchReport:
    """Parse CSV written by :func:`emit_report`."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    runs = sum(1 for h in header if h.startswith("run") and h[3:].isdigit())
    if header != _header(runs):
        raise ValueError("not a benchmark report header")
    report = BenchReport(runs)
    for rec in reader:
        if not rec:
            continue
        qid, kind, rep, strat = rec[:4]
        times = [float(x) for x in rec[4:4 + runs]]
        mean = float(rec[4 + runs])
        nums = rec[5 + runs:9 + runs]
        counters = {_COUNTER_FIELDS[c]: int(v) for c, v in zip(COUNTER_COLUMNS, nums)}
        report.rows.append(BenchRow(qid, kind, rep, strat, times, mean, counters,
                                    rec[9 + runs], rec[10 + runs] == "true"))
    return report
