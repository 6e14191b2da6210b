"""Conjecture scans over graph6 streams with resumable JSON-lines output."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from .critical import corank
from .groebner import DEFAULT_BUDGET, Budget
from .parallel import pmap
from .polyring import ZZ, CoefficientRing
from .sgraph import GraphFormatError, SignedMultidigraph, decode_graph6, is_twin_free

log = logging.getLogger(__name__)

CONJECTURES = ("twinfree-bound", "tree-bound")


@dataclass
class ScanRecord:
    graph6: str
    n: int
    twin_free: bool
    applicable: bool
    gamma: Optional[int]
    threshold: int
    verdict: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def threshold(conjecture: str, n: int) -> int:
    if conjecture == "twinfree-bound":
        return n // 2
    if conjecture == "tree-bound":
        return -(-(n + 2) // 2)
    raise ValueError(f"unknown conjecture {conjecture!r}")


def _is_tree(g: SignedMultidigraph) -> bool:
    return g.is_connected() and len(g.edges()) == g.n - 1


def applies(conjecture: str, g: SignedMultidigraph) -> bool:
    if not is_twin_free(g):
        return False
    if conjecture == "tree-bound":
        # the single vertex is twin-free but has no edge to speak of
        return _is_tree(g) and g.n >= 2
    return True


def evaluate(task: Tuple[str, str, CoefficientRing, Budget]) -> ScanRecord:
    line, conjecture, coeffs, budget = task
    g = decode_graph6(line)
    tf = is_twin_free(g)
    ok = applies(conjecture, g)
    t = threshold(conjecture, g.n)
    gamma = corank(g, coeffs, budget).gamma if ok else None
    verdict = (not ok) or gamma >= t
    return ScanRecord(line, g.n, tf, ok, gamma, t, verdict)


def read_done(path: str) -> set:
    """graph6 strings already recorded in an existing results file."""
    done = set()
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    done.add(json.loads(raw)["graph6"])
                except (ValueError, KeyError):
                    log.warning("ignoring unreadable line in %s", path)
    return done


@dataclass
class ScanSummary:
    conjecture: str
    total: int
    applicable: int
    violations: int
    skipped: int
    resumed: int

    def message(self) -> str:
        if self.violations:
            return f"{self.violations} counterexample(s) among {self.applicable} applicable graphs"
        return f"no counterexample among {self.applicable} applicable graphs ({self.total} read)"


def scan(
    lines: Iterable[str],
    conjecture: str,
    coeffs: CoefficientRing = ZZ,
    budget: Budget = DEFAULT_BUDGET,
    jobs: int = 1,
    output: Optional[str] = None,
) -> Tuple[List[ScanRecord], ScanSummary]:
    if conjecture not in CONJECTURES:
        raise ValueError(f"unknown conjecture {conjecture!r}")
    done = read_done(output) if output else set()
    todo, skipped, resumed = [], 0, 0
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith(">>graph6<<") and len(line) == len(">>graph6<<"):
            continue
        try:
            decode_graph6(line)
        except GraphFormatError as e:
            log.warning("skipping malformed graph6 %r: %s", line, e)
            skipped += 1
            continue
        if line in done:
            resumed += 1
            continue
        todo.append(line)
    records: List[ScanRecord] = []
    sink = open(output, "a", encoding="utf-8") if output else None
    try:
        tasks = [(line, conjecture, coeffs, budget) for line in todo]
        for rec in pmap(evaluate, tasks, jobs):
            records.append(rec)
            if sink:
                sink.write(rec.to_json() + "\n")
                sink.flush()
    finally:
        if sink:
            sink.close()
    summary = ScanSummary(
        conjecture,
        total=len(records) + resumed,
        applicable=sum(r.applicable for r in records),
        violations=sum(not r.verdict for r in records),
        skipped=skipped,
        resumed=resumed,
    )
    return records, summary


def generate(kind: str, max_n: int) -> Iterator[str]:
    """graph6 lines for ``connected`` graphs or ``trees`` up to max_n vertices."""
    from .catalog import simple_graphs, trees
    from .sgraph import encode_graph6

    if kind == "connected":
        for g in simple_graphs(max_n, connected=True):
            yield encode_graph6(g)
    elif kind == "trees":
        for n in range(1, max_n + 1):
            for g in trees(n):
                yield encode_graph6(g)
    else:
        raise ValueError(f"unknown generator {kind!r}")


def networkx_graph6(line: str) -> nx.Graph:
    return nx.from_graph6_bytes(line.strip().encode("ascii"))
