"""Command-line front end: ``criticalis corank|ideal|blowup|verify|scan|cotree``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence

from . import __version__
from .critical import (
    BlowupMismatch,
    CriticalIdeals,
    PreconditionError,
    cograph_lower_bound,
    corank,
    corank_blowup,
)
from .groebner import Budget, BudgetExceeded, format_basis, strong_groebner
from .polyring import CoefficientRing, MonomialOrder, PolynomialSyntaxError, parse_var
from .scan import CONJECTURES, generate, scan
from .sgraph import (
    GraphFormatError,
    NotCograph,
    SignedMultidigraph,
    TwinVector,
    blowup,
    build_family,
    builtin,
    cotree,
    decode_graph6,
    encode_graph6,
    format_edgelist,
    parse_edgelist,
)
from .suites import SUITES, run_suite

log = logging.getLogger("criticalis")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET, EXIT_ALL_SKIPPED = 0, 1, 2, 3, 4


class UsageError(ValueError):
    """Bad input detected after argument parsing (exit 2)."""


@dataclass
class RunConfig:
    ring: str = "Z"
    order: str = "degrevlex"
    max_pairs: int = Budget.max_pairs
    max_degree: int = Budget.max_degree
    jobs: int = 1
    format: str = "text"
    seed: int = 0
    reproducible: bool = False

    @property
    def coeffs(self) -> CoefficientRing:
        return CoefficientRing.parse(self.ring)

    @property
    def monomial_order(self) -> MonomialOrder:
        return MonomialOrder(self.order)

    @property
    def budget(self) -> Budget:
        return Budget(self.max_pairs, self.max_degree)


_ENV_KEYS = {"max_pairs": "CRITICALIS_MAX_PAIRS", "max_degree": "CRITICALIS_MAX_DEGREE"}


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Flags beat environment variables, which beat the config file, which beats defaults."""
    env = os.environ if environ is None else environ
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        for k, v in loaded.items():
            key = k.replace("-", "_")
            if key not in known:
                raise UsageError(f"unknown config key {k!r}")
            values[key] = v
    for key, var in _ENV_KEYS.items():
        if env.get(var):
            try:
                values[key] = int(env[var])
            except ValueError:
                raise UsageError(f"{var} must be an integer") from None
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            values[f.name] = v
    cfg = RunConfig(**values)
    try:
        cfg.coeffs, cfg.monomial_order, cfg.budget
    except ValueError as e:
        raise UsageError(str(e)) from None
    if cfg.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if cfg.format not in ("text", "json"):
        raise UsageError("--format must be text or json")
    return cfg


# ---------------------------------------------------------------------------
# graph sources


def load_graph(source: str) -> SignedMultidigraph:
    """``builtin:NAME``, ``family:KIND ARGS`` (e.g. ``family:path 4``), a file, or ``-``."""
    if source.startswith("builtin:"):
        try:
            return builtin(source[len("builtin:"):])
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    if source.startswith("family:"):
        try:
            return build_family(source[len("family:"):].replace(":", " "))
        except ValueError as e:
            raise UsageError(str(e)) from None
    if source.startswith("graph6:"):
        return decode_graph6(source[len("graph6:"):])
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {source}: {e.strerror}") from None
    return parse_graph_text(text, source)


def parse_graph_text(text: str, source: str = "") -> SignedMultidigraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if source.endswith((".g6", ".graph6")) or (len(lines) == 1 and not lines[0].split()[0] in ("n", "edge", "arc")):
        if len(lines) != 1:
            raise GraphFormatError("expected exactly one graph6 line")
        return decode_graph6(lines[0])
    return parse_edgelist(text)


# ---------------------------------------------------------------------------
# emission


def _ms(cfg: RunConfig, start: float) -> int:
    return 0 if cfg.reproducible else int(round((time.perf_counter() - start) * 1000))


def _record(graph: str, cfg: RunConfig, index, generators, trivial, gamma, start) -> dict:
    return {
        "graph": graph,
        "ring": str(cfg.coeffs),
        "index": index,
        "generators": generators,
        "trivial": trivial,
        "gamma": gamma,
        "timing_ms": _ms(cfg, start),
    }


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# ---------------------------------------------------------------------------
# commands


def cmd_corank(args, cfg: RunConfig) -> int:
    start = time.perf_counter()
    g = load_graph(args.graph)
    if args.twin:
        d = TwinVector.parse(g, args.twin)
        rep = corank_blowup(g, d, cfg.coeffs, cfg.budget, check=args.check, order=cfg.monomial_order)
    else:
        rep = corank(g, cfg.coeffs, cfg.budget, with_ideal=args.show_ideal, order=cfg.monomial_order)
    gens = rep.ideal.strings() if (args.show_ideal and rep.ideal is not None) else []
    if cfg.format == "json":
        rec = _record(args.graph, cfg, rep.first_nontrivial, gens, False, rep.gamma, start)
        rec["method"] = rep.method
        _emit_json(rec)
    else:
        print(f"gamma={rep.gamma}")
        if rep.first_nontrivial is not None:
            print(f"first nontrivial index: {rep.first_nontrivial}")
        for s in gens:
            print(f"  {s}")
    return EXIT_OK


def _parse_assignment(text: str):
    out = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, val = chunk.partition("=")
        if not sep:
            raise UsageError(f"evaluation {chunk!r} lacks '='")
        try:
            out[parse_var(name.strip())] = int(val)
        except (ValueError, PolynomialSyntaxError):
            raise UsageError(f"bad evaluation {chunk!r}") from None
    return out


def cmd_ideal(args, cfg: RunConfig) -> int:
    start = time.perf_counter()
    g = load_graph(args.graph)
    if args.twin:
        g = blowup(g, TwinVector.parse(g, args.twin))
    if args.index < 1:
        raise UsageError("index must be at least 1")
    ci = CriticalIdeals(g, cfg.coeffs, args.graph, cfg.monomial_order)
    ideal = ci.ideal(args.index)
    if args.evaluate:
        assign = _parse_assignment(args.evaluate)
        unknown = [str(v) for v in assign if v not in ideal.ring]
        if unknown:
            raise UsageError(f"unknown variables {unknown}")
        ideal = ideal.substitute(assign)
    if args.basis:
        basis = strong_groebner(ideal, budget=cfg.budget, stop_on_unit=False)
        gens, trivial = format_basis(basis), basis.is_unit()
    else:
        from .groebner import triviality_evidence

        gens = ideal.strings()
        trivial = triviality_evidence(ideal, cfg.budget)[0]
    if cfg.format == "json":
        _emit_json(_record(args.graph, cfg, args.index, gens, trivial, None, start))
    else:
        label = "basis" if args.basis else "generators"
        print(f"I_{args.index} over {cfg.coeffs}: {'trivial' if trivial else 'nontrivial'}")
        print(f"{label} ({len(gens)}):")
        for s in gens:
            print(f"  {s}")
    return EXIT_OK


def cmd_blowup(args, cfg: RunConfig) -> int:
    start = time.perf_counter()
    g = load_graph(args.graph)
    d = TwinVector.parse(g, args.twin)
    big = blowup(g, d)
    rep = corank_blowup(g, d, cfg.coeffs, cfg.budget, check=args.check, order=cfg.monomial_order)
    if cfg.format == "json":
        rec = _record(args.graph, cfg, rep.first_nontrivial, [], False, rep.gamma, start)
        rec["blowup"] = format_edgelist(big)
        rec["vertices"] = big.n
        _emit_json(rec)
    else:
        sys.stdout.write(format_edgelist(big))
        print(f"# gamma={rep.gamma} ({rep.method})")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        res = run_suite(name, cfg.jobs, cfg.seed, args.limit)
        if cfg.reproducible:
            res.seconds = 0.0
        ok = ok and res.passed
        if cfg.format == "json":
            _emit_json(res.to_dict())
        else:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} {name}: {res.checked} checked, {len(res.failures)} failures ({res.seconds:.1f}s)")
            for f in res.failures[:20]:
                print(f"  {f}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args, cfg: RunConfig) -> int:
    if args.generate:
        kind, _, size = args.generate.partition(":")
        try:
            lines = list(generate(kind, int(size)))
        except ValueError as e:
            raise UsageError(str(e)) from None
    elif args.input in (None, "-"):
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as e:
            raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
    records, summary = scan(lines, args.conjecture, cfg.coeffs, cfg.budget, cfg.jobs, args.output)
    if summary.skipped and not records and not summary.resumed:
        log.error("every record was malformed")
        return EXIT_ALL_SKIPPED
    if cfg.format == "json":
        for r in records:
            print(r.to_json())
        _emit_json({"summary": summary.message(), **vars(summary)})
    else:
        for r in records:
            if r.applicable:
                mark = "ok" if r.verdict else "COUNTEREXAMPLE"
                print(f"{r.graph6}\tn={r.n}\tgamma={r.gamma}\tthreshold={r.threshold}\t{mark}")
        print(summary.message())
    return EXIT_OK if not summary.violations else EXIT_FAIL


def cmd_cotree(args, cfg: RunConfig) -> int:
    start = time.perf_counter()
    g = load_graph(args.graph)
    try:
        t = cotree(g)
    except NotCograph as e:
        raise UsageError(f"not a cograph: {e}") from None
    bound = cograph_lower_bound(t)
    gamma = corank(g, cfg.coeffs, cfg.budget).gamma if args.corank else None
    if cfg.format == "json":
        rec = _record(args.graph, cfg, None, [], False, gamma, start)
        rec.update(cotree=str(t), height=t.height(), certified=bound.certified, conjectured=bound.conjectured)
        _emit_json(rec)
    else:
        print(t)
        print(f"height={t.height()} certified>={bound.certified} conjectured>={bound.conjectured}")
        if gamma is not None:
            print(f"gamma={gamma}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="Z (default) or Z/p")
    common.add_argument("--order", choices=("degrevlex", "grlex", "lex"), help="monomial order for Groebner bases")
    common.add_argument("--max-pairs", type=int, help="Groebner pair budget")
    common.add_argument("--max-degree", type=int, help="Groebner degree budget")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--config", help="JSON file with the same keys as the flags")
    common.add_argument("--reproducible", action="store_true", help="report timing_ms as 0")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="criticalis", description="Critical ideals and algebraic co-rank of graphs.")
    p.add_argument("--version", action="version", version=f"criticalis {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("corank", parents=[common], help="algebraic co-rank of a graph or blowup")
    c.add_argument("graph", help="builtin:NAME, family:KIND ARGS, graph6:STRING, a file or -")
    c.add_argument("--twin", help="twin vector such as v1:-1,v2:2 (uses the evaluation shortcut)")
    c.add_argument("--check", action="store_true", help="also build the support blowup and compare")
    c.add_argument("--show-ideal", action="store_true", help="print the first nontrivial ideal")
    c.set_defaults(func=cmd_corank)

    c = sub.add_parser("ideal", parents=[common], help="generators of one critical ideal")
    c.add_argument("graph")
    c.add_argument("index", type=int)
    c.add_argument("--twin", help="take the ideal of this blowup")
    c.add_argument("--evaluate", help="substitute values, e.g. x1=0 or x1=-1,x2=0")
    c.add_argument("--basis", action="store_true", help="print a reduced strong Groebner basis")
    c.set_defaults(func=cmd_ideal)

    c = sub.add_parser("blowup", parents=[common], help="build G^d and report its co-rank")
    c.add_argument("graph")
    c.add_argument("twin", help="twin vector such as v1:-1,v2:2")
    c.add_argument("--check", action="store_true")
    c.set_defaults(func=cmd_blowup)

    c = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    c.add_argument("suite", choices=list(SUITES) + ["all"])
    c.add_argument("--limit", type=int, default=0, help="only the first N tasks")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("scan", parents=[common], help="search a graph6 stream for counterexamples")
    c.add_argument("input", nargs="?", help="graph6 file (default stdin)")
    c.add_argument("--conjecture", choices=CONJECTURES, default="twinfree-bound")
    c.add_argument("--output", help="append JSON-lines records here; existing records are skipped")
    c.add_argument("--generate", help="connected:N or trees:N instead of reading input")
    c.set_defaults(func=cmd_scan)

    c = sub.add_parser("cotree", parents=[common], help="cotree and co-rank bounds of a cograph")
    c.add_argument("graph")
    c.add_argument("--corank", action="store_true", help="also compute the co-rank")
    c.set_defaults(func=cmd_cotree)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except (UsageError, GraphFormatError, PolynomialSyntaxError) as e:
        print(f"criticalis: error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as e:
        print(f"criticalis: precondition failed: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(f"criticalis: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except BlowupMismatch as e:
        print(f"criticalis: mismatch: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
