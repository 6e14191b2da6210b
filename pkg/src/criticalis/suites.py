"""Invariant suites behind ``criticalis verify``.

Each suite expands into a list of picklable tasks.  A task checker returns the
list of failure messages for that task (empty when it passes), so the work can
be fanned out over processes and merged back in input order.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from typing import Callable, Dict, List, Tuple

from . import sgraph
from .catalog import clique_number, independence_number, simple_graphs, trees
from .critical import (
    CriticalIdeals,
    bipartite_closed_form,
    blowup_ideal_superset,
    SymbolicMatrix,
    cofactor_det,
    complete_closed_form,
    corank,
    dup_rep_expanded_ideal,
    empty_matrix,
    ideal_ladder,
    join_determinant,
    join_matrix,
    phi,
    stabilization_constants,
    stabilized_twin_ideal,
    trivial_closed_form,
    twin_formula_ideal,
    union_closed_form,
)
from .groebner import DEFAULT_BUDGET, ideal_equal, strong_groebner, triviality_evidence
from .parallel import pmap
from .polyring import ZZ, PolyRing, Var
from .scan import evaluate as scan_evaluate
from .sgraph import SignedMultidigraph, TwinVector, blowup, duplicate_replicate

Task = tuple
Checker = Callable[[Task], List[str]]


@dataclass
class SuiteResult:
    suite: str
    checked: int
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _name(g: SignedMultidigraph) -> str:
    return sgraph.encode_graph6(g) if g.is_simple() else repr(g)


def _contains_all(basis, gens) -> bool:
    return all(basis.contains(basis.ring.convert(p)) for p in gens)


# ---------------------------------------------------------------------------
# joindet


_JOIN_RING = PolyRing(ZZ, tuple(Var(str(i)) for i in range(1, 7)))


def _random_entry(rng: random.Random):
    r = _JOIN_RING
    kind = rng.randrange(4)
    if kind == 0:
        return r.const(rng.randint(-2, 2))
    x = r.var(rng.randrange(r.nvars))
    if kind == 1:
        return x
    return x * rng.choice((-1, 1)) + rng.randint(-2, 2)


def _random_block(rng, rows, cols):
    if rows == 0 or cols == 0:
        return empty_matrix(_JOIN_RING, rows, cols)
    return SymbolicMatrix(_JOIN_RING, [[_random_entry(rng) for _ in range(cols)] for _ in range(rows)])


def _joindet_tasks(seed: int) -> List[Task]:
    rng = random.Random(seed)
    tasks = []
    for t in range(300):
        size = rng.randint(2, 6)
        if t % 5 == 0:
            # force the vanishing regime |p1 - p2| >= 2
            p1 = rng.randint(0, size - 2)
            p2 = rng.randint(p1 + 2, size)
            if rng.random() < 0.5:
                p1, p2 = p2, p1
        else:
            p1 = rng.randint(0, size)
            p2 = min(size, max(0, p1 + rng.choice((-1, 0, 0, 1))))
        tasks.append((size, p1, p2, rng.randrange(2**32)))
    return tasks


def _joindet_check(task: Task) -> List[str]:
    size, p1, p2, s = task
    rng = random.Random(s)
    q1, q2 = size - p1, size - p2
    P = _random_block(rng, p1, p2)
    Q = _random_block(rng, q1, q2)
    a = [_random_entry(rng) for _ in range(q1)]
    b = [_random_entry(rng) for _ in range(q2)]
    got = join_determinant(P, a, Q, b)
    want = cofactor_det(join_matrix(P, a, Q, b))
    if got != want:
        return [f"join {p1}x{p2} / {q1}x{q2} seed {s}: formula {got} vs cofactor {want}"]
    return []


# ---------------------------------------------------------------------------
# chain and induced-subgraph containment


def _chain_tasks(seed: int) -> List[Task]:
    return [(g,) for g in simple_graphs(5)] + [(sgraph.builtin("fig2"),), (sgraph.builtin("fig6"),)]


def _chain_check(task: Task) -> List[str]:
    (g,) = task
    ci = CriticalIdeals(g)
    out = []
    for i in range(1, g.n):
        basis = strong_groebner(ci.ideal(i))
        if not _contains_all(basis, ci.ideal(i + 1).generators):
            out.append(f"{_name(g)}: I_{i + 1} not inside I_{i}")
    return out


def _subgraph_tasks(seed: int) -> List[Task]:
    return [(g,) for g in simple_graphs(5, min_n=2)]


def _subgraph_check(task: Task) -> List[str]:
    (g,) = task
    ci = CriticalIdeals(g)
    bases = {i: strong_groebner(ci.ideal(i)) for i in range(1, g.n + 1)}
    gamma_g = corank(g, cache=ci).gamma
    out = []
    for size in range(1, g.n):
        for keep in combinations(g.vertices, size):
            h = g.induced(keep)
            ch = CriticalIdeals(h)
            for i in range(1, h.n + 1):
                if not _contains_all(bases[i], ch.ideal(i).generators):
                    out.append(f"{_name(g)} on {[str(v) for v in keep]}: I_{i} not contained")
            if corank(h, cache=ch).gamma > gamma_g:
                out.append(f"{_name(g)} on {[str(v) for v in keep]}: subgraph co-rank exceeds graph co-rank")
    return out


# ---------------------------------------------------------------------------
# blowups


def _rd_tasks(seed: int) -> List[Task]:
    tasks = []
    for g in simple_graphs(4):
        for delta in product((0, 1, -1), repeat=g.n):
            tasks.append((g, delta))
    return tasks


def _rd_check(task: Task) -> List[str]:
    g, delta = task
    d = TwinVector.from_sequence(g, delta)
    direct = CriticalIdeals(blowup(g, d))
    base = CriticalIdeals(g)
    assign = phi(g, d, base.ring)
    out = []
    for j in range(1, g.n + 1):
        lhs = direct.decide(j, certificates=False)[0]
        rhs = triviality_evidence(base.ideal(j).substitute(assign))[0]
        if lhs != rhs:
            out.append(f"{_name(g)} d={delta} j={j}: direct {lhs} vs evaluated {rhs}")
    return out


def _cor_bound_tasks(seed: int) -> List[Task]:
    rng = random.Random(seed)
    pool = simple_graphs(4, min_n=2)
    tasks = []
    for _ in range(200):
        g = rng.choice(pool)
        tasks.append((g, tuple(rng.randint(-3, 3) for _ in range(g.n))))
    return tasks


def _cor_bound_check(task: Task) -> List[str]:
    g, vals = task
    d = TwinVector.from_sequence(g, vals)
    full = corank(blowup(g, d)).gamma
    supp = corank(blowup(g, d.support())).gamma
    if full != supp:
        return [f"{_name(g)} d={vals}: gamma {full} vs support gamma {supp}"]
    return []


def _lemma_dr_tasks(seed: int) -> List[Task]:
    return [(g, v, kind) for g in simple_graphs(4, min_n=2) for v in g.vertices
            for kind in ("duplicate", "replicate")]


def _lemma_dr_check(task: Task) -> List[str]:
    g, v, kind = task
    out = []
    sign = 1 if kind == "duplicate" else -1
    d = TwinVector(g, {v: sign})
    once = CriticalIdeals(duplicate_replicate(g, v, 1, kind))
    for j in range(1, g.n + 1):
        sup = strong_groebner(blowup_ideal_superset(g, d, j))
        if not _contains_all(sup, once.ideal(j).generators):
            out.append(f"{_name(g)} {kind} {v} j={j}: generator escapes the superset")
    for k in (1, 2):
        built = CriticalIdeals(duplicate_replicate(g, v, k, kind))
        for j in range(1, g.n + k + 1):
            if not ideal_equal(dup_rep_expanded_ideal(g, v, k, j, kind), built.ideal(j)):
                out.append(f"{_name(g)} {kind}^{k} {v} j={j}: expanded ideal differs")
    return out


# ---------------------------------------------------------------------------
# stabilization


def _stab_equal(g, v, kind, k, i) -> bool:
    index, copies, ideal = stabilized_twin_ideal(g, v, k, i, kind)
    built = CriticalIdeals(duplicate_replicate(g, v, copies, kind))
    return ideal_equal(ideal, built.ideal(index))


def _deq_tasks(seed: int) -> List[Task]:
    tasks: List[Task] = [("example", "fig6", "v1", "duplicate"), ("example", "fig7", "v1", "replicate"),
                         ("control",)]
    for g in simple_graphs(4, min_n=2):
        tasks.append(("small", g))
    for g in simple_graphs(5, connected=True, min_n=2):
        tasks.append(("gap", g))
    return tasks


def _deq_check(task: Task) -> List[str]:
    tag = task[0]
    out = []
    if tag == "example":
        _, name, v, kind = task
        g = sgraph.builtin(name)
        for k in (1, 2):
            for i in (0, 1, 2):
                if not _stab_equal(g, v, kind, k, i):
                    out.append(f"{name} {kind} k={k} i={i}: stabilized form differs")
    elif tag == "control":
        for name, kind, k in (("fig6", "duplicate", 2), ("fig7", "replicate", 1)):
            g = sgraph.builtin(name)
            c = stabilization_constants(g, "v1", kind)
            index = c.gamma_twin + k
            below = twin_formula_ideal(g, "v1", 1, index, k, kind)
            actual = CriticalIdeals(duplicate_replicate(g, "v1", 1, kind)).ideal(index)
            if ideal_equal(below, actual):
                out.append(f"{name}: below-threshold ideal unexpectedly equals the stabilized form")
    elif tag == "small":
        g = task[1]
        if corank(g).gamma < 2:
            return []
        for v in g.vertices:
            for kind in ("duplicate", "replicate"):
                for i in (0, 1):
                    if not _stab_equal(g, v, kind, 1, i):
                        out.append(f"{_name(g)} {kind} {v} i={i}: stabilized form differs")
    else:
        g = task[1]
        for v in g.vertices:
            gv = corank(g.delete_vertex(v)).gamma
            for kind in ("duplicate", "replicate"):
                gt = corank(duplicate_replicate(g, v, 1, kind)).gamma
                if not 0 <= gt - gv <= 2:
                    out.append(f"{_name(g)} {kind} {v}: gap {gt - gv}")
    return out


# ---------------------------------------------------------------------------
# closed forms and unions


def _union_pair(rng: random.Random, pool) -> Tuple[SignedMultidigraph, SignedMultidigraph]:
    return rng.choice(pool).prefixed("a"), rng.choice(pool).prefixed("b")


def _closed_tasks(seed: int) -> List[Task]:
    tasks: List[Task] = []
    for n in range(2, 5):
        for m in range(n, 5):
            tasks.append(("bipartite", n, m))
    for n in range(3, 6):
        tasks.append(("complete", n))
    for k in range(1, 5):
        tasks.append(("trivial", k))
    rng = random.Random(seed)
    pool = simple_graphs(4)
    for _ in range(50):
        tasks.append(("union",) + _union_pair(rng, pool))
    return tasks


def _closed_check(task: Task) -> List[str]:
    tag = task[0]
    out = []
    if tag == "bipartite":
        _, n, m = task
        ci = CriticalIdeals(sgraph.complete_bipartite(n, m))
        for j in range(1, n + m + 1):
            if not ideal_equal(bipartite_closed_form(n, m, j), ci.ideal(j)):
                out.append(f"K_{n},{m} j={j}: closed form differs")
    elif tag == "complete":
        n = task[1]
        ci = CriticalIdeals(sgraph.complete(n))
        for j in (n - 1, n):
            if not ideal_equal(complete_closed_form(n, j), ci.ideal(j)):
                out.append(f"K_{n} j={j}: closed form differs")
    elif tag == "trivial":
        k = task[1]
        ci = CriticalIdeals(sgraph.trivial(k))
        for l in range(1, k + 1):
            if not ideal_equal(trivial_closed_form(k, l), ci.ideal(l)):
                out.append(f"T_{k} l={l}: closed form differs")
    else:
        _, g, h = task
        u = sgraph.disjoint_union(g, h)
        ci = CriticalIdeals(u)
        lg, lh = ideal_ladder(g), ideal_ladder(h)
        for j in range(1, u.n + 1):
            if not ideal_equal(union_closed_form(lg, lh, ci.ring, j), ci.ideal(j)):
                out.append(f"{_name(g)} + {_name(h)} j={j}: union formula differs")
    return out


def _additivity_tasks(seed: int) -> List[Task]:
    pool = simple_graphs(4)
    return [(g.prefixed("a"), h.prefixed("b")) for i, g in enumerate(pool) for h in pool[i:]]


def _additivity_check(task: Task) -> List[str]:
    g, h = task
    total = corank(sgraph.disjoint_union(g, h)).gamma
    parts = corank(g).gamma + corank(h).gamma
    if total != parts:
        return [f"{_name(g)} + {_name(h)}: gamma {total} vs {parts}"]
    return []


# ---------------------------------------------------------------------------
# bounds and trees


def _bounds_tasks(seed: int) -> List[Task]:
    return [(g,) for g in simple_graphs(6, connected=True)]


def _bounds_check(task: Task) -> List[str]:
    (g,) = task
    gamma = corank(g).gamma
    omega, alpha = clique_number(g), independence_number(g)
    out = []
    if gamma > 2 * (g.n - omega) + 1:
        out.append(f"{_name(g)}: gamma {gamma} above clique bound {2 * (g.n - omega) + 1}")
    if gamma > 2 * (g.n - alpha):
        out.append(f"{_name(g)}: gamma {gamma} above stability bound {2 * (g.n - alpha)}")
    return out


def _tree_tasks(seed: int) -> List[Task]:
    return [(sgraph.encode_graph6(t),) for n in range(1, 9) for t in trees(n)]


def _tree_check(task: Task) -> List[str]:
    rec = scan_evaluate((task[0], "tree-bound", ZZ, DEFAULT_BUDGET))
    if not rec.verdict:
        return [f"{rec.graph6}: gamma {rec.gamma} below {rec.threshold}"]
    return []


# ---------------------------------------------------------------------------


SUITES: Dict[str, Tuple[Callable[[int], List[Task]], Checker]] = {
    "joindet": (_joindet_tasks, _joindet_check),
    "chain": (_chain_tasks, _chain_check),
    "subgraph-containment": (_subgraph_tasks, _subgraph_check),
    "thm-rd": (_rd_tasks, _rd_check),
    "cor-bound": (_cor_bound_tasks, _cor_bound_check),
    "lemma-dr": (_lemma_dr_tasks, _lemma_dr_check),
    "thm-deq-req": (_deq_tasks, _deq_check),
    "closed-forms": (_closed_tasks, _closed_check),
    "union-additivity": (_additivity_tasks, _additivity_check),
    "bounds-clique-stability": (_bounds_tasks, _bounds_check),
    "tree-proposition": (_tree_tasks, _tree_check),
}


def _run_task(job: Tuple[str, Task]) -> List[str]:
    name, task = job
    try:
        return SUITES[name][1](task)
    except Exception as e:  # a crash is reported as a failure of that task
        return [f"task raised {type(e).__name__}: {e}"]


def run_suite(name: str, jobs: int = 1, seed: int = 0, limit: int = 0) -> SuiteResult:
    """Run one suite; ``limit`` > 0 keeps only the first tasks (for smoke runs)."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    build = SUITES[name][0]
    start = time.perf_counter()
    tasks = build(seed)
    if limit > 0:
        tasks = tasks[:limit]
    failures: List[str] = []
    for msgs in pmap(_run_task, [(name, t) for t in tasks], jobs):
        failures.extend(msgs)
    return SuiteResult(name, len(tasks), failures, time.perf_counter() - start)
