"""Signed multidigraphs, graph families, twin operations and cotrees."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .polyring import Var


class GraphFormatError(ValueError):
    """Malformed graph text (edgelist, graph6 or twin vector)."""


class NotCograph(ValueError):
    """The graph has an induced P4."""


@dataclass(frozen=True, order=True)
class Vertex:
    """Vertex label: base name plus copy index (0 for the original)."""

    name: str
    copy: int = 0

    def __str__(self) -> str:
        return f"v{self.name}" if self.copy == 0 else f"v{self.name}^{self.copy}"

    @property
    def var(self) -> Var:
        return Var(self.name, self.copy)


def _as_vertex(v) -> Vertex:
    if isinstance(v, Vertex):
        return v
    if isinstance(v, int):
        return Vertex(str(v))
    if isinstance(v, str):
        return Vertex(v)
    raise TypeError(f"not a vertex label: {v!r}")


class SignedMultidigraph:
    """Vertices in a fixed order plus net arc weights ``w[u, v]`` (u != v)."""

    __slots__ = ("vertices", "weights", "_index")

    def __init__(self, vertices: Iterable, weights: Mapping[Tuple, int] = ()):
        verts = tuple(_as_vertex(v) for v in vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise ValueError("duplicate vertex labels")
        w: Dict[Tuple[Vertex, Vertex], int] = {}
        items = weights.items() if isinstance(weights, Mapping) else weights
        for (u, v), c in items:
            u, v = _as_vertex(u), _as_vertex(v)
            if u not in index or v not in index:
                raise ValueError(f"arc {u}->{v} uses an unknown vertex")
            if u == v:
                raise ValueError(f"loop at {u}")
            if c:
                w[(u, v)] = int(c)
        self.vertices = verts
        self.weights = w
        self._index = index

    # basic queries

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return _as_vertex(v) in self._index

    def index(self, v) -> int:
        try:
            return self._index[_as_vertex(v)]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def vertex(self, v) -> Vertex:
        """Resolve ``v`` (label, name, ``'v3'`` style string or position) to a vertex."""
        if isinstance(v, Vertex):
            if v in self._index:
                return v
        elif isinstance(v, str):
            cand = Vertex(v)
            if cand in self._index:
                return cand
            m = re.fullmatch(r"v?([A-Za-z0-9]+?)(?:[\^_](\d+))?", v)
            if m:
                cand = Vertex(m.group(1), int(m.group(2) or 0))
                if cand in self._index:
                    return cand
        elif isinstance(v, int):
            cand = Vertex(str(v))
            if cand in self._index:
                return cand
        raise KeyError(f"unknown vertex {v}")

    def weight(self, u, v) -> int:
        return self.weights.get((_as_vertex(u), _as_vertex(v)), 0)

    def matrix(self) -> List[List[int]]:
        """Integer weight matrix in vertex order (zero diagonal)."""
        n = self.n
        m = [[0] * n for _ in range(n)]
        for (u, v), c in self.weights.items():
            m[self._index[u]][self._index[v]] = c
        return m

    def is_simple(self) -> bool:
        return all(c == 1 and self.weights.get((v, u)) == 1 for (u, v), c in self.weights.items())

    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        """Unordered pairs carrying an arc in either direction, in vertex order."""
        seen = set()
        out = []
        for u, v in self.weights:
            i, j = sorted((self._index[u], self._index[v]))
            if (i, j) not in seen:
                seen.add((i, j))
                out.append((i, j))
        out.sort()
        return [(self.vertices[i], self.vertices[j]) for i, j in out]

    def neighbors(self, v) -> List[Vertex]:
        v = _as_vertex(v)
        return [u for u in self.vertices if u != v and ((u, v) in self.weights or (v, u) in self.weights)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SignedMultidigraph)
            and self.vertices == other.vertices
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self.weights.items())))

    def __repr__(self) -> str:
        return f"SignedMultidigraph(n={self.n}, arcs={len(self.weights)})"

    def same_graph(self, other: "SignedMultidigraph") -> bool:
        """Equality of labelled graphs ignoring vertex order."""
        return set(self.vertices) == set(other.vertices) and self.weights == other.weights

    # derived graphs

    def induced(self, keep: Iterable) -> "SignedMultidigraph":
        ks = {self.vertex(v) for v in keep}
        verts = [v for v in self.vertices if v in ks]
        w = {(u, v): c for (u, v), c in self.weights.items() if u in ks and v in ks}
        return SignedMultidigraph(verts, w)

    def delete_vertex(self, v) -> "SignedMultidigraph":
        v = self.vertex(v)
        return self.induced(u for u in self.vertices if u != v)

    def complement(self) -> "SignedMultidigraph":
        if not self.is_simple():
            raise ValueError("complement is defined for simple graphs only")
        w = {}
        for u, v in combinations(self.vertices, 2):
            if (u, v) not in self.weights:
                w[(u, v)] = w[(v, u)] = 1
        return SignedMultidigraph(self.vertices, w)

    def components(self) -> List[List[Vertex]]:
        """Weakly connected components, each listed in vertex order."""
        adj = {v: set() for v in self.vertices}
        for u, v in self.weights:
            adj[u].add(v)
            adj[v].add(u)
        seen = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            stack, comp = [s], set()
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.add(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append([v for v in self.vertices if v in comp])
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def relabel(self, mapping: Mapping) -> "SignedMultidigraph":
        m = {self.vertex(k): _as_vertex(v) for k, v in mapping.items()}
        f = lambda v: m.get(v, v)  # noqa: E731
        return SignedMultidigraph(
            [f(v) for v in self.vertices], {(f(u), f(v)): c for (u, v), c in self.weights.items()}
        )

    def prefixed(self, prefix: str) -> "SignedMultidigraph":
        return self.relabel({v: Vertex(prefix + v.name, v.copy) for v in self.vertices})


# ---------------------------------------------------------------------------
# constructors


def from_edges(names: Union[int, Sequence], edges: Iterable[Tuple]) -> SignedMultidigraph:
    """Simple graph on ``names`` (or 1..n) with the given undirected edges."""
    verts = [Vertex(str(i)) for i in range(1, names + 1)] if isinstance(names, int) else list(names)
    w = {}
    for u, v in edges:
        w[(u, v)] = w[(v, u)] = 1
    return SignedMultidigraph(verts, w)


def from_laplacian_rows(rows: Sequence[Sequence[int]], names: Optional[Sequence] = None) -> SignedMultidigraph:
    """Graph whose generalized Laplacian has the given off-diagonal entries."""
    n = len(rows)
    verts = [Vertex(str(i + 1)) for i in range(n)] if names is None else [_as_vertex(v) for v in names]
    w = {}
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("Laplacian rows must form a square matrix")
        for j, c in enumerate(row):
            if i != j and c:
                w[(verts[i], verts[j])] = -c
    return SignedMultidigraph(verts, w)


def path(n: int) -> SignedMultidigraph:
    return from_edges(n, [(str(i), str(i + 1)) for i in range(1, n)])


def cycle(n: int) -> SignedMultidigraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return from_edges(n, [(str(i), str(i % n + 1)) for i in range(1, n + 1)])


def complete(n: int) -> SignedMultidigraph:
    return from_edges(n, [(str(i), str(j)) for i, j in combinations(range(1, n + 1), 2)])


def trivial(n: int) -> SignedMultidigraph:
    return from_edges(n, [])


def complete_bipartite(n: int, m: int) -> SignedMultidigraph:
    """K_{n,m} as the blowup of K2 duplicating one end n-1 times, the other m-1."""
    k2 = path(2)
    return blowup(k2, TwinVector(k2, {"1": n - 1, "2": m - 1}))


def disjoint_union(g: SignedMultidigraph, h: SignedMultidigraph) -> SignedMultidigraph:
    if set(g.vertices) & set(h.vertices):
        raise ValueError("disjoint union needs distinct vertex labels")
    return SignedMultidigraph(g.vertices + h.vertices, {**g.weights, **h.weights})


def join(g: SignedMultidigraph, h: SignedMultidigraph) -> SignedMultidigraph:
    u = disjoint_union(g, h)
    w = dict(u.weights)
    for a in g.vertices:
        for b in h.vertices:
            w[(a, b)] = w[(b, a)] = 1
    return SignedMultidigraph(u.vertices, w)


def threshold(n: int) -> SignedMultidigraph:
    """Th_1 = v1, Th_{2k} = v_{2k} join Th_{2k-1}, Th_{2k+1} = v_{2k+1} union Th_{2k}."""
    if n < 1:
        raise ValueError("threshold graphs need n >= 1")
    g = trivial(1)
    for i in range(2, n + 1):
        v = from_edges([Vertex(str(i))], [])
        g = join(g, v) if i % 2 == 0 else disjoint_union(g, v)
    return g


def hypercube3() -> SignedMultidigraph:
    """Q3 with vertex v_{i+1} labelled by the binary expansion of i."""
    edges = [
        (str(i + 1), str(j + 1)) for i, j in combinations(range(8), 2) if bin(i ^ j).count("1") == 1
    ]
    return from_edges(8, edges)


def build_family(spec: str) -> SignedMultidigraph:
    """Build a named family member, e.g. ``"path 3"`` or ``"complete_bipartite 2 3"``."""
    parts = spec.replace(",", " ").split()
    if not parts:
        raise ValueError("empty family spec")
    kind, args = parts[0].lower(), parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ValueError(f"bad family spec {spec!r}") from None
    arity = {"path": 1, "cycle": 1, "complete": 1, "trivial": 1, "threshold": 1,
             "hypercube": 1, "complete_bipartite": 2}
    if kind not in arity or len(nums) != arity[kind]:
        raise ValueError(f"bad family spec {spec!r}")
    if any(k < 1 for k in nums):
        raise ValueError("family parameters must be positive")
    if kind == "hypercube":
        if nums[0] != 3:
            raise ValueError("only the 3-cube is provided")
        return hypercube3()
    return {"path": path, "cycle": cycle, "complete": complete, "trivial": trivial,
            "threshold": threshold, "complete_bipartite": complete_bipartite}[kind](*nums)


# ---------------------------------------------------------------------------
# twins and blowups


def duplicate_replicate(g: SignedMultidigraph, v, k: int = 1, kind: str = "duplicate") -> SignedMultidigraph:
    """d^k(g, v) or r^k(g, v): add k twins of v (false twins or true twins)."""
    if kind not in ("duplicate", "replicate"):
        raise ValueError(f"unknown twin kind {kind!r}")
    if k < 1:
        raise ValueError("k must be positive")
    v = g.vertex(v)
    verts = list(g.vertices)
    w = dict(g.weights)
    top = max(u.copy for u in verts if u.name == v.name)
    others = [u for u in verts if u != v]
    for step in range(1, k + 1):
        new = Vertex(v.name, top + step)
        for u in others:
            if (v, u) in w:
                w[(new, u)] = w[(v, u)]
            if (u, v) in w:
                w[(u, new)] = w[(u, v)]
        if kind == "replicate":
            w[(v, new)] = w[(new, v)] = 1
        others.append(new)
        verts.append(new)
    return SignedMultidigraph(verts, w)


class TwinVector:
    """Integer vector d on the vertices of a graph."""

    __slots__ = ("graph", "entries")

    def __init__(self, graph: SignedMultidigraph, entries: Mapping = ()):
        vals = {v: 0 for v in graph.vertices}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for k, c in items:
            vals[graph.vertex(k)] = int(c)
        self.graph = graph
        self.entries = vals

    @classmethod
    def from_sequence(cls, graph: SignedMultidigraph, seq: Sequence[int]) -> "TwinVector":
        if len(seq) != graph.n:
            raise ValueError("twin vector length differs from vertex count")
        return cls(graph, dict(zip(graph.vertices, seq)))

    @classmethod
    def parse(cls, graph: SignedMultidigraph, text: str) -> "TwinVector":
        """Parse ``v1:-1,v2:2`` (omitted vertices are 0)."""
        entries = {}
        for chunk in text.replace(";", ",").split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            key, sep, val = chunk.partition(":")
            if not sep:
                raise GraphFormatError(f"twin vector entry {chunk!r} lacks ':'")
            try:
                entries[graph.vertex(key.strip())] = int(val)
            except KeyError as e:
                raise GraphFormatError(str(e)) from None
            except ValueError:
                raise GraphFormatError(f"bad integer in {chunk!r}") from None
        return cls(graph, entries)

    def __getitem__(self, v) -> int:
        return self.entries[self.graph.vertex(v)]

    def values(self) -> Tuple[int, ...]:
        return tuple(self.entries[v] for v in self.graph.vertices)

    def support(self) -> "TwinVector":
        return TwinVector(self.graph, {v: (c > 0) - (c < 0) for v, c in self.entries.items()})

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, TwinVector) and self.graph == other.graph and self.entries == other.entries

    def __hash__(self):
        return hash(self.values())

    def __str__(self) -> str:
        return ",".join(f"{v}:{c}" for v, c in self.entries.items() if c)

    def __repr__(self) -> str:
        return f"TwinVector({self.values()})"


def support(d: TwinVector) -> TwinVector:
    return d.support()


def blowup(g: SignedMultidigraph, d: TwinVector) -> SignedMultidigraph:
    """G^d: duplicate v d_v times if d_v > 0, replicate it -d_v times if d_v < 0."""
    if d.graph is not g and d.graph.vertices != g.vertices:
        raise ValueError("twin vector belongs to a different graph")
    out = g
    for v in g.vertices:
        c = d.entries[v]
        if c > 0:
            out = duplicate_replicate(out, v, c, "duplicate")
        elif c < 0:
            out = duplicate_replicate(out, v, -c, "replicate")
    return out


def vertex_class(g: SignedMultidigraph, v) -> List[Vertex]:
    """All copies of the original vertex ``v`` (the class V(G^d, v))."""
    name = g.vertex(v).name
    return [u for u in g.vertices if u.name == name]


def twin_pairs(g: SignedMultidigraph) -> List[Tuple[Vertex, Vertex, str]]:
    m = g.matrix()
    n = g.n
    out = []
    for i, j in combinations(range(n), 2):
        if any(m[i][t] != m[j][t] or m[t][i] != m[t][j] for t in range(n) if t != i and t != j):
            continue
        if m[i][j] == 0 and m[j][i] == 0:
            out.append((g.vertices[i], g.vertices[j], "duplicated"))
        elif m[i][j] == 1 and m[j][i] == 1:
            out.append((g.vertices[i], g.vertices[j], "replicated"))
    return out


def is_twin_free(g: SignedMultidigraph) -> bool:
    return not twin_pairs(g)


# ---------------------------------------------------------------------------
# graph6


def _g6_size(data: bytes, pos: int) -> Tuple[int, int]:
    if data[pos] != 126:
        return data[pos] - 63, pos + 1
    if len(data) > pos + 1 and data[pos + 1] == 126:
        chunk = data[pos + 2 : pos + 8]
        width, nxt = 36, pos + 8
    else:
        chunk = data[pos + 1 : pos + 4]
        width, nxt = 18, pos + 4
    n = 0
    for b in chunk:
        n = (n << 6) | (b - 63)
    if len(chunk) * 6 != width:
        raise GraphFormatError("truncated graph6 size field")
    return n, nxt


def decode_graph6(line: str) -> SignedMultidigraph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = s.encode("ascii", errors="strict")
    if any(b < 63 or b > 126 for b in data):
        raise GraphFormatError(f"invalid graph6 character in {s!r}")
    n, pos = _g6_size(data, 0)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {need}")
    bits = []
    for b in body:
        x = b - 63
        bits.extend((x >> (5 - k)) & 1 for k in range(6))
    edges = []
    t = 0
    for j in range(1, n):
        for i in range(j):
            if bits[t]:
                edges.append((str(i + 1), str(j + 1)))
            t += 1
    if any(bits[t:]):
        raise GraphFormatError("nonzero graph6 padding bits")
    return from_edges(n, edges)


def encode_graph6(g: SignedMultidigraph) -> str:
    if not g.is_simple():
        raise ValueError("graph6 encodes simple graphs only")
    n = g.n
    if n < 63:
        out = [n + 63]
    elif n < 258048:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    m = g.matrix()
    bits = [m[i][j] for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k : k + 6]:
            x = (x << 1) | b
        out.append(x + 63)
    return bytes(out).decode("ascii")


# ---------------------------------------------------------------------------
# edgelist text


def parse_edgelist(text: str) -> SignedMultidigraph:
    n = None
    w: Dict[Tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        try:
            if head == "n":
                if n is not None or len(parts) != 2:
                    raise GraphFormatError("duplicate or malformed header")
                n = int(parts[1])
                if n < 0:
                    raise GraphFormatError("negative vertex count")
                continue
            if n is None:
                raise GraphFormatError("missing 'n <count>' header")
            if head == "edge" and len(parts) in (3, 4):
                u, v = parts[1], parts[2]
                c = int(parts[3]) if len(parts) == 4 else 1
                arcs = [(u, v), (v, u)]
            elif head == "arc" and len(parts) == 4:
                u, v, c = parts[1], parts[2], int(parts[3])
                arcs = [(u, v)]
            else:
                raise GraphFormatError(f"unrecognised line {line!r}")
        except ValueError as e:
            if isinstance(e, GraphFormatError):
                raise GraphFormatError(f"line {lineno}: {e}") from None
            raise GraphFormatError(f"line {lineno}: bad integer in {line!r}") from None
        for x in (u, v):
            if not x.isdigit() or not 1 <= int(x) <= n:
                raise GraphFormatError(f"line {lineno}: vertex {x} out of range 1..{n}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
        if c == 0:
            raise GraphFormatError(f"line {lineno}: zero weight")
        for a in arcs:
            key = (str(int(a[0])), str(int(a[1])))
            w[key] = w.get(key, 0) + c
    if n is None:
        raise GraphFormatError("missing 'n <count>' header")
    return SignedMultidigraph([Vertex(str(i)) for i in range(1, n + 1)], w)


def format_edgelist(g: SignedMultidigraph) -> str:
    names = {v: str(i + 1) for i, v in enumerate(g.vertices)}
    lines = [f"n {g.n}"]
    done = set()
    for (u, v), c in sorted(g.weights.items(), key=lambda kv: (g.index(kv[0][0]), g.index(kv[0][1]))):
        if (u, v) in done:
            continue
        if g.weights.get((v, u)) == c:
            lines.append(f"edge {names[u]} {names[v]}" + ("" if c == 1 else f" {c}"))
            done.add((v, u))
        else:
            lines.append(f"arc {names[u]} {names[v]} {c}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str, format: str = "edgelist") -> SignedMultidigraph:
    if format == "edgelist":
        return parse_edgelist(text)
    if format == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise GraphFormatError("expected exactly one graph6 line")
        return decode_graph6(lines[0])
    raise ValueError(f"unknown graph format {format!r}")


# ---------------------------------------------------------------------------
# transcribed example graphs

FIG2_ROWS = (
    (0, -1, 0, 0, 1),
    (1, 0, -1, 0, 0),
    (0, -1, 0, -1, 0),
    (0, 0, -1, 0, -1),
    (-1, 0, 0, -1, 0),
)
FIG4_ROWS = (
    (0, 0, -1, -1, 0, -1),
    (0, 0, -1, -1, -1, 0),
    (-1, -1, 0, 0, -1, -1),
    (-1, -1, 0, 0, -1, -1),
    (0, -1, -1, -1, 0, -1),
    (-1, 0, -1, -1, -1, 0),
)
FIG6_ROWS = (
    (0, -1, 0, 1),
    (-1, 0, -1, 0),
    (0, -1, 0, -1),
    (-1, 0, 1, 0),
)
FIG5_EDGES = "57 37 34 45 56 16 17 23 24 46 26 12"
FIG7_ROWS = (
    (0, 0, 0, 0, 0, 0),
    (-1, 0, 1, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0),
    (-1, 0, 0, 0, -1, -1),
    (-1, 0, 0, -1, 0, -1),
    (-1, 0, 0, -1, -1, 0),
)
FIG8_EDGES = "45 13 14 15 16 17 23 24 25 26 27 67"


def _digit_edges(n: int, text: str) -> SignedMultidigraph:
    return from_edges(n, [(e[0], e[1]) for e in text.split()])


BUILTINS = {
    "path3": lambda: path(3),
    "hypercube3": hypercube3,
    "fig2": lambda: from_laplacian_rows(FIG2_ROWS),
    "fig4": lambda: from_laplacian_rows(FIG4_ROWS),
    "fig5": lambda: _digit_edges(7, FIG5_EDGES),
    "fig6": lambda: from_laplacian_rows(FIG6_ROWS),
    "fig7": lambda: from_laplacian_rows(FIG7_ROWS),
    "fig8": lambda: _digit_edges(7, FIG8_EDGES),
}


def builtin(name: str) -> SignedMultidigraph:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin graph {name!r}; choose from {sorted(BUILTINS)}") from None


# ---------------------------------------------------------------------------
# cotrees


@dataclass(frozen=True)
class Cotree:
    """Node of a canonical cotree: ``union``, ``join`` or ``leaf``."""

    kind: str
    children: Tuple["Cotree", ...] = ()
    vertex: Optional[Vertex] = None
    _key: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def leaf(cls, v: Vertex) -> "Cotree":
        return cls("leaf", (), v, (0, 1, "leaf", (), (str(v),)))

    @classmethod
    def node(cls, kind: str, children: Iterable["Cotree"]) -> "Cotree":
        kids = tuple(sorted(children, key=lambda c: c._key))
        size = sum(c._key[1] for c in kids)
        shape = tuple(c._key[:4] for c in kids)
        labels = tuple(lbl for c in kids for lbl in c._key[4])
        depth = 1 + max(c._key[0] for c in kids)
        return cls(kind, kids, None, (depth, size, kind, shape, labels))

    def is_leaf(self) -> bool:
        return self.kind == "leaf"

    def leaves(self) -> List[Vertex]:
        if self.is_leaf():
            return [self.vertex]
        return [v for c in self.children for v in c.leaves()]

    def height(self) -> int:
        return self._key[0]

    def internal_nodes(self) -> List["Cotree"]:
        if self.is_leaf():
            return []
        return [self] + [n for c in self.children for n in c.internal_nodes()]

    def has_edge(self) -> bool:
        """Whether the underlying cograph has at least one edge."""
        if self.is_leaf():
            return False
        return self.kind == "join" or any(c.has_edge() for c in self.children)

    def is_complete(self) -> bool:
        if self.is_leaf():
            return True
        return self.kind == "join" and all(c.is_complete() for c in self.children)

    def rebuild(self) -> SignedMultidigraph:
        """Cograph described by this cotree (vertices in leaf order)."""
        if self.is_leaf():
            return SignedMultidigraph([self.vertex])
        parts = [c.rebuild() for c in self.children]
        g = parts[0]
        for h in parts[1:]:
            g = join(g, h) if self.kind == "join" else disjoint_union(g, h)
        return g

    def __str__(self) -> str:
        if self.is_leaf():
            return str(self.vertex)
        op = "join" if self.kind == "join" else "union"
        return f"{op}(" + ", ".join(str(c) for c in self.children) + ")"


def cotree(g: SignedMultidigraph) -> Cotree:
    """Canonical cotree of a simple graph; raises NotCograph on an induced P4."""
    if not g.is_simple():
        raise ValueError("cotrees are defined for simple graphs only")
    if g.n == 0:
        raise ValueError("empty graph has no cotree")
    return _cotree(g)


def _cotree(g: SignedMultidigraph) -> Cotree:
    if g.n == 1:
        return Cotree.leaf(g.vertices[0])
    comps = g.components()
    if len(comps) > 1:
        return Cotree.node("union", [_absorb(_cotree(g.induced(c)), "union") for c in comps])
    co = g.complement().components()
    if len(co) > 1:
        return Cotree.node("join", [_absorb(_cotree(g.induced(c)), "join") for c in co])
    raise NotCograph("graph contains an induced P4")


def _absorb(t: Cotree, parent_kind: str) -> Cotree:
    # components of a union are connected, so they never produce a union child;
    # co-components never produce a join child.  Kept as a guard.
    if t.kind == parent_kind:
        raise AssertionError("non-canonical cotree")
    return t


def is_cograph(g: SignedMultidigraph) -> bool:
    try:
        cotree(g)
    except NotCograph:
        return False
    return True
