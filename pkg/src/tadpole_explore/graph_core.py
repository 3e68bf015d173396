"""Exact-weight undirected graphs, tadpole/cycle constructors and the edge-list file format."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

WeightLike = Union[int, Fraction, str]


class GraphError(ValueError):
    """Base class for invalid graphs and bad constructor arguments."""


class NotATadpole(GraphError):
    pass


class NotACycle(GraphError):
    pass


class GraphParseError(GraphError):
    """Raised by :func:`parse_graph`; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0, line: str = ""):
        self.lineno = lineno
        self.line = line
        where = f"line {lineno}: " if lineno else ""
        super().__init__(f"{where}{message}" + (f" ({line!r})" if line else ""))


class MalformedLine(GraphParseError):
    pass


class DuplicateEdge(GraphParseError):
    pass


class DisconnectedGraph(GraphParseError):
    pass


class NonPositiveWeight(GraphParseError):
    pass


def as_weight(w: WeightLike) -> Fraction:
    if isinstance(w, bool) or isinstance(w, float):
        raise GraphError(f"weights must be exact (int, Fraction or 'p/q'), got {w!r}")
    value = Fraction(w)
    if value <= 0:
        raise GraphError(f"edge weights must be positive, got {value}")
    return value


class Edge(NamedTuple):
    """An edge as seen while walking; ``u`` -> ``v`` gives the walking direction."""

    u: int
    v: int
    weight: Fraction

    @property
    def key(self) -> tuple[int, int]:
        return edge_key(self.u, self.v)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable, connected, simple undirected graph with positive rational weights."""

    __slots__ = ("_adj",)

    def __init__(self, edges: Iterable[tuple[int, int, WeightLike]], vertices: Iterable[int] = ()):
        adj: dict[int, dict[int, Fraction]] = {v: {} for v in vertices}
        for u, v, w in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u < 0 or v < 0:
                raise GraphError(f"vertex ids must be non-negative, got ({u}, {v})")
            if v in adj.get(u, {}):
                raise GraphError(f"parallel edge ({u}, {v})")
            weight = as_weight(w)
            adj.setdefault(u, {})[v] = weight
            adj.setdefault(v, {})[u] = weight
        if len(adj) < 2:
            raise GraphError("a graph needs at least two vertices")
        if not _connected(adj):
            raise GraphError("graph is not connected")
        self._adj = adj

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> Mapping[int, Fraction]:
        """Neighbour -> weight, as a read-only copy."""
        return dict(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def weight(self, u: int, v: int) -> Fraction:
        try:
            return self._adj[u][v]
        except KeyError:
            raise KeyError(f"no edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, {})

    def edges(self) -> Iterator[Edge]:
        """All edges once, with ``u < v``, sorted."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield Edge(u, v, self._adj[u][v])

    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges()), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(tuple(self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _connected(adj: Mapping[int, Mapping[int, object]]) -> bool:
    if not adj:
        return True
    root = next(iter(adj))
    seen = {root}
    stack = [root]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(adj)


def make_tadpole(i: int, j: int, weights: Iterable[WeightLike]) -> Graph:
    """Build T_{i,j}: junction 0, cycle 0-1-...-(i-1)-0, stem 0-i-(i+1)-...-(i+j-1).

    ``weights`` lists the cycle edges in cycle order starting at the junction,
    then the stem edges from the junction outward.
    """
    if i < 3:
        raise GraphError(f"a tadpole cycle needs i >= 3 vertices, got {i}")
    if j < 1:
        raise GraphError(f"a tadpole stem needs j >= 1 vertices, got {j}")
    ws = [as_weight(w) for w in weights]
    if len(ws) != i + j:
        raise GraphError(f"T_{{{i},{j}}} has {i + j} edges, got {len(ws)} weights")
    edges = [(c, (c + 1) % i, ws[c]) for c in range(i)]
    prev = 0
    for s in range(j):
        edges.append((prev, i + s, ws[i + s]))
        prev = i + s
    return Graph(edges)


def make_cycle(n: int, weights: Iterable[WeightLike]) -> Graph:
    """Simple cycle 0-1-...-(n-1)-0; ``weights[c]`` is the weight of edge (c, c+1 mod n)."""
    if n < 3:
        raise GraphError(f"a cycle needs n >= 3 vertices, got {n}")
    ws = [as_weight(w) for w in weights]
    if len(ws) != n:
        raise GraphError(f"a {n}-cycle has {n} edges, got {len(ws)} weights")
    return Graph((c, (c + 1) % n, ws[c]) for c in range(n))


@dataclass(frozen=True)
class TadpoleDecomposition:
    """Cycle/stem split of a tadpole.

    ``cycle_edges`` walks the cycle from the junction towards its lower-id cycle
    neighbour and back; ``stem_edges`` walks from the junction to the stem end.
    """

    cycle_edges: tuple[Edge, ...]
    stem_edges: tuple[Edge, ...]
    junction: int
    stem_end: int

    @property
    def i(self) -> int:
        return len(self.cycle_edges)

    @property
    def j(self) -> int:
        return len(self.stem_edges)

    @property
    def cycle_vertices(self) -> tuple[int, ...]:
        return tuple(e.u for e in self.cycle_edges)

    @property
    def stem_vertices(self) -> tuple[int, ...]:
        """Stem vertices excluding the junction, junction side first."""
        return tuple(e.v for e in self.stem_edges)

    @property
    def cycle_weight(self) -> Fraction:
        return sum((e.weight for e in self.cycle_edges), Fraction(0))

    @property
    def stem_weight(self) -> Fraction:
        return sum((e.weight for e in self.stem_edges), Fraction(0))

    @property
    def weights(self) -> list[Fraction]:
        """Weights in :func:`make_tadpole` order."""
        return [e.weight for e in self.cycle_edges] + [e.weight for e in self.stem_edges]


def _walk_cycle(g: Graph, origin: int, first: int) -> tuple[Edge, ...]:
    edges = [Edge(origin, first, g.weight(origin, first))]
    prev, cur = origin, first
    while cur != origin:
        nxt = [v for v in g.neighbors(cur) if v != prev]
        if len(nxt) != 1:
            raise GraphError(f"cycle walk got stuck at vertex {cur}")
        prev, cur = cur, nxt[0]
        edges.append(Edge(prev, cur, g.weight(prev, cur)))
    return tuple(edges)


def decompose_tadpole(g: Graph) -> TadpoleDecomposition:
    degrees = {v: g.degree(v) for v in g.vertices}
    ones = [v for v, d in degrees.items() if d == 1]
    threes = [v for v, d in degrees.items() if d == 3]
    others = [v for v, d in degrees.items() if d not in (1, 2, 3)]
    if len(ones) != 1 or len(threes) != 1 or others:
        raise NotATadpole(
            f"degree test failed: {len(ones)} vertices of degree 1, "
            f"{len(threes)} of degree 3, {len(others)} of other degree != 2"
        )
    junction, stem_end = threes[0], ones[0]

    # walk stem end -> junction, then reverse
    path = [stem_end]
    while path[-1] != junction:
        nxt = [v for v in g.neighbors(path[-1]) if len(path) < 2 or v != path[-2]]
        path.append(nxt[0])
    path.reverse()
    stem = tuple(Edge(a, b, g.weight(a, b)) for a, b in zip(path, path[1:]))

    cycle_nbrs = sorted(v for v in g.neighbors(junction) if v != path[1])
    cycle = _walk_cycle(g, junction, cycle_nbrs[0])
    return TadpoleDecomposition(cycle_edges=cycle, stem_edges=stem, junction=junction, stem_end=stem_end)


def cycle_edges(g: Graph, origin: int | None = None) -> tuple[Edge, ...]:
    """Edges of a cycle graph in walking order from ``origin`` (default: smallest id)."""
    if any(g.degree(v) != 2 for v in g.vertices):
        raise NotACycle("every vertex of a cycle has degree 2")
    if origin is None:
        origin = min(g.vertices)
    return _walk_cycle(g, origin, min(g.neighbors(origin)))


def is_cycle(g: Graph) -> bool:
    return all(g.degree(v) == 2 for v in g.vertices)


def is_tadpole(g: Graph) -> bool:
    try:
        decompose_tadpole(g)
    except NotATadpole:
        return False
    return True


def _format_weight(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}"


def serialize_graph(g: Graph) -> str:
    lines = [f"v {g.n}"]
    lines += [f"e {e.u} {e.v} {_format_weight(e.weight)}" for e in g.edges()]
    return "\n".join(lines) + "\n"


def _parse_weight(token: str, lineno: int, line: str) -> Fraction:
    num, sep, den = token.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise MalformedLine(f"bad weight {token!r}", lineno, line) from None
    if q <= 0:
        raise MalformedLine(f"weight denominator must be positive in {token!r}", lineno, line)
    if p <= 0:
        raise NonPositiveWeight(f"edge weight {token} is not positive", lineno, line)
    return Fraction(p, q)


def parse_graph(text: str) -> Graph:
    """Parse the ``v <n>`` / ``e <u> <v> <p>/<q>`` edge-list format."""
    declared: int | None = None
    edges: dict[tuple[int, int], Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) != 2 or declared is not None:
                raise MalformedLine("expected a single 'v <n>' header", lineno, raw)
            try:
                declared = int(parts[1])
            except ValueError:
                raise MalformedLine("vertex count is not an integer", lineno, raw) from None
            if declared < 2:
                raise MalformedLine("a graph needs at least two vertices", lineno, raw)
        elif parts[0] == "e":
            if len(parts) != 4:
                raise MalformedLine("expected 'e <u> <v> <p>/<q>'", lineno, raw)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise MalformedLine("vertex ids must be integers", lineno, raw) from None
            if u < 0 or v < 0:
                raise MalformedLine("vertex ids must be non-negative", lineno, raw)
            if u == v:
                raise MalformedLine("self-loops are not allowed", lineno, raw)
            w = _parse_weight(parts[3], lineno, raw)
            key = edge_key(u, v)
            if key in edges:
                raise DuplicateEdge(f"edge {key} listed twice", lineno, raw)
            edges[key] = w
        else:
            raise MalformedLine(f"unknown record type {parts[0]!r}", lineno, raw)
    if declared is None:
        raise MalformedLine("missing 'v <n>' header")
    vertices = {x for key in edges for x in key}
    if len(vertices) != declared:
        raise MalformedLine(f"header declares {declared} vertices but edges mention {len(vertices)}")
    adj: dict[int, dict[int, Fraction]] = {v: {} for v in vertices}
    for (u, v), w in edges.items():
        adj[u][v] = w
        adj[v][u] = w
    if not _connected(adj):
        raise DisconnectedGraph("graph is not connected")
    return Graph((u, v, w) for (u, v), w in edges.items())


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
