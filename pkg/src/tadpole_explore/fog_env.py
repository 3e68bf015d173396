"""Online exploration under partial information.

A :class:`Session` owns the hidden world and the searcher's :class:`Observation`.
Explorers only ever see the observation: visiting a vertex reveals the ids of its
neighbours and the weights of its incident edges, and every traversal is paid for.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .graph_core import Edge, Graph, edge_key


class ExplorationError(RuntimeError):
    pass


class UnknownStartVertex(ExplorationError):
    pass


class IllegalMove(ExplorationError):
    pass


class Unreachable(ExplorationError):
    pass


class World(Protocol):
    """What a session asks about the hidden graph.

    ``reveal(v)`` is called exactly once per vertex, when it is first visited, and
    returns its incident edges. ``vertices()`` is the vertex set committed so far.
    A world may also define ``announcements()``, returning extra edges to show the
    searcher right after a reveal.
    """

    def reveal(self, v: int) -> Mapping[int, Fraction]: ...

    def vertices(self) -> frozenset[int]: ...


class GraphWorld:
    """A fixed, fully known hidden graph."""

    def __init__(self, graph: Graph):
        self.graph = graph

    def reveal(self, v: int) -> Mapping[int, Fraction]:
        return self.graph.neighbors(v)

    def vertices(self) -> frozenset[int]:
        return self.graph.vertices


@dataclass(frozen=True)
class MoveEvent:
    src: int
    dst: int
    weight: Fraction


def _compact(w):
    """Integral rationals become ``int``: still exact, much cheaper to add and compare."""
    return w.numerator if w.denominator == 1 else w


class Observation:
    """Everything the searcher knows. Holds no reference to the hidden world.

    Only the owning :class:`Session` mutates it.
    """

    def __init__(self, start: int):
        self.start = start
        self.current = start
        self.cost_so_far: Fraction | int = 0
        self._visited: set[int] = set()
        self._known: dict[int, dict[int, Fraction]] = {start: {}}
        # the same edges as integers: weight * _scale, _scale = lcm of denominators seen so far
        self._scale = 1
        self._scaled: dict[int, dict[int, int]] = {start: {}}
        # edges in the order they became known; edges learned together are ordered by neighbour id
        self.reveal_log: list[Edge] = []

    @property
    def visited(self) -> frozenset[int]:
        return frozenset(self._visited)

    @property
    def known_vertices(self) -> frozenset[int]:
        return frozenset(self._known)

    @property
    def frontier(self) -> frozenset[int]:
        return frozenset(v for v in self._known if v not in self._visited)

    @property
    def known_edges(self) -> frozenset[Edge]:
        return frozenset(
            Edge(u, v, w) for u, nbrs in self._known.items() for v, w in nbrs.items() if u < v
        )

    def is_visited(self, v: int) -> bool:
        return v in self._visited

    def is_known(self, v: int) -> bool:
        return v in self._known

    def neighbors(self, v: int) -> dict[int, Fraction]:
        """Known incident edges of ``v`` (neighbour -> weight)."""
        return dict(self._known.get(v, {}))

    def weight(self, u: int, v: int) -> Fraction:
        return self._known[u][v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._known.get(u, {})

    def scaled_adjacency(self) -> tuple[int, dict[int, dict[int, int]]]:
        """``(scale, adjacency)`` with integer weights ``w * scale``. Read-only view."""
        return self._scale, self._scaled

    def _learn(self, u: int, v: int, w: Fraction) -> bool:
        w = _compact(w)
        if v in self._known.get(u, {}):
            if self._known[u][v] != w:
                raise ExplorationError(f"world changed the weight of ({u}, {v})")
            return False
        self._known.setdefault(u, {})[v] = w
        self._known.setdefault(v, {})[u] = w
        den = Fraction(w).denominator
        if self._scale % den:
            factor = den // math.gcd(self._scale, den)
            self._scale *= factor
            for nbrs in self._scaled.values():
                for x in nbrs:
                    nbrs[x] *= factor
        iw = int(w * self._scale)
        self._scaled.setdefault(u, {})[v] = iw
        self._scaled.setdefault(v, {})[u] = iw
        self.reveal_log.append(Edge(*edge_key(u, v), w))
        return True


class Session:
    """Single-owner state machine coupling a hidden world and an observation."""

    def __init__(self, world: World, start: int):
        if start not in world.vertices():
            raise UnknownStartVertex(f"start vertex {start} is not in the graph")
        self.world = world
        self.observation = Observation(start)
        self.trace: list[MoveEvent] = []
        self._visit(start)

    @property
    def graph(self) -> Graph | None:
        return getattr(self.world, "graph", None)

    def _visit(self, v: int) -> None:
        obs = self.observation
        obs._visited.add(v)
        obs._known.setdefault(v, {})
        obs._scaled.setdefault(v, {})
        for nb, w in sorted(self.world.reveal(v).items()):
            obs._learn(v, nb, w)
        announce = getattr(self.world, "announcements", None)
        if announce is not None:
            self.reveal_edges(announce())

    def move_to(self, nxt: int) -> Observation:
        obs = self.observation
        if not obs.has_edge(obs.current, nxt):
            raise IllegalMove(f"no known edge ({obs.current}, {nxt})")
        w = obs.weight(obs.current, nxt)
        self.trace.append(MoveEvent(obs.current, nxt, w))
        obs.cost_so_far += w
        obs.current = nxt
        if nxt not in obs._visited:
            self._visit(nxt)
        return obs

    def walk(self, path: Sequence[int]) -> None:
        """Follow ``path``, which must start at the current vertex."""
        if not path or path[0] != self.observation.current:
            raise IllegalMove(f"path {list(path)} does not start at {self.observation.current}")
        for v in path[1:]:
            self.move_to(v)

    def reveal_edges(self, edges: Iterable[tuple[int, int, Fraction]]) -> None:
        """Hand extra edges to the searcher without a visit (used by the adversary's full reveal)."""
        for u, v, w in sorted(edges):
            self.observation._learn(u, v, w)

    def is_complete(self) -> bool:
        obs = self.observation
        return obs.current == obs.start and obs._visited >= self.world.vertices()

    def tour(self) -> Tour:
        moves = [self.observation.start] + [ev.dst for ev in self.trace]
        return Tour(moves=moves, total_cost=Fraction(self.observation.cost_so_far))


def new_session(g: Graph, start: int) -> Session:
    return Session(GraphWorld(g), start)


def move_to(session: Session, nxt: int) -> Observation:
    return session.move_to(nxt)


def is_complete(session: Session) -> bool:
    return session.is_complete()


@dataclass
class Tour:
    moves: list[int]
    total_cost: Fraction

    def validate(self, g: Graph) -> None:
        """Raise ``ValueError`` unless this is a closed walk of ``g`` covering every vertex."""
        if not self.moves or self.moves[0] != self.moves[-1]:
            raise ValueError("tour is not closed")
        cost = Fraction(0)
        for a, b in zip(self.moves, self.moves[1:]):
            if not g.has_edge(a, b):
                raise ValueError(f"tour uses a non-edge ({a}, {b})")
            cost += g.weight(a, b)
        if cost != self.total_cost:
            raise ValueError(f"tour cost {self.total_cost} != edge sum {cost}")
        if set(self.moves) != set(g.vertices):
            raise ValueError("tour misses vertices")

    def edge_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for a, b in zip(self.moves, self.moves[1:]):
            key = edge_key(a, b)
            counts[key] = counts.get(key, 0) + 1
        return counts


# -- shortest paths over known edges ------------------------------------------------
#
# Interior vertices of a path must be visited: entering an unvisited vertex reveals
# it and ends the walk. Observation-like objects only need ``current``,
# ``is_visited``, ``is_known`` and ``neighbors``.


def _adjacency(obs):
    """Integer-weighted adjacency plus scale, or the plain weights with scale 1."""
    scaled = getattr(obs, "scaled_adjacency", None)
    if scaled is not None:
        return scaled()
    return 1, {v: obs.neighbors(v) for v in obs.known_vertices}


def _unscale(d, scale: int):
    return d if scale == 1 else Fraction(d, scale)


def scaled_distances(obs, source: int | None = None) -> tuple[int, dict[int, int]]:
    """Like :func:`known_distances` but returns ``(scale, distances * scale)``."""
    scale, adj = _adjacency(obs)
    src = obs.current if source is None else source
    dist = {src: 0}
    heap = [(0, src)]
    done: set[int] = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x != src and not obs.is_visited(x):
            continue
        for y, w in adj.get(x, {}).items():
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return scale, dist


def known_distances(obs, source: int | None = None) -> dict[int, Fraction]:
    """Cheapest known-path cost from ``source`` (default: current) to every reachable known vertex."""
    scale, dist = scaled_distances(obs, source)
    return {v: _unscale(d, scale) for v, d in dist.items()}


def known_shortest_path(obs, target: int) -> tuple[list[int], Fraction]:
    """Minimum-cost known path from the current vertex to ``target``.

    Ties go to the lexicographically smallest vertex sequence.
    """
    src = obs.current
    if not obs.is_known(target):
        raise Unreachable(f"vertex {target} is not known")
    if target == src:
        return [src], 0
    scale, adj = _adjacency(obs)
    # distances *to* target; walking out of target is fine, walking through other
    # unvisited vertices is not
    to_target = {target: 0}
    heap = [(0, target)]
    done: set[int] = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == src:
            break
        if x != target and not obs.is_visited(x):
            continue
        for y, w in adj.get(x, {}).items():
            if y != src and not obs.is_visited(y):
                continue
            nd = d + w
            if y not in to_target or nd < to_target[y]:
                to_target[y] = nd
                heapq.heappush(heap, (nd, y))
    if src not in to_target:
        raise Unreachable(f"no known path from {src} to {target}")
    total = to_target[src]
    path = [src]
    x = src
    while x != target:
        remaining = to_target[x]
        x = min(y for y, w in adj[x].items() if y in to_target and w + to_target[y] == remaining)
        path.append(x)
    return path, _unscale(total, scale)


def trace_to_csv(trace: Sequence[MoveEvent]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "from", "to", "weight", "cumulative_cost"])
    total = Fraction(0)
    for step, ev in enumerate(trace, start=1):
        total += ev.weight
        writer.writerow(
            [step, ev.src, ev.dst, f"{ev.weight.numerator}/{ev.weight.denominator}",
             f"{total.numerator}/{total.denominator}"]
        )
    return buf.getvalue()
