"""Advice schemes for cycles and tadpoles.

An oracle that sees the whole graph writes a short bit string; the searcher reads
it before moving. The oracle knows the searcher's deterministic behaviour, so it
can refer to edges by the order in which the searcher will learn them.

* ``cycle``   -- ceil(log2 n) bits: index of a marked edge in reveal order. A
  cheapest edge at the start means "walk round once"; anything else is the edge
  to avoid.
* ``tadpole`` -- ceil(log2 n) + 1 bits: all-zero prefix means "cycle once, stem
  twice" with the last bit steering the first junction visit; otherwise the whole
  string is ``index + 2`` of the edge to avoid.
* ``2bit``    -- where the stem is, relative to the start; the cycle itself is left
  to a pluggable cycle explorer.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from .explorers import DFSPolicy, ExplorerPolicy, GreedyPolicy, run_policy
from .fog_env import ExplorationError, Session, Tour, known_shortest_path, new_session
from .graph_core import Edge, Graph, NotACycle, decompose_tadpole, edge_key, is_cycle
from .optimal_oracle import classify_shape, opt_cost_cycle

SCHEMES = ("2bit", "cycle", "tadpole")


class AdviceMismatch(ExplorationError):
    pass


@dataclass(frozen=True)
class AdviceString:
    bits: str
    scheme: str

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown advice scheme {self.scheme!r}")
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"advice must be a non-empty bit string, got {self.bits!r}")

    def __str__(self) -> str:
        return self.bits

    def __len__(self) -> int:
        return len(self.bits)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def advice_length(scheme: str, n: int) -> int:
    if scheme == "2bit":
        return 2
    if scheme == "cycle":
        return ceil_log2(n)
    if scheme == "tadpole":
        return ceil_log2(n) + 1
    raise ValueError(f"unknown advice scheme {scheme!r}")


def reveal_order(g: Graph, start: int, policy: ExplorerPolicy | None = None) -> list[Edge]:
    """Edges in the order a deterministic searcher (default: depth-first) learns them."""
    session = new_session(g, start)
    run_policy(session, policy or DFSPolicy())
    return list(session.observation.reveal_log)


def _index_of(log: list[Edge], key: tuple[int, int]) -> int:
    return [e.key for e in log].index(key)


# -- explorers ------------------------------------------------------------------


class AvoidingDFSPolicy:
    """Depth-first, smallest id first, never taking the edge learned ``avoid``-th (0-based)."""

    def __init__(self, avoid: int | None):
        self.avoid = avoid
        self._stack: list[int] = []

    def _avoided(self, obs) -> tuple[int, int] | None:
        if self.avoid is None or self.avoid >= len(obs.reveal_log):
            return None
        return obs.reveal_log[self.avoid].key

    def choose(self, obs) -> list[int]:
        if not self._stack:
            self._stack.append(obs.current)
        top = self._stack[-1]
        banned = self._avoided(obs)
        fresh = sorted(
            v for v in obs.neighbors(top) if not obs.is_visited(v) and edge_key(top, v) != banned
        )
        if fresh:
            self._stack.append(fresh[0])
            return [top, fresh[0]]
        self._stack.pop()
        if not self._stack:
            raise AdviceMismatch("depth-first walk ran out of moves; advice does not fit this graph")
        return [top, self._stack[-1]]


class CycleAdvicePolicy:
    def __init__(self, advice: AdviceString):
        if advice.scheme != "cycle":
            raise AdviceMismatch(f"expected cycle advice, got {advice.scheme}")
        self.index = int(advice.bits, 2)
        self._inner: AvoidingDFSPolicy | None = None
        self.shape = None

    def choose(self, obs) -> list[int]:
        if self._inner is None:
            avoid: int | None = self.index
            if self.index < len(obs.reveal_log):
                marked = obs.reveal_log[self.index]
                at_start = obs.neighbors(obs.start)
                if obs.start in marked.key and marked.weight == min(at_start.values()):
                    avoid = None
            self.shape = 1 if avoid is None else 2
            self._inner = AvoidingDFSPolicy(avoid)
        return self._inner.choose(obs)


class _StemFirstWalker:
    """Cycle once, stem twice: keep going, bounce off the stem end, obey the bit at the junction."""

    def __init__(self, bit: int):
        self.bit = bit
        self.prev: int | None = None
        self.started_on_junction: bool | None = None
        self.junction_done = False

    def choose(self, obs) -> list[int]:
        x = obs.current
        nbrs = obs.neighbors(x)
        if self.started_on_junction is None:
            self.started_on_junction = len(nbrs) == 3
            return self._go([x, min(nbrs)])
        if len(nbrs) == 3 and not self.started_on_junction and not self.junction_done:
            self.junction_done = True
            options = sorted(v for v in nbrs if v != self.prev)
            return self._go([x, options[self.bit]])
        fresh = sorted(v for v in nbrs if not obs.is_visited(v))
        if fresh:
            return self._go([x, fresh[0]])
        if len(nbrs) == 1:
            return self._go([x, next(iter(nbrs))])
        if len(nbrs) == 2:
            return self._go([x, next(v for v in nbrs if v != self.prev)])
        target = GreedyPolicy().choose(obs)
        return self._go(known_shortest_path(obs, target)[0])

    def _go(self, path: list[int]) -> list[int]:
        self.prev = path[-2]
        return path


class TadpoleAdvicePolicy:
    def __init__(self, advice: AdviceString):
        if advice.scheme != "tadpole":
            raise AdviceMismatch(f"expected tadpole advice, got {advice.scheme}")
        bits = advice.bits
        if int(bits[:-1], 2) == 0:
            self.shape = 1
            self.index = None
            self._inner: ExplorerPolicy = _StemFirstWalker(int(bits[-1]))
        else:
            self.shape = 2
            self.index = int(bits, 2) - 2
            self._inner = AvoidingDFSPolicy(self.index)

    def choose(self, obs):
        return self._inner.choose(obs)


class MaskedObservation:
    """An observation with some vertices hidden, for running a cycle explorer on a tadpole."""

    def __init__(self, obs, hidden: set[int]):
        self._obs = obs
        self.hidden = hidden

    @property
    def current(self) -> int:
        return self._obs.current

    @property
    def start(self) -> int:
        return self._obs.start

    @property
    def frontier(self) -> frozenset[int]:
        return self._obs.frontier - self.hidden

    @property
    def visited(self) -> frozenset[int]:
        return self._obs.visited - self.hidden

    @property
    def reveal_log(self):
        return [e for e in self._obs.reveal_log if e.u not in self.hidden and e.v not in self.hidden]

    def is_visited(self, v: int) -> bool:
        return v not in self.hidden and self._obs.is_visited(v)

    def is_known(self, v: int) -> bool:
        return v not in self.hidden and self._obs.is_known(v)

    def neighbors(self, v: int):
        if v in self.hidden:
            return {}
        return {u: w for u, w in self._obs.neighbors(v).items() if u not in self.hidden}

    def weight(self, u: int, v: int):
        return self._obs.weight(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return u not in self.hidden and v not in self.hidden and self._obs.has_edge(u, v)

    def scaled_adjacency(self):
        scale, adj = self._obs.scaled_adjacency()
        return scale, {
            u: {v: w for v, w in nbrs.items() if v not in self.hidden}
            for u, nbrs in adj.items()
            if u not in self.hidden
        }


class TwoBitPolicy:
    """Stem handled with the two advice bits, cycle delegated to ``cycle_subroutine()``."""

    def __init__(self, advice: AdviceString, cycle_subroutine: Callable[[], ExplorerPolicy] = GreedyPolicy):
        if advice.scheme != "2bit" or len(advice.bits) != 2:
            raise AdviceMismatch("expected 2 bits of 2bit advice")
        self.bits = advice.bits
        self.cycle = cycle_subroutine()
        self.mode: str | None = None
        self.stem: set[int] = set()
        self.prev: int | None = None
        self.junction: int | None = None
        self._heading_out = True

    def choose(self, obs) -> list[int]:
        x = obs.current
        nbrs = obs.neighbors(x)
        if self.mode is None:
            if len(nbrs) == 3:
                idx = int(self.bits, 2)
                if idx > 2:
                    raise AdviceMismatch(f"junction start needs a stem index in 0..2, got {idx}")
                self.junction = x
                first = sorted(nbrs)[idx]
                self.stem.add(first)
                self.mode = "stem-out"
                return self._go([x, first])
            self.mode = "on-stem" if self.bits[0] == "1" else "cycle"
            if self.mode == "on-stem":
                self.stem.add(x)
                return self._go([x, min(nbrs)])

        if self.mode == "stem-out":
            fresh = [v for v in nbrs if not obs.is_visited(v)]
            if fresh:
                self.stem.update(fresh)
                return self._go([x, fresh[0]])
            # stem end reached: back to the junction, then the cycle
            self.mode = "cycle"
            return self._go(known_shortest_path(obs, self.junction)[0])

        if self.mode == "on-stem":
            if len(nbrs) == 3:
                self.junction = x
                self.stem.add(self.prev)
                self.stem.update(self._stem_side(obs, self.prev))
                self.mode = "cycle"
            else:
                self.stem.add(x)
                fresh = [v for v in nbrs if not obs.is_visited(v)]
                if fresh:
                    return self._go([x, fresh[0]])
                return self._go([x, next(v for v in nbrs if v != self.prev)])

        if self.mode == "cycle" and self.junction is None and len(nbrs) == 3:
            # first arrival at the junction from the cycle: bit 2 names the stem
            self.junction = x
            options = sorted(v for v in nbrs if v != self.prev)
            first = options[int(self.bits[1])]
            if obs.is_visited(first):
                raise AdviceMismatch(f"advice points the stem at visited vertex {first}")
            self.stem.add(first)
            self.mode = "stem-out"
            return self._go([x, first])

        masked = MaskedObservation(obs, self.stem)
        if self.mode == "cycle" and masked.frontier:
            choice = self.cycle.choose(masked)
            if isinstance(choice, int):
                return self._go(known_shortest_path(masked, choice)[0])
            return self._go(list(choice))
        # cycle finished; whatever is left lies on the stem past the start
        self.mode = "stem-rest"
        target = GreedyPolicy().choose(obs)
        return self._go(known_shortest_path(obs, target)[0])

    @staticmethod
    def _stem_side(obs, first: int) -> set[int]:
        """Known vertices reachable from ``first`` without passing the junction's other neighbours."""
        side = {first}
        stack = [first]
        while stack:
            y = stack.pop()
            for z in obs.neighbors(y):
                if z not in side and len(obs.neighbors(z)) != 3:
                    side.add(z)
                    if obs.is_visited(z):
                        stack.append(z)
        return side

    def _go(self, path: list[int]) -> list[int]:
        self.prev = path[-2]
        return path


# -- oracle side ----------------------------------------------------------------


def advise_cycle(g: Graph, start: int) -> AdviceString:
    if not is_cycle(g):
        raise NotACycle("cycle advice needs a cycle graph")
    b = ceil_log2(g.n)
    shape = opt_cost_cycle(g).shape
    log = reveal_order(g, start)
    if shape.kind == 1:
        # a cheapest edge at the start; equal weights go to the one learned first
        index = min((log[i].weight, i) for i in (0, 1))[1]
    else:
        index = _index_of(log, shape.e_infinity.key)
    return AdviceString(format(index, f"0{b}b"), "cycle")


def _first_junction_arrival(g: Graph, start: int, policy: ExplorerPolicy, junction: int) -> int:
    """Vertex the deterministic searcher comes from when it first enters ``junction``."""
    session = new_session(g, start)
    obs = session.observation
    prev = start
    while not obs.is_visited(junction):
        choice = policy.choose(obs)
        path = known_shortest_path(obs, choice)[0] if isinstance(choice, int) else list(choice)
        for v in path[1:]:
            prev = obs.current
            session.move_to(v)
            if v == junction:
                return prev
    raise RuntimeError("searcher never reached the junction")


def advise_tadpole(g: Graph, start: int) -> AdviceString:
    d = decompose_tadpole(g)
    b = ceil_log2(g.n)
    shape = classify_shape(d)
    if shape.kind == 2:
        index = _index_of(reveal_order(g, start), shape.e_infinity.key)
        return AdviceString(format(index + 2, f"0{b + 1}b"), "tadpole")
    bit = 0
    stem_first = d.stem_edges[0].v
    if start != d.junction and start not in d.stem_vertices:
        came_from = _first_junction_arrival(g, start, _StemFirstWalker(0), d.junction)
        options = sorted(v for v in g.neighbors(d.junction) if v != came_from)
        bit = options.index(stem_first)
    return AdviceString("0" * b + str(bit), "tadpole")


def advise_2bit(
    g: Graph, start: int, cycle_subroutine: Callable[[], ExplorerPolicy] = GreedyPolicy
) -> AdviceString:
    d = decompose_tadpole(g)
    stem_first = d.stem_edges[0].v
    if start == d.junction:
        index = sorted(g.neighbors(start)).index(stem_first)
        return AdviceString(format(index, "02b"), "2bit")
    if start in d.stem_vertices:
        return AdviceString("10", "2bit")
    came_from = _first_junction_arrival(g, start, cycle_subroutine(), d.junction)
    options = sorted(v for v in g.neighbors(d.junction) if v != came_from)
    return AdviceString("0" + str(options.index(stem_first)), "2bit")


def _finish(session: Session, policy, advice: AdviceString) -> Tour:
    tour = run_policy(session, policy)
    index = getattr(policy, "index", None)
    if getattr(policy, "shape", None) == 2 and index >= len(session.observation.reveal_log):
        raise AdviceMismatch(f"marked edge index {index} was never revealed")
    return tour


def explore_cycle_with_advice(session: Session, advice: AdviceString) -> Tour:
    return _finish(session, CycleAdvicePolicy(advice), advice)


def explore_tadpole_with_advice(session: Session, advice: AdviceString) -> Tour:
    return _finish(session, TadpoleAdvicePolicy(advice), advice)


def explore_2bit(
    session: Session, advice: AdviceString, cycle_subroutine: Callable[[], ExplorerPolicy] = GreedyPolicy
) -> Tour:
    return run_policy(session, TwoBitPolicy(advice, cycle_subroutine))


def advise(scheme: str, g: Graph, start: int) -> AdviceString:
    if scheme == "cycle":
        return advise_cycle(g, start)
    if scheme == "tadpole":
        return advise_tadpole(g, start)
    if scheme == "2bit":
        return advise_2bit(g, start)
    raise ValueError(f"unknown advice scheme {scheme!r}")


def advised_policy(scheme: str, g: Graph, start: int) -> ExplorerPolicy:
    advice = advise(scheme, g, start)
    if scheme == "cycle":
        return CycleAdvicePolicy(advice)
    if scheme == "tadpole":
        return TadpoleAdvicePolicy(advice)
    return TwoBitPolicy(advice)


def explore_with_advice(scheme: str, session: Session, advice: AdviceString) -> Tour:
    if scheme == "cycle":
        return explore_cycle_with_advice(session, advice)
    if scheme == "tadpole":
        return explore_tadpole_with_advice(session, advice)
    if scheme == "2bit":
        return explore_2bit(session, advice)
    raise ValueError(f"unknown advice scheme {scheme!r}")
