"""Explorers that act on observations only, plus the step/charging auditor for greedy traces."""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol, Union

from .fog_env import (
    ExplorationError,
    MoveEvent,
    Session,
    Tour,
    scaled_distances,
    known_shortest_path,
)
from .graph_core import Graph, edge_key

Choice = Union[int, Sequence[int]]


class NonterminatingExplorer(ExplorationError):
    pass


class AuditViolation(AssertionError):
    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


class ExplorerPolicy(Protocol):
    """Decides where to go next from an :class:`~tadpole_explore.fog_env.Observation`.

    ``choose`` returns either a known target vertex (walked to along the known
    shortest path) or an explicit walk starting at the current vertex.
    It is only asked while unvisited known vertices remain.
    """

    def choose(self, obs) -> Choice: ...


def run_policy(session: Session, policy: ExplorerPolicy, max_moves: int | None = None) -> Tour:
    """Drive ``policy`` until the tour is closed; the final return uses a known shortest path."""
    obs = session.observation
    if max_moves is None:
        max_moves = 10_000 + 100 * len(session.world.vertices()) ** 2
    while not session.is_complete():
        if len(session.trace) > max_moves:
            raise NonterminatingExplorer(f"{type(policy).__name__} exceeded {max_moves} moves")
        if not obs.frontier:
            path, _ = known_shortest_path(obs, obs.start)
        else:
            choice = policy.choose(obs)
            if isinstance(choice, int):
                path, _ = known_shortest_path(obs, choice)
            else:
                path = list(choice)
            if len(path) < 2:
                raise NonterminatingExplorer(f"{type(policy).__name__} chose to stay at {obs.current}")
        session.walk(path)
    return session.tour()


class GreedyPolicy:
    """Nearest unvisited known vertex; ties by smaller id."""

    def choose(self, obs) -> int:
        _, dist = scaled_distances(obs)
        return min((d, v) for v, d in dist.items() if not obs.is_visited(v))[1]


class DFSPolicy:
    """Depth-first over first-visit edges, smallest id first, backtracking along the DFS tree."""

    def __init__(self) -> None:
        self._stack: list[int] = []

    def choose(self, obs) -> list[int]:
        if not self._stack:
            self._stack.append(obs.current)
        top = self._stack[-1]
        if top != obs.current:
            raise ExplorationError("DFS policy lost track of the searcher")
        fresh = sorted(v for v in obs.neighbors(top) if not obs.is_visited(v))
        if fresh:
            self._stack.append(fresh[0])
            return [top, fresh[0]]
        self._stack.pop()
        if not self._stack:
            raise ExplorationError("DFS stack exhausted with unvisited vertices left")
        return [top, self._stack[-1]]


class RandomPolicy:
    """Uniformly random unvisited known vertex, reached by the known shortest path."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, obs) -> int:
        return self._rng.choice(sorted(obs.frontier))


def greedy_explore(session: Session) -> Tour:
    return run_policy(session, GreedyPolicy())


def dfs_explore(session: Session) -> Tour:
    return run_policy(session, DFSPolicy())


def random_explore(session: Session, seed: int) -> Tour:
    return run_policy(session, RandomPolicy(seed))


def make_policy(name: str, graph: Graph | None = None, start: int | None = None) -> ExplorerPolicy:
    """Policy from its name: ``greedy``, ``dfs``, ``random:<seed>`` or ``advice:<scheme>``.

    Advice policies need the graph and start vertex so the oracle can write the advice.
    """
    if name == "greedy":
        return GreedyPolicy()
    if name == "dfs":
        return DFSPolicy()
    kind, _, arg = name.partition(":")
    if kind == "random":
        try:
            return RandomPolicy(int(arg))
        except ValueError:
            raise ValueError(f"bad random explorer name {name!r}; expected random:<seed>") from None
    if kind == "advice":
        from . import advice

        if graph is None or start is None:
            raise ValueError("advice explorers need the graph and the start vertex")
        return advice.advised_policy(arg, graph, start)
    raise ValueError(f"unknown explorer {name!r}")


def policy_factory(name: str) -> Callable[[], ExplorerPolicy]:
    """Fresh-policy factory for graph-independent explorers (the adversary replays from scratch)."""
    make_policy(name)  # validate eagerly
    return lambda: make_policy(name)


# -- charging audit -------------------------------------------------------------


@dataclass(frozen=True)
class ChargedEdge:
    edge: tuple[int, int]
    weight: Fraction


@dataclass(frozen=True)
class ChargedPath:
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class StepRecord:
    step_index: int
    target: int
    path_taken: tuple[int, ...]
    step_cost: Fraction
    charge: ChargedEdge | ChargedPath


@dataclass
class ChargeReport:
    records: list[StepRecord]
    edges_charged: dict[tuple[int, int], int] = field(default_factory=dict)
    paths_charged: int = 0
    total_cost: Fraction = Fraction(0)


def split_steps(trace: Sequence[MoveEvent], start: int) -> list[list[MoveEvent]]:
    """Cut a trace into steps: each ends on a first visit, the last one on the return to start."""
    visited = {start}
    steps: list[list[MoveEvent]] = []
    current: list[MoveEvent] = []
    for ev in trace:
        current.append(ev)
        if ev.dst not in visited:
            visited.add(ev.dst)
            steps.append(current)
            current = []
    if current:
        steps.append(current)
    return steps


def charging_audit(trace: Sequence[MoveEvent], graph: Graph, start: int | None = None) -> ChargeReport:
    """Recompute the edge/path charges of a greedy trace and check the amortized accounting.

    Raises :class:`AuditViolation` when a step charged to an edge costs more than
    that edge, an edge is charged twice, more than two paths are charged, the
    second path charge is not the final return, or the total exceeds three times
    the edge-weight sum.
    """
    if not trace:
        raise AuditViolation("empty trace")
    if start is None:
        start = trace[0].src
    steps = split_steps(trace, start)
    visited = {start}
    report = ChargeReport(records=[])
    for idx, moves in enumerate(steps, start=1):
        v = moves[0].src
        for ev in moves:
            if not graph.has_edge(ev.src, ev.dst) or graph.weight(ev.src, ev.dst) != ev.weight:
                raise AuditViolation(f"move {ev} is not an edge of the graph", idx)
        cost = sum((ev.weight for ev in moves), Fraction(0))
        path = (v,) + tuple(ev.dst for ev in moves)
        fresh = [(w, nb) for nb, w in graph.neighbors(v).items() if nb not in visited]
        if fresh:
            w, nb = min(fresh)
            key = edge_key(v, nb)
            if cost > w:
                raise AuditViolation(f"step cost {cost} exceeds charged edge {key} of weight {w}", idx)
            if key in report.edges_charged:
                raise AuditViolation(f"edge {key} charged twice", idx)
            report.edges_charged[key] = 1
            charge: ChargedEdge | ChargedPath = ChargedEdge(key, w)
        else:
            report.paths_charged += 1
            if report.paths_charged > 2:
                raise AuditViolation("more than two path charges", idx)
            if report.paths_charged == 2 and idx != len(steps):
                raise AuditViolation("second path charge is not the final return", idx)
            charge = ChargedPath(tuple(edge_key(ev.src, ev.dst) for ev in moves))
        report.records.append(StepRecord(idx, moves[-1].dst, path, cost, charge))
        report.total_cost += cost
        visited.add(moves[-1].dst)
    if steps[-1][-1].dst != start or len(visited) != graph.n:
        raise AuditViolation("trace is not a complete closed tour")
    if report.total_cost > 3 * graph.total_weight():
        raise AuditViolation(f"total cost {report.total_cost} exceeds 3x the edge-weight sum")
    return report
