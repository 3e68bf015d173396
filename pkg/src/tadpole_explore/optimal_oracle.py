"""Optimal closed-tour costs: closed forms for tadpoles and cycles, and a Held-Karp oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph_core import (
    Edge,
    Graph,
    NotACycle,
    TadpoleDecomposition,
    cycle_edges,
    decompose_tadpole,
    is_cycle,
)

MAX_BRUTE_FORCE_N = 14


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Shape:
    """``kind`` 1: cycle once, stem twice. ``kind`` 2: everything except ``e_infinity`` twice."""

    kind: int
    e_infinity: Edge | None = None

    def __str__(self) -> str:
        return f"shape{self.kind}"


@dataclass(frozen=True)
class OptCost:
    cost: Fraction
    shape: Shape


def _shape_of_cycle(edges: tuple[Edge, ...]) -> Shape:
    total = sum((e.weight for e in edges), Fraction(0))
    # heaviest edge, ties to the lexicographically smallest endpoint pair
    heaviest = min(edges, key=lambda e: (-e.weight, e.key))
    if heaviest.weight > total - heaviest.weight:
        return Shape(2, Edge(*heaviest.key, heaviest.weight))
    return Shape(1)


def classify_shape(d: TadpoleDecomposition) -> Shape:
    return _shape_of_cycle(d.cycle_edges)


def opt_cost_tadpole(d: TadpoleDecomposition) -> OptCost:
    shape = classify_shape(d)
    if shape.kind == 1:
        cost = 2 * d.stem_weight + d.cycle_weight
    else:
        cost = 2 * (d.stem_weight + d.cycle_weight - shape.e_infinity.weight)
    return OptCost(cost, shape)


def opt_cost_cycle(g: Graph) -> OptCost:
    if not is_cycle(g):
        raise NotACycle("graph is not a simple cycle")
    edges = cycle_edges(g)
    shape = _shape_of_cycle(edges)
    total = sum((e.weight for e in edges), Fraction(0))
    cost = total if shape.kind == 1 else 2 * (total - shape.e_infinity.weight)
    return OptCost(cost, shape)


def metric_closure(g: Graph) -> tuple[list[int], list[list[Fraction]]]:
    """All-pairs shortest-path distances (Floyd-Warshall), vertices in sorted order."""
    order = sorted(g.vertices)
    index = {v: k for k, v in enumerate(order)}
    n = len(order)
    inf = None
    dist: list[list[Fraction | None]] = [[inf] * n for _ in range(n)]
    for k in range(n):
        dist[k][k] = Fraction(0)
    for e in g.edges():
        a, b = index[e.u], index[e.v]
        dist[a][b] = dist[b][a] = e.weight
    for k in range(n):
        dk = dist[k]
        for a in range(n):
            dak = dist[a][k]
            if dak is None:
                continue
            da = dist[a]
            for b in range(n):
                if dk[b] is None:
                    continue
                cand = dak + dk[b]
                if da[b] is None or cand < da[b]:
                    da[b] = cand
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert dist[a][c] <= dist[a][b] + dist[b][c], "closure violates the triangle inequality"
    return order, dist  # type: ignore[return-value]


def brute_force_opt(g: Graph, anchor: int | None = None) -> Fraction:
    """Minimum closed-walk cost visiting every vertex: exact TSP on the metric closure.

    Subset DP over integer-scaled weights; ``anchor`` picks the fixed tour start.
    """
    n = g.n
    if n > MAX_BRUTE_FORCE_N:
        raise TooLarge(f"brute force is limited to n <= {MAX_BRUTE_FORCE_N}, got {n}")
    order, dist = metric_closure(g)
    scale = math.lcm(*(d.denominator for row in dist for d in row))
    idist = [[int(d * scale) for d in row] for row in dist]
    a = order.index(anchor) if anchor is not None else 0
    rest = [k for k in range(n) if k != a]
    r = len(rest)
    full = (1 << r) - 1
    big = float("inf")
    # best[mask][x]: cheapest path from the anchor through the rest-vertices in mask, ending at rest[x]
    best = [[big] * r for _ in range(1 << r)]
    for x in range(r):
        best[1 << x][x] = idist[a][rest[x]]
    for mask in range(1, 1 << r):
        row = best[mask]
        for x in range(r):
            cost = row[x]
            if cost == big or not (mask >> x) & 1:
                continue
            dx = idist[rest[x]]
            for y in range(r):
                if (mask >> y) & 1:
                    continue
                nxt = mask | (1 << y)
                cand = cost + dx[rest[y]]
                if cand < best[nxt][y]:
                    best[nxt][y] = cand
    tour = min(best[full][x] + idist[rest[x]][a] for x in range(r))
    return Fraction(tour, scale)


def optimal_cost(g: Graph) -> OptCost:
    """Closed-form optimum for a cycle or tadpole."""
    if is_cycle(g):
        return opt_cost_cycle(g)
    return opt_cost_tadpole(decompose_tadpole(g))
