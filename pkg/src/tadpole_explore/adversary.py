"""Adaptive adversary that grows a unit-weight tadpole against any explorer.

The searcher starts on a degree-2 vertex ``s``. Two paths grow lazily until the
searcher reaches hop distance ``k`` on one of them; that vertex becomes the
junction ``t`` and the opposite path's deepest visited vertex is ``v_{t1}``.
From ``t`` two further paths grow, and the opposite path keeps growing from
``v_{t1}``. Exactly ``k`` vertices sit between ``t`` and ``v_{t1}`` on the cycle;
as soon as every cycle vertex is visible, the adversary decides which ``t``-path
closes the cycle (the deeper one, called ``p``), caps the other (``q``) one vertex
past its deepest visited vertex as the stem, and shows the whole graph.

Cases, by what happened when the cycle became fully visible:

* ``case1``  -- the opposite path was never extended past ``v_{t1}``; the searcher
  stands on ``p_{k-2}`` and the stem has ``k'+1`` vertices.
* ``case2a`` -- the searcher came round through ``s`` and stands on ``p_{k1+3}``.
* ``case2b`` -- the searcher stands on ``p_{k1}`` after having been round the other side.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .explorers import ExplorerPolicy, make_policy, run_policy
from .fog_env import GraphWorld, MoveEvent, Session
from .graph_core import Graph, decompose_tadpole
from .optimal_oracle import opt_cost_tadpole

ONE = Fraction(1)


class AccountingMismatch(AssertionError):
    pass


def lb_ratio_bound(k: int, t1: int = 0, k_prime: int = 0) -> Fraction:
    """Lower bound ``2 - 4/(3 + 2k + t1 + 2k')`` on the ratio forced by the game."""
    if k < 4:
        raise ValueError(f"k must be >= 4, got {k}")
    if not 0 <= t1 < k:
        raise ValueError(f"need 0 <= t1 < k, got t1={t1}")
    if not 0 <= k_prime < k:
        raise ValueError(f"need 0 <= k' < k, got k'={k_prime}")
    return 2 - Fraction(4, 3 + 2 * k + t1 + 2 * k_prime)


def min_k_for_epsilon(eps: Fraction) -> int:
    """Smallest ``k >= 4`` with ``2 - 4/(3 + 2k) > 2 - eps``."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    # 4/(3+2k) < eps  <=>  k > 2/eps - 3/2
    threshold = 2 / eps - Fraction(3, 2)
    k = math.floor(threshold) + 1
    return max(k, 4)


@dataclass
class AdversaryState:
    phase: str = "pre-junction"
    k: int = 4
    t1: int | None = None
    u_chain: int = 0
    v_chain: int = 0
    p_len: int = 0
    q_len: int = 0
    case: str | None = None
    k_prime: int | None = None
    k1: int | None = None
    k2: int | None = None
    p_side: str | None = None


class LowerBoundAdversary:
    """The game's hidden world: answers reveals on the fly and commits the tadpole once."""

    def __init__(self, k: int):
        if k < 4:
            raise ValueError(f"k must be >= 4, got {k}")
        self.k = k
        self.state = AdversaryState(k=k)
        self._adj: dict[int, dict[int, Fraction]] = {}
        self._next_id = 0
        self.answers: dict[int, dict[int, Fraction]] = {}
        self.committed: Graph | None = None
        self._pending: list[tuple[int, int, Fraction]] = []

        self.s = self._new_vertex()
        # pre-junction paths, element d-1 sits at distance d from s
        self.chains: list[list[int]] = [[self._new_vertex()], [self._new_vertex()]]
        self.depth = [0, 0]
        for chain in self.chains:
            self._link(self.s, chain[0])
        self.junction: int | None = None
        self.u_index: int | None = None
        # post-junction paths: two from t, and the opposite path continued past v_{t1}
        self.t_paths: list[list[int]] = []
        self.t_depth = [0, 0]
        self.v_ext: list[int] = []
        self.v_depth = 0
        self.where: dict[int, tuple[str, int, int]] = {}
        for c, chain in enumerate(self.chains):
            self.where[chain[0]] = ("pre", c, 1)

    def _new_vertex(self) -> int:
        v = self._next_id
        self._next_id += 1
        self._adj[v] = {}
        return v

    def _link(self, a: int, b: int) -> None:
        self._adj[a][b] = ONE
        self._adj[b][a] = ONE

    def vertices(self) -> frozenset[int]:
        if self.committed is not None:
            return self.committed.vertices
        return frozenset(self._adj)

    def announcements(self) -> list[tuple[int, int, Fraction]]:
        out, self._pending = self._pending, []
        return out

    def reveal(self, v: int) -> Mapping[int, Fraction]:
        if v in self.answers:
            raise RuntimeError(f"vertex {v} revealed twice")
        if self.committed is None and v != self.s:
            kind, c, d = self.where[v]
            if kind == "pre":
                self._visit_pre(v, c, d)
            elif kind == "t":
                self.t_depth[c] = d
                self._visit_post(v, moved="t", path=c)
            else:
                self.v_depth = d
                self._visit_post(v, moved="v", path=None)
        answer = dict(self.committed.neighbors(v) if self.committed else self._adj[v])
        self.answers[v] = answer
        return answer

    def _visit_pre(self, v: int, c: int, d: int) -> None:
        self.depth[c] = d
        st = self.state
        if d < self.k:
            nxt = self._new_vertex()
            self._link(v, nxt)
            self.chains[c].append(nxt)
            self.where[nxt] = ("pre", c, d + 1)
            st.u_chain, st.v_chain = max(self.depth), min(self.depth)
            return
        # distance k reached: v becomes the junction
        self.junction = v
        self.u_index = c
        other = 1 - c
        t1 = self.depth[other]
        st.phase, st.t1 = "post-junction", t1
        st.u_chain, st.v_chain = self.k, t1
        for side in range(2):
            head = self._new_vertex()
            self._link(v, head)
            self.t_paths.append([head])
            self.where[head] = ("t", side, 1)
        # v_{t1+1} already exists as the frontier vertex of the opposite path
        self.v_ext = [self.chains[other][t1]]
        self.where[self.v_ext[0]] = ("v", 0, 1)

    def _visit_post(self, v: int, moved: str, path: int | None) -> None:
        st = self.state
        k = self.k
        st.p_len, st.q_len = self.t_depth
        hit = [c for c in range(2) if self.t_depth[c] + self.v_depth + 2 >= k]
        if not hit:
            if moved == "t":
                d = self.t_depth[path]
                nxt = self._new_vertex()
                self._link(v, nxt)
                self.t_paths[path].append(nxt)
                self.where[nxt] = ("t", path, d + 1)
            else:
                nxt = self._new_vertex()
                self._link(v, nxt)
                self.v_ext.append(nxt)
                self.where[nxt] = ("v", 0, self.v_depth + 1)
            return
        # every cycle vertex is now visible: pick p as the deeper t-path (ties: first)
        p = max(range(2), key=lambda c: (self.t_depth[c], -c))
        q = 1 - p
        k1, k2 = self.t_depth[p], self.t_depth[q]
        if self.v_depth == 0:
            st.case, st.k_prime = "case1", k2
        else:
            st.case = "case2a" if moved == "v" else "case2b"
            st.k1, st.k2 = k1, k2
        st.p_side = "first" if p == 0 else "second"
        st.p_len, st.q_len = k1, k2
        self._commit(p, q)

    def _commit(self, p: int, q: int) -> None:
        k1 = self.t_depth[p]
        p_path = self.t_paths[p]
        while len(p_path) < k1 + 1:
            nxt = self._new_vertex()
            self._link(p_path[-1], nxt)
            p_path.append(nxt)
        while len(self.v_ext) < self.v_depth + 1:
            nxt = self._new_vertex()
            self._link(self.v_ext[-1], nxt)
            self.v_ext.append(nxt)
        # p_{k1+1} meets p_{k1+2} = the last visible vertex past v_{t1}
        self._link(p_path[-1], self.v_ext[-1])
        edges = [(a, b, w) for a, nb in self._adj.items() for b, w in nb.items() if a < b]
        self.committed = Graph(edges)
        self.state.phase = "revealed"
        self._pending = edges


@dataclass
class GameResult:
    explorer: str
    k: int
    case: str
    t1: int
    params: dict[str, int]
    explorer_cost: Fraction
    opt_cost: Fraction
    transcript: list[MoveEvent] = field(repr=False)
    graph: Graph = field(repr=False)
    p_side: str = "first"
    answers: dict[int, dict[int, Fraction]] = field(default_factory=dict, repr=False)

    @property
    def ratio(self) -> Fraction:
        return self.explorer_cost / self.opt_cost

    @property
    def stem_param(self) -> int:
        return self.params["k_prime"] if self.case == "case1" else self.params["k2"]

    @property
    def bound(self) -> Fraction:
        return lb_ratio_bound(self.k)

    @property
    def aux(self) -> str:
        if self.case == "case1":
            return str(self.params["k_prime"])
        return f"{self.params['k1']}|{self.params['k2']}"


def adversary_game(explorer: ExplorerPolicy | str, k: int, move_budget: int | None = None) -> GameResult:
    """Play the lower-bound game; ``explorer`` is a policy or an explorer name."""
    name = explorer if isinstance(explorer, str) else type(explorer).__name__
    policy = make_policy(explorer) if isinstance(explorer, str) else explorer
    adversary = LowerBoundAdversary(k)
    session = Session(adversary, adversary.s)
    if move_budget is None:
        move_budget = 100 * k * k
    tour = run_policy(session, policy, max_moves=move_budget)
    st = adversary.state
    if adversary.committed is None or st.case is None:
        raise RuntimeError("game ended before the adversary committed a graph")
    if st.case == "case1":
        params = {"k_prime": st.k_prime}
        stem = st.k_prime
    else:
        params = {"k1": st.k1, "k2": st.k2}
        stem = st.k2
    return GameResult(
        explorer=name,
        k=k,
        case=st.case,
        t1=st.t1,
        params=params,
        explorer_cost=tour.total_cost,
        opt_cost=Fraction(2 * k + st.t1 + 2 * (stem + 1) + 1),
        transcript=list(session.trace),
        graph=adversary.committed,
        p_side=st.p_side,
        answers=adversary.answers,
    )


def finish_slack(result: GameResult) -> int:
    """Edges the stated case bound over-counts when ``t1 < 3``.

    Cases 1 and 2b assume the searcher goes home along the junction side (``k``
    edges). Leaving by the far side instead costs ``k + t1 + 1`` but saves the
    walk back to ``t``: the net saving is ``3 - t1`` edges.
    """
    if result.case in ("case1", "case2b"):
        return max(0, 3 - result.t1)
    return 0


def case_cost_bound(result: GameResult, corrected: bool = False) -> int:
    """Minimum number of unit edges any searcher pays in the recorded case.

    With ``corrected`` the far-side finish is allowed for (see :func:`finish_slack`).
    """
    k, t1, p = result.k, result.t1, result.params
    if result.case == "case1":
        need = 4 * k + 2 * t1 + 4 * p["k_prime"] + 2
    elif result.case == "case2a":
        need = 4 * k + 3 * t1 + 2 * p["k1"] + 4 * p["k2"] + 3
    elif result.case == "case2b":
        need = 6 * k + 4 * t1 + 4 * p["k2"] + 2
    else:
        raise AccountingMismatch(f"unknown case {result.case!r}")
    return need - finish_slack(result) if corrected else need


def verify_case_accounting(result: GameResult, corrected: bool = False) -> bool:
    """Check cost and optimum of a finished game against the case analysis.

    Raises :class:`AccountingMismatch` naming the violated relation. By default the
    stated case bounds are used; ``corrected=True`` uses the bounds that survive
    the far-side finish, whose ratio floor is ``2 - (4 + slack)/OPT``.
    """
    k, t1, stem = result.k, result.t1, result.stem_param
    if not 0 <= t1 < k:
        raise AccountingMismatch(f"t1={t1} outside [0, k)")
    if result.case == "case1" and not 0 <= stem < k - 2:
        raise AccountingMismatch(f"k'={stem} outside [0, k-2)")
    if result.case != "case1":
        k1, k2 = result.params["k1"], result.params["k2"]
        if not 0 <= k2 <= k1 < k - 2:
            raise AccountingMismatch(f"need 0 <= k2 <= k1 < k-2, got k1={k1}, k2={k2}")
    need = case_cost_bound(result, corrected)
    if result.explorer_cost < need:
        raise AccountingMismatch(
            f"{result.case}: explorer cost {result.explorer_cost} < case bound {need}"
        )
    opt = 2 * k + t1 + 2 * stem + 3
    if result.opt_cost != opt:
        raise AccountingMismatch(f"OPT {result.opt_cost} != 2k + t1 + 2*stem + 3 = {opt}")
    d = decompose_tadpole(result.graph)
    if d.i != 2 * k + t1 + 1 or d.j != stem + 1:
        raise AccountingMismatch(
            f"committed tadpole is T_{{{d.i},{d.j}}}, expected T_{{{2 * k + t1 + 1},{stem + 1}}}"
        )
    if opt_cost_tadpole(d).cost != opt:
        raise AccountingMismatch("closed-form optimum disagrees with the case OPT")
    floor = 2 - Fraction(4 + finish_slack(result), opt) if corrected else lb_ratio_bound(k, t1, stem)
    if result.ratio < floor:
        raise AccountingMismatch(f"ratio {result.ratio} below {floor}")
    return True


def replay_check(result: GameResult) -> None:
    """Every lazy answer matches the committed graph and the transcript replays on it."""
    g = result.graph
    for v, answer in result.answers.items():
        if answer != g.neighbors(v):
            raise AccountingMismatch(f"answer for vertex {v} disagrees with the committed graph")
    session = Session(GraphWorld(g), result.transcript[0].src)
    for ev in result.transcript:
        session.move_to(ev.dst)
        if session.trace[-1].weight != ev.weight:
            raise AccountingMismatch(f"move {ev} replays with a different weight")
    if not session.is_complete() or session.observation.cost_so_far != result.explorer_cost:
        raise AccountingMismatch("transcript does not replay to the same closed tour")
