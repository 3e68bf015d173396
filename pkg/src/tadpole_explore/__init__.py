"""Online exploration of weighted cycles and tadpole graphs under fog of war.

Exact rational arithmetic throughout. The pieces:

* :mod:`.graph_core` -- graphs, tadpole/cycle builders and the text format
* :mod:`.fog_env` -- sessions that reveal a hidden graph one visit at a time
* :mod:`.explorers` -- greedy, depth-first and random explorers, plus the charging audit
* :mod:`.optimal_oracle` -- closed-form optimum and a Held-Karp cross-check
* :mod:`.adversary` -- the lower-bound game that builds a bad tadpole on the fly
* :mod:`.advice` -- bit-exact advice and the explorers that read it
* :mod:`.harness` / :mod:`.cli` -- experiments, CSV output and the command line
"""

from .adversary import adversary_game, lb_ratio_bound, min_k_for_epsilon, verify_case_accounting
from .advice import (
    AdviceMismatch,
    AdviceString,
    advise_2bit,
    advise_cycle,
    advise_tadpole,
    explore_2bit,
    explore_cycle_with_advice,
    explore_tadpole_with_advice,
)
from .explorers import charging_audit, dfs_explore, greedy_explore, random_explore
from .fog_env import Session, Tour, new_session
from .graph_core import Graph, decompose_tadpole, make_cycle, make_tadpole, parse_graph, serialize_graph
from .optimal_oracle import brute_force_opt, opt_cost_cycle, opt_cost_tadpole, optimal_cost

__version__ = "0.1.0"

__all__ = [
    "AdviceMismatch",
    "AdviceString",
    "Graph",
    "Session",
    "Tour",
    "adversary_game",
    "advise_2bit",
    "advise_cycle",
    "advise_tadpole",
    "brute_force_opt",
    "charging_audit",
    "decompose_tadpole",
    "dfs_explore",
    "explore_2bit",
    "explore_cycle_with_advice",
    "explore_tadpole_with_advice",
    "greedy_explore",
    "lb_ratio_bound",
    "make_cycle",
    "make_tadpole",
    "min_k_for_epsilon",
    "new_session",
    "opt_cost_cycle",
    "opt_cost_tadpole",
    "optimal_cost",
    "parse_graph",
    "random_explore",
    "serialize_graph",
    "verify_case_accounting",
]
