"""
Playing the lower-bound adversary
=================================

The adversary builds a unit-weight tadpole while the searcher walks. It waits
until the searcher commits to one side, hides which of two paths closes the
cycle, and only decides once the searcher has seen every cycle vertex.
"""

from tadpole_explore import adversary_game, lb_ratio_bound
from tadpole_explore.adversary import case_cost_bound, finish_slack

for k in (4, 10, 50, 200):
    for name in ("greedy", "dfs", "random:0", "random:7"):
        r = adversary_game(name, k)
        print(f"k={k:3d} {name:9s} {r.case:6s} t1={r.t1:2d} aux={r.aux:6s} "
              f"ratio={float(r.ratio):.4f} bound={float(lb_ratio_bound(k)):.4f}")

# the committed graph is an ordinary tadpole
r = adversary_game("greedy", 6)
print(r.graph, "cycle+stem =", 2 * r.k + r.t1 + 1, "+", r.stem_param + 1)

# some searchers finish more cheaply than the stated case bound expects when
# t1 < 3: they go home round the far side of the cycle
r = adversary_game("random:56956", 4)
print(r.case, "t1 =", r.t1, "cost", r.explorer_cost, "stated bound", case_cost_bound(r),
      "slack", finish_slack(r), "ratio", r.ratio, "vs", lb_ratio_bound(4))
