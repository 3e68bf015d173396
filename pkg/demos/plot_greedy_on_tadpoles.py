"""
Greedy exploration of a tadpole
===============================

A searcher starts somewhere on a tadpole it cannot see. Every visit shows the
neighbours of the current vertex and the weights of the edges to them. Greedy
always walks to the cheapest-to-reach unvisited vertex it knows about.
"""

from fractions import Fraction

from tadpole_explore import charging_audit, greedy_explore, make_tadpole, new_session, optimal_cost
from tadpole_explore.fog_env import trace_to_csv

# a 5-cycle with one expensive edge, plus a 3-vertex stem hanging off vertex 0
g = make_tadpole(5, 3, [1, 2, Fraction(1, 2), 20, 1, 3, 1, Fraction(5, 2)])
opt = optimal_cost(g)
print("optimum:", opt.cost, opt.shape, "skipping", opt.shape.e_infinity)

# explore from every start and compare with the optimum
for start in sorted(g.vertices):
    session = new_session(g, start)
    tour = greedy_explore(session)
    print(f"start {start}: cost {tour.total_cost} ratio {float(tour.total_cost / opt.cost):.3f}")

# the trace of one run, as the CLI would write it
session = new_session(g, 6)
greedy_explore(session)
print(trace_to_csv(session.trace))

# every step is paid for by a distinct edge, except at most two "path" steps
report = charging_audit(session.trace, g)
for rec in report.records:
    print(rec.step_index, rec.path_taken, rec.step_cost, type(rec.charge).__name__)
print("path charges:", report.paths_charged, "total:", report.total_cost, "3x edges:", 3 * g.total_weight())
