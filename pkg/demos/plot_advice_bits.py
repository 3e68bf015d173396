"""
How much advice is enough
=========================

An oracle that sees the whole graph writes a few bits before the searcher
starts. A logarithmic number of bits is enough to walk an optimal tour on
cycles and tadpoles; two bits already pin down where the stem is.
"""

from tadpole_explore import (
    advise_2bit,
    advise_cycle,
    advise_tadpole,
    explore_2bit,
    explore_cycle_with_advice,
    explore_tadpole_with_advice,
    make_cycle,
    make_tadpole,
    new_session,
    optimal_cost,
)
from tadpole_explore.advice import reveal_order

cycle = make_cycle(6, [2, 1, 1, 1, 1, 9])
print("reveal order from 0:", [e.key for e in reveal_order(cycle, 0)])
for start in range(6):
    bits = advise_cycle(cycle, start)
    tour = explore_cycle_with_advice(new_session(cycle, start), bits)
    print(f"cycle start {start}: advice {bits} cost {tour.total_cost} opt {optimal_cost(cycle).cost}")

tadpole = make_tadpole(5, 2, [1, 1, 1, 1, 1, 4, 4])
for start in sorted(tadpole.vertices):
    bits = advise_tadpole(tadpole, start)
    tour = explore_tadpole_with_advice(new_session(tadpole, start), bits)
    two = advise_2bit(tadpole, start)
    tour2 = explore_2bit(new_session(tadpole, start), two)
    print(f"tadpole start {start}: {bits} -> {tour.total_cost} (opt {optimal_cost(tadpole).cost}); "
          f"2 bits {two} -> {tour2.total_cost}")
