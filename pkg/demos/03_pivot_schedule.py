"""Modified modulus pivot strategy on a ring of workers.

Prints the per-step block pairs for p = 3 over two sweeps and summarizes the
coverage of one sweep.  Extra-block slots (marked *) keep every worker busy
at every step; they revisit pairs already met on an antidiagonal.
"""

from collections import Counter

from pjacobi.strategy import all_block_pairs, steps_per_sweep, sweep_schedule

p = 3
sched = sweep_schedule(p, nsweeps=2)
print(f"p = {p}, {steps_per_sweep(p)} steps per sweep")
for sweep in (1, 2):
    print(f"\nsweep {sweep}")
    for step in range(steps_per_sweep(p)):
        cells = [e for e in sched if e.sweep == sweep and e.step == step]
        text = "  ".join(f"r{e.rank}:({e.i_blk},{e.j_blk}){'*' if e.extra else ' '}->{e.snd_rnk}"
                         for e in cells)
        print(f"  step {step}: {text}")

one = sweep_schedule(p)
regular = Counter(tuple(sorted((e.i_blk, e.j_blk))) for e in one if not e.extra)
extra = [tuple(sorted((e.i_blk, e.j_blk))) for e in one if e.extra]
print(f"\nregular slots cover all {len(all_block_pairs(p))} pairs once:",
      set(regular) == all_block_pairs(p) and set(regular.values()) == {1})
print("extra slots revisit:", extra)
