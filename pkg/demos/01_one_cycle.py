#!/usr/bin/env python3
"""Follow one switching cycle slot by slot.

Two queues hold the medium and two wait.  With beta = inf an active queue
only offers to release once it is empty, so the cycle ends when the slower
queue drains.  The faster one sits idle in the meantime.
"""

import math

import numpy as np

from lingering import ModelParams, RngStream, SystemState, trace_cycles


def main():
    params = ModelParams.standard(0.9, beta=math.inf)
    start = SystemState(active=(400, 400), inactive=(0, 0))
    rows = trace_cycles(start, 1, params, RngStream(3), max_slots=200_000)

    slot, queue, group, length = rows.slot, rows.queue, rows.group, rows.length
    active = group == 1
    print(f"cycle length T* = {slot.max() + 1} slots")
    for q in (0, 1):
        path = length[active & (queue == q)]
        empty = np.flatnonzero(path == 0)
        first = empty[0] if empty.size else None
        print(f"queue {q}: drains at slot {first}, idle for {np.sum(path == 0)} slots")

    waiting = length[~active]
    print(f"waiting group ends with {waiting[-2:].tolist()} packets")
    print("the idle stretch is of order sqrt(400) = 20 slots, times a constant")


if __name__ == "__main__":
    main()
