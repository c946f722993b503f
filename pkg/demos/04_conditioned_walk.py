#!/usr/bin/env python3
"""Releases along a walk that never returns to zero.

Seen backwards from the moment it empties, an active queue looks like a
random walk with steps 1 - xi conditioned to stay positive.  Each visit to
height k offers a release with probability (1 + k) ** -beta.  For beta > 1
only finitely many releases happen, and often none at all.
"""

from lingering import RngStream
from lingering.oracles import release_count_distribution, sample_conditioned_walk, tail_exponent_B


def main():
    path, acc = sample_conditioned_walk(30, RngStream(1))
    print("one conditioned path:", path.tolist())
    print(f"acceptance probability of the rejection sampler ~ {acc:.2f}")

    rc = release_count_distribution(2.0, 1000, 10_000, RngStream(2))
    print(f"P(N = 0) = {rc.p_zero:.3f} +- {rc.p_zero_stderr:.3f}")
    print("P(N > n):", " ".join(f"{t:.4f}" for t in rc.tail[:6]))

    est = tail_exponent_B(2.0, 2000, 30_000, RngStream(3))
    print(f"first release time: P(B = k) ~ k^-{est.exponent_hat:.2f} (target 2)")


if __name__ == "__main__":
    main()
