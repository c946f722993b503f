#!/usr/bin/env python3
"""Stationary mean of the embedded chain as the load approaches one.

For beta = 2 the mean grows roughly like (1 - rho) ** -2 instead of the
(1 - rho) ** -1 of a work-conserving system.  The ratio F printed below is
log(mean) / log(1 / (1 - rho)); it creeps towards 2.
"""

from lingering import ModelParams, RngStream, SystemState, scaling_F, simulate_chain, stationary_mean


def main():
    for i, rho in enumerate((0.8, 0.9, 0.95, 0.98)):
        params = ModelParams.standard(rho, beta=2.0)
        chain = simulate_chain(SystemState.empty(2), 30_000, params, RngStream(11, i))
        est = stationary_mean(chain.norms)
        print(f"rho={rho:<5} mean={est.mean:9.1f} +- {est.ci_half_width:6.1f}   "
              f"F={scaling_F(est.mean, rho):.3f}")


if __name__ == "__main__":
    main()
