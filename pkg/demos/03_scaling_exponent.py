#!/usr/bin/env python3
"""Fit the scaling exponent from a short load sweep.

F(rho) = log E|Q| / log(1/(1-rho)) behaves like alpha + log(c) / x with
x = log(1/(1-rho)).  A least-squares fit of F against 1/x over the points
right of the minimum of F gives alpha.  The grid here stops well short of
heavy traffic to keep the run short, so expect a rough answer.
"""

from lingering import default_rho_grid, sweep_alpha


def main():
    grid = default_rho_grid(8, 1.5, 4.0)
    for beta in (0.5, 2.0):
        points, fit = sweep_alpha(beta, grid, n_epochs=8000, seed=2)
        print(f"beta = {beta}")
        for p in points:
            print(f"  rho={p.rho:.4f}  mean={p.mean:10.1f}  F={p.F:.3f}")
        print(f"  alpha_hat = {fit.alpha_hat:.3f} (fit from point {fit.window_start})")
        if beta < 1:
            print(f"  beta * alpha_hat = {beta * fit.alpha_hat:.3f} (close to 1 for small beta)")


if __name__ == "__main__":
    main()
