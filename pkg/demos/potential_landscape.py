#!/usr/bin/env python3
"""Walk through the double-well confinement landscape.

The device potential is two quartic half-wells joined C2-continuously at
x = 0, a Gaussian barrier bump of amplitude xi on top of the junction, and
a parabolic transverse channel.  This demo prints the derived constants,
verifies the junction constraints analytically, shows how tilt (epsilon)
and barrier (xi) reshape the profile, and draws an ASCII cross-section.
"""

import numpy as np

from dqdsim import (
    DeviceParams,
    central_curvatures,
    constraint_report,
    derive_constants,
    eval_potential,
    quartic_pieces,
    validate_params,
)


def show_constants(params):
    c = derive_constants(params)
    print(f"device: a = {params.a:g} nm, hbar_omega0 = {params.hbar_omega0:g} meV, "
          f"m* = {params.m_eff:g} m_e, kappa = {params.eps_r:g}")
    print(f"  orbital radius a_B        = {c.fock_darwin_radius:.6f} nm")
    print(f"  quartic barrier height C  = {c.barrier_height:.8f} meV")
    print(f"  kinetic scale hbar^2/2m*  = {c.kinetic_scale:.6f} meV nm^2")
    print(f"  Coulomb scale e^2/4pi eps = {c.coulomb_scale:.6f} meV nm")
    print()


def show_constraints(params):
    print(f"junction constraints at eps = {params.epsilon:g}, xi = {params.xi:g} "
          "(relative residuals):")
    for name, value, expected, rel in constraint_report(params):
        print(f"  {name:<34s} value = {value:+.6e}  expected = {expected:+.6e}"
              f"  rel = {rel:.2e}")
    report = validate_params(params)
    print(f"  barrier-existence check: {'OK' if report.ok else 'VIOLATED'}")
    print()


def show_pieces(params):
    left, right = quartic_pieces(params)
    print("quartic pieces  V(u) = -mu + (k2/2) u^2 + c3 u^3 + c4 u^4,  u = x - center:")
    for label, piece in (("left", left), ("right", right)):
        print(f"  {label:>5s}: center = {piece.center:+7.1f} nm, mu = {piece.mu:+.6e}, "
              f"k2 = {piece.k2:.6e}, c3 = {piece.c3:+.6e}, c4 = {piece.c4:+.6e}")
    k_left, k_right = central_curvatures(params)
    print(f"  one-sided curvature at x=0 (must be <= 0 for a barrier): "
          f"{k_left:+.3e} / {k_right:+.3e} meV/nm^2")
    print()


def ascii_profile(params, width=72, height=16, x_max=220.0):
    xs = np.linspace(-x_max, x_max, width)
    v = eval_potential(xs, 0.0, params)
    lo, hi = float(v.min()), float(v.max())
    rows = [[" "] * width for _ in range(height)]
    for col, val in enumerate(v):
        row = int((val - lo) / (hi - lo) * (height - 1)) if hi > lo else 0
        rows[height - 1 - row][col] = "*"
    print(f"V(x, 0) for eps = {params.epsilon:g} meV, xi = {params.xi:g} meV "
          f"(x in [{-x_max:g}, {x_max:g}] nm, V in [{lo:.4f}, {hi:.4f}] meV)")
    for line in rows:
        print("  |" + "".join(line) + "|")
    print()


def main():
    base = DeviceParams()
    show_constants(base)
    show_pieces(base)
    show_constraints(base)

    print("=== how the controls reshape the landscape ===\n")
    for eps, xi in [(0.0, 1.3), (0.7, 1.3), (0.0, 0.5)]:
        p = DeviceParams(epsilon=eps, xi=xi)
        ascii_profile(p)
        mins = {s: float(eval_potential(np.array([s * p.a]), 0.0, p)[0]) for s in (-1, 1)}
        top = float(eval_potential(np.array([0.0]), 0.0, p)[0])
        print(f"  well bottoms V(-a) = {mins[-1]:+.4f}, V(+a) = {mins[1]:+.4f} meV, "
              f"barrier top V(0) = {top:+.4f} meV")
        show_constraints(p)


if __name__ == "__main__":
    main()
