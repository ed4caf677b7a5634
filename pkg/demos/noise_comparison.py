#!/usr/bin/env python3
"""Tilt vs barrier control under charge noise: the central comparison.

A stray charge near the device shifts the confinement and hence J.  The two
control schemes react very differently: tilt operates on the steep flank of
J(epsilon), where the same impurity displacement moves J a lot, while barrier
control operates at the detuning sweet spot (dJ/d eps = 0), where the
first-order tilt channel is switched off.  This demo quantifies both, first
along each control axis, then at matched J — the only fair comparison — via
the improvement factor chi = |dJ/J|_tilt / |dJ/J|_barrier.
"""

from dqdsim import (
    DeviceParams,
    calibrate_barrier,
    calibrate_tilt,
    default_impurity,
    delta_J,
    improvement_factor,
    matched_j_grid,
    sweep,
    sweet_spot_check,
)


def control_axis_tables(base, imp):
    print(f"impurity: point charge q = {imp.q:g} e at "
          f"({imp.x_c:g}, {imp.y_c:g}) nm\n")

    eps_values = [0.0, 0.2, 0.4, 0.6, 0.65, 0.7]
    print("tilt scheme (xi fixed at 1.3 meV), sweeping detuning:")
    print(f"  {'eps [meV]':>9s} {'J clean [GHz]':>14s} {'J w/ imp [GHz]':>15s} "
          f"{'dJ/J':>8s}")
    for r in sweep("tilt", eps_values, base, imp):
        print(f"  {r.control_mev:9.2f} {r.J_clean_ghz:14.6f} "
              f"{r.J_imp_ghz:15.6f} {r.rel_noise:8.2%}")
    print()

    xi_values = [0.5, 0.7, 0.9, 1.1, 1.3]
    print("barrier scheme (detuning held at 0), sweeping barrier amplitude:")
    print(f"  {'xi [meV]':>9s} {'J clean [GHz]':>14s} {'J w/ imp [GHz]':>15s} "
          f"{'dJ/J':>8s}")
    for r in sweep("barrier", xi_values, base, imp):
        print(f"  {r.control_mev:9.2f} {r.J_clean_ghz:14.6f} "
              f"{r.J_imp_ghz:15.6f} {r.rel_noise:8.2%}")
    print()


def sweet_spot(base):
    slope, err = sweet_spot_check(base.xi, base)
    print(f"sweet spot: dJ/d eps at eps = 0, xi = {base.xi:g} is "
          f"{slope:.3e} GHz/meV (error estimate {err:.1e})")
    print("  => barrier control always operates where the leading tilt-noise "
          "channel vanishes\n")


def matched_comparison(base, imp):
    print("matched-J comparison (each scheme calibrated to the same clean J):")
    print(f"  {'J [GHz]':>9s} {'eps* [meV]':>10s} {'xi* [meV]':>9s} "
          f"{'|dJ/J| tilt':>12s} {'|dJ/J| barrier':>15s} {'chi':>9s}")
    grid = matched_j_grid(base, n=9)
    for j in grid:
        rec = improvement_factor(float(j), imp, base)
        eps_star = calibrate_tilt(float(j))
        xi_star = calibrate_barrier(float(j))
        print(f"  {rec.J_ghz:9.4f} {eps_star:10.4f} {xi_star:9.4f} "
              f"{abs(rec.rel_tilt):12.4%} {abs(rec.rel_barrier):15.4%} "
              f"{rec.chi:9.2f}")
    print("\n  chi = 1 at the shared starting point (both schemes are the same "
          "device there)\n  and grows with J: the barrier scheme wins "
          "everywhere above it.")


def main():
    base = DeviceParams()
    imp = default_impurity(base)
    control_axis_tables(base, imp)
    sweet_spot(base)
    matched_comparison(base, imp)

    j_op = 0.242
    rec = improvement_factor(j_op, imp, base)
    print(f"\nat the J = {j_op:g} GHz operating point: "
          f"tilt noise {abs(rec.rel_tilt):.2%}, "
          f"barrier noise {abs(rec.rel_barrier):.2%}, "
          f"improvement chi = {rec.chi:.1f}")


if __name__ == "__main__":
    main()
