"""Command-line interface.

Subcommands reproduce the package's standard experiments -- two-electron
spectra, exchange-vs-control curves, impurity noise sweeps for the tilt and
barrier schemes, quality factors, and impurity-position scans -- and emit
deterministic CSV (stable column order, ``%.12g`` floats, provenance in
``#`` comment lines, no timestamps), so reruns with equal inputs are
byte-identical.  ``dqdsim validate`` runs the built-in cross-check suite.

Exit codes: 0 on success, 1 when ``validate`` finds a failing check, 2 on
bad arguments or any per-point fatal error during a sweep.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import sys

import numpy as np

from . import __version__
from . import integrals as integrals_module
from .hamiltonian import (
    AssemblyMode,
    T0_VECTOR,
    assemble_matrix,
    exchange_J,
    exchange_J_ghz,
    hubbard_exchange_estimate,
    hubbard_parameters,
    solve,
)
from .integrals import (
    build_tables,
    coulomb_element,
    i0e,
    impurity_element,
    kinetic_element,
    potential_element,
)
from .model import (
    DeviceParams,
    HBAR2_OVER_2ME,
    Impurity,
    config_to_objects,
    derive_constants,
    read_config,
    validate_params,
)
from .noise import (
    CalibrationError,
    ChiRecord,
    NoiseRecord,
    QualityModel,
    calibrate_barrier,
    calibrate_tilt,
    default_impurity,
    delta_J,
    envelope_closed,
    envelope_numeric,
    improvement_factor,
    matched_j_grid,
    quality_factor,
    sweep,
    sweet_spot_check,
)
from .orbitals import build_basis, overlap_matrix
from .potential import constraint_report, eval_potential
from .quadrature import OracleRefusal, quadrature_oracle

# ---------------------------------------------------------------------------
# formatting / output helpers
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    """Stable scalar formatting: floats as %.12g, everything else via str."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _emit(path: str | None, header_lines: list[str], fieldnames, rows) -> None:
    """Write provenance comments, a header row, and data rows as CSV."""
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        if isinstance(row, str):          # interior comment line
            buf.write(f"# {row}\n")
            continue
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _provenance(sub: str, args, base: DeviceParams, mode: AssemblyMode,
                imp: Impurity | None = None, extra: tuple[str, ...] = ()) -> list[str]:
    lines = [
        f"dqdsim {__version__}",
        f"subcommand = {sub}",
        f"mode = {mode.value}",
        f"device.a_nm = {_fmt(base.a)}",
        f"device.hbar_omega0_mev = {_fmt(base.hbar_omega0)}",
        f"device.m_eff = {_fmt(base.m_eff)}",
        f"device.eps_r = {_fmt(base.eps_r)}",
        f"control.epsilon_mev = {_fmt(base.epsilon)}",
        f"control.xi_mev = {_fmt(base.xi)}",
    ]
    if imp is not None:
        lines += [
            f"impurity.x_nm = {_fmt(imp.x_c)}",
            f"impurity.y_nm = {_fmt(imp.y_c)}",
            f"impurity.charge_e = {_fmt(imp.q)}",
        ]
    lines.append(f"seed = {args.seed}")
    lines.extend(extra)
    return lines


def _parse_range(spec: str) -> list[float]:
    """'lo:hi:step' -> inclusive grid lo, lo+step, ... (hi included
    whenever it sits on the grid to within a relative half-ulp guard)."""
    try:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise ValueError(f"expected 'lo:hi:step', got {spec!r}") from None
    if step <= 0:
        raise ValueError(f"range step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"range upper bound {hi} below lower bound {lo}")
    n = int(math.floor((hi - lo) / step + 0.5)) + 1
    vals = [lo + k * step for k in range(n)]
    guard = step * 1e-9
    return [v for v in vals if v <= hi + guard]


def _parse_xy(spec: str) -> tuple[float, float]:
    try:
        x_s, y_s = spec.split(",")
        return float(x_s), float(y_s)
    except ValueError:
        raise ValueError(f"expected 'X_nm,Y_nm', got {spec!r}") from None


def _resolve(args, *, default_impurity_wanted: bool = False,
             default_q: float = -1.0):
    """Combine defaults, --config, and flags into (params, impurity, mode)."""
    base = DeviceParams()
    imp: Impurity | None = None
    if args.config:
        base, _scheme, imp = config_to_objects(read_config(args.config))
    if args.impurity:
        x, y = _parse_xy(args.impurity)
        q = args.charge_e if args.charge_e is not None else (imp.q if imp else default_q)
        imp = Impurity(x, y, q)
    elif args.charge_e is not None and imp is not None:
        imp = Impurity(imp.x_c, imp.y_c, args.charge_e)
    if imp is None and default_impurity_wanted:
        q = args.charge_e if args.charge_e is not None else default_q
        imp = default_impurity(base, q)
    return base, imp, AssemblyMode(args.mode)


def _report_sweep_errors(records) -> int:
    """Print captured per-point failures to stderr; 2 if any, else 0."""
    bad = [r for r in records if getattr(r, "error", None)]
    for rec in bad:
        print(f"dqdsim: error at {rec.scheme} control {_fmt(rec.control_mev)} meV: "
              f"{rec.error}", file=sys.stderr)
    return 2 if bad else 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    """Lowest two-electron levels and their splitting along a detuning sweep."""
    base, imp, mode = _resolve(args)
    eps_values = _parse_range(args.eps_range or "0:1:0.01")
    xi_values = _parse_range(args.xi_range) if args.xi_range else [1.3, 1.0]
    ghz = derive_constants(base).frequency_conversion
    rows = []
    for xi in xi_values:
        for eps in eps_values:
            point = dataclasses.replace(base, epsilon=eps, xi=xi)
            res = solve(point, imp, mode)
            rows.append((eps, xi, float(res.eigenvalues[0]), float(res.eigenvalues[1]),
                         res.J, res.J * ghz))
    header = _provenance("spectrum", args, base, mode, imp, (
        f"eps_range = {args.eps_range or '0:1:0.01'}",
        f"xi_values = {','.join(_fmt(x) for x in xi_values)}",
    ))
    _emit(args.out, header,
          ("epsilon_mev", "xi_mev", "E0_mev", "E1_mev", "J_mev", "J_ghz"), rows)
    return 0


def _noise_rows(records) -> list[tuple]:
    return [(r.scheme, r.control_mev, r.J_clean_ghz, r.J_imp_ghz,
             r.delta_J_ghz, r.rel_noise) for r in records]


def cmd_exchange_tilt(args) -> int:
    """J and impurity-induced dJ versus detuning at fixed barrier."""
    base, imp, mode = _resolve(args, default_impurity_wanted=True)
    eps_values = _parse_range(args.eps_range or "0:1:0.01")
    records = sweep("tilt", eps_values, base, imp, mode, xi_fixed=base.xi)
    header = _provenance("exchange-tilt", args, base, mode, imp, (
        f"eps_range = {args.eps_range or '0:1:0.01'}",
    ))
    _emit(args.out, header, NoiseRecord.CSV_FIELDS, _noise_rows(records))
    return _report_sweep_errors(records)


def cmd_exchange_barrier(args) -> int:
    """J and impurity-induced dJ versus barrier amplitude at zero detuning.

    With the default range a finer zoom block over the low-barrier end is
    appended after an interior comment line.
    """
    base, imp, mode = _resolve(args, default_impurity_wanted=True)
    main_spec = args.xi_range or "0.5:1.3:0.01"
    records = sweep("barrier", _parse_range(main_spec), base, imp, mode)
    rows: list = _noise_rows(records)
    if not args.xi_range:
        zoom_spec = "0.5:0.6:0.002"
        zoom = sweep("barrier", _parse_range(zoom_spec), base, imp, mode)
        rows.append(f"zoom xi_range = {zoom_spec}")
        rows.extend(_noise_rows(zoom))
        records = records + zoom
    header = _provenance("exchange-barrier", args, base, mode, imp, (
        f"xi_range = {main_spec}",
    ))
    _emit(args.out, header, NoiseRecord.CSV_FIELDS, rows)
    return _report_sweep_errors(records)


def cmd_noise_compare(args) -> int:
    """Relative noise of both schemes, and their ratio chi, at matched J."""
    base, imp, mode = _resolve(args, default_impurity_wanted=True)
    grid = matched_j_grid(base, n=args.points, j_max_ghz=args.j_max, mode=mode)
    rows, failures = [], []
    for j_ghz in grid:
        try:
            rec = improvement_factor(float(j_ghz), imp, base, mode, xi_fixed=base.xi)
            rows.append((rec.J_ghz, rec.rel_tilt, rec.rel_barrier, rec.chi))
        except (CalibrationError, ValueError) as exc:
            rows.append((float(j_ghz), math.nan, math.nan, math.nan))
            failures.append(f"J = {_fmt(float(j_ghz))} GHz: {exc}")
    header = _provenance("noise-compare", args, base, mode, imp, (
        f"points = {args.points}",
        f"j_max_ghz = {_fmt(args.j_max)}",
    ))
    _emit(args.out, header, ChiRecord.CSV_FIELDS, rows)
    for msg in failures:
        print(f"dqdsim: error: {msg}", file=sys.stderr)
    return 2 if failures else 0


def cmd_qfactor(args) -> int:
    """Oscillation quality factor versus J for three noise models:
    the calibrated tilt scheme, the calibrated barrier scheme, and a
    constant relative-noise model frozen at the tilt value at 0.242 GHz."""
    base, imp, mode = _resolve(args, default_impurity_wanted=True)
    j_values = _parse_range(args.j_range or "0.15:0.9:0.05")
    ref_j = 0.242  # GHz (1 ueV)
    eps_ref = calibrate_tilt(ref_j, base.xi, base, mode)
    rel_ref = abs(delta_J("tilt", eps_ref, base, imp, mode, xi_fixed=base.xi).rel_noise)
    rows = []
    for j_ghz in j_values:
        eps_star = calibrate_tilt(j_ghz, base.xi, base, mode)
        xi_star = calibrate_barrier(j_ghz, base, mode)
        rel_t = abs(delta_J("tilt", eps_star, base, imp, mode, xi_fixed=base.xi).rel_noise)
        rel_b = abs(delta_J("barrier", xi_star, base, imp, mode).rel_noise)
        rows.append((
            j_ghz,
            quality_factor(j_ghz, QualityModel(rel_t)),
            quality_factor(j_ghz, QualityModel(rel_b)),
            quality_factor(j_ghz, QualityModel(rel_ref)),
        ))
    header = _provenance("qfactor", args, base, mode, imp, (
        f"j_range_ghz = {args.j_range or '0.15:0.9:0.05'}",
        f"const_model_ref_ghz = {_fmt(ref_j)}",
    ))
    _emit(args.out, header, ("J_ghz", "Q_tilt", "Q_barrier", "Q_constmodel"), rows)
    return 0


_SCAN_DIRECTIONS = {
    "x": (-1.0, 0.0),
    "y": (0.0, 1.0),
    "xy": (-1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
}


def cmd_impurity_scan(args) -> int:
    """Relative noise of both schemes versus impurity distance, for an
    impurity moved outward along three directions at matched clean J."""
    base, _imp, mode = _resolve(args)
    j_target_ghz = args.J_mhz / 1e3
    eps_star = calibrate_tilt(j_target_ghz, base.xi, base, mode)
    xi_star = calibrate_barrier(j_target_ghz, base, mode)
    q = args.charge_e if args.charge_e is not None else -1.0
    radii = ([float(r) for r in args.radii.split(",")] if args.radii
             else [1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0])
    rows = []
    for name, (ux, uy) in _SCAN_DIRECTIONS.items():
        for r_over_a in radii:
            imp = Impurity(r_over_a * base.a * ux, r_over_a * base.a * uy, q)
            rel_t = delta_J("tilt", eps_star, base, imp, mode, xi_fixed=base.xi).rel_noise
            rel_b = delta_J("barrier", xi_star, base, imp, mode).rel_noise
            rows.append((name, r_over_a, rel_t, rel_b))
    header = _provenance("impurity-scan", args, base, mode, None, (
        f"J_target_mhz = {_fmt(args.J_mhz)}",
        f"charge_e = {_fmt(q)}",
        f"radii_over_a = {','.join(_fmt(r) for r in radii)}",
        f"eps_star_mev = {_fmt(eps_star)}",
        f"xi_star_mev = {_fmt(xi_star)}",
    ))
    _emit(args.out, header, ("direction", "Rc_over_a", "rel_tilt", "rel_barrier"), rows)
    return 0


def cmd_near_impurity(args) -> int:
    """Matched-J noise comparison for a weak charge close to the dots
    (default: q = -0.01 e at (-1.5 a, 0.5 a))."""
    base, imp, mode = _resolve(args, default_impurity_wanted=False)
    if imp is None:
        q = args.charge_e if args.charge_e is not None else -0.01
        imp = Impurity(-1.5 * base.a, 0.5 * base.a, q)
    grid = matched_j_grid(base, n=args.points, j_max_ghz=args.j_max, mode=mode)
    rows, failures = [], []
    for j_ghz in grid:
        try:
            rec = improvement_factor(float(j_ghz), imp, base, mode, xi_fixed=base.xi)
            rows.append((rec.J_ghz, rec.rel_tilt, rec.rel_barrier, rec.chi))
        except (CalibrationError, ValueError) as exc:
            rows.append((float(j_ghz), math.nan, math.nan, math.nan))
            failures.append(f"J = {_fmt(float(j_ghz))} GHz: {exc}")
    header = _provenance("near-impurity", args, base, mode, imp, (
        f"points = {args.points}",
        f"j_max_ghz = {_fmt(args.j_max)}",
    ))
    _emit(args.out, header, ChiRecord.CSV_FIELDS, rows)
    for msg in failures:
        print(f"dqdsim: error: {msg}", file=sys.stderr)
    return 2 if failures else 0


def cmd_potential_profile(args) -> int:
    """Confinement potential along a horizontal cut (default y = 0,
    x in [-3a, 3a])."""
    base, _imp, mode = _resolve(args)
    if args.x_range:
        xs = _parse_range(args.x_range)
        x_spec = args.x_range
    else:
        x_spec = f"{_fmt(-3 * base.a)}:{_fmt(3 * base.a)}:{_fmt(base.a / 50)}"
        xs = _parse_range(x_spec)
    y = args.y_nm
    values = eval_potential(np.asarray(xs), y, base)
    rows = [(x, y, float(v)) for x, v in zip(xs, values)]
    header = _provenance("potential-profile", args, base, mode, None, (
        f"x_range_nm = {x_spec}",
        f"y_nm = {_fmt(y)}",
    ))
    _emit(args.out, header, ("x_nm", "y_nm", "V_meV"), rows)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _sample_device(rng: np.random.Generator) -> DeviceParams:
    """Random device on the supported grid: a/a_B in [0.5, 3],
    eps in [0, 1] meV, xi in [0, 1.5] meV (a fixed at 100 nm)."""
    a = 100.0
    ratio = rng.uniform(0.5, 3.0)
    a_B = a / ratio
    kin = HBAR2_OVER_2ME / 0.067
    return DeviceParams(a=a, hbar_omega0=2.0 * kin / a_B**2,
                        epsilon=float(rng.uniform(0.0, 1.0)),
                        xi=float(rng.uniform(0.0, 1.5)))


def _sample_impurity(rng: np.random.Generator, a: float) -> Impurity:
    radius = float(rng.uniform(1.5, 20.0)) * a
    angle = float(rng.uniform(0.0, 2.0 * math.pi))
    return Impurity(radius * math.cos(angle), radius * math.sin(angle), -1.0)


_ELEMENT_LIST = (
    ("kinetic", (0, 0)), ("kinetic", (0, 1)),
    ("potential", (0, 0)), ("potential", (0, 1)), ("potential", (1, 1)),
    ("coulomb", (0, 0, 0, 0)), ("coulomb", (0, 1, 0, 1)),
    ("coulomb", (0, 1, 1, 0)), ("coulomb", (1, 0, 0, 0)),
    ("impurity", (0, 0)), ("impurity", (0, 1)), ("impurity", (1, 1)),
)

_CLOSED_FORMS = {
    "kinetic": kinetic_element,
    "potential": potential_element,
    "coulomb": coulomb_element,
    "impurity": impurity_element,
}


def _check_elements_vs_oracle(rng: np.random.Generator, n_sets: int):
    """Worst relative disagreement between closed forms and quadrature."""
    worst = 0.0
    worst_label = ""
    for _ in range(n_sets):
        params = _sample_device(rng)
        imp = _sample_impurity(rng, params.a)
        basis = build_basis(params)
        for kind, idx in _ELEMENT_LIST:
            if kind == "impurity":
                closed = impurity_element(*idx, imp, params, basis)
                oracle = quadrature_oracle(("impurity", *idx, imp), params).value
            elif kind == "kinetic":
                closed = kinetic_element(*idx, params, basis)
                oracle = quadrature_oracle(("kinetic", *idx), params).value
            elif kind == "potential":
                closed = potential_element(*idx, params, basis)
                oracle = quadrature_oracle(("potential", *idx), params).value
            else:
                closed = coulomb_element(*idx, params, basis)
                oracle = quadrature_oracle(("coulomb", *idx), params).value
            rel = abs(closed - oracle) / max(abs(oracle), 1e-9)
            if rel > worst:
                worst = rel
                worst_label = f"{kind}{idx} at a/a_B = {_fmt(params.a / derive_constants(params).fock_darwin_radius)}"
    return worst, worst_label


def _run_validate(args) -> int:
    quick = args.quick
    rng = np.random.default_rng(args.seed)
    checks: list[tuple[str, bool, str]] = []

    def add(name: str, ok: bool, detail: str) -> None:
        checks.append((name, bool(ok), detail))

    if args.corrupt_bessel:
        # Negative control: scale the Bessel routine used by the closed-form
        # Coulomb/impurity elements and confirm the quadrature cross-check
        # actually catches it.
        real_i0e = integrals_module.i0e
        integrals_module.i0e = lambda x: real_i0e(x) * 1.001
        print("# negative control: i0e scaled by 1.001; the element "
              "cross-check below must FAIL")
        try:
            worst, label = _check_elements_vs_oracle(rng, 2)
        finally:
            integrals_module.i0e = real_i0e
        add("elements-vs-quadrature", worst <= 1e-6,
            f"worst rel diff {_fmt(worst)} ({label})")
    else:
        # 1. derived constants at the default device
        c = derive_constants(DeviceParams())
        add("derived-constants",
            abs(c.fock_darwin_radius - 106.64464635890039) < 1e-9
            and abs(c.barrier_height - 0.007327243715762088) < 1e-15
            and abs(c.coulomb_scale - 109.92091603053434) < 1e-9,
            f"a_B = {_fmt(c.fock_darwin_radius)} nm, C = {_fmt(c.barrier_height)} meV")

        # 2. potential junction constraints on random controls
        n_pot = 5 if quick else 20
        worst_pot = 0.0
        for _ in range(n_pot):
            p = dataclasses.replace(DeviceParams(),
                                    epsilon=float(rng.uniform(0.0, 1.0)),
                                    xi=float(rng.uniform(0.0, 1.5)))
            worst_pot = max(worst_pot,
                            max(abs(row[3]) for row in constraint_report(p)))
        add("potential-constraints", worst_pot <= 1e-12,
            f"worst junction residual {_fmt(worst_pot)} over {n_pot} control points")

        report = validate_params(DeviceParams())
        add("barrier-existence", report.ok,
            "default device keeps a barrier top at the origin")

        # 3. orthonormalized basis
        worst_orth = 0.0
        for _ in range(4):
            basis = build_basis(_sample_device(rng))
            g = basis.M @ overlap_matrix(basis) @ basis.M
            worst_orth = max(worst_orth, float(np.max(np.abs(g - np.eye(2)))))
        add("orthonormalization", worst_orth <= 1e-12,
            f"max |M S M - 1| = {_fmt(worst_orth)}")

        # 4. scaled Bessel routine: frozen references plus the integral
        # identity i0e(x) = (1/pi) int_0^pi exp(x (cos th - 1)) dth,
        # evaluated by midpoint rule (spectrally accurate for this
        # periodic, even integrand) on both sides of the branch switch.
        d1 = abs(float(i0e(1.0)) - 0.4657596075936404)
        d700 = abs(float(i0e(700.0)) - 0.015081295651531358)
        theta = (np.arange(4096) + 0.5) * (math.pi / 4096)
        worst_id = max(
            abs(float(np.mean(np.exp(x * (np.cos(theta) - 1.0)))) / float(i0e(x)) - 1.0)
            for x in (0.5, 5.0, 19.9, 20.1, 50.0, 700.0))
        add("bessel-i0e", d1 < 1e-14 and d700 < 1e-14 and worst_id < 5e-13,
            f"|d(1)| = {_fmt(d1)}, |d(700)| = {_fmt(d700)}, "
            f"integral-identity defect {_fmt(worst_id)}")

        # 5. closed-form elements vs independent quadrature
        n_sets = 2 if quick else 12
        try:
            worst, label = _check_elements_vs_oracle(rng, n_sets)
            add("elements-vs-quadrature", worst <= 1e-6,
                f"worst rel diff {_fmt(worst)} over {n_sets} devices ({label})")
        except OracleRefusal as exc:
            add("elements-vs-quadrature", False, f"oracle refused: {exc}")

        # 6. spectral identities at a detuned, impurity-perturbed point
        params = DeviceParams(epsilon=0.37, xi=1.1)
        imp = default_impurity(params)
        res = solve(params, imp)
        H = assemble_matrix(res.hubbard, res.mode)
        scale = float(np.max(np.abs(H)))
        d_t0 = float(np.max(np.abs(H @ T0_VECTOR - res.t0_energy * T0_VECTOR))) / scale
        resid = float(np.max(np.abs(H @ res.eigenvectors
                                    - res.eigenvectors * res.eigenvalues))) / scale
        j_plus = exchange_J(params, imp)
        j_minus = exchange_J(dataclasses.replace(params, epsilon=-params.epsilon),
                             Impurity(-imp.x_c, imp.y_c, imp.q))
        d_mirror = abs(j_plus - j_minus) / j_plus
        add("spectral-identities",
            d_t0 <= 1e-12 and resid <= 1e-10 and d_mirror <= 1e-10,
            f"T0 defect {_fmt(d_t0)}, eigenresidual {_fmt(resid)}, "
            f"mirror defect {_fmt(d_mirror)}")

        # gauge shift of the confinement energy must leave J unchanged
        basis = build_basis(params)
        tables = build_tables(params, basis, imp)
        shift = 3.7
        shifted = dataclasses.replace(
            tables, confinement=tables.confinement + shift * overlap_matrix(basis))
        j_ref = solve(params, imp, tables=tables, basis=basis).J
        j_shift = solve(params, imp, tables=shifted, basis=basis).J
        add("gauge-invariance", abs(j_ref - j_shift) <= 1e-12 + 1e-12 * abs(j_ref),
            f"|dJ| = {_fmt(abs(j_ref - j_shift))} meV under a {shift} meV shift")

        # 7. monotonic trends
        base = DeviceParams()
        eps_grid = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
        j_eps = [exchange_J(dataclasses.replace(base, epsilon=e, xi=1.3))
                 for e in eps_grid]
        xi_grid = [0.5, 0.7, 0.9, 1.1, 1.3]
        j_xi = [exchange_J(dataclasses.replace(base, epsilon=0.0, xi=x))
                for x in xi_grid]
        add("exchange-monotonic",
            all(b > a for a, b in zip(j_eps, j_eps[1:]))
            and all(b < a for a, b in zip(j_xi, j_xi[1:])),
            "J increasing in detuning, decreasing in barrier amplitude")

        imp0 = default_impurity(base)
        n_match = 4 if quick else 8
        grid = matched_j_grid(base, n=n_match, j_max_ghz=1.0)
        try:
            recs = [improvement_factor(float(j), imp0, base) for j in grid]
            rel_t = [abs(r.rel_tilt) for r in recs]
            rel_b = [abs(r.rel_barrier) for r in recs]
            chi = [r.chi for r in recs]
            add("matched-noise-trends",
                all(b > a for a, b in zip(rel_t, rel_t[1:]))
                and all(b < a for a, b in zip(rel_b, rel_b[1:]))
                and all(b > a for a, b in zip(chi, chi[1:]))
                and abs(chi[0] - 1.0) <= 1e-6,
                f"chi spans {_fmt(chi[0])} .. {_fmt(chi[-1])} over "
                f"J in [{_fmt(float(grid[0]))}, {_fmt(float(grid[-1]))}] GHz")
        except CalibrationError as exc:
            add("matched-noise-trends", False, str(exc))

        # 8. detuning sweet spot at zero tilt
        slope, err = sweet_spot_check(1.3, base)
        add("sweet-spot", abs(slope) <= max(1e-8, 10.0 * err),
            f"dJ/deps = {_fmt(slope)} GHz/meV (err est {_fmt(err)})")

        # 9. dephasing model identities
        sig = 0.05 * 0.242
        worst_env = max(abs(envelope_closed(sig, t) - envelope_numeric(0.242, sig, t))
                        for t in (5.0, 20.0, 80.0))
        q_flat = [quality_factor(j, QualityModel(0.02)) for j in (0.15, 0.5, 0.9)]
        q_lin = [quality_factor(j, QualityModel(0.0, 0.003)) for j in (0.15, 0.9)]
        add("dephasing-model",
            worst_env <= 1e-9
            and max(q_flat) - min(q_flat) <= 1e-9 * q_flat[0]
            and abs(q_lin[1] / q_lin[0] - 0.9 / 0.15) <= 1e-12,
            f"envelope defect {_fmt(worst_env)}; "
            f"Q flat for relative noise, linear for a constant floor")

        # 10. calibration round trips
        targets = (0.242,) if quick else (0.15, 0.242, 0.5)
        worst_cal = 0.0
        try:
            for tgt in targets:
                eps_star = calibrate_tilt(tgt, 1.3, base)
                xi_star = calibrate_barrier(tgt, base)
                jt = exchange_J_ghz(dataclasses.replace(base, epsilon=eps_star, xi=1.3))
                jb = exchange_J_ghz(dataclasses.replace(base, epsilon=0.0, xi=xi_star))
                worst_cal = max(worst_cal, abs(jt - tgt) / tgt, abs(jb - tgt) / tgt)
            add("calibration", worst_cal <= 1e-6,
                f"worst |J(c*) - target|/target = {_fmt(worst_cal)}")
        except CalibrationError as exc:
            add("calibration", False, str(exc))

        # 11. perturbative exchange estimate near zero detuning
        hp = hubbard_parameters(DeviceParams())
        est = hubbard_exchange_estimate(hp)
        exact = exchange_J(DeviceParams())
        add("hubbard-estimate", abs(est / exact - 1.0) <= 0.05,
            f"2t^2 estimate off by {_fmt(abs(est / exact - 1.0))} relative")

    failed = sum(1 for _, ok, _ in checks if not ok)
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    mode_note = " (quick)" if quick else ""
    print(f"validate{mode_note}: {len(checks) - failed} passed, "
          f"{failed} failed, {len(checks)} total")
    return 1 if failed else 0


def cmd_validate(args) -> int:
    return _run_validate(args)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH",
                   help="'key = value' settings file ('#' comments)")
    p.add_argument("--out", metavar="PATH",
                   help="output CSV path (default: stdout)")
    p.add_argument("--mode", choices=("paper", "full"), default="paper",
                   help="4x4 assembly: nearest-neighbor hopping only (paper) "
                        "or all two-body terms (full)")
    p.add_argument("--impurity", metavar="X_NM,Y_NM",
                   help="impurity position in nm")
    p.add_argument("--charge-e", type=float, default=None, metavar="Q",
                   help="impurity charge in units of e")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized self-checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqdsim",
        description="Exchange interaction and charge-noise simulator for a "
                    "two-electron double quantum dot.")
    parser.add_argument("--version", action="version",
                        version=f"dqdsim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum",
                       help="lowest singlet/triplet levels vs detuning")
    _add_common(p)
    p.add_argument("--eps-range", metavar="LO:HI:STEP", help="detuning grid [meV]")
    p.add_argument("--xi-range", metavar="LO:HI:STEP",
                   help="barrier amplitudes [meV] (default: 1.3 and 1.0)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("exchange-tilt",
                       help="J and impurity noise vs detuning")
    _add_common(p)
    p.add_argument("--eps-range", metavar="LO:HI:STEP", help="detuning grid [meV]")
    p.set_defaults(func=cmd_exchange_tilt)

    p = sub.add_parser("exchange-barrier",
                       help="J and impurity noise vs barrier amplitude")
    _add_common(p)
    p.add_argument("--xi-range", metavar="LO:HI:STEP", help="barrier grid [meV]")
    p.set_defaults(func=cmd_exchange_barrier)

    p = sub.add_parser("noise-compare",
                       help="tilt vs barrier noise at matched J, with chi")
    _add_common(p)
    p.add_argument("--points", type=int, default=25, help="matched-J grid size")
    p.add_argument("--j-max", type=float, default=1.0, metavar="GHZ",
                   help="upper end of the matched-J grid")
    p.set_defaults(func=cmd_noise_compare)

    p = sub.add_parser("qfactor", help="oscillation quality factor vs J")
    _add_common(p)
    p.add_argument("--j-range", metavar="LO:HI:STEP", help="J grid [GHz]")
    p.set_defaults(func=cmd_qfactor)

    p = sub.add_parser("impurity-scan",
                       help="noise vs impurity distance along three directions")
    _add_common(p)
    p.add_argument("--J-mhz", type=float, default=242.0, metavar="MHZ",
                   help="clean J both schemes are calibrated to")
    p.add_argument("--radii", metavar="R1,R2,...",
                   help="impurity distances in units of a")
    p.set_defaults(func=cmd_impurity_scan)

    p = sub.add_parser("near-impurity",
                       help="matched-J comparison for a weak nearby charge")
    _add_common(p)
    p.add_argument("--points", type=int, default=25, help="matched-J grid size")
    p.add_argument("--j-max", type=float, default=1.0, metavar="GHZ",
                   help="upper end of the matched-J grid")
    p.set_defaults(func=cmd_near_impurity)

    p = sub.add_parser("potential-profile",
                       help="confinement potential along a horizontal cut")
    _add_common(p)
    p.add_argument("--x-range", metavar="LO:HI:STEP", help="x grid [nm]")
    p.add_argument("--y-nm", type=float, default=0.0, help="cut height [nm]")
    p.set_defaults(func=cmd_potential_profile)

    p = sub.add_parser("validate", help="run the built-in cross-check suite")
    _add_common(p)
    p.add_argument("--quick", action="store_true",
                   help="reduced sampling (finishes in a few seconds)")
    p.add_argument("--corrupt-bessel", action="store_true",
                   help="negative control: corrupt the Bessel routine and "
                        "confirm the element cross-check fails")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CalibrationError, OracleRefusal, ValueError, OSError) as exc:
        print(f"dqdsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
