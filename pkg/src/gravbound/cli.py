"""Command-line interface: ``gravbound {bounds,evolve,gate,sweep,report}``.

Exit codes: 0 success, 1 domain or validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .decoherence import (
    GATE_VARIANTS,
    MODES,
    PAPER_EXPONENT,
    DecoherenceParams,
    DensityMatrix,
    PureState,
    Spectrum,
    evolve_numeric,
    gate_analysis,
    overlap,
    propagate_analytic,
    purity,
    sample_times,
)
from .errors import DomainError, ShapeError
from .limits import (
    BoundReport,
    black_hole_ops_bound,
    bound_report,
    degree_of_parallelization,
    gravitational_ops_bound,
    margolus_levitin_ops,
    serial_decoherence_error,
)
from .numerics import LogScalar
from .physics import PRESETS, ComputerSpec, PhysConstants, load_constants, preset

FORMATS = ("table", "json", "csv")
SWEEP_PARAMS = ("bits", "radius_m", "parallelism", "mass_kg", "energy_j")
REPORT_TOLERANCE = 1.0  # decades


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- rendering

def fmt_sci(x: LogScalar) -> str:
    """Render as ``a.bc ×10^k`` with three significant digits."""
    if x.sign == 0:
        return "0"
    k = math.floor(x.log10_mag)
    mant = 10.0 ** (x.log10_mag - k)
    if round(mant, 2) >= 10.0:
        mant /= 10.0
        k += 1
    s = "-" if x.sign < 0 else ""
    return f"{s}{mant:.2f} ×10^{k}"


def fmt_log10(x: LogScalar) -> str:
    return "-inf" if x.sign == 0 else f"{x.log10_mag:.4f}"


def _num(x: float) -> str:
    # shortest round-trip repr keeps csv/json byte-stable
    return repr(float(x))


def render_table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for j, r in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_csv(headers, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    w.writerows(rows)
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------- spec sources

INLINE_FLAGS = {"mass": "mass_kg", "radius": "radius_m", "bits": "bits",
                "parallelism": "parallelism", "energy": "energy_j"}


def _add_spec_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("computer spec (choose one source)")
    g.add_argument("--preset", action="append", choices=PRESETS, help="named computer")
    g.add_argument("--spec", metavar="FILE.json", help="ComputerSpec JSON file")
    g.add_argument("--mass", type=float, metavar="KG")
    g.add_argument("--radius", type=float, metavar="M")
    g.add_argument("--bits", type=float, metavar="N")
    g.add_argument("--parallelism", type=float, metavar="D")
    g.add_argument("--energy", type=float, metavar="J", help="explicit energy budget")


def resolve_spec(args, constants: PhysConstants) -> ComputerSpec:
    inline = {field: getattr(args, flag) for flag, field in INLINE_FLAGS.items()
              if getattr(args, flag) is not None}
    presets = args.preset or []
    if len(presets) > 1:
        raise UsageError("--preset given more than once")
    if presets and (args.spec or inline):
        raise UsageError("--preset cannot be combined with --spec or inline spec flags")
    if presets:
        return preset(presets[0], constants)
    if args.spec:
        data = _load_json(args.spec)
        if not isinstance(data, dict):
            raise DomainError(f"{args.spec}: spec must be a JSON object")
        data.update(inline)  # inline flags win
        return ComputerSpec.from_json(data)
    if not inline:
        raise UsageError("no computer spec given (use --preset, --spec or inline flags)")
    missing = [f"--{flag}" for flag, field in INLINE_FLAGS.items()
               if field != "energy_j" and field not in inline]
    if missing:
        raise UsageError(f"inline spec is missing {', '.join(missing)}")
    return ComputerSpec(**inline)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise DomainError(f"{path}: {exc.strerror}") from None


# ---------------------------------------------------------------- bounds

_REPORT_LABELS = {
    "ml_ops_per_s": "Margolus-Levitin rate (op/s)",
    "grav_ops_per_s": "gravitational bound (op/s)",
    "serial_error": "serial decoherence error",
    "eps_max": "max tolerable error eps_max",
    "implied_dp": "implied parallelization 1/eps_max",
}
_SPEC_FIELDS = ("mass_kg", "radius_m", "bits", "parallelism", "energy_j")


def _report_csv_row(report: BoundReport):
    spec = report.spec.to_json()
    row = ["" if spec[k] is None else _num(spec[k]) for k in _SPEC_FIELDS]
    row += [_num(getattr(report, f).log10_mag) for f in BoundReport.LOG_FIELDS]
    row.append(report.binding_bound)
    return row


_REPORT_CSV_HEADER = list(_SPEC_FIELDS) + [f"{f}_log10" for f in BoundReport.LOG_FIELDS] + ["binding_bound"]


def render_bound_report(report: BoundReport, fmt: str) -> str:
    if fmt == "json":
        return render_json(report.to_json())
    if fmt == "csv":
        return render_csv(_REPORT_CSV_HEADER, [_report_csv_row(report)])
    spec = report.spec
    out = [f"computer: mass {spec.mass_kg:g} kg, radius {spec.radius_m:g} m, "
           f"bits {spec.bits:g}, parallelism {spec.parallelism:g}\n"]
    rows = [(_REPORT_LABELS[f], fmt_sci(getattr(report, f)), fmt_log10(getattr(report, f)))
            for f in BoundReport.LOG_FIELDS]
    out.append(render_table(["quantity", "value", "log10"], rows))
    out.append(f"binding bound: {report.binding_bound}\n")
    out.extend(f"note: {n}\n" for n in report.notes)
    return "".join(out)


def cmd_bounds(args, constants):
    spec = resolve_spec(args, constants)
    return render_bound_report(bound_report(spec, constants), args.format)


# ---------------------------------------------------------------- evolve

def load_system(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise DomainError(f"{path}: top level must be an object with 'omegas' and 'amplitudes'")
    for key in ("omegas", "amplitudes"):
        if key not in data:
            raise DomainError(f"{path}: missing field '{key}'")
    omegas = data["omegas"]
    if not isinstance(omegas, list) or not all(
            isinstance(w, (int, float)) and not isinstance(w, bool) for w in omegas):
        raise DomainError(f"{path}: field 'omegas' must be a list of numbers")
    amps = data["amplitudes"]
    if not isinstance(amps, list) or not all(
            isinstance(a, list) and len(a) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in a)
            for a in amps):
        raise DomainError(f"{path}: field 'amplitudes' must be a list of [re, im] pairs")
    if len(amps) != len(omegas):
        raise ShapeError(f"{path}: 'amplitudes' has {len(amps)} entries, 'omegas' has {len(omegas)}")
    try:
        spectrum = Spectrum(omegas)
    except (DomainError, ShapeError) as exc:
        raise type(exc)(f"{path}: field 'omegas': {exc}") from None
    try:
        state = PureState([complex(re, im) for re, im in amps])
    except (DomainError, ShapeError) as exc:
        raise type(exc)(f"{path}: field 'amplitudes': {exc}") from None
    return spectrum, state


def trajectory_rows(spectrum, state, t_end, steps, params, engine):
    """Header and rows of the trajectory CSV."""
    n = len(spectrum)
    rho0 = DensityMatrix.from_pure(state)
    pairs = [(m, k) for m in range(n) for k in range(m, n)]
    header = ["t", "purity", "overlap"]
    for m, k in pairs:
        header += [f"rho_{m}_{k}_re", f"rho_{m}_{k}_im"]
    if engine == "analytic":
        traj = [(float(t), propagate_analytic(state, spectrum, float(t), params))
                for t in sample_times(t_end, steps, params)]
    else:
        traj = evolve_numeric(rho0, spectrum, t_end, steps, params)
    if engine == "both":
        header.append("max_discrepancy")
    rows = []
    for t, rho in traj:
        r = rho.entries
        row = [_num(t), _num(purity(rho)), _num(overlap(rho, rho0))]
        for m, k in pairs:
            row += [_num(r[m, k].real), _num(r[m, k].imag)]
        if engine == "both":
            exact = propagate_analytic(state, spectrum, t, params).entries
            row.append(_num(np.max(np.abs(r - exact))))
        rows.append(row)
    return header, rows


def cmd_evolve(args, constants):
    if args.mode != PAPER_EXPONENT and args.t_max is None:
        raise UsageError(f"--mode {args.mode} requires --t-max")
    spectrum, state = load_system(args.input)
    params = DecoherenceParams(args.tp_eff, args.mode, args.t_max)
    header, rows = trajectory_rows(spectrum, state, args.t_end, args.steps, params, args.engine)
    if args.format == "json":
        return render_json([dict(zip(header, map(float, r))) for r in rows])
    return render_csv(header, rows)


# ---------------------------------------------------------------- gate

def cmd_gate(args, constants):
    if not args.energy > 0:
        raise DomainError(f"--energy must be positive, got {args.energy!r}")
    g = gate_analysis(args.energy, constants)
    bare = serial_decoherence_error(args.energy, constants)
    variants = [args.variant] if args.variant else list(GATE_VARIANTS)
    quantities = [("t_op_s", g.t_op), ("delta_omega_per_s", g.delta_omega),
                  ("gamma", g.gamma), ("survival_D", g.survival)]
    quantities += [(f"epsilon[{v}]", g.error(v)) for v in variants]
    note = (f"bare serial combination t_P^(4/3) E^(-2/3) E^2 = 10^{bare.log10_mag:.2f}; "
            "paper-linearized adds the factor 4 (pi/2)^(2/3)")
    if args.format == "json":
        return render_json({
            "energy_j": args.energy,
            "t_op_s": g.t_op.to_json(),
            "delta_omega_per_s": g.delta_omega.to_json(),
            "gamma": g.gamma.to_json(),
            "survival_D": g.survival.to_json(),
            "epsilon": {v: g.error(v).to_json() for v in variants},
            "bare_serial_error": bare.to_json(),
        })
    if args.format == "csv":
        rows = [(name, x.sign, _num(x.log10_mag)) for name, x in quantities]
        rows.append(("bare_serial_error", bare.sign, _num(bare.log10_mag)))
        return render_csv(["quantity", "sign", "log10"], rows)
    rows = [(name, fmt_sci(x), fmt_log10(x)) for name, x in quantities]
    return (f"NOT gate at E = {args.energy:g} J\n"
            + render_table(["quantity", "value", "log10"], rows)
            + f"note: {note}\n")


# ---------------------------------------------------------------- sweep

def sweep_values(lo, hi, points, scale):
    if points < 2:
        raise UsageError("--points must be >= 2")
    if not (lo > 0 and hi > 0):
        raise UsageError("--from and --to must be positive")
    if not lo < hi:
        raise UsageError("--from must be < --to")
    if scale == "log":
        return np.logspace(math.log10(lo), math.log10(hi), points)
    return np.linspace(lo, hi, points)


def sweep_reports(base: ComputerSpec, param: str, values, constants):
    base = dataclasses.replace(base, preset=None, notes=())

    def one(v):
        return bound_report(dataclasses.replace(base, **{param: float(v)}), constants)

    with ThreadPoolExecutor() as pool:
        return list(pool.map(one, values))


def cmd_sweep(args, constants):
    values = sweep_values(args.lo, args.hi, args.points, args.scale)
    base = resolve_spec(args, constants)
    reports = sweep_reports(base, args.param, values, constants)
    header = [args.param] + [f"{f}_log10" for f in BoundReport.LOG_FIELDS] + ["binding_bound"]
    rows = [[_num(v)] + [_num(getattr(r, f).log10_mag) for f in BoundReport.LOG_FIELDS]
            + [r.binding_bound] for v, r in zip(values, reports)]
    fmt = args.format_explicit or "csv"
    if fmt == "json":
        return render_json([{args.param: float(v), **r.to_json()} for v, r in zip(values, reports)])
    if fmt == "table":
        return render_table(header, rows)
    return render_csv(header, rows)


# ---------------------------------------------------------------- report

def headline_rows(constants: PhysConstants):
    """(quantity, quoted log10, computed log10) for each headline figure."""
    laptop = preset("ultimate-laptop", constants)
    avogadro = preset("avogadro", constants)
    ml = margolus_levitin_ops(laptop.energy(constants), constants).log10_mag
    grav_par = gravitational_ops_bound(laptop.bits, laptop.radius_m, laptop.parallelism, constants).log10_mag
    grav_ser = gravitational_ops_bound(laptop.bits, laptop.radius_m, 1.0, constants).log10_mag
    return [
        ("ultimate laptop ML", 51.0, ml),
        ("serial gate error, E=1e16 J", 9.0, serial_decoherence_error(1e16, constants).log10_mag),
        ("ultimate laptop gravitational (d_p=1e10)", 47.0, grav_par),
        ("1 kg serial gravitational (d_p=1)", 42.0, grav_ser),
        ("Avogadro serial (L=1e25, R=0.1 m assumed)", 39.0,
         gravitational_ops_bound(avogadro.bits, avogadro.radius_m, 1.0, constants).log10_mag),
        ("black hole 1 kg", 47.0, black_hole_ops_bound(1.0, constants).log10_mag),
        ("implied d_p at n=1e51", 10.0,
         degree_of_parallelization(laptop.bits, laptop.radius_m, 1e51, constants).log10_mag),
        ("parallel gain over ML (decades)", 3.0, ml - grav_par),
        ("serial gain over ML (decades)", 9.0, ml - grav_ser),
    ]


def reproduction_table(constants: PhysConstants):
    rows = []
    for name, quoted, computed in headline_rows(constants):
        delta = abs(computed - quoted)
        rows.append((name, quoted, computed, delta, delta <= REPORT_TOLERANCE))
    return rows


def cmd_report(args, constants):
    rows = reproduction_table(constants)
    header = ["quantity", "quoted_log10", "computed_log10", "delta_decades", "status"]
    if args.format == "json":
        text = render_json([dict(zip(header, (n, q, c, d, "pass" if ok else "fail")))
                            for n, q, c, d, ok in rows])
    elif args.format == "csv":
        text = render_csv(header, [(n, _num(q), _num(c), _num(d), "pass" if ok else "fail")
                                   for n, q, c, d, ok in rows])
    else:
        text = render_table(header, [(n, f"{q:g}", f"{c:.2f}", f"{d:.2f}", "pass" if ok else "FAIL")
                                     for n, q, c, d, ok in rows])
        text += f"tolerance: {REPORT_TOLERANCE:g} decade\n"
    ok = all(r[4] for r in rows)
    return text, (0 if ok or not args.check else 1)


# ---------------------------------------------------------------- entry point

def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="output format (default: table)")
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS,
                        help="write output to PATH instead of stdout")

    parser = argparse.ArgumentParser(
        prog="gravbound", parents=[common],
        description="Clock-induced decoherence and gravitational limits on quantum computation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="bounds for one computer spec")
    _add_spec_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("evolve", parents=[common], help="density-matrix trajectory (CSV)")
    p.add_argument("--input", required=True, metavar="FILE.json")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--mode", choices=MODES, default=PAPER_EXPONENT)
    p.add_argument("--tp-eff", type=float, required=True)
    p.add_argument("--t-max", type=float)
    p.add_argument("--engine", choices=("analytic", "numeric", "both"), default="numeric")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("gate", parents=[common], help="NOT-gate error analysis")
    p.add_argument("--energy", type=float, required=True, metavar="J")
    p.add_argument("--variant", choices=GATE_VARIANTS)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("sweep", parents=[common], help="bound report over a parameter range")
    _add_spec_flags(p)
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--scale", choices=("log", "linear"), default="log")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", parents=[common], help="reproduce the headline figures")
    p.add_argument("--check", action="store_true", help="exit 1 unless every row passes")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format_explicit = getattr(args, "format", None)
    args.format = args.format_explicit or "table"
    out_path = getattr(args, "out", None)
    try:
        constants = load_constants()
        result = args.func(args, constants)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (DomainError, ShapeError, LookupError, OSError, ArithmeticError, ValueError) as exc:
        print(f"gravbound: error: {exc}", file=sys.stderr)
        return 1
    text, code = result if isinstance(result, tuple) else (result, 0)
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
