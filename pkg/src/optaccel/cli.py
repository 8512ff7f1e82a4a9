"""Command-line entry point: ``optaccel <command> [options]``.

Commands: simulate, profile-analyze, pareto, crossover, costmodel, oracle.
Each writes ``<command>.json`` (a run report) plus plot-ready CSVs into
``--out-dir`` and prints either a short table or, with ``--json``, the report
itself. Exit status: 0 success, 1 a validation failed, 2 bad usage or input.
"""

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import amdahl, complexity, costmodel, optics, pareto
from .errors import InvalidInputError, ParseError
from .field import convolve_direct, convolve_spectral, dft2, dft2_bruteforce

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    validations: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    def metric(self, name, value, units):
        self.outputs[name] = {"value": value, "units": units}

    def check(self, name, ok):
        self.validations[name] = bool(ok)

    @property
    def passed(self):
        return all(self.validations.values())

    def to_json(self):
        data = asdict(self)
        data["passed"] = self.passed
        return json.dumps(_finite(data), indent=2, sort_keys=True) + "\n"


def _finite(obj):
    # JSON has no inf/nan; spell them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.generic):
        return _finite(obj.item())
    return obj


# -- grid CSV (one row per grid row, cells ``re:im``) ---------------------------

def format_cell(z):
    z = complex(z)
    return f"{z.real!r}:{z.imag!r}"


def parse_cell(text):
    text = text.strip()
    if ":" in text:
        re_part, im_part = text.split(":", 1)
        return complex(float(re_part), float(im_part))
    return complex(float(text), 0.0)


def write_grid_csv(grid, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(grid):
            w.writerow([format_cell(z) for z in row])


def read_grid_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row:
                continue
            try:
                rows.append([parse_cell(c) for c in row])
            except ValueError:
                raise ParseError("cells must be numbers or re:im pairs", line=reader.line_num, path=str(path)) from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError("ragged grid", line=reader.line_num, path=str(path))
    if not rows:
        raise ParseError("empty grid", line=1, path=str(path))
    return np.array(rows, dtype=complex)


def _real_grid(path):
    g = read_grid_csv(path)
    if np.any(g.imag != 0):
        raise InvalidInputError(f"{path}: input values must be real")
    return g.real


# -- argument types -----------------------------------------------------------

def positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def acceleration_factor(text):
    if text.strip().lower() in ("inf", "infinity", "unbounded"):
        return math.inf
    v = positive_float(text)
    if v < 1:
        raise argparse.ArgumentTypeError("acceleration factor must be >= 1")
    return v


# -- commands -------------------------------------------------------------------

def _out_path(args, report, name):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    report.artifacts.append(str(path))
    return path


def cmd_simulate(args):
    slm = optics.SlmConfig(
        args.rows, args.cols, pixel_pitch=args.pixel_pitch, bit_depth=args.bit_depth, macro_pixel=args.macro_pixel
    )
    mode = optics.DetectorMode(args.mode.replace("-", "_"))
    encoding = optics.Encoding(args.encoding)
    rng = np.random.default_rng(args.seed)
    a = _real_grid(args.input_a) if args.input_a else rng.random((args.rows, args.cols))
    b = _real_grid(args.input_b) if args.input_b else rng.random((args.rows, args.cols))

    report = RunReport("simulate")
    report.inputs = {
        "rows": args.rows,
        "cols": args.cols,
        "mode": mode.value,
        "encoding": encoding.value,
        "bit_depth": args.bit_depth,
        "macro_pixel": args.macro_pixel,
        "pixel_pitch_m": args.pixel_pitch,
        "seed": args.seed,
        "input_a": args.input_a,
        "input_b": args.input_b,
    }
    res = optics.simulate_4f_convolution(a, b, slm, mode=mode, encoding=encoding)
    err = float(np.max(np.abs(res.result - res.ground_truth)) / max(np.max(np.abs(res.ground_truth)), 1e-300))
    report.metric("fidelity", res.fidelity, "1")
    report.metric("max_relative_error", err, "1")
    report.metric("effective_rows", res.result.shape[0], "pixels")
    report.metric("effective_cols", res.result.shape[1], "pixels")
    if mode is optics.DetectorMode.IDEAL_COMPLEX and encoding is optics.Encoding.AMPLITUDE:
        report.check("ideal_fidelity_ge_1-1e-9", res.fidelity >= 1 - 1e-9)
    write_grid_csv(res.result, _out_path(args, report, "simulate_result.csv"))
    return report


def _table1_validations(report, profiles, agg):
    checks = amdahl.printed_checks(profiles)
    bad = [c.name for c in checks if not c.within()]
    worst = max(checks, key=lambda c: c.rel_error)
    report.metric("rows_within_3pct", len(checks) - len(bad), "rows")
    report.metric("worst_row_rel_error", worst.rel_error, "1")
    report.outputs["rows_outside_3pct"] = {"value": bad, "units": "benchmark names"}
    report.check("every_row_within_3pct_of_printed", not bad)
    report.check("mean_9.39+-0.05", abs(agg.mean - 9.39) <= 0.05)
    report.check("median_1.94+-0.01", abs(agg.median - 1.94) <= 0.01)
    return {c.name: c for c in checks}


def cmd_profile_analyze(args):
    if args.table1:
        profiles = amdahl.load_table1()
        source = "bundled table1.csv"
    else:
        profiles = amdahl.read_profiles(args.input)
        source = args.input
    patterns = tuple(p for p in args.patterns.split(",") if p.strip()) if args.patterns else amdahl.DEFAULT_PATTERNS
    cfg = amdahl.ClassifierConfig(patterns)
    reports = amdahl.analyze(profiles, cfg, args.acceleration)
    agg = amdahl.aggregate(reports)

    report = RunReport("profile-analyze")
    report.inputs = {"source": source, "patterns": list(cfg.patterns), "acceleration": args.acceleration}
    report.metric("benchmarks", agg.count, "count")
    report.metric("mean_speedup", agg.mean, "x")
    report.metric("median_speedup", agg.median, "x")
    report.metric("min_speedup", agg.min, "x")
    report.metric("max_speedup", agg.max, "x")
    # printed columns assume negligible accelerated time, so compare only at P = inf
    checks = _table1_validations(report, profiles, agg) if args.table1 and math.isinf(args.acceleration) else {}

    path = _out_path(args, report, "profile_speedups.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["benchmark", "accel_fraction", "speedup", "asymptotic_speedup"]
        if checks:
            header += ["printed_speedup", "rel_error"]
        w.writerow(header)
        for r in reports:
            row = [r.name, repr(r.accel_fraction), repr(r.speedup), repr(r.asymptotic_speedup)]
            if checks:
                row += [repr(checks[r.name].printed_speedup), repr(checks[r.name].rel_error)]
            w.writerow(row)
    return report


def cmd_pareto(args):
    if args.input:
        records = pareto.read_csv(args.input)
        source = args.input
    else:
        records = pareto.synthetic_records(args.synthetic, kind=args.kind, seed=args.seed)
        source = f"synthetic n={args.synthetic} seed={args.seed}"
    subset = [r for r in records if r.kind == args.kind]
    if not subset:
        raise InvalidInputError(f"no {args.kind} records in {source}")
    frontier = pareto.pareto_frontier(subset)
    frontier_min = min(r.energy_per_bit_j for r in frontier)
    target = args.target if args.target is not None else frontier_min / args.reduction
    gap = pareto.feasibility_gap(records, args.kind, target)

    report = RunReport("pareto")
    report.inputs = {"source": source, "kind": args.kind, "target_energy_per_bit_j": target, "reduction": args.reduction}
    report.metric("records", len(subset), "count")
    report.metric("frontier_size", len(frontier), "count")
    report.metric("frontier_min_energy_per_bit", gap.frontier_min_energy_per_bit_j, "J/bit")
    report.metric("gap", gap.gap, "1")
    report.outputs["best_record"] = {"value": gap.best_record, "units": "id"}
    report.metric("feasible", gap.gap <= 1, "bool")

    with open(_out_path(args, report, "pareto_frontier.csv"), "w", newline="") as fh:
        pareto.write_csv(frontier, fh)
    with open(_out_path(args, report, "pareto_points.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        ids = {r.id for r in frontier}
        w.writerow(["id", "power_w", "sample_rate_hz", "energy_per_bit_j", "on_frontier"])
        for r in subset:
            w.writerow([r.id, repr(r.power_w), repr(r.sample_rate_hz), repr(r.energy_per_bit_j), int(r.id in ids)])
    return report


def cmd_crossover(args):
    if args.constant is not None:
        cls = complexity.constant(args.constant)
        label = f"const({args.constant:g})"
    else:
        cls = complexity.BUILTIN_CLASSES[args.cls]
        label = args.cls
    cfg = complexity.CrossoverConfig(args.t_conv, args.t_digital, args.t_analog)
    report = RunReport("crossover")
    report.inputs = {
        "class": label,
        "t_conv_s": args.t_conv,
        "t_digital_s": args.t_digital,
        "t_analog_s": args.t_analog,
        "target": args.target,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "points": args.points,
    }
    if args.target is not None:
        be = complexity.breakeven_size(cls, cfg, args.target)
        report.metric("breakeven_N", be.size, "elements")
        if be.reason:
            report.outputs["breakeven_reason"] = {"value": be.reason, "units": "text"}
    if args.n_max < args.n_min:
        raise InvalidInputError("--n-max must be >= --n-min")
    ns = np.unique(np.rint(np.geomspace(args.n_min, args.n_max, args.points)).astype(np.int64))
    curve = complexity.speedup_curve(cls, cfg, [int(n) for n in ns])
    report.metric("speedup_at_n_min", curve[0][1], "x")
    report.metric("speedup_at_n_max", curve[-1][1], "x")
    _out_path(args, report, "crossover_curve.csv").write_text(complexity.curve_csv(curve))
    return report


def cmd_costmodel(args):
    cfg = costmodel.load_config(args.config)
    report = RunReport("costmodel")
    report.inputs = {"config": args.config, **cfg.to_dict()}
    if cfg.hardware is not None:
        b = costmodel.pipeline_time(cfg.hardware)
        ratio = costmodel.hardware_vs_software_ratio(cfg.hardware, cfg.software_total_s)
        report.metric("hardware_total", b.total_s, "s")
        report.metric("software_total", cfg.software_total_s, "s")
        report.metric("hardware_vs_software_ratio", ratio, "x")
        report.metric("data_movement_fraction", b.data_movement_fraction, "1")
        for stage, frac in b.per_stage_fraction.items():
            report.metric(f"fraction_{stage[:-2]}", frac, "1")
        with open(_out_path(args, report, "costmodel_stages.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["stage", "seconds", "fraction"])
            for stage, frac in b.per_stage_fraction.items():
                w.writerow([stage[:-2], repr(getattr(cfg.hardware, stage)), repr(frac)])
    if cfg.energy is not None:
        if not cfg.workload:
            raise InvalidInputError("[energy] needs a [workload] section with macs, dac_samples, adc_samples")
        adv = costmodel.energy_advantage(cfg.energy, **cfg.workload)
        report.metric("energy_advantage", adv, "x")
    report.metric("system_data_movement_energy_fraction_reference", costmodel.SYSTEM_DATA_MOVEMENT_ENERGY_FRACTION, "1")
    return report


def run_oracles(seed=0, max_size=32, trials=20, pareto_trials=10):
    """Brute-force cross-checks of the fast paths; returns ``{name: (value, threshold, ok)}``."""
    rng = np.random.default_rng(seed)
    results = {}

    worst = 0.0
    for _ in range(trials):
        r, c = rng.integers(1, max_size + 1, 2)
        x = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
        ref = dft2_bruteforce(x)
        worst = max(worst, float(np.max(np.abs(dft2(x) - ref)) / np.max(np.abs(ref))))
    results["dft2_vs_bruteforce_rel_error"] = (worst, 1e-10, worst <= 1e-10)

    worst = 0.0
    for _ in range(trials):
        r, c = rng.integers(1, max_size + 1, 2)
        a = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
        b = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
        ref = convolve_direct(a, b)
        worst = max(worst, float(np.max(np.abs(convolve_spectral(a, b) - ref) / np.abs(ref))))
    results["convolution_theorem_rel_error"] = (worst, 1e-9, worst <= 1e-9)

    mismatches = 0
    for t in range(pareto_trials):
        recs = pareto.synthetic_records(200, seed=int(rng.integers(2**31)))
        fast = {r.id for r in pareto.pareto_frontier(recs)}
        slow = {r.id for r in pareto.pareto_frontier_bruteforce(recs)}
        mismatches += fast != slow
    results["pareto_mismatched_trials"] = (mismatches, 0, mismatches == 0)

    slm = optics.SlmConfig(16, 16, pixel_pitch=15e-6)
    setup = optics.OpticalSetup(632.8e-9, 10.0)
    aperture = (rng.random((16, 16)) < 0.5).astype(float)
    corr = optics.far_field_correlation(aperture, setup, slm)
    results["far_field_pearson"] = (corr, 0.99, corr >= 0.99)

    slit_slm = optics.SlmConfig(1, 16, pixel_pitch=15e-6)
    slits = np.zeros((1, 16))
    slits[0, 5] = slits[0, 8] = 1.0
    samples = 64
    trace = optics.far_field_oracle(slits, setup, slit_slm, (1, samples))[0]
    pitch = setup.wavelength * setup.propagation_distance / slit_slm.pixel_pitch / samples
    expected = setup.wavelength * setup.propagation_distance / (3 * slit_slm.pixel_pitch)
    err = abs(optics.fringe_period(trace, pitch) - expected) / expected
    results["double_slit_period_rel_error"] = (err, 0.05, err <= 0.05)
    return results


def cmd_oracle(args):
    report = RunReport("oracle")
    report.inputs = {"seed": args.seed, "max_size": args.max_size, "trials": args.trials}
    t0 = time.perf_counter()
    for name, (value, threshold, ok) in run_oracles(args.seed, args.max_size, args.trials).items():
        report.metric(name, value, "1")
        report.metric(f"{name}_threshold", threshold, "1")
        report.check(name, ok)
    # wall time is left out of the report so identical seeds give identical output
    elapsed = time.perf_counter() - t0
    if not args.json:
        print(f"oracle suites finished in {elapsed:.1f} s", file=sys.stderr)
    return report


# -- parser -------------------------------------------------------------------

GLOBAL_DEFAULTS = {"json": False, "seed": 0, "out_dir": "optaccel-out"}


def _global_flags(parser, suppress):
    # subcommands repeat the global flags; SUPPRESS keeps them from
    # overwriting a value given before the subcommand name
    d = {k: argparse.SUPPRESS for k in GLOBAL_DEFAULTS} if suppress else GLOBAL_DEFAULTS
    parser.add_argument("--json", action="store_true", default=d["json"], help="print the run report as JSON")
    parser.add_argument("--seed", type=int, default=d["seed"], help="random seed (default 0)")
    parser.add_argument("--out-dir", default=d["out_dir"], help="directory for reports and CSVs (default ./optaccel-out)")


def build_parser():
    parser = argparse.ArgumentParser(prog="optaccel", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run the 4f convolution simulator")
    p.add_argument("--rows", type=positive_int, required=True, help="SLM pixel rows")
    p.add_argument("--cols", type=positive_int, required=True, help="SLM pixel columns")
    p.add_argument("--mode", choices=["ideal-complex", "magnitude", "intensity"], default="ideal-complex")
    p.add_argument("--encoding", choices=["amplitude", "phase"], default="amplitude")
    p.add_argument("--bit-depth", type=positive_int, default=8)
    p.add_argument("--macro-pixel", type=positive_int, default=1)
    p.add_argument("--pixel-pitch", type=positive_float, default=15e-6, help="meters")
    p.add_argument("--input-a", help="CSV grid of values in [0, 1] (random if omitted)")
    p.add_argument("--input-b", help="CSV grid of values in [0, 1] (random if omitted)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("profile-analyze", parents=[common], help="Amdahl speedups from profiles")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="profile CSV (full or reduced layout)")
    src.add_argument("--table1", action="store_true", help="use the bundled 27-benchmark dataset")
    p.add_argument("--patterns", help="comma-separated name substrings (default fft,ifft,fourier,conv)")
    p.add_argument("--acceleration", type=acceleration_factor, default=math.inf,
                   help="acceleration factor P (default inf)")
    p.set_defaults(func=cmd_profile_analyze)

    p = sub.add_parser("pareto", parents=[common], help="converter Pareto frontier and feasibility gap")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="converter survey CSV")
    src.add_argument("--synthetic", type=positive_int, help="generate N synthetic records")
    p.add_argument("--kind", choices=pareto.KINDS, required=True)
    tgt = p.add_mutually_exclusive_group()
    tgt.add_argument("--target", type=positive_float, help="target energy per bit (J)")
    tgt.add_argument("--reduction", type=positive_float, default=32.0,
                     help="target = frontier minimum / this factor (default 32)")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("crossover", parents=[common], help="conversion vs computation crossover")
    cls = p.add_mutually_exclusive_group(required=True)
    cls.add_argument("--class", dest="cls", choices=sorted(complexity.BUILTIN_CLASSES))
    cls.add_argument("--constant", type=nonneg_float, help="fixed work per problem")
    p.add_argument("--t-conv", type=nonneg_float, default=1.0, help="seconds per converted element")
    p.add_argument("--t-digital", type=nonneg_float, default=1.0, help="seconds per digital op")
    p.add_argument("--t-analog", type=nonneg_float, default=0.0, help="seconds per analog op")
    p.add_argument("--target", type=positive_float, help="speedup whose break-even size to report")
    p.add_argument("--n-min", type=positive_int, default=1)
    p.add_argument("--n-max", type=positive_int, default=10**6)
    p.add_argument("--points", type=positive_int, default=61)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("costmodel", parents=[common], help="pipeline latency and energy model")
    p.add_argument("--config", default="prototype.cfg", help="config path or bundled name")
    p.set_defaults(func=cmd_costmodel)

    p = sub.add_parser("oracle", parents=[common], help="run the brute-force validation suites")
    p.add_argument("--max-size", type=positive_int, default=32)
    p.add_argument("--trials", type=positive_int, default=20)
    p.set_defaults(func=cmd_oracle)
    return parser


def _print_table(report):
    width = max((len(k) for k in report.outputs), default=0)
    print(f"[{report.command}]")
    for name, m in report.outputs.items():
        value = m["value"]
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"  {name:<{width}}  {value} {m['units']}")
    for name, ok in report.validations.items():
        print(f"  {'PASS' if ok else 'FAIL'}  {name}")
    for path in report.artifacts:
        print(f"  wrote {path}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except (InvalidInputError, OSError) as exc:
        print(f"optaccel {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    json_path = Path(args.out_dir) / f"{args.command.replace('-', '_')}.json"
    report.artifacts.append(str(json_path))
    text = report.to_json()
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        _print_table(report)
    return EXIT_OK if report.passed else EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
