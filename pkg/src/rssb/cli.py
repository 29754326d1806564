"""Command-line front end.

Typical round trip::

    rssb simulate --preset bed --seed 3 --out trace.csv
    rssb estimate --trace trace.csv --method all --out estimates.csv
    rssb evaluate --estimates estimates.csv --true-freq-hz 0.2 \\
        --trace trace.csv --out metrics.json
    rssb sweep --preset bed --seeds 5 --jobs 4 --out sweep.csv
    rssb figures --which fig3a --out figs/

Every command writes a manifest next to its primary output
(``<out>.manifest.json``) recording the argv, the fully resolved
configuration, the seed and the produced files, so any artifact can be
regenerated from the manifest alone.

Exit codes: 0 on success, 2 when inputs fail validation (bad flags,
malformed config or CSV, unknown preset), 1 on unexpected runtime
errors.
"""

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .dsp import FilterDesignError, FilterSpec, is_uniform, preprocess, resample_uniform
from .estimators import (DftConfig, EstimateSeries, EstimatorError, GpConfig,
                         KfConfig, dft_estimate, gp_estimate, kf_estimate)
from .evaluation import compute_metrics, snr_estimate, snr_sweep
from .figures import FIGURES
from .presets import PRESETS, preset_scenario
from .simulator import (RssTrace, ScenarioError, scenario_from_dict,
                        scenario_to_dict, synthesize, to_absolute)

ESTIMATES_HEADER = "time_s,method,f_hat_hz"
METHODS = ("dft", "kf", "gp")


# --- shared plumbing --------------------------------------------------------

def _parse_assignment(text):
    """Split one ``--set`` item into (dotted key, parsed value).

    Values are decoded as JSON when possible, otherwise kept as raw
    strings, so ``--set seed=7`` and ``--set model=frozen`` both work.
    """
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ValueError(f"override {text!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _apply_overrides(config: dict, assignments):
    for item in assignments:
        key, value = _parse_assignment(item)
        node = config
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValueError(f"cannot descend into {part!r} of override {key!r}")
        node[parts[-1]] = value
    return config


def _load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc


def _resolve_scenario(args):
    """Scenario from --preset or --config plus --set/--seed overrides."""
    if bool(args.preset) == bool(args.config):
        raise ValueError("exactly one of --preset or --config is required")
    if args.preset:
        data = scenario_to_dict(preset_scenario(args.preset))
    else:
        data = _load_json(args.config)
    _apply_overrides(data, args.overrides)
    if args.seed is not None:
        data["seed"] = int(args.seed)
    return scenario_from_dict(data), data


def _estimator_settings(args):
    """Filter and per-method configs from --config/--set sections."""
    data = _load_json(args.config) if args.config else {}
    _apply_overrides(data, args.overrides)

    def build(cls, section):
        fields = data.get(section, {})
        if not isinstance(fields, dict):
            raise ValueError(f"section {section!r} must be an object")
        try:
            return cls(**{k: tuple(v) if isinstance(v, list) else v
                          for k, v in fields.items()})
        except TypeError as exc:
            raise ValueError(f"bad {section} settings: {exc}") from exc

    return (build(FilterSpec, "filter"), build(DftConfig, "dft"),
            build(KfConfig, "kf"), build(GpConfig, "gp"), data)


def _write_manifest(primary_out, command, config, seed, outputs):
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "seed": seed,
        "config": config,
        "outputs": [str(p) for p in outputs],
    }
    path = f"{primary_out}.manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, default=float)
        fh.write("\n")
    return path


def _pick_channel(trace, requested):
    if requested is None:
        return trace.channels()[0]
    if requested not in trace.channels():
        raise ValueError(f"channel {requested} not present; trace has {trace.channels()}")
    return requested


# --- subcommands ------------------------------------------------------------

def cmd_simulate(args):
    scenario, data = _resolve_scenario(args)
    trace = synthesize(scenario)
    if args.absolute:
        trace = to_absolute(trace, scenario.baseline_dbm)
    trace.save_csv(args.out)
    _write_manifest(args.out, "simulate", data, scenario.seed, [args.out])
    print(f"wrote {len(trace.times_s)} samples on "
          f"{len(trace.channels())} channel(s) to {args.out}")


def cmd_estimate(args):
    trace = RssTrace.load_csv(args.trace)
    channel = _pick_channel(trace, args.channel)
    t, values = trace.for_channel(channel)
    filter_spec, dft_cfg, kf_cfg, gp_cfg, data = _estimator_settings(args)
    fs = trace.nominal_rate_hz()
    methods = METHODS if args.method == "all" else (args.method,)

    results = {}
    if "dft" in methods:
        if is_uniform(t):
            t_grid, v_grid = t, values
        else:
            t_grid, v_grid = resample_uniform(t, values, fs)
        y, _ = preprocess(v_grid, filter_spec, fs)
        results["dft"] = dft_estimate(t_grid, y, dft_cfg)
    if "kf" in methods or "gp" in methods:
        _, z = preprocess(values, filter_spec, fs)
        if "kf" in methods:
            results["kf"] = kf_estimate(t, z, kf_cfg)
        if "gp" in methods:
            results["gp"] = gp_estimate(t, z, gp_cfg)

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ESTIMATES_HEADER.split(","))
        for method in methods:
            series = results[method]
            for k in range(len(series)):
                writer.writerow([f"{series.times_s[k]:.6f}", method,
                                 f"{series.f_hat_hz[k]:.9g}"])
    outputs = [args.out]

    if args.spectrogram:
        if "dft" not in results:
            raise ValueError("--spectrogram requires the dft method")
        series = results["dft"]
        freqs = series.aux["freq_hz"]
        band = (freqs >= dft_cfg.band_hz[0]) & (freqs <= dft_cfg.band_hz[1])
        with open(args.spectrogram, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["window_end_s", "f_hz", "psd"])
            for k, end_s in enumerate(series.times_s):
                for f, p in zip(freqs[band], series.aux["psd"][k][band]):
                    writer.writerow([f"{end_s:.6f}", f"{f:.9g}", f"{p:.9g}"])
        outputs.append(args.spectrogram)

    _write_manifest(args.out, "estimate", data, None, outputs)
    n = sum(len(s) for s in results.values())
    print(f"wrote {n} estimates ({', '.join(methods)}) to {args.out}")


def _load_estimates(path):
    table = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != ESTIMATES_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            try:
                if len(parts) != 3:
                    raise ValueError("expected 3 fields")
                table.setdefault(parts[1], []).append(
                    (float(parts[0]), float(parts[2])))
            except ValueError as exc:
                raise ValueError(f"{path}: malformed row {lineno}: {exc}") from exc
    if not table:
        raise ValueError(f"{path}: no estimates found")
    return {method: np.asarray(rows).T for method, rows in table.items()}


def cmd_evaluate(args):
    estimates = _load_estimates(args.estimates)
    snr_db = None
    if args.trace:
        trace = RssTrace.load_csv(args.trace)
        t, values = trace.for_channel(_pick_channel(trace, args.channel))
        fs = trace.nominal_rate_hz()
        if not is_uniform(t):
            t, values = resample_uniform(t, values, fs)
        y, _ = preprocess(values, FilterSpec(), fs)
        snr_db = snr_estimate(y, fs, args.true_freq_hz)

    report = {}
    for method in sorted(estimates):
        times, f_hat = estimates[method]
        series = EstimateSeries(method=method, times_s=times,
                                f_hat_hz=f_hat, aux={})
        report[method] = compute_metrics(series, args.true_freq_hz,
                                         snr_db=snr_db).to_dict()
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2, default=float)
        fh.write("\n")
    _write_manifest(args.out, "evaluate",
                    {"true_freq_hz": args.true_freq_hz}, None, [args.out])
    for method in sorted(report):
        print(f"{method}: mae {report[method]['freq_mae_bpm']:.3f} bpm, "
              f"hit ratio {report[method]['hit_ratio_pct']:.1f}%")


def cmd_sweep(args):
    scenario, data = _resolve_scenario(args)
    targets = ([float(x) for x in args.targets.split(",")] if args.targets
               else list(range(-18, -2, 2)))
    methods = tuple(args.methods.split(","))
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    rows = snr_sweep(scenario, targets, n_seeds=args.seeds, methods=methods,
                     jobs=args.jobs)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snr_db", "method", "hit_ratio_pct"])
        for row in rows:
            writer.writerow([row["snr_db"], row["method"],
                             f"{row['hit_ratio_pct']:.2f}"])
    config = {"scenario": data, "snr_targets_db": targets,
              "n_seeds": args.seeds, "methods": list(methods)}
    _write_manifest(args.out, "sweep", config, None, [args.out])
    print(f"wrote {len(rows)} sweep rows to {args.out}")


def cmd_figures(args):
    os.makedirs(args.out, exist_ok=True)
    names = list(FIGURES) if args.which == "all" else [args.which]
    outputs = []
    for name in names:
        if name == "fig6c":
            outputs.extend(FIGURES[name](args.out, n_seeds=args.seeds,
                                         jobs=args.jobs))
        else:
            outputs.extend(FIGURES[name](args.out))
        print(f"{name}: done")
    config = {"which": names, "n_seeds": args.seeds}
    _write_manifest(os.path.join(args.out, "figures"), "figures", config,
                    None, outputs)


# --- parser -----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="rssb",
        description="Breathing-rate simulation and estimation from RSS traces.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    scenario_opts = argparse.ArgumentParser(add_help=False)
    scenario_opts.add_argument("--preset", choices=sorted(PRESETS),
                               help="built-in scenario name")
    scenario_opts.add_argument("--config", help="scenario JSON file")
    scenario_opts.add_argument("--seed", type=int, default=None,
                               help="override the scenario seed")
    scenario_opts.add_argument("--set", dest="overrides", action="append",
                               default=[], metavar="KEY=VALUE",
                               help="override a config field "
                                    "(dotted path, JSON-encoded value)")

    p = sub.add_parser("simulate", parents=[scenario_opts],
                       help="synthesize an RSS trace CSV")
    p.add_argument("--out", required=True, help="output trace CSV")
    p.add_argument("--absolute", action="store_true",
                   help="write absolute dBm using the scenario baseline")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="run estimators on a trace CSV")
    p.add_argument("--trace", required=True, help="input trace CSV")
    p.add_argument("--channel", type=int, default=None,
                   help="channel id (default: first present)")
    p.add_argument("--method", choices=METHODS + ("all",), default="all")
    p.add_argument("--config", help="estimator settings JSON "
                                    "(sections filter/dft/kf/gp)")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override an estimator setting")
    p.add_argument("--out", required=True, help="output estimates CSV")
    p.add_argument("--spectrogram", help="also write the dft spectrogram CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("evaluate", help="score estimates against a known rate")
    p.add_argument("--estimates", required=True, help="estimates CSV")
    p.add_argument("--true-freq-hz", type=float, required=True)
    p.add_argument("--trace", help="trace CSV for the SNR characterization")
    p.add_argument("--channel", type=int, default=None)
    p.add_argument("--out", required=True, help="output metrics JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", parents=[scenario_opts],
                       help="hit ratio across an injected-SNR grid")
    p.add_argument("--targets", help="comma-separated SNR targets in dB "
                                     "(default -18..-4 step 2)")
    p.add_argument("--seeds", type=int, default=25,
                   help="seeds per SNR target")
    p.add_argument("--methods", default="dft,kf,gp")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel worker processes")
    p.add_argument("--out", required=True, help="output sweep CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="regenerate the model figures")
    p.add_argument("--which", choices=("all",) + tuple(FIGURES), default="all")
    p.add_argument("--seeds", type=int, default=10,
                   help="seeds for the sweep figure")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ScenarioError, EstimatorError, FilterDesignError, ValueError,
            KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
