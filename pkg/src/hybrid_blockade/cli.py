"""Command-line entry point: ``hpb point | sweep2d | hpb-track | spectrum | validate``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import analytics as an
from .config import grid_from_config, load_config, params_from_config
from .errors import BlockadeError, NumericalError, ParameterError
from .sweep import fmt, run_hpb_track, run_point, run_sweep, to_csv, to_json
from .validation import validate

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--ncav", type=int, dest="n_cav")
    for name in ("g1", "g2", "delta", "Delta", "eta", "gamma", "K"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--branch", choices=("primary", "secondary"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hpb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in [
        ("point", "full report for one parameter point"),
        ("sweep2d", "observables on a Delta/delta grid"),
        ("hpb-track", "observables along a hybrid-blockade trajectory"),
        ("spectrum", "dressed-state energies versus delta"),
        ("validate", "run the cross-validation checks"),
    ]:
        _common(sub.add_parser(name, help=text))
    return parser


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def spectrum_table(cfg: dict) -> tuple[list[str], list[list[float]]]:
    params = params_from_config(cfg)
    rng = cfg["spectrum"]
    header = ["delta_over_g1", "delta"] + [f"eps1_{i}" for i in range(3)] + [f"eps2_{i}" for i in range(4)]
    rows = []
    for x in np.linspace(float(rng["start"]), float(rng["stop"]), int(rng["num"])):
        s = an.dressed_spectrum(params.replace(delta=x * params.g1))
        rows.append([float(x), s.delta, *s.single_excitation, *s.two_excitation])
    return header, rows


def _run(args) -> int:
    overrides = {k: getattr(args, k) for k in ("g1", "g2", "delta", "Delta", "eta", "gamma", "K", "n_cav")}
    cfg = load_config(args.config, overrides)
    if args.branch:
        cfg["track"]["branch"] = args.branch
    if args.threads < 1:
        raise ParameterError("--threads must be at least 1")
    fmt_name = args.format or ("json" if args.command in ("point", "validate") else "csv")

    if args.command == "point":
        report = run_point(params_from_config(cfg), int(cfg["n_cav"]))
        report["effective_config"] = cfg
        if fmt_name == "json":
            _emit(json.dumps(report, indent=1) + "\n", args.out)
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            obs = report["observables"]
            for key in ("mean_photon", "g2_zero", "radiance"):
                w.writerow([key, "NaN" if obs[key] is None else fmt(obs[key])])
            for k, v in enumerate(report["pn"]):
                w.writerow([f"p{k}", fmt(v)])
            _emit(buf.getvalue(), args.out)
        return EXIT_OK if report["diagnostics"]["converged"] else EXIT_NUMERICAL

    if args.command == "sweep2d":
        grid = grid_from_config(cfg)
        result = run_sweep(grid, set(cfg["sweep"].get("observables", [])) | {"mean_photon"},
                           threads=args.threads, config=cfg)
        _emit(to_csv(result) if fmt_name == "csv" else to_json(result), args.out)
        return EXIT_OK

    if args.command == "hpb-track":
        track = cfg["track"]
        K = track["K"] if args.K is None else [args.K]
        result = run_hpb_track(K, track["branch"], params_from_config(cfg), int(cfg["n_cav"]),
                               threads=args.threads, config=cfg)
        _emit(to_csv(result) if fmt_name == "csv" else to_json(result), args.out)
        return EXIT_OK

    if args.command == "spectrum":
        header, rows = spectrum_table(cfg)
        if fmt_name == "json":
            _emit(json.dumps({"effective_config": cfg,
                              "rows": [dict(zip(header, r)) for r in rows]}, indent=1) + "\n", args.out)
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows([[fmt(v) for v in r] for r in rows])
            _emit(buf.getvalue(), args.out)
        return EXIT_OK

    if args.command == "validate":
        results = validate(params_from_config(cfg))
        if fmt_name == "json":
            text = "".join(json.dumps(r.as_dict()) + "\n" for r in results)
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["check", "passed", "value", "detail"])
            for r in results:
                w.writerow([r.name, "true" if r.passed else "false", fmt(r.value), r.detail])
            text = buf.getvalue()
        _emit(text, args.out)
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}", file=sys.stderr)
        return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION

    raise UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ParameterError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, BlockadeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
