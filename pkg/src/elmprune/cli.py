"""Command-line runner: ``elmprune <experiment> [options]``.

Exit status is 0 on success, 2 for configuration errors and 3 for data
errors; errors are reported on stderr as one JSON object.
"""

import argparse
import json
import logging
import sys

from .data import CsvError
from .experiments import KINDS, ConfigError, ExperimentConfig, format_table, run_experiment, write_report


def parse_seeds(text):
    """``"0-19"``, ``"1,5,9"`` or a mix such as ``"0-4,10"``."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def parse_grid(text):
    """``geometric:15``, ``step:1``, ``relative:0.5,1,2`` or an explicit list ``5,10,50``."""
    if ":" in text:
        kind, arg = text.split(":", 1)
        if kind == "geometric":
            return {"kind": kind, "points": int(arg)}
        if kind == "step":
            return {"kind": kind, "step": int(arg)}
        if kind == "relative":
            return {"kind": kind, "factors": [float(f) for f in arg.split(",")]}
        raise argparse.ArgumentTypeError(f"unknown grid kind {kind!r}")
    return [int(s) for s in text.split(",") if s.strip()]


def _label_column(text):
    try:
        return int(text)
    except ValueError:
        return text


def build_parser():
    parser = argparse.ArgumentParser(prog="elmprune", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", help="JSON file with ExperimentConfig fields")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--seeds", type=parse_seeds, help="e.g. 0-19 or 1,2,3")
        p.add_argument("--cv-splits", dest="cv_splits", type=int)
        p.add_argument("--m-star", dest="m_star", type=int)
        p.add_argument("--delta", type=float)
        p.add_argument("--activation", choices=["sigmoid", "tanh", "relu"])
        p.add_argument("--metric", choices=["accuracy", "auc"])
        p.add_argument("--grid", type=parse_grid)
        p.add_argument("--patience", type=int)
        p.add_argument("--csv", dest="csv_path", help="pre-featurized dataset, one sample per row")
        p.add_argument("--label-column", dest="label_column", type=_label_column)
        p.add_argument("--n-samples", dest="n_samples", type=int)
        p.add_argument("--noise-sd", dest="noise_sd", type=float)
        p.add_argument("--junk", type=int)
        p.add_argument("--junk-counts", dest="junk_counts", type=lambda s: [int(x) for x in s.split(",")])
        p.add_argument("--standardize", action="store_true", default=None)
        p.add_argument("--refit", action="store_true", default=None)
        p.add_argument("--timestamp", help="override the timestamp used in the CSV file name")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


_OVERRIDES = ("output_dir", "seeds", "cv_splits", "m_star", "delta", "activation", "metric", "grid", "patience",
              "csv_path", "label_column", "n_samples", "noise_sd", "junk", "junk_counts", "standardize", "refit")


def _fail(code, exc, **context):
    payload = {"error": type(exc).__name__, "message": str(exc), **{k: v for k, v in context.items() if v is not None}}
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in _OVERRIDES if getattr(args, k) is not None}
    try:
        if args.config:
            with open(args.config) as fh:
                d = json.load(fh)
            if d.get("kind", args.kind) != args.kind:
                raise ConfigError("kind", f"config file is for {d['kind']!r}, not {args.kind!r}")
            d.update(overrides, kind=args.kind)
            cfg = ExperimentConfig.from_dict(d)
        else:
            cfg = ExperimentConfig.from_dict({"kind": args.kind, **overrides})
        report = run_experiment(cfg)
    except ConfigError as exc:
        return _fail(2, exc, field=exc.field)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(2, exc)
    except CsvError as exc:
        return _fail(3, exc, row=exc.row, column=exc.column)
    except ValueError as exc:
        return _fail(3, exc)

    csv_path, json_path = write_report(report, cfg.output_dir, args.timestamp)
    print(format_table(report))
    print(f"\nwrote {csv_path} and {json_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
