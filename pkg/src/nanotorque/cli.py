"""Command-line front end.

Verbs::

    nanotorque scan-torque CONFIG [--tol T] [--out PATH]
    nanotorque am-analysis CONFIG [--out PATH]
    nanotorque modes CONFIG [--out PATH]

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import load_config
from .errors import ConfigError, DomainError, NanotorqueError, NoGuidedMode
from .scan import emit_plotdata, format_csv, mode_table, run_am_analysis, run_scan, write_text

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nanotorque", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("scan-torque", "radial scan of torques and emission rates"),
        ("am-analysis", "angular-momentum densities of the drive modes"),
        ("modes", "guided modes: beta, group index and cutoff"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="configuration file (key = value)")
        p.add_argument("--out", help="output path (file, or directory for plot data)")
        p.add_argument("--tol", type=float, help="relative quadrature tolerance (default 1e-6)")
    return parser


def _emit(text: str, out: str | None):
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _scan(cfg, args):
    tol = args.tol if args.tol is not None else cfg.tol
    if not tol > 0:
        raise ConfigError("--tol must be positive", field="--tol")
    table = run_scan(cfg, tol=tol)
    out = args.out or cfg.out_path or None
    if cfg.out_format == "plotdata":
        for path in emit_plotdata(table, cfg.figure, out or "."):
            print(path)
    else:
        _emit(format_csv(table), out)


def _am(cfg, args):
    dens, summary = run_am_analysis(cfg)
    out = args.out or cfg.out_path or None
    _emit(format_csv(dens), out)
    if out:
        root, ext = os.path.splitext(out)
        write_text(f"{root}_integrated{ext or '.csv'}", format_csv(summary))
    else:
        sys.stdout.write("\n" + format_csv(summary))


def _modes(cfg, args):
    _emit(format_csv(mode_table(cfg)), args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"scan-torque": _scan, "am-analysis": _am, "modes": _modes}
    try:
        cfg = load_config(args.config)
        handlers[args.command](cfg, args)
    except (ConfigError, NoGuidedMode, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NanotorqueError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
