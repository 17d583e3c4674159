"""sleperc entry point.

Builds the argparse tree, maps each subcommand to its handler through a
small route table, and turns library exceptions into exit codes. Each
handler receives the parsed `ExperimentConfig` plus the run's cancellation
token, so a command never has to touch argparse or signals.

    python main.py formula --kappa 4 --x0 1 --y0 1
    python main.py sle --kappa 2,4 --x0 1 --y0 1 --method w_diffusion,loewner
    python main.py arc --theta pi/2,pi,3pi/2 --delta 0.0133
    python main.py verify --suite symmetry
"""

from __future__ import annotations

import argparse
import signal
import sys
import threading

from commands import arc_command, formula_command, sle_command, verify_command
from commands.config import ExperimentConfig
from constants import APP_NAME, APP_VERSION, EXIT_CANCELLED, EXIT_DOMAIN, OUTPUT_FORMATS
from core.diffusion import METHODS
from core.errors import SlepercError
from utils.cancellation import CancellationToken, install_sigint
from utils.logger import get_log_path, log_system, set_echo

ROUTES = {
    "formula": formula_command.cmd_formula,
    "sle": sle_command.cmd_sle_left_passage,
    "arc": arc_command.cmd_arc_sweep,
    "verify": verify_command.cmd_verify,
}


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=OUTPUT_FORMATS, help="table format (default: prefs or csv)")
    p.add_argument("--output", "-o", help="write the table here instead of stdout")
    p.add_argument("--save", action="store_true", help="write the table to the data dir's runs/ folder")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="number of samples")
    p.add_argument("--seed", type=int, help="run seed (default: prefs or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="SLE left-passage and percolation arc-event probabilities, exact and simulated.",
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--quiet", "-q", action="store_true", help="no log echo or progress on stderr")
    parser.add_argument("--workers", type=int, help="worker threads (default: $SLEPERC_WORKERS, prefs, CPUs)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formula", help="evaluate the closed-form probabilities")
    p.add_argument("--kappa", help="comma-separated kappa values in (0, 8], ratios allowed (8/3)")
    p.add_argument("--x0", help="comma-separated x0 values")
    p.add_argument("--y0", help="comma-separated y0 values (> 0)")
    p.add_argument("--theta", help="comma-separated arc angles, e.g. pi/2,3pi/2")
    _add_output_flags(p)

    p = sub.add_parser("sle", help="Monte Carlo left-passage estimates")
    p.add_argument("--kappa", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--y0", required=True)
    p.add_argument("--method", default="w_diffusion", help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--step", type=float, help="relative Euler step (default 1e-3)")
    p.add_argument("--escape", type=float, help="|w| level where a path is settled (default 20)")
    p.add_argument("--max-steps", dest="max_steps", type=int, help="truncation limit per path")
    p.add_argument(
        "--no-escape-correction",
        dest="no_escape_correction",
        action="store_true",
        help="settle escaped paths by sign only (biased)",
    )
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("arc", help="percolation estimates of the arc event")
    p.add_argument("--theta", required=True)
    p.add_argument("--delta", type=float, help="lattice mesh (default 1/75)")
    p.add_argument("--margin", type=float, help="ring outside the disk (default max(10 delta, 0.1))")
    p.add_argument("--dump", help="also write sample 0's coloring to this path")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--suite", default="all", choices=("all", *verify_command.SUITES))
    p.add_argument("--inject-fault", dest="inject_fault", choices=verify_command.FAULTS)
    _add_run_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    set_echo(not args.quiet)
    token = CancellationToken()
    previous = None
    if threading.current_thread() is threading.main_thread():
        previous = install_sigint(token)
    log_system(f"{APP_NAME} v{APP_VERSION} {args.command} (log: {get_log_path()})")

    try:
        config = ExperimentConfig.from_args(args)
        status = ROUTES[config.subcommand](config, cancel=token)
    except SlepercError as exc:
        log_system(f"{exc.code}: {exc}", level="ERROR")
        if args.quiet:
            print(f"{APP_NAME}: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        log_system(f"i/o error: {exc}", level="ERROR")
        return EXIT_DOMAIN
    except KeyboardInterrupt:
        log_system("interrupted", level="WARN")
        return EXIT_CANCELLED
    finally:
        if previous is not None:
            signal.signal(signal.SIGINT, previous)
    log_system(f"{args.command} finished with exit status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
