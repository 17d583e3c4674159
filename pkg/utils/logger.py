import os
import sys
from datetime import datetime

from utils.paths import get_data_dir

_echo = True


def set_echo(enabled: bool) -> None:
    """Turn the stderr copy of every log line on or off (`--quiet`)."""
    global _echo
    _echo = enabled


def get_log_path() -> str:
    """Return the absolute path of the run log file."""
    return os.path.join(get_data_dir(), "sleperc.log")


def _emit(line: str) -> None:
    # stdout carries result tables, so the live copy goes to stderr.
    if _echo:
        print(line, file=sys.stderr)
    try:
        with open(get_log_path(), "a", encoding="utf-8") as f:
            f.write(line + "\n")
    except OSError:
        pass


def log_run(
    experiment: str,
    operation: str,
    params_summary: str,
    status: str,
    result_summary: str,
) -> None:
    """Append a one-line summary of an estimator run to the log file.

    One line per estimate, so a results table can always be traced back to
    the exact parameters and seed that produced it.
    """
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    line = (
        f"[{timestamp}] {experiment} {operation} "
        f"| params: {params_summary} "
        f"| status: {status} "
        f"| result: {result_summary}"
    )
    _emit(line)


def log_system(message: str, *, level: str = "INFO") -> None:
    """Append a free-form progress message to the log + stderr.

    Used by the command flows to narrate what they're doing around the
    per-estimate lines that log_run emits. `level` is a short tag
    (INFO/WARN/ERROR) shown in the prefix.
    """
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    _emit(f"[{timestamp}] [{level}] {message}")
