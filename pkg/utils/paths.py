import os
import sys

from constants import APP_NAME, ENV_HOME


def get_data_dir() -> str:
    """Return the platform-appropriate per-user data directory, creating it
    if it doesn't exist.

    $SLEPERC_HOME wins when set (tests point it at a temp dir).
    macOS:   ~/Library/Application Support/sleperc
    Windows: %APPDATA%/sleperc  (falls back to ~/sleperc)
    Linux:   $XDG_DATA_HOME/sleperc  (falls back to ~/.local/share/sleperc)
    """
    override = os.environ.get(ENV_HOME)
    if override:
        data_dir = override
    else:
        if sys.platform == "darwin":
            base = os.path.expanduser("~/Library/Application Support")
        elif sys.platform == "win32":
            base = os.environ.get("APPDATA", os.path.expanduser("~"))
        else:
            base = os.environ.get("XDG_DATA_HOME", os.path.expanduser("~/.local/share"))
        data_dir = os.path.join(base, APP_NAME)
    os.makedirs(data_dir, exist_ok=True)
    return data_dir


def get_runs_dir() -> str:
    """Directory that `--save` writes timestamped result tables into."""
    runs = os.path.join(get_data_dir(), "runs")
    os.makedirs(runs, exist_ok=True)
    return runs
