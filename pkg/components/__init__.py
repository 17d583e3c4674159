"""Terminal building blocks shared by the subcommands.

Import from the package root:

    from components import ProgressLine, status_row
"""

from components.progress import ProgressLine
from components.report import status_row

__all__ = [
    "ProgressLine",
    "status_row",
]
