"""
Rich console, theme and logging setup for the command line.

The palette keeps the muted orange/blue of the original terminal theme:
green-teal for verdicts that hold, coral for failures, amber for verdicts that
rest on known results, and a soft grey for secondary detail.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional, Sequence, TextIO

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.theme import Theme

from watkins.reports import Verdict

watkins_theme = Theme(
    {
        "verdict.ok": "#2F9D7E",
        "verdict.fail": "bold #D85B4A",
        "verdict.known": "#D8A53A",
        "muted": "#8A8580",
        "heading": "bold #FF7A59",
        "accent": "#4A6FA5",
    }
)

VERDICT_STYLES = {
    Verdict.HOLDS_BY_BOUNDS: "verdict.ok",
    Verdict.KNOWN_PRIME_POWER: "verdict.known",
    Verdict.KNOWN_SMALL_CONDUCTOR: "verdict.known",
    Verdict.UNDECIDED_BY_BOUNDS: "verdict.fail",
}


def make_console(
    *, color: bool = True, file: Optional[TextIO] = None, stderr: bool = False
) -> Console:
    """Console with the watkins theme; ``color=False`` strips all styling."""
    return Console(
        theme=watkins_theme,
        file=file,
        stderr=stderr,
        no_color=not color,
        highlight=False,
        soft_wrap=True,
        force_terminal=None if color else False,
    )


def setup_logging(verbosity: int, *, color: bool = True) -> None:
    """Route log records to stderr: WARNING by default, INFO with -v, DEBUG with -vv."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    handler = RichHandler(
        console=make_console(color=color, stderr=True),
        show_path=verbosity >= 2,
        rich_tracebacks=verbosity >= 2,
    )
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)


def status(ok: bool, yes: str = "ok", no: str = "FAIL") -> str:
    return f"[verdict.ok]{yes}[/]" if ok else f"[verdict.fail]{no}[/]"


def verdict_markup(verdict: Verdict) -> str:
    return f"[{VERDICT_STYLES[verdict]}]{verdict.value}[/]"


def table(title: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> Table:
    """A simple rich table with string cells."""
    out = Table(title=title, title_style="heading", header_style="accent")
    for name in columns:
        out.add_column(name)
    for row in rows:
        out.add_row(*(str(cell) for cell in row))
    return out
