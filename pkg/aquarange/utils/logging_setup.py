"""Console logging through rich."""

import logging
from typing import Optional
from rich.console import Console
from rich.logging import RichHandler


def setup_logging(verbose: bool = False, console: Optional[Console] = None):
    """Installs a rich handler on the package logger."""
    logger = logging.getLogger("aquarange")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    logger.addHandler(
        RichHandler(
            console=console,
            show_path=False,
            rich_tracebacks=True,
            markup=False,
        )
    )
    logger.propagate = False
