"""Shared pieces of the CLI commands: consoles, option parsing, error mapping."""
import functools
from typing import Callable, List, Tuple

import numpy as np
import typer
from loguru import logger
from rich.console import Console

from app.core.errors import InvalidArgument, NonFiniteInput, TkpError

console = Console()
err_console = Console(stderr=True)

GRID_HELP = (
    "Factor grid 'n1xn2x...,n1xn2x...' listing A(1)..A(d) left to right. "
    "The Kronecker chain runs the other way: A = sum sigma A(d) (x) ... (x) A(1), "
    "so the FIRST factor listed varies fastest."
)


def parse_shape(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(n) for n in text.lower().split("x"))
    except ValueError as e:
        raise InvalidArgument(f"cannot parse shape '{text}'; expected e.g. 12x12x12") from e


def parse_terms(text: str) -> List[int]:
    try:
        terms = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise InvalidArgument(f"cannot parse term list '{text}'; expected e.g. 1,5,20") from e
    if not terms or min(terms) < 1:
        raise InvalidArgument(f"term counts must be positive integers, got '{text}'")
    return terms


def handle_errors(command: Callable) -> Callable:
    """Turn library errors into a red message and the matching exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TkpError as e:
            logger.debug("{} failed: {!r}", command.__name__, e)
            err_console.print(f"[red]❌ {e.code}:[/red] {e.detail}")
            raise typer.Exit(code=e.exit_code)
        except np.linalg.LinAlgError as e:
            err_console.print(f"[red]❌ {NonFiniteInput.__name__}:[/red] {e}")
            raise typer.Exit(code=NonFiniteInput.exit_code)
    return wrapper
