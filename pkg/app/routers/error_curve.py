from pathlib import Path

import typer

from app.dependencies.common import handle_errors
from app.services.tkpsvd import error_curve as relative_error_curve
from app.utils.tensor_io import read_sigmas


@handle_errors
def error_curve(
    input: Path = typer.Argument(..., exists=True, dir_okay=False, help="A .tkp file or a text file of sigmas"),
):
    """List the relative approximation error for every truncation r = 0..R."""
    curve = relative_error_curve(read_sigmas(input))
    for r, err in enumerate(curve):
        typer.echo(f"{r} {err:.17g}")
