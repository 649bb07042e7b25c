from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from app.dependencies.common import GRID_HELP, console, handle_errors
from app.models.enums import Backend
from app.schemas.grid_schema import FactorGrid
from app.services.tkpsvd import reconstruct_kp, tkpsvd
from app.utils.tensor_io import read_tensor, write_decomposition


@handle_errors
def decompose(
    input: Path = typer.Argument(..., exists=True, dir_okay=False, help="Tensor file (.ten or .tenb)"),
    grid: str = typer.Option(..., "--grid", help=GRID_HELP),
    backend: Backend = typer.Option(Backend.TTR1, "--backend", help="Polyadic backend"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative truncation tolerance (default 1e-12)"),
    output: Path = typer.Option(..., "-o", "--output", help="Decomposition file (.tkp)"),
):
    """Compute the TKPSVD of a tensor and write it as .tkp."""
    tensor = read_tensor(input)
    factor_grid = FactorGrid.parse(grid)
    res = tkpsvd(tensor, factor_grid, backend, tol)
    write_decomposition(output, res)

    norm = res.source_norm
    residual = (reconstruct_kp(res) - tensor).frobenius_norm()
    relative = residual / norm if norm > 0 else residual

    table = Table(title=f"TKPSVD of {'x'.join(map(str, tensor.shape))} on grid {factor_grid}")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("backend", res.backend.value)
    table.add_row("terms", str(res.rank))
    table.add_row("||A||_F", f"{norm:.12g}")
    for j, sigma in enumerate(res.sigmas[:5], start=1):
        table.add_row(f"sigma_{j}", f"{sigma:.12g}")
    table.add_row("relative residual", f"{relative:.3e}")
    table.add_row("sigma multiplets", str(len(res.multiplets)))
    table.add_row("flagged terms", str(int(res.flagged().sum())))
    console.print(table)
    console.print(f"✅ wrote {output}")
