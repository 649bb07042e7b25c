from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from app.core.config import settings
from app.dependencies.common import console, handle_errors
from app.models.enums import StructureTag
from app.schemas.structure_schema import StructureKind
from app.services.structure import analyze_preservation, factor_maps
from app.utils.tensor_io import read_decomposition


@handle_errors
def analyze(
    input: Path = typer.Argument(..., exists=True, dir_okay=False, help="Decomposition file (.tkp)"),
    kind: StructureTag = typer.Option(..., "--kind", help="Structure of the decomposed tensor"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Residual tolerance (default 1e-10)"),
):
    """Check which Kronecker factors inherit the structure of the source tensor."""
    limit = settings.STRUCTURE_TOL if tol is None else tol
    res = read_decomposition(input)
    parts = factor_maps(StructureKind.named(kind), res.grid)
    summaries = analyze_preservation(res, parts, tol, tag=kind)

    table = Table(title=f"{kind.value} structure of {res.rank} terms")
    table.add_column("term", justify="right")
    table.add_column("sigma", justify="right")
    for i in range(1, res.grid.degree + 1):
        table.add_column(f"A({i})", justify="center")
    table.add_column("skew", justify="right")
    table.add_column("flag")
    for s in summaries:
        cells = [
            ("+" if sign > 0 else "-") if residual <= limit else "?"
            for sign, residual in zip(s.signs, s.residuals)
        ]
        flag = "multiplet" if s.multiplet else ""
        table.add_row(str(s.term), f"{s.sigma:.6g}", *cells, str(s.skew_count), flag)
    console.print(table)

    checked = [s for s in summaries if not s.multiplet]
    structured = [s for s in checked if s.all_structured]
    even = all(s.even_skew for s in structured)
    console.print(
        f"{len(structured)} of {len(checked)} unflagged terms fully structured, "
        f"{len(summaries) - len(checked)} flagged"
    )
    if structured and even and len(structured) == len(checked):
        console.print("✅ every unflagged term has structured factors with an even skew count")
    else:
        console.print("⚠️ structure is not preserved by every unflagged term")
