from pathlib import Path
from typing import Optional

import typer

from app.core.errors import InvalidArgument
from app.dependencies.common import GRID_HELP, console, handle_errors, parse_shape
from app.models.enums import StructureTag
from app.models.permutation import PermutationMap
from app.schemas.grid_schema import FactorGrid
from app.schemas.structure_schema import StructureKind
from app.services.structure import compose_factored, factor_maps, kind_map
from app.utils.tensor_io import write_permutation_pattern


def plot_pattern(p: PermutationMap, path: Path, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows, cols = p.pattern()
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(cols, rows, s=max(0.5, 2000.0 / p.size), marker="s", color="black")
    ax.set_xlim(0.5, p.size + 0.5)
    ax.set_ylim(p.size + 0.5, 0.5)
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


@handle_errors
def export_perm(
    kind: StructureTag = typer.Option(..., "--kind", help="Canonical structure"),
    shape: Optional[str] = typer.Option(None, "--shape", help="Tensor shape, e.g. 3x3x3"),
    grid: Optional[str] = typer.Option(None, "--grid", help="Compose per-factor maps over this grid. " + GRID_HELP),
    output: Path = typer.Option(..., "-o", "--output", help="Sparse pattern listing, one 'row col' per line"),
    plot: Optional[Path] = typer.Option(None, "--plot", help="Also render the pattern as an image"),
):
    """Export the permutation of a structure as its sparse (row, col) pattern."""
    structure = StructureKind.named(kind)
    if grid is not None:
        factor_grid = FactorGrid.parse(grid)
        if shape is not None:
            factor_grid.check_target(parse_shape(shape))
        p = compose_factored(factor_maps(structure, factor_grid), factor_grid)
        label = f"{kind.value}, composed over {factor_grid}"
    elif shape is not None:
        p = kind_map(structure, parse_shape(shape))
        label = f"{kind.value} {shape}"
    else:
        raise InvalidArgument("give --shape, --grid or both")

    write_permutation_pattern(output, p)
    if plot is not None:
        plot_pattern(p, plot, label)
    console.print(f"✅ wrote size-{p.size} permutation to {output}")
