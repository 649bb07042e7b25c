from pathlib import Path

import typer

from app.dependencies.common import console, handle_errors, parse_shape
from app.models.enums import StructureTag
from app.schemas.structure_schema import StructureKind
from app.services.structure import generate as generate_structured
from app.utils.tensor_io import write_tensor


@handle_errors
def generate(
    kind: StructureTag = typer.Option(..., "--kind", help="Structure to generate"),
    shape: str = typer.Option(..., "--shape", help="Tensor shape, e.g. 12x12x12"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    output: Path = typer.Option(..., "-o", "--output", help="Tensor file (.tenb or .ten)"),
):
    """Draw a random tensor with an exact general symmetry (one value per index orbit)."""
    tensor = generate_structured(StructureKind.named(kind), parse_shape(shape), seed)
    write_tensor(output, tensor)
    console.print(f"✅ wrote {kind.value} {shape} tensor (seed {seed}) to {output}")
