from pathlib import Path
from typing import Optional

import typer

from app.dependencies.common import console, handle_errors
from app.services.tkpsvd import reconstruct_kp, relative_error
from app.utils.tensor_io import read_decomposition, write_tensor


@handle_errors
def reconstruct(
    input: Path = typer.Argument(..., exists=True, dir_okay=False, help="Decomposition file (.tkp)"),
    terms: Optional[int] = typer.Option(None, "--terms", "-r", help="Number of leading terms (default all)"),
    output: Path = typer.Option(..., "-o", "--output", help="Tensor file (.tenb or .ten)"),
):
    """Rebuild a tensor from the leading terms of a decomposition."""
    res = read_decomposition(input)
    r = res.rank if terms is None else terms
    tensor = reconstruct_kp(res, r)
    write_tensor(output, tensor)
    if res.rank:
        console.print(f"relative error from sigmas: {relative_error(res.sigmas, r):.3e}")
    console.print(f"✅ wrote {r} of {res.rank} terms to {output}")
