from pathlib import Path
from typing import Optional

import typer
from loguru import logger
from rich.table import Table

from app.dependencies.common import console, handle_errors, parse_terms
from app.models.enums import Backend
from app.services.imaging import compression_rate, downsample, image_grid, psnr, psnr_from_sigmas
from app.services.tkpsvd import reconstruct_resolution, tkpsvd
from app.utils.image_io import read_image, write_image


@handle_errors
def image_demo(
    input: Path = typer.Argument(..., exists=True, dir_okay=False, help="PGM or PPM image"),
    levels: int = typer.Option(4, "--levels", help="Number of 2x2x1 factors"),
    terms: str = typer.Option("1,5,20", "--terms", help="Comma separated term counts"),
    out_prefix: str = typer.Option("demo", "--out-prefix", help="Prefix of the written approximants"),
    backend: Backend = typer.Option(Backend.TTR1, "--backend", help="Polyadic backend"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative truncation tolerance"),
):
    """Multiresolution compression of an image with a (coarse) (x) (2x2x1)^L TKPSVD."""
    image = read_image(input)
    grid = image_grid(image.shape, levels)
    res = tkpsvd(image, grid, backend, tol)
    counts = parse_terms(terms)
    suffix = ".pgm" if image.shape[2] == 1 else ".ppm"

    table = Table(title=f"{input.name}: {res.rank} terms on grid {grid}")
    for column in ("resolution", "factors", "terms", "PSNR [dB]", "PSNR from sigma", "compression"):
        table.add_column(column, justify="right")

    for k in range(1, grid.degree + 1):
        reference = downsample(image, grid, k)
        size = "x".join(map(str, reference.shape[:2]))
        for requested in counts:
            r = min(requested, res.rank)
            if r < requested:
                logger.warning("only {} terms available, {} requested", res.rank, requested)
            approx = reconstruct_resolution(res, r, k)
            write_image(f"{out_prefix}_k{k}_r{requested}{suffix}", approx)
            from_sigma = psnr_from_sigmas(res.sigmas, r, image.size) if k == grid.degree else None
            table.add_row(
                size,
                str(k),
                str(r),
                f"{psnr(reference, approx):.2f}",
                "" if from_sigma is None else f"{from_sigma:.2f}",
                f"{compression_rate(grid, k, r):.2f}" if r else "",
            )
    console.print(table)
    console.print(f"✅ wrote approximants to {out_prefix}_k*_r*{suffix}")
