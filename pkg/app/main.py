import sys

import click
import typer

from app.core.config import settings
from app.core.log_config import setup_logging
from app.routers import analyze, decompose, error_curve, export_perm, generate, image_demo, reconstruct

app = typer.Typer(
    name="tkp",
    help=f"{settings.PROJECT_NAME}: tensor Kronecker product SVD of dense k-way tensors.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr")):
    setup_logging("DEBUG" if verbose else None)


# Subcommands
app.command("decompose")(decompose.decompose)
app.command("reconstruct")(reconstruct.reconstruct)
app.command("analyze")(analyze.analyze)
app.command("generate")(generate.generate)
app.command("image-demo")(image_demo.image_demo)
app.command("error-curve")(error_curve.error_curve)
app.command("export-perm")(export_perm.export_perm)


def run() -> None:
    """Console entry point: usage errors exit with 1, numerical failures with 2."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    run()
