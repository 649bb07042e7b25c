from itertools import permutations
from math import prod
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, model_validator

from app.core.errors import ShapeMismatch
from app.models.tensor import Shape, checked_size


# ---------------------------------------
# Factor grid: d factors, each an order-k shape
# ---------------------------------------
class FactorGrid(BaseModel):
    """
    dims[i][r] is n^(i)_r, the size of mode r of Kronecker factor i.

    Factor i=1 is the LAST (rightmost, fastest varying) factor of the
    Kronecker chain A^(d) (x) ... (x) A^(1).
    """
    model_config = ConfigDict(frozen=True)

    dims: Tuple[Tuple[PositiveInt, ...], ...] = Field(
        ..., min_length=1, description="Per-factor mode dimensions, factor 1 first"
    )

    @model_validator(mode="after")
    def _equal_orders(self) -> "FactorGrid":
        orders = {len(f) for f in self.dims}
        if len(orders) != 1 or 0 in orders:
            raise ValueError(f"every factor needs the same nonzero order, got {sorted(orders)}")
        checked_size(self.target_shape)
        return self

    @classmethod
    def of(cls, dims) -> "FactorGrid":
        try:
            return cls(dims=tuple(tuple(int(n) for n in f) for f in dims))
        except ValidationError as e:
            raise ShapeMismatch(f"invalid factor grid {dims}: {e.errors()[0]['msg']}") from e

    @classmethod
    def parse(cls, text: str) -> "FactorGrid":
        """Parse the CLI syntax ``n1xn2x...,n1xn2x...`` (factor 1 first)."""
        try:
            dims = [[int(n) for n in part.strip().lower().split("x")] for part in text.split(",")]
        except ValueError as e:
            raise ShapeMismatch(f"cannot parse grid '{text}'; expected e.g. 4x4x4,3x3x3") from e
        return cls.of(dims)

    @classmethod
    def cubical(cls, sizes: List[int], order: int) -> "FactorGrid":
        """Grid whose factor i is sizes[i] x ... x sizes[i] (order k)."""
        return cls.of([(n,) * order for n in sizes])

    # ---------------------------------------
    # Derived quantities
    # ---------------------------------------
    @property
    def degree(self) -> int:
        return len(self.dims)

    @property
    def order(self) -> int:
        return len(self.dims[0])

    @property
    def factor_shapes(self) -> Tuple[Shape, ...]:
        return tuple(tuple(f) for f in self.dims)

    @property
    def factor_sizes(self) -> Shape:
        """Mode sizes of the permuted d-way tensor."""
        return tuple(prod(f) for f in self.dims)

    @property
    def target_shape(self) -> Shape:
        return tuple(prod(f[r] for f in self.dims) for r in range(self.order))

    def check_target(self, shape: Shape) -> None:
        if tuple(shape) != self.target_shape:
            raise ShapeMismatch(
                f"grid {self} multiplies out to {self.target_shape}, tensor has shape {tuple(shape)}"
            )

    def orderings(self) -> List["FactorGrid"]:
        """All distinct reorderings of the factors."""
        seen, out = set(), []
        for dims in permutations(self.dims):
            if dims not in seen:
                seen.add(dims)
                out.append(FactorGrid(dims=dims))
        return out

    def __str__(self) -> str:
        return ",".join("x".join(map(str, f)) for f in self.dims)
