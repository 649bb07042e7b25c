from typing import Tuple

from pydantic import BaseModel, Field, PositiveInt, model_validator

from app.models.enums import Backend
from app.models.tensor import checked_size

TENSOR_MAGIC = b"TEN1"
DECOMPOSITION_MAGIC = b"TKP1"


class TensorHeader(BaseModel):
    magic: bytes
    order: PositiveInt
    dims: Tuple[PositiveInt, ...]

    @model_validator(mode="after")
    def _check(self) -> "TensorHeader":
        if self.magic != TENSOR_MAGIC:
            raise ValueError(f"bad magic {self.magic!r}, expected {TENSOR_MAGIC!r}")
        if len(self.dims) != self.order:
            raise ValueError(f"order {self.order} but {len(self.dims)} dims")
        return self

    @property
    def count(self) -> int:
        return checked_size(self.dims)


class DecompositionHeader(BaseModel):
    magic: bytes
    degree: PositiveInt
    order: PositiveInt
    dims: Tuple[Tuple[PositiveInt, ...], ...]
    backend: Backend
    source_norm: float = Field(..., ge=0)
    terms: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check(self) -> "DecompositionHeader":
        if self.magic != DECOMPOSITION_MAGIC:
            raise ValueError(f"bad magic {self.magic!r}, expected {DECOMPOSITION_MAGIC!r}")
        if len(self.dims) != self.degree or any(len(f) != self.order for f in self.dims):
            raise ValueError("grid dims do not match degree and order")
        return self

    @property
    def floats_per_term(self) -> int:
        return sum(checked_size(f) for f in self.dims)
