from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.errors import BadShiftPattern, InvalidArgument
from app.models.enums import StructureTag
from app.models.permutation import PermutationMap


# ---------------------------------------
# Shifted-index pattern
# ---------------------------------------
class ShiftPattern(BaseModel):
    model_config = ConfigDict(frozen=True)

    shifts: Tuple[int, ...] = Field(..., min_length=1, description="Index shift per mode")

    @field_validator("shifts")
    @classmethod
    def _consistent(cls, shifts: Tuple[int, ...]) -> Tuple[int, ...]:
        nonzero = {abs(s) for s in shifts if s != 0}
        if not nonzero:
            raise ValueError("at least one shift must be nonzero")
        if len(nonzero) > 1:
            raise ValueError(f"nonzero shifts must agree up to sign, got {shifts}")
        return shifts

    @classmethod
    def of(cls, shifts) -> "ShiftPattern":
        if isinstance(shifts, ShiftPattern):
            return shifts
        try:
            return cls(shifts=tuple(int(s) for s in shifts))
        except ValidationError as e:
            raise BadShiftPattern(e.errors()[0]["msg"]) from e

    @classmethod
    def toeplitz(cls, order: int) -> "ShiftPattern":
        return cls(shifts=(1,) * order)

    @classmethod
    def hankel(cls, order: int) -> "ShiftPattern":
        return cls(shifts=(1, -1) + (0,) * (order - 2))


# ---------------------------------------
# Which general symmetry
# ---------------------------------------
class StructureKind(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tag: StructureTag
    permutation: Optional[PermutationMap] = None
    shift: Optional[ShiftPattern] = None

    @model_validator(mode="after")
    def _general_needs_map(self) -> "StructureKind":
        if self.tag is StructureTag.GENERAL and self.permutation is None:
            raise ValueError("a general symmetric kind needs its permutation")
        return self

    @classmethod
    def named(cls, tag: "StructureTag | str") -> "StructureKind":
        try:
            return cls(tag=StructureTag(tag))
        except ValidationError as e:
            raise InvalidArgument(f"{StructureTag(tag).value} structure: {e.errors()[0]['msg']}") from e

    @classmethod
    def general(cls, permutation: PermutationMap) -> "StructureKind":
        return cls(tag=StructureTag.GENERAL, permutation=permutation)


# ---------------------------------------
# Reports
# ---------------------------------------
class StructureReport(BaseModel):
    tag: StructureTag
    sign: Literal[1, -1]
    residual: float = Field(..., ge=0, description="||P a - sign a|| for the normalized vec a")
    inner: float = Field(..., description="a^T P a")
    structured: bool


class TermStructureSummary(BaseModel):
    term: int = Field(..., ge=1, description="1-based term index")
    sigma: float
    signs: List[Literal[1, -1]]
    residuals: List[float]
    skew_count: int
    all_structured: bool
    multiplet: bool = Field(..., description="sigma near-multiplet or degenerate singular vectors")

    @property
    def even_skew(self) -> bool:
        return self.skew_count % 2 == 0

    @property
    def consistent(self) -> bool:
        """Structured terms carry an even skew count unless flagged."""
        return not self.all_structured or self.even_skew or self.multiplet
