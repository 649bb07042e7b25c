import enum

class Backend(str, enum.Enum):
    """
    Polyadic decomposition backend used on the permuted tensor.

    Inherits from str so it works with both:
    - typer (choice options on the command line)
    - pydantic (file headers and reports)
    """
    TTR1 = "ttr1"
    HOSVD = "hosvd"

    @property
    def tag(self) -> int:
        """One-byte tag stored in .tkp files."""
        return 0 if self is Backend.TTR1 else 1

    @classmethod
    def from_tag(cls, tag: int) -> "Backend":
        return cls.TTR1 if tag == 0 else cls.HOSVD


class StructureTag(str, enum.Enum):
    """General symmetries a tensor can be checked or generated against."""
    SYMMETRIC = "symmetric"
    PERSYMMETRIC = "persymmetric"
    CENTROSYMMETRIC = "centrosymmetric"
    TOEPLITZ = "toeplitz"
    HANKEL = "hankel"
    GENERAL = "general"
