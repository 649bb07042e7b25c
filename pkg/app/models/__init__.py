# Numeric domain types
from .tensor import DenseTensor, Shape
from .permutation import PermutationMap
from .decomposition import HosvdCore, PolyadicDecomposition, Rank1Term, SvdResult, TkpsvdResult

# Enums
from .enums import Backend, StructureTag


__all__ = [
    "DenseTensor",
    "Shape",
    "PermutationMap",
    "SvdResult",
    "Rank1Term",
    "PolyadicDecomposition",
    "HosvdCore",
    "TkpsvdResult",

    # Enums
    "Backend",
    "StructureTag",
]
