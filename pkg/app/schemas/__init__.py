from .grid_schema import FactorGrid
from .structure_schema import ShiftPattern, StructureKind, StructureReport, TermStructureSummary

__all__ = ["FactorGrid", "ShiftPattern", "StructureKind", "StructureReport", "TermStructureSummary"]
