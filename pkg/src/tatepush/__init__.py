"""Exact Tate-resolution engine for derived direct images on projective space.

Computes BGG strands, corner modules, minimal Tate resolutions over the
exterior algebra, Betti/cohomology tables, and direct-image complexes of
sheaves on P^n over a field or a graded polynomial base, in exact arithmetic.
"""

from .fields import QQ, FunctionField, PrimeField, parse_field
from .rings import PolyRing
from .modules import (
    FreeModuleShape,
    HomogeneousMatrix,
    ModulePresentation,
    build_presentation,
    free_module_presentation,
)

__all__ = [
    "QQ",
    "FunctionField",
    "PrimeField",
    "parse_field",
    "PolyRing",
    "FreeModuleShape",
    "HomogeneousMatrix",
    "ModulePresentation",
    "build_presentation",
    "free_module_presentation",
]

__version__ = "0.1.0"
