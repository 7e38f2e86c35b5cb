"""Certificate-checked sweep-outs of triangulated closed surfaces."""

__version__ = "0.1.0"

from .surface import SimplicialSurface, TopologySummary, build_surface, subdivide_midpoint
from .chains import OneCycle, SweepOut, TwoChain, VerificationReport, boundary
from .builder import (
    BoundReport,
    base_sweep_out,
    build_sweep_out,
    derive_bisection,
    paste_sweep_outs,
    restrict_and_correct,
)

__all__ = [
    "SimplicialSurface",
    "TopologySummary",
    "build_surface",
    "subdivide_midpoint",
    "OneCycle",
    "TwoChain",
    "SweepOut",
    "VerificationReport",
    "boundary",
    "BoundReport",
    "base_sweep_out",
    "build_sweep_out",
    "derive_bisection",
    "paste_sweep_outs",
    "restrict_and_correct",
    "__version__",
]
