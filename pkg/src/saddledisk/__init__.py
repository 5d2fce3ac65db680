"""Free boundary disks in the unit ball foliated by orthogonal circles."""

from .circle_pencil import OrthoCircle, eval_circle, half_extent, radius
from .immersion import (
    DomainPoint,
    SurfaceJet,
    TransversalityError,
    eval_jet,
    eval_psi,
    level_curve,
    sample_grid,
)
from .ribbon import (
    Ribbon,
    RibbonSpec,
    ScaledRibbon,
    ValidationFailure,
    build_ribbon,
    scale,
    validate,
)
from .verifier import CheckResult, VerificationReport, find_t0, verify

__all__ = [
    "CheckResult",
    "DomainPoint",
    "OrthoCircle",
    "Ribbon",
    "RibbonSpec",
    "ScaledRibbon",
    "SurfaceJet",
    "TransversalityError",
    "ValidationFailure",
    "VerificationReport",
    "build_ribbon",
    "eval_circle",
    "eval_jet",
    "eval_psi",
    "find_t0",
    "half_extent",
    "level_curve",
    "radius",
    "sample_grid",
    "scale",
    "validate",
    "verify",
]
