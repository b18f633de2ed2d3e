"""Exact computations around discriminating homomorphisms of free-group extensions.

Four layers: free-group word arithmetic (:mod:`~discrimlab.freewords`),
minimal discriminating complexity for Z^n (:mod:`~discrimlab.zdiscrim`),
extensions of centralizers with a decidable word problem
(:mod:`~discrimlab.eocgroup`) plus certified big-powers thresholds
(:mod:`~discrimlab.bigpowers`), and retraction complexity curves
(:mod:`~discrimlab.retraction`).  ``discrimlab`` on the command line
drives batch runs.
"""

__version__ = "0.1.0"

from .bigpowers import CertifyReport, PaddedWordSpec, build_padded, certify, threshold
from .eocgroup import EocElement, EocGroup, load_group_spec, make_group
from .errors import (
    BudgetExceeded,
    CertificationError,
    DiscrimError,
    GroupSpecError,
    WordFormatError,
)
from .freewords import (
    Alphabet,
    CosetStrip,
    Word,
    ball,
    ball_size_f2,
    coset_strip,
    parse_word,
    power_membership,
)
from .retraction import (
    ChainResult,
    ComplexityRecord,
    CurveResult,
    ThetaSpec,
    apply_theta,
    complexity_curve,
    complexity_record,
    compose_chain,
    hom_complexity,
    minimal_discriminating_p,
    subtower,
    t_image,
)
from .zdiscrim import (
    BallSpec,
    ZnHom,
    ball_points,
    interval_half_width,
    lower_bound_value,
    minimal_complexity,
    scaled_theta,
    siegel_bound,
    siegel_small_kernel,
    theta,
    verify_bijection,
)

__all__ = [
    "__version__",
    "Alphabet",
    "BallSpec",
    "BudgetExceeded",
    "CertificationError",
    "CertifyReport",
    "ChainResult",
    "ComplexityRecord",
    "CosetStrip",
    "CurveResult",
    "DiscrimError",
    "EocElement",
    "EocGroup",
    "GroupSpecError",
    "PaddedWordSpec",
    "ThetaSpec",
    "Word",
    "WordFormatError",
    "ZnHom",
    "apply_theta",
    "ball",
    "ball_points",
    "ball_size_f2",
    "build_padded",
    "certify",
    "complexity_curve",
    "complexity_record",
    "compose_chain",
    "coset_strip",
    "hom_complexity",
    "interval_half_width",
    "load_group_spec",
    "lower_bound_value",
    "make_group",
    "minimal_complexity",
    "minimal_discriminating_p",
    "parse_word",
    "power_membership",
    "scaled_theta",
    "siegel_bound",
    "siegel_small_kernel",
    "subtower",
    "t_image",
    "theta",
    "threshold",
    "verify_bijection",
]
