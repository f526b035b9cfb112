"""prony: spike-train reconstruction from power moments.

Solves Prony systems, parametrizes the one-dimensional solution curve that
appears when the last moment is missing, and certifies its structural
behavior numerically: node collisions with amplitude blow-up, single-node
escape to infinity, closed-form collision/boundedness classification for
d = 2 and d = 3, and the error-amplification scaling of clustered nodes
under moment noise.

The heavy polynomial kernels run through a compiled extension when it is
built; set ``PRONY_PURE=1`` to force the pure-Python lane.  Both lanes are
bit-for-bit identical, which :data:`HAVE_FAST` / :data:`IMPL_NAME` report.
"""

from ._kernels import HAVE_FAST, IMPL_NAME
from .closed_forms import Classification, classify_d2, classify_d3
from .curve_analysis import (
    CollisionReport,
    CurveSample,
    EscapeReport,
    detect_collisions,
    escape_analysis,
    sample_curve,
)
from .errors import InconsistentComputation, MathDegeneracy, PronyError
from .poly_engine import Poly, budan_fourier_bound, is_hyperbolic, real_roots
from .prony_line import (
    HyperbolicDomain,
    PronyLine,
    hankel,
    hyperbolic_domain,
    lift_to_solution,
    line_params,
    projection_residuals,
)
from .prony_solver import (
    AmplificationResult,
    NoiseConfig,
    amplification_experiment,
    curve_distance,
    make_cluster_signal,
    solve_complete,
)
from .signal_model import (
    MomentVector,
    Signal,
    amplitudes_from_nodes,
    compute_moments,
    elementary_symmetric,
    vieta_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "HAVE_FAST",
    "IMPL_NAME",
    "__version__",
    "PronyError",
    "MathDegeneracy",
    "InconsistentComputation",
    "Signal",
    "MomentVector",
    "compute_moments",
    "elementary_symmetric",
    "vieta_inverse",
    "amplitudes_from_nodes",
    "Poly",
    "real_roots",
    "is_hyperbolic",
    "budan_fourier_bound",
    "PronyLine",
    "HyperbolicDomain",
    "hankel",
    "line_params",
    "hyperbolic_domain",
    "projection_residuals",
    "lift_to_solution",
    "CurveSample",
    "CollisionReport",
    "EscapeReport",
    "sample_curve",
    "detect_collisions",
    "escape_analysis",
    "Classification",
    "classify_d2",
    "classify_d3",
    "NoiseConfig",
    "AmplificationResult",
    "solve_complete",
    "make_cluster_signal",
    "curve_distance",
    "amplification_experiment",
]
