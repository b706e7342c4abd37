"""Numerical Hölder-Zygmund regularity of functions and distributions.

Regularity is read off from the growth of derivative sup-norms of mollified
signals across scales, and cross-checked against a Littlewood-Paley norm and a
direct Hölder difference quotient.
"""

from mollify.config import Defaults, DEFAULTS, geometric_ladder
from mollify.errors import (
    AllSaturated,
    BelowNoiseFloor,
    ConditioningError,
    DegenerateFit,
    EmptyWindow,
    FormatError,
    MollifyError,
    ResolutionError,
    SupportError,
    ValidationError,
)
from mollify.kernels import (
    HermiteKernel,
    LPFamily,
    MollifierKernel,
    eval_scaled_kernel,
    kernel_moment,
    make_gaussian_mollifier,
    make_lp_family,
    make_moment_vanishing_mollifier,
)
from mollify.signals import (
    AtomicTerm,
    DistributionRep,
    GridSignal,
    Window,
    gen_bump,
    gen_constant,
    gen_delta,
    gen_heaviside,
    gen_power_cusp,
    gen_weierstrass,
    load_signal,
    store_signal,
)
from mollify.transform import ScaleSweep, mollify, pair, scale_sweep, sup_norm
from mollify.estimator import (
    GrowthFit,
    RateFit,
    RegularityEstimate,
    classify_sequence,
    estimate_rate,
    estimate_regularity,
    fit_growth,
    k_consistency,
    smoothness_test,
)
from mollify.oracles import (
    LPDecomposition,
    holder_seminorm,
    lp_decompose,
    lp_estimate_alpha,
    lp_norm,
)

__version__ = "0.1.0"
