"""Monotone subsets of the Boolean hypercube: Poincare constants, restricted
Dirichlet forms, and censored random walks.

The package is organized around dense bitmask representations of upward-closed
("monotone") sets for exact computations up to n = 25, plus membership-oracle
workflows for Monte Carlo simulation beyond the dense cap.
"""

from .cube import (
    CubePoint,
    MonotoneSet,
    MembershipOracle,
    SplitPair,
    threshold_oracle,
    dictator_oracle,
    oracle_from_set,
    make_upset,
    threshold_set,
    dictator_set,
    full_cube,
    is_monotone,
    split,
    enumerate_monotone,
    random_upset,
    stationary_coordinate_mean,
    parse_set_description,
)
from .forms import (
    SetFunction,
    DecompositionReport,
    dirichlet_form,
    variance,
    restrict,
    check_dirichlet_decomposition,
    check_variance_decomposition,
    poincare_ratio,
    parse_function_description,
)
from .spectral import (
    InducedLaplacian,
    SpectralResult,
    induced_laplacian,
    lambda2,
    poincare_constant,
    verify_theorem,
)
from .walk import (
    CensoredKernel,
    MixingReport,
    step,
    exact_tmix,
    chain_gap,
    tmix_bound,
    simulate,
    scaling_experiment,
)
from . import induction

__all__ = [
    "CubePoint",
    "MonotoneSet",
    "MembershipOracle",
    "SplitPair",
    "threshold_oracle",
    "dictator_oracle",
    "oracle_from_set",
    "make_upset",
    "threshold_set",
    "dictator_set",
    "full_cube",
    "is_monotone",
    "split",
    "enumerate_monotone",
    "random_upset",
    "stationary_coordinate_mean",
    "parse_set_description",
    "SetFunction",
    "DecompositionReport",
    "dirichlet_form",
    "variance",
    "restrict",
    "check_dirichlet_decomposition",
    "check_variance_decomposition",
    "poincare_ratio",
    "parse_function_description",
    "InducedLaplacian",
    "SpectralResult",
    "induced_laplacian",
    "lambda2",
    "poincare_constant",
    "verify_theorem",
    "CensoredKernel",
    "MixingReport",
    "step",
    "exact_tmix",
    "chain_gap",
    "tmix_bound",
    "simulate",
    "scaling_experiment",
    "induction",
]

__version__ = "0.1.0"
