"""Exact finite-level evidence for lim Cohen-Macaulay sequences over graded
rings in characteristic p: Koszul homology, Frobenius pushforwards, closure
diagnostics and Serre multiplicities."""

__version__ = "0.1.0"

from .algebra.ideal import Ideal
from .algebra.ring import AlgebraError, GradedRing, Polynomial
from .asymptotics import (ExplicitFamily, FrobeniusFamily, LengthSeries, combined_verdict,
                          fit_exponent, limcm_verdict, sop_independence, strong_verdict)
from .closure import (ClosureQuery, ClosureVerdict, closure_diagnostic, colon_capture_suite,
                      dietz_suite, integral_closure_monomial, monomial_position_check,
                      tight_closure_check)
from .complexes import (free_resolution, koszul_complex, koszul_lengths, koszul_stats,
                        local_cohomology_lengths, tor_lengths)
from .frobenius import frobenius_functor, hilbert_kunz, pushforward
from .modules import GradedModule, tensor_product
from .serre import SerrePair, koszul_multiplicity, pos_limit_series, serre_chi, tor_bound_check

__all__ = [
    "AlgebraError", "ClosureQuery", "ClosureVerdict", "ExplicitFamily", "FrobeniusFamily",
    "GradedModule", "GradedRing", "Ideal", "LengthSeries", "Polynomial", "SerrePair",
    "closure_diagnostic", "colon_capture_suite", "combined_verdict", "dietz_suite",
    "fit_exponent", "free_resolution", "frobenius_functor", "hilbert_kunz",
    "integral_closure_monomial", "koszul_complex", "koszul_lengths", "koszul_multiplicity",
    "koszul_stats", "limcm_verdict", "local_cohomology_lengths", "monomial_position_check",
    "pos_limit_series", "pushforward", "serre_chi", "sop_independence", "strong_verdict",
    "tensor_product", "tight_closure_check", "tor_bound_check", "tor_lengths",
]
