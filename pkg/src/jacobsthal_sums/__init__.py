"""Padovan and Perrin numbers that are sums of two Jacobsthal numbers.

The package certifies the complete solution sets of ``P_k = J_n + J_m`` and
``R_k = J_n + J_m``: a linear-forms-in-logarithms bound on ``n``, two
continued-fraction reductions, a Legendre argument for the degenerate
Perrin case and a final exhaustive search.
"""
from .certified import CertifiedReal, PrecisionError
from .problems import Problem
from .seqcore import SequenceKind, term
from .solver import (Certificate, SolutionTriple, run_pipeline, search_power_of_two,
                     search_sums, verify_triple)

__all__ = [
    "Certificate", "CertifiedReal", "PrecisionError", "Problem", "SequenceKind",
    "SolutionTriple", "run_pipeline", "search_power_of_two", "search_sums", "term",
    "verify_triple",
]
__version__ = "0.1.0"
