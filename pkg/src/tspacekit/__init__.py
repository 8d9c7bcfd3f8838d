"""Exact noncommutative polynomial computation over F_p for T-space inclusions."""

from .freealg import GF, ModulusError, MultiDegree, Poly, Substitution, commutator, essential_components, mul, substitute
from .symmetric import GeneratorId, generator, sym, sym_two_block
from .tspace import Certificate, Factor, Limits, SpanSpec, Term, check_certificate, enumerate_instances, span_membership
from .reduction import closure_covers, initial_gap, reduce_sequence

__all__ = [
    "GF", "ModulusError", "MultiDegree", "Poly", "Substitution", "commutator", "essential_components", "mul",
    "substitute", "GeneratorId", "generator", "sym", "sym_two_block", "Certificate", "Factor", "Limits",
    "SpanSpec", "Term", "check_certificate", "enumerate_instances", "span_membership", "closure_covers",
    "initial_gap", "reduce_sequence",
]
