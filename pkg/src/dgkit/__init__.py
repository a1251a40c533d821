"""Exact verification toolkit for finitely presented dg categories."""

from .scalars import QQ, GF, Field, ModP
from .grading import GradingSpec, classical_spec, pair
from .core import (DgCategory, Presentation, Morphism, Functor, compose, differential,
                   is_closed, is_exact, is_isomorphism, check_axioms, check_functor)
from .report import VerificationReport, CheckResult

__all__ = [
    "QQ", "GF", "Field", "ModP", "GradingSpec", "classical_spec", "pair",
    "DgCategory", "Presentation", "Morphism", "Functor", "compose", "differential",
    "is_closed", "is_exact", "is_isomorphism", "check_axioms", "check_functor",
    "VerificationReport", "CheckResult",
]
