"""Exact cohomology and restricted structures of twisted Heisenberg Lie algebras over finite fields."""

from .field import FieldElement, FieldError, FiniteField, ParseError, field_make, parse_field
from .liealg import LieAlgebra, PMap, p_extend, verify_pmap
from .heisenberg import (NotRestrictableError, TwistedParams, make_heisenberg,
                         make_restricted_twisted, make_twisted)
from .cohomology import ce_cohomology
from .restricted import compatible_eval, restricted_cohomology
from .extensions import CentralExtension, central_extend

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "FieldError", "FiniteField", "ParseError", "field_make", "parse_field",
    "LieAlgebra", "PMap", "p_extend", "verify_pmap",
    "NotRestrictableError", "TwistedParams", "make_heisenberg", "make_restricted_twisted",
    "make_twisted", "ce_cohomology", "compatible_eval", "restricted_cohomology",
    "CentralExtension", "central_extend",
]
