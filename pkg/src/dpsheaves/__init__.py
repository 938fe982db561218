"""Exact Brill-Noether and existence calculus for sheaves on del Pezzo surfaces."""

from .brillnoether import BNVerdict, general_cohomology, hirzebruch_verdict, is_non_special
from .chern import ChernCharacter, CohomologyVector, euler, euler_pair, line_bundle, parse_character
from .errors import DomainError, EmptyPrioritaryStack, ParseError
from .existence import classify, dl_condition
from .goodbundle import construct, delta_min, prioritary_nonempty
from .lattice import Divisor, Surface, canonical, intersect, is_nef, minus_one_curves, parse_divisor
from .lbcoh import h0, h_vector

__all__ = [
    "BNVerdict",
    "ChernCharacter",
    "CohomologyVector",
    "Divisor",
    "DomainError",
    "EmptyPrioritaryStack",
    "ParseError",
    "Surface",
    "canonical",
    "classify",
    "construct",
    "delta_min",
    "dl_condition",
    "euler",
    "euler_pair",
    "general_cohomology",
    "h0",
    "h_vector",
    "hirzebruch_verdict",
    "intersect",
    "is_nef",
    "is_non_special",
    "line_bundle",
    "minus_one_curves",
    "parse_character",
    "parse_divisor",
    "prioritary_nonempty",
]
