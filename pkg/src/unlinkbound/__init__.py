"""Oriented link diagrams, Reidemeister moves, and move-count lower bounds from unknotting numbers."""

from .braid import BraidWord, closure, dn_word
from .diagram import Diagram, decode, encode, validate
from .invariants import jones_fingerprint, kauffman_bracket, linking_matrix, total_linking
from .iu import Interval, IuValue, TableOracle, iu, iu_eps_delta, iu_prime, iu_split, move_lower_bound
from .laurent import LaurentPoly
from .moves import MoveRecord, apply, enumerate_sites, verify_sequence
from .unknotting import CensusId, UInterval, u_table

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "CensusId",
    "Diagram",
    "Interval",
    "IuValue",
    "LaurentPoly",
    "MoveRecord",
    "TableOracle",
    "UInterval",
    "apply",
    "closure",
    "decode",
    "dn_word",
    "encode",
    "enumerate_sites",
    "iu",
    "iu_eps_delta",
    "iu_prime",
    "iu_split",
    "jones_fingerprint",
    "kauffman_bracket",
    "linking_matrix",
    "move_lower_bound",
    "total_linking",
    "u_table",
    "validate",
    "verify_sequence",
]
