"""Quasi-subfield polynomials over finite fields: search, families, bounds and an ECDLP demo."""

__version__ = "0.1.0"

from .algebra import ExtElem, ExtField, FpPoly, ext_field_make, format_poly, parse_poly
from .errors import CapExceededError, DomainError, PolyParseError, QspError, UsageError, VerificationError
from .qsp import (
    LinearizedQsp,
    SearchRecord,
    beta,
    linearize,
    root_count_oracle,
    search_representatives,
    split_test_companion,
    split_test_div,
)

__all__ = [
    "CapExceededError",
    "DomainError",
    "ExtElem",
    "ExtField",
    "FpPoly",
    "LinearizedQsp",
    "PolyParseError",
    "QspError",
    "SearchRecord",
    "UsageError",
    "VerificationError",
    "beta",
    "ext_field_make",
    "format_poly",
    "linearize",
    "parse_poly",
    "root_count_oracle",
    "search_representatives",
    "split_test_companion",
    "split_test_div",
]
