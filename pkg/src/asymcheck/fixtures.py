"""Bundled reference data for the Iarrobino six-variable example."""

from __future__ import annotations

from typing import Dict, List, Tuple

from .fields import F2, ZZ
from .forms import TrilinearForm, from_cubic_polynomial
from .polynomial import parse_cubic, parse_cubic_deduplicated, repeated_monomials

# Verbatim, including the repeated monomials x_2x_4^2 and x_4x_5x_6.
IARROBINO_TEXT = (
    "6(x_1x_4^2 - x_1^2x_4 +x_2x_4^2 + x_2x_4^2 - x_2^2x_5 + x_2x_5^2 + x_3^2x_4 "
    "- x_3x_4^2 + x_3^2x_6 + x_3x_6^2 + x_5^2x_6 + x_5x_6^2 + x_1x_2x_4 +x_1x_2x_5 "
    "+ x_1x_3x_6 +x_2x_4x_6 + x_3x_5x_6 + x_4x_5x_6 + x_4x_5x_6 + x_4^3 +x_6^3)"
)
IARROBINO_M = 6

# Nonzero mod-2 structure constants; every other sorted triple is 0.
IARROBINO_MOD2_TABLE: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 4), (1, 2, 5), (1, 3, 6), (2, 4, 6), (3, 5, 6), (4, 5, 6))


def iarrobino_repeats() -> List[Tuple[int, ...]]:
    return repeated_monomials(IARROBINO_TEXT, IARROBINO_M)


def iarrobino_form() -> TrilinearForm:
    """Integral form, each printed monomial counted once."""
    return from_cubic_polynomial(parse_cubic_deduplicated(IARROBINO_TEXT, IARROBINO_M), ZZ)


def iarrobino_form_literal() -> TrilinearForm:
    """Integral form with the repeats summed as printed."""
    return from_cubic_polynomial(parse_cubic(IARROBINO_TEXT, IARROBINO_M), ZZ)


def iarrobino_table_form() -> TrilinearForm:
    return TrilinearForm(F2, IARROBINO_M, {t: 1 for t in IARROBINO_MOD2_TABLE})


def form_diff(a: TrilinearForm, b: TrilinearForm) -> Dict[Tuple[int, int, int], Tuple[int, int]]:
    keys = set(a.entries) | set(b.entries)
    return {k: (a.coeff(*k), b.coeff(*k)) for k in sorted(keys) if a.coeff(*k) != b.coeff(*k)}
