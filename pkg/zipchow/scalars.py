# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Exact rational functions in the indeterminate p.

A ``ScalarP`` is an element of the sympy field Q(p). Elements are kept in
lowest terms by sympy; printing normalizes the denominator to be monic.
"""

import logging
from fractions import Fraction
from tokenize import TokenError
from typing import Optional, Union

from sympy import QQ, Poly, Rational, Symbol, isprime
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.fields import FracElement

P_SYMBOL = Symbol("p")
DOMAIN = QQ.frac_field(P_SYMBOL)
FIELD = DOMAIN.field
P = FIELD.gens[0]

ScalarP = FracElement
ScalarLike = Union[FracElement, int, Fraction, str]

# Fallback sample when no sign certificate exists.
SAMPLE_PRIMES = (2, 3, 5, 7, 11, 13)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class IndeterminateSign(ArithmeticError):
    pass


def scalar(value: ScalarLike) -> ScalarP:
    if isinstance(value, FracElement):
        if value.field != FIELD:
            raise ValueError(f"Scalar from a foreign field: {value}")
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not scalars")
    if isinstance(value, int):
        return FIELD(QQ(value))
    if isinstance(value, Fraction):
        return FIELD(QQ(value.numerator, value.denominator))
    if isinstance(value, str):
        return parse_scalar(value)
    return FIELD(value)


def parse_scalar(text: str) -> ScalarP:
    """Parse forms such as ``p^3-1``, ``2/3``, ``(p+1)*(p^2-p+1)``."""
    try:
        expr = parse_expr(
            text.strip(),
            local_dict={"p": P_SYMBOL},
            transformations=_TRANSFORMATIONS,
        )
    except (SyntaxError, TypeError, TokenError) as exc:
        raise ValueError(f"Cannot parse scalar {text!r}") from exc
    if not expr.free_symbols <= {P_SYMBOL}:
        raise ValueError(f"Scalar {text!r} uses symbols other than p")
    return FIELD.from_expr(expr)


def _monic_parts(x: ScalarP):
    lc = x.denom.LC
    return x.numer.quo_ground(lc), x.denom.quo_ground(lc)


def _poly_text(poly) -> str:
    return str(poly.as_expr()).replace("**", "^").replace(" ", "")


def numerator_text(x: ScalarP) -> str:
    return _poly_text(_monic_parts(x)[0])


def denominator_text(x: ScalarP) -> str:
    return _poly_text(_monic_parts(x)[1])


def format_scalar(x: ScalarP) -> str:
    num, den = _monic_parts(x)
    if den == 1:
        return _poly_text(num)
    num_text = _poly_text(num)
    if len(num.terms()) > 1:
        num_text = f"({num_text})"
    return f"{num_text}/({_poly_text(den)})"


def _qq(value: Union[int, Fraction]):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


def evaluate(x: ScalarP, p0: Union[int, Fraction]) -> Fraction:
    num = x.numer(_qq(p0))
    den = x.denom(_qq(p0))
    if den == 0:
        raise ZeroDivisionError(f"{format_scalar(x)} has a pole at p={p0}")
    value = Fraction(int(num.numerator), int(num.denominator))
    return value / Fraction(int(den.numerator), int(den.denominator))


def specialize(x: ScalarP, p0: Optional[int]) -> ScalarP:
    """Return x unchanged for symbolic p, otherwise the constant x(p0)."""
    if p0 is None:
        return x
    return scalar(evaluate(x, p0))


def _shifted_sign(poly) -> Optional[str]:
    coeffs = Poly(poly.as_expr(), P_SYMBOL, domain=QQ).shift(2).all_coeffs()
    coeffs = [Rational(c) for c in coeffs]
    if all(c == 0 for c in coeffs):
        return "zero"
    constant = coeffs[-1]
    if all(c >= 0 for c in coeffs):
        return "positive" if constant > 0 else "nonnegative"
    if all(c <= 0 for c in coeffs):
        return "negative" if constant < 0 else "nonpositive"
    return None


_FLIP = {
    "positive": "negative",
    "nonnegative": "nonpositive",
    "zero": "zero",
    "nonpositive": "nonnegative",
    "negative": "positive",
}


def sign_for_primes(x: ScalarP) -> str:
    """Sign of x on every real p >= 2, certified by the shift p = 2 + t.

    Returns one of ``positive``, ``nonnegative``, ``zero``, ``nonpositive``,
    ``negative``. Raises IndeterminateSign when the shifted coefficients of
    the numerator or the denominator are of mixed sign.
    """
    den = _shifted_sign(x.denom)
    num = _shifted_sign(x.numer)
    if den not in ("positive", "negative") or num is None:
        raise IndeterminateSign(f"No sign certificate for {format_scalar(x)}")
    return num if den == "positive" else _FLIP[num]


def _sample_all(x: ScalarP, predicate) -> bool:
    logging.debug("Sampling %s at %s", format_scalar(x), SAMPLE_PRIMES)
    return all(predicate(evaluate(x, p0)) for p0 in SAMPLE_PRIMES)


def is_nonnegative(x: ScalarP, p0: Optional[int] = None) -> bool:
    if p0 is not None:
        return evaluate(x, p0) >= 0
    try:
        return sign_for_primes(x) in ("positive", "nonnegative", "zero")
    except IndeterminateSign:
        return _sample_all(x, lambda v: v >= 0)


def is_positive(x: ScalarP, p0: Optional[int] = None) -> bool:
    if p0 is not None:
        return evaluate(x, p0) > 0
    try:
        return sign_for_primes(x) == "positive"
    except IndeterminateSign:
        return _sample_all(x, lambda v: v > 0)


def parse_p(text: str) -> Optional[int]:
    """``symbolic`` maps to None; otherwise a prime >= 2."""
    if text == "symbolic":
        return None
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"p must be 'symbolic' or a prime, got {text!r}")
    if not isprime(value):
        raise ValueError(f"p must be a prime >= 2, got {value}")
    return value
