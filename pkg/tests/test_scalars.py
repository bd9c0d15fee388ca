# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import random
from fractions import Fraction

import pytest

from zipchow.scalars import (
    P,
    IndeterminateSign,
    denominator_text,
    evaluate,
    format_scalar,
    is_nonnegative,
    is_positive,
    numerator_text,
    parse_p,
    parse_scalar,
    scalar,
    sign_for_primes,
    specialize,
)


def test_parse_scalar():
    assert parse_scalar('p^3-1') == P ** 3 - 1
    assert parse_scalar('(p+1)*(p^2-p+1)') == P ** 3 + 1
    assert parse_scalar('2/3') == scalar(Fraction(2, 3))


@pytest.mark.parametrize('text', ['q+1', 'p^'])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_format_scalar():
    assert format_scalar(P ** 3 / (P ** 5 + 1)) == 'p^3/(p^5+1)'
    assert format_scalar((P - 1) / (P + 1)) == '(p-1)/(p+1)'
    assert format_scalar(scalar(Fraction(1, 2))) == '1/2'
    assert format_scalar(scalar(0)) == '0'


def test_numerator_and_denominator_are_monic_normalized():
    x = (2 * P) / (2 * P ** 2 + 2)
    assert numerator_text(x) == 'p'
    assert denominator_text(x) == 'p^2+1'


def test_evaluate():
    assert evaluate(P ** 2 - 1, 3) == 8
    assert evaluate(P / (P + 1), 2) == Fraction(2, 3)
    with pytest.raises(ZeroDivisionError):
        evaluate(1 / (P - 2), 2)


def test_specialize():
    assert specialize(P ** 2, None) == P ** 2
    assert specialize(P ** 2, 5) == scalar(25)


def test_sign_certificates():
    assert sign_for_primes(P - 1) == 'positive'
    assert sign_for_primes(P ** 2 - 4) == 'nonnegative'
    assert sign_for_primes(1 - P) == 'negative'
    assert sign_for_primes(-1 / (P - 1)) == 'negative'
    with pytest.raises(IndeterminateSign):
        sign_for_primes(P ** 2 - 5)


def test_sign_fallback_samples_primes():
    assert is_positive(P ** 2 - P - 1)
    assert not is_nonnegative(P - 3)
    assert is_nonnegative(P - 3, 3)
    assert not is_positive(P - 3, 3)


def test_parse_p():
    assert parse_p('symbolic') is None
    assert parse_p('7') == 7
    assert parse_p('13') == 13
    assert parse_p('7919') == 7919
    for bad in ('4', '1', '0', '-3', '9', '91', 'x'):
        with pytest.raises(ValueError):
            parse_p(bad)


def _random_scalar(rng):
    numerator = rng.randint(-9, 9) * P ** 2 + rng.randint(-9, 9) * P + rng.randint(-9, 9)
    return numerator / (rng.randint(1, 4) * P + rng.randint(1, 4))


@pytest.mark.parametrize('p0', [2, 3, 5, 7, 11])
def test_field_operations_commute_with_evaluation(p0):
    rng = random.Random(p0)
    for _ in range(1000):
        a, b, c = (_random_scalar(rng) for _ in range(3))
        ea, eb, ec = (evaluate(x, p0) for x in (a, b, c))
        assert evaluate(a * b + c, p0) == ea * eb + ec
        assert evaluate(a - b * c, p0) == ea - eb * ec
        if eb != 0:
            assert evaluate(a / b, p0) == ea / eb
