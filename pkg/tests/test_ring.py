# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import random

import pytest

from zipchow import ring
from zipchow.ring import DegreeOverflow, PresentationMismatch, RingPresentation
from zipchow.scalars import P


def test_c2_rewrite_rules(c2):
    assert set(c2.leading_monomials) == {(2, 0), (0, 4)}
    assert ring.check_confluence(c2)


def test_degree_basis(c2, a2u):
    assert ring.degree_basis(c2, 3) == [(1, 2), (0, 3)]
    assert ring.degree_basis(c2, 4) == [(1, 3)]
    assert ring.degree_basis(c2, 5) == []
    assert ring.degree_basis(a2u, 3) == [(1, 2)]
    with pytest.raises(ValueError):
        ring.degree_basis(c2, -1)


@pytest.mark.parametrize('presentation, dims', [
    (ring.siegel_c2(), [1, 2, 2, 2, 1]),
    (ring.split_a2(), [1, 2, 2, 1]),
    (ring.unitary_a2(), [1, 2, 2, 1]),
    (ring.hilbert(3), [1, 3, 3, 1]),
    (ring.flag_type_a(3), [1, 2, 2, 1]),
])
def test_graded_dimensions(presentation, dims):
    assert ring.graded_dimensions(presentation) == dims


def test_reduce_uses_relations(c2, a2u):
    assert ring.reduce(c2, 'l1^2') == ring.reduce(c2, '-l2^2')
    assert ring.reduce(a2u, 'l1^2*l2') == ring.reduce(a2u, '-l1*l2^2')
    assert ring.reduce(c2, 'l2^5').is_zero()
    assert ring.reduce(c2, 'l1^2*l2^2').is_zero()


def test_reduce_accepts_maps_and_elements(c2):
    x = ring.reduce(c2, {(1, 0): P - 1, (0, 1): 1})
    assert x == ring.reduce(c2, '(p-1)*l1 + l2')
    assert ring.reduce(c2, x) == x


def test_degree_overflow(c2):
    with pytest.raises(DegreeOverflow):
        ring.reduce(c2, 'l1^11')


def test_multiply_is_reduced(c2):
    l1, l2 = ring.generator(c2, 'l1'), ring.generator(c2, 'l2')
    product = ring.multiply(l1 + l2, l1 + l2)
    assert product == ring.reduce(c2, '2*l1*l2')
    assert product.degree == 2
    assert (l1 * l2) ** 2 == ring.constant(c2, 0)


def test_presentation_mismatch(c2, a2u):
    with pytest.raises(PresentationMismatch):
        ring.multiply(ring.generator(c2, 'l1'), ring.generator(a2u, 'l1'))


def test_siegel_lambdas_satisfy_the_symmetric_relation(c2):
    lambda1, lambda2 = ring.siegel_c2_lambdas()
    assert (lambda1 ** 2 - lambda2 * 2).is_zero()


def test_point_class_of_c2(c2):
    point = ring.reduce(c2, '(p^4-1)*(l1^2*l2^2+l1*l2^3)')
    assert point.coefficients == {(1, 3): P ** 4 - 1}


def test_text_and_json(c2):
    x = ring.reduce(c2, '(p-1)*l1 + (p^2+1)*l2')
    assert x.to_text() == '(p-1) * l1 + (p^2+1) * l2'
    assert ring.reduce(c2, x.to_text()) == x
    assert ring.reduce(c2, '(p-1)*l1').to_json() == {
        'presentation': 'C2',
        'terms': [{'monomial': 'l1', 'num': 'p-1', 'den': '1'}],
    }


def _random_element(presentation, rng):
    terms = {}
    for k in range(presentation.top_degree + 1):
        for monomial in ring.degree_basis(presentation, k):
            if rng.random() < 0.3:
                continue
            num = rng.randint(-5, 5) * P ** 2 + rng.randint(-5, 5) * P + rng.randint(-5, 5)
            terms[monomial] = num / (rng.randint(1, 4) * P + rng.randint(1, 6))
    return ring.reduce(presentation, terms)


@pytest.mark.parametrize('presentation', [
    ring.siegel_c2(),
    ring.unitary_a2(),
    ring.split_a2(),
    ring.hilbert(3),
], ids=lambda pres: pres.name)
def test_text_reads_back(presentation):
    rng = random.Random(presentation.name)
    for _ in range(25):
        x = _random_element(presentation, rng)
        assert ring.reduce(presentation, x.to_text()) == x


def test_coordinates(c2):
    basis = ring.degree_basis(c2, 3)
    x = ring.reduce(c2, 'l1^2*l2 + l1*l2^2')
    assert ring.coordinates(x, basis) == [1, -1]
    with pytest.raises(ValueError):
        ring.coordinates(x, [(0, 3)])


def test_tensor_renames_and_records_blocks():
    product = ring.tensor(ring.hilbert(1), ring.hilbert(2))
    assert product.generators == ('l0', 'l0_2', 'l1')
    assert product.blocks == (1, 2)
    assert product.top_degree == 3
    assert ring.graded_dimensions(product) == [1, 3, 3, 1]


def test_exterior_product():
    a = ring.generator(ring.hilbert(1), 'l0')
    b = ring.generator(ring.hilbert(1), 'l0')
    target = ring.tensor(ring.hilbert(1), ring.hilbert(1))
    assert ring.exterior_product(a, b, target) == ring.reduce(target, 'l0*l0_2')


def test_inhomogeneous_relation_is_rejected():
    with pytest.raises(ValueError):
        RingPresentation('bad', ('x',), ('x^2+x',), 2)


def test_presentation_by_name():
    assert ring.presentation_by_name('R4') == ring.hilbert(4)
    assert ring.presentation_by_name('Fl3') == ring.flag_type_a(3)
    with pytest.raises(ValueError):
        ring.presentation_by_name('B2')
