# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import pytest

from zipchow import weyl
from zipchow.weyl import ResourceBoundExceeded, UnsupportedCartanType, root_datum


@pytest.mark.parametrize('label, count', [
    ('A3', 6), ('B3', 9), ('C2', 4), ('D4', 12), ('G2', 6), ('F4', 24), ('E6', 36),
])
def test_positive_roots(label, count):
    assert len(weyl.positive_roots(root_datum(label))) == count


@pytest.mark.parametrize('label, order', [
    ('A2', 6), ('C2', 8), ('G2', 12), ('B3', 48), ('A1^3', 8), ('E8', 696729600),
])
def test_group_order(label, order):
    assert root_datum(label).order == order


@pytest.mark.parametrize('label', ['A2', 'C2', 'G2', 'A3'])
def test_enumeration_matches_order(label):
    datum = root_datum(label)
    elements = weyl.weyl_group(datum)
    assert len(elements) == datum.order
    assert all(datum.inversion_count(w) == w.length for w in elements)


def test_longest_element_and_words():
    datum = root_datum('C2')
    w0 = datum.longest_element()
    assert w0.length == 4
    assert weyl.parse_element(datum, 'w0') == w0
    assert weyl.parse_word('1,2,1') == (0, 1, 0)
    assert datum.element(0, 1, 0, 1) == datum.element(1, 0, 1, 0) == w0
    assert datum.multiply(w0, datum.inverse(w0)).is_identity()


def test_lower_neighbours_of_w0():
    datum = root_datum('C2')
    w0 = datum.longest_element()
    targets = {w for _, w in weyl.lower_neighbours(datum, w0)}
    assert targets == {datum.element(0, 1, 0), datum.element(1, 0, 1)}


def test_bruhat_order():
    datum = root_datum('A2')
    w0 = datum.longest_element()
    s1 = datum.element(0)
    assert weyl.bruhat_le(datum, datum.identity(), w0)
    assert weyl.bruhat_le(datum, s1, datum.element(1, 0))
    assert not weyl.bruhat_le(datum, w0, s1)
    assert not weyl.bruhat_le(datum, datum.element(1), s1)


def test_strat_type_c2():
    datum = root_datum('C2')
    assert weyl.strat_type(datum, [0]) == [1, 1, 1, 1]
    assert weyl.is_linear(datum, [0])


@pytest.mark.parametrize('n', [4, 5, 6])
def test_d_type_has_a_doubled_middle_length(n):
    datum = root_datum(f'D{n}')
    subset = list(range(1, n))
    assert weyl.coset_count(datum, subset) == 2 * n
    assert weyl.strat_type(datum, subset) == [1] * (n - 1) + [2] + [1] * (n - 1)
    assert not weyl.is_linear(datum, subset)


@pytest.mark.parametrize('label, subset', [
    ('A4', [1, 2, 3]),
    ('B4', [1, 2, 3]),
    ('C4', [1, 2, 3]),
    ('G2', [0]),
    ('G2', [1]),
])
def test_linear_pairs(label, subset):
    assert weyl.is_linear(root_datum(label), subset)


@pytest.mark.parametrize('label, subset', [
    ('A3', [0, 2]),
    ('C3', [0, 1]),
    ('B3', [0, 1]),
    ('F4', [0, 1, 2]),
    ('F4', [1, 2, 3]),
    ('E6', [1, 2, 3, 4, 5]),
    ('E7', [0, 1, 2, 3, 4, 5]),
    ('E8', [0, 1, 2, 3, 4, 5, 6]),
])
def test_nonlinear_pairs(label, subset):
    assert not weyl.is_linear(root_datum(label), subset)


def test_levi_labels():
    assert weyl.levi_label(root_datum('A3'), [0, 2]) == 'A1xA1'
    assert weyl.levi_label(root_datum('C4'), [1, 2, 3]) == 'C3'
    assert weyl.levi_label(root_datum('B4'), [1, 2, 3]) == 'B3'
    assert weyl.levi_label(root_datum('F4'), [0, 1, 2]) == 'B3'
    assert weyl.levi_label(root_datum('F4'), [1, 2, 3]) == 'C3'
    assert weyl.levi_label(root_datum('C2'), []) == 'T'


def test_classification_table_rank_two():
    rows = weyl.classification_table(['C2', 'G2'])
    assert len(rows) == 4
    assert all(row['linear'] for row in rows)
    assert all(row['strat_type'] == [1] * (row['half_complement'] + 1) for row in rows)


def test_frobenius_on_a1_powers():
    datum = root_datum('A1^3')
    assert datum.frobenius_permutation == (1, 2, 0)
    w = datum.element(0)
    assert datum.frobenius_element(w) == datum.element(1)
    assert datum.frobenius_element(w, inverse=True) == datum.element(2)


def test_unitary_frobenius_swaps_simple_roots():
    assert root_datum('A2u').frobenius_permutation == (1, 0)


def test_resource_bound():
    with pytest.raises(ResourceBoundExceeded):
        weyl.min_coset_reps(root_datum('E6'), [], limit=100)


@pytest.mark.parametrize('label', ['X3', 'A0', 'A2^2', 'C3u', 'E9'])
def test_unsupported_types(label):
    with pytest.raises(UnsupportedCartanType):
        root_datum(label)


def test_subset_out_of_range():
    with pytest.raises(ValueError):
        weyl.parse_subset(root_datum('C2'), '3')


@pytest.mark.parametrize('label', weyl.CLASSIFICATION_TYPES)
def test_order_formula_matches_classification(label):
    datum = root_datum(label)
    for removed in range(datum.rank):
        subset = [i for i in range(datum.rank) if i != removed]
        assert weyl.is_linear(datum, subset) == weyl.linear_by_classification(label, removed), removed


def test_classification_lists_linear_nodes():
    assert weyl.linear_by_classification('A5', 0) and weyl.linear_by_classification('A5', 4)
    assert not weyl.linear_by_classification('A5', 2)
    assert weyl.linear_by_classification('B4', 0) and not weyl.linear_by_classification('B4', 3)
    assert weyl.linear_by_classification('G2', 1)
    assert not any(weyl.linear_by_classification('D5', i) for i in range(5))
    assert not any(weyl.linear_by_classification('E6', i) for i in range(6))
