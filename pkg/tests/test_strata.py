# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import json
import os

import pytest

from zipchow import ring, strata
from zipchow.azip import CyclicSubset
from zipchow.scalars import P, scalar
from zipchow.strata import NotAPartialHasseGenerator


@pytest.mark.parametrize('name', sorted(strata.FIXTURES))
def test_bundled_diagrams_verify(name):
    report = strata.verify_diagram(strata.load_fixture(name), strict=True)
    assert report.ok, report.failures()
    kinds = {check['kind'] for check in report.checks}
    assert {'top', 'edge', 'bruhat', 'paths', 'degree'} <= kinds


def test_broken_edge_is_reported(tmp_path):
    with open(os.path.join(strata.FIXTURE_DIR, 'c2.json')) as f:
        raw = json.load(f)
    raw['edges'][0]['label'] = 'p*(l1+l2)'
    path = tmp_path / 'broken.json'
    path.write_text(json.dumps(raw))
    report = strata.verify_diagram(strata.load_fixture(str(path)))
    assert not report.ok
    assert ('edge', 'w0 -> sgn1') in {(c['kind'], c['subject']) for c in report.failures()}
    with pytest.raises(strata.PathMismatch):
        strata.verify_diagram(strata.load_fixture(str(path)), strict=True)


def test_fixture_lookup(c2_fixture):
    assert c2_fixture.top.name == 'w0'
    assert c2_fixture.point.name == '1'
    assert [edge.target for edge in c2_fixture.out_edges('w0')] == ['sgn1', '-(12)']
    with pytest.raises(KeyError):
        c2_fixture.node('nope')
    with pytest.raises(ValueError):
        strata.load_fixture('B7')


def test_point_degrees():
    assert strata.point_degree(strata.load_fixture('C2')) == P ** 4 - 1
    assert strata.point_degree(strata.load_fixture('A2u')) == P ** 3 + 1


def test_emit_dot(c2_fixture):
    dot = strata.emit_dot(c2_fixture)
    assert dot.startswith('digraph "C2" {')
    assert '  "w0" -> "sgn1" [label="(p-1)*(l1+l2)"];' in dot
    assert '"zero1"' in dot
    assert dot.endswith('}\n')


def test_expand_in_strata(c2_fixture):
    table = strata.strata_table('C2')
    pres = c2_fixture.presentation
    expansion = strata.expand_in_strata(table, ring.reduce(pres, 'l1+l2'))
    assert expansion.terms == (('sgn1', 1 / (P - 1)),)
    assert [name for name, _ in table.codim_classes(1)] == ['sgn1', '-(12)']


def test_hasse_power_c2(c2_fixture):
    table = strata.strata_table('C2')
    lam = ring.reduce(c2_fixture.presentation, 'l1+l2')
    assert strata.hasse_generator_power(table, lam, 0).terms == (('w0', scalar(1)),)
    assert strata.hasse_generator_power(table, lam, 1).terms == (('sgn1', 1 / (P - 1)),)
    with pytest.raises(NotAPartialHasseGenerator):
        strata.hasse_generator_power(table, lam, 2)


def test_hasse_power_hilbert():
    table = strata.strata_table('A1^2')
    lam = ring.reduce(ring.hilbert(2), 'l0+l1')
    first = strata.hasse_generator_power(table, lam, 1)
    assert first.terms == ((CyclicSubset.of(2, [0]), 1 / (P - 1)), (CyclicSubset.of(2, [1]), 1 / (P - 1)))
    second = strata.hasse_generator_power(table, lam, 2)
    assert second.terms == ((CyclicSubset.full(2), 2 / (P ** 2 + 1)),)
    assert second.effective


def test_hasse_power_hilbert_at_prime():
    table = strata.strata_table('A1^3', 3)
    lam = ring.reduce(ring.hilbert(3), 'l0+l1+l2')
    expansion = strata.hasse_generator_power(table, lam, 3)
    assert [J for J, _ in expansion.terms] == [CyclicSubset.full(3)]
    assert expansion.effective


def test_pha_generators_and_edge_labels(c2_fixture):
    pres = c2_fixture.presentation
    assert strata.pha_generators(c2_fixture) == [
        ('sgn1', ring.reduce(pres, '(p-1)*(l1+l2)')),
        ('-(12)', ring.reduce(pres, '-l1+p*l2')),
    ]
    label = strata.solve_edge_label(pres, c2_fixture.class_of('sgn1'), c2_fixture.class_of('sgn1(12)'))
    assert label == ring.reduce(pres, '(1/2)*((p-1)*l1+(p+1)*l2)')
    with pytest.raises(ValueError):
        strata.solve_edge_label(pres, c2_fixture.class_of('w0'), c2_fixture.class_of('sgn2(12)'))


def test_curve_cone_c2():
    verdict = strata.curve_cone_C2(1, 1)
    assert verdict.ordinary and verdict.strata_effective
    assert verdict.nef is None
    assert verdict.status == 'strata-effective'
    assert verdict.to_json()['curve'] == ['1', '1']
    other = strata.curve_cone_C2(1, 0, 2)
    assert not other.ordinary and not other.strata_effective
    assert other.status == 'not generically-ordinary-certified'
    assert other.implication_holds


def test_curve_cone_a2_unitary():
    witness = strata.curve_cone_A2u('p', -1)
    assert witness.ordinary
    assert not witness.strata_effective
    assert witness.nef is False
    assert witness.status == 'not strata-effective'
    assert witness.implication_holds
    assert strata.curve_cone_A2u(0, 1).strata_effective


def test_curve_cone_a2_split():
    verdict = strata.curve_cone_A2_split(0, 0, 3)
    assert verdict.name == 'A2-split'
    assert verdict.strata_effective and verdict.implication_holds
    assert verdict.nef is True
    with pytest.raises(ValueError):
        strata.curve_verdict(strata.criteria_for('A2'), (1, 2, 3))


@pytest.mark.parametrize('d', [2, 3, 4])
def test_curve_cone_hilbert(d):
    verdict = strata.curve_cone_A1d([1] * d, d)
    assert verdict.ordinary and verdict.strata_effective
    with pytest.raises(ValueError):
        strata.curve_cone_A1d([1] * (d + 1), d)


def test_curve_criteria_rows():
    criteria = strata.criteria_for('C2')
    assert criteria.basis == ('l1^2*l2', 'l1*l2^2')
    assert criteria.strata_labels == ('(12)', 'sgn2')
    assert len(criteria.ordinary) == 2 and not criteria.nef
    assert len(strata.criteria_for('A2u').nef) == 1
    with pytest.raises(ValueError):
        strata.curve_verdict(criteria, (1, 2, 3))


@pytest.mark.parametrize('p0', [2, 3])
def test_dual_cone(p0):
    assert strata.dual_cone_check(strata.criteria_for('C2'), p0).holds
    assert strata.dual_cone_check(strata.criteria_for('A2u'), p0, use_nef=True).holds
    failure = strata.dual_cone_check(strata.criteria_for('A2u'), p0)
    assert failure.status == 'fails'
    assert failure.witness is not None
    assert not strata.dual_cone_check(strata.criteria_for('A2'), p0).holds
    assert strata.cone_inclusion_status(strata.criteria_for('A2'), p0) == 'indeterminate'
    for name in ('A1^2', 'A1^3'):
        assert strata.cone_inclusion_status(strata.criteria_for(name), p0) == 'strata-effective'


def test_hodge_not_nef():
    negative, positive = strata.hodge_nonnef_C2()
    assert negative == -(P ** 2 - 1)
    assert positive == (P - 1) * (P ** 2 + 1)
    assert strata.hodge_nonnef_C2(2) == (scalar(-3), scalar(5))
    assert strata.hodge_nonnef_C2(3) == (scalar(-8), scalar(20))


@pytest.mark.parametrize('n', [2, 3, 4])
def test_proportionality(n):
    assert strata.proportionality_typeA(n)
    assert strata.proportionality_typeA(n, n - 1)


@pytest.mark.slow
@pytest.mark.parametrize('n', [5, 6, 7, 8])
def test_proportionality_slow(n):
    assert strata.proportionality_typeA(n)


def test_proportionality_rejects():
    with pytest.raises(ValueError):
        strata.proportionality_typeA(3, 3)
    with pytest.raises(ValueError):
        strata.proportionality_typeA(1)
