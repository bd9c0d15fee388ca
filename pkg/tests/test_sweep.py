# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import csv
import json
import os

import pytest

from zipchow import sweep, utils
from zipchow.azip import CyclicSubset
from zipchow.file_writer import CASE_FIELDS, FileWriter
from zipchow.sweep import SweepConfig

SMALL = SweepConfig(max_d=3, primes=(2, 3), samples=5, seed=3)


def test_resolve_invariants():
    assert sweep.resolve_invariants('all') == sorted(sweep.INVARIANTS)
    assert sweep.resolve_invariants('kunneth, codim1, kunneth') == ['codim1', 'kunneth']
    with pytest.raises(ValueError, match='Unsupported invariant, bogus'):
        sweep.resolve_invariants('codim1,bogus')


def test_case_counts():
    assert len(sweep.INVARIANTS['codim1'].cases(SMALL)) == 2 + 3
    assert len(sweep.INVARIANTS['oracle'].cases(SMALL)) == 2 + 4 + 8
    assert len(sweep.INVARIANTS['hilbert_inert'].cases(SMALL)) == 2 + 5
    assert all(sum(partition) == I.d for partition, I in sweep.INVARIANTS['kunneth'].cases(SMALL))


def test_small_sweep_passes():
    names = ['codim1', 'oracle', 'nonnegativity', 'reciprocity', 'interval',
             'orthogonality', 'permutation', 'hilbert_inert', 'kunneth']
    results = sweep.run_sweep(names, SMALL, progress=False)
    assert [r for r in results if not r['ok']] == []
    summary = sweep.summarize(results)
    assert list(summary.columns) == ['invariant', 'cases', 'passed', 'failed']
    assert list(summary['invariant']) == sorted(names)
    order = [r['invariant'] for r in results]
    assert order == sorted(order)
    assert summary['failed'].sum() == 0


def test_diagrams_and_curves():
    config = SweepConfig(max_d=3, primes=(2,), samples=1)
    results = sweep.run_sweep(['diagrams', 'curves'], config, progress=False)
    assert all(r['ok'] for r in results), [r for r in results if not r['ok']]


@pytest.mark.slow
def test_full_sweep():
    results = sweep.run_sweep(list(sweep.INVARIANTS), SweepConfig(max_d=5), progress=False)
    assert [r for r in results if not r['ok']] == []


def test_process_pool_matches_serial():
    serial = sweep.run_sweep(['codim1', 'interval'], SMALL, progress=False)
    pooled = sweep.run_sweep(['codim1', 'interval'], SMALL, num_processes=2, progress=False)
    assert pooled == serial


def test_run_case_captures_errors():
    outcome = sweep.run_case(('interval', (4, 0, 3)))
    assert outcome['ok'] is False
    assert outcome['detail'].startswith('ValueError:')
    assert outcome['case'] == '4 0 3'
    assert sweep.run_case(('nonnegativity', (sweep.subsets_of_size(3, 1)[0], None)))['case'] == '{0} symbolic'


def test_summarize_counts_failures():
    results = [
        {'invariant': 'interval', 'case': 'a', 'ok': True, 'detail': ''},
        {'invariant': 'codim1', 'case': 'b', 'ok': False, 'detail': 'x'},
        {'invariant': 'codim1', 'case': 'c', 'ok': True, 'detail': ''},
    ]
    summary = sweep.summarize(results)
    assert summary.to_dict('records') == [
        {'invariant': 'codim1', 'cases': 2, 'passed': 1, 'failed': 1},
        {'invariant': 'interval', 'cases': 1, 'passed': 1, 'failed': 0},
    ]
    assert sweep.summarize([]).empty


def test_default_moduli_follow_invariant_bounds(monkeypatch):
    monkeypatch.delenv('ZIPCHOW_MAX_D', raising=False)
    config = SweepConfig(primes=(2,))
    assert len(sweep.INVARIANTS['permutation'].cases(config)) == sum(d + 1 for d in range(1, 11))
    assert max(I.d for I, _ in sweep.INVARIANTS['reciprocity'].cases(config)) == 9
    assert max(case[0] for case in sweep.INVARIANTS['interval'].cases(config)) == 9
    assert max(I.d for I, _ in sweep.INVARIANTS['orthogonality'].cases(config)) == 8
    assert sweep.INVARIANTS['proportionality'].cases(config)[-1] == (8,)
    monkeypatch.setenv('ZIPCHOW_MAX_D', '6')
    assert len(sweep.INVARIANTS['permutation'].cases(config)) == sum(d + 1 for d in range(1, 7))


def test_cases_sort_by_parameters():
    subsets = [CyclicSubset.of(3, [0, 1]), CyclicSubset.of(3, [2]),
               CyclicSubset.of(2, [1]), CyclicSubset.of(3, [0])]
    params = [(I, p0) for I in subsets for p0 in (3, None)]
    ordered = sorted(params, key=sweep.case_key)
    assert [(str(I), p0) for I, p0 in ordered[:4]] == [('{1}', None), ('{1}', 3), ('{0}', None), ('{0}', 3)]
    assert [str(I) for I, _ in ordered[4:]] == ['{2}', '{2}', '{0,1}', '{0,1}']
    assert sweep.case_key((10,)) > sweep.case_key((9,))
    results = sweep.run_sweep(['interval'], SMALL, progress=False)
    keys = [tuple(int(x) for x in r['case'].split()) for r in results]
    assert keys == sorted(keys)


def test_classification_and_permutation_cases():
    for label in ('A4', 'C3', 'D5', 'E6', 'G2'):
        outcome = sweep.run_case(('classification', (label,)))
        assert outcome['ok'], outcome['detail']
    assert sweep.run_case(('permutation', (6, 3)))['ok']


def test_moduli_respect_environment(monkeypatch):
    monkeypatch.setenv('ZIPCHOW_MAX_D', '2')
    assert utils.max_d() == 2
    assert len(sweep.INVARIANTS['codim1'].cases(SMALL)) == 2
    monkeypatch.setenv('ZIPCHOW_MAX_D', 'zero')
    with pytest.raises(ValueError):
        utils.max_d()


def test_file_writer(tmp_path):
    writer = FileWriter(xpid='run', xp_args={'max_d': 3}, rootdir=str(tmp_path))
    writer.log({'cases': 2})
    writer.log({'cases': 3, 'failed': 1})
    writer.log_cases([{'invariant': 'codim1', 'case': '2 0', 'ok': True, 'detail': ''}])
    writer.close(successful=False)

    basepath = tmp_path / 'run'
    assert os.path.realpath(tmp_path / 'latest') == os.path.realpath(basepath)
    with open(basepath / 'fields.csv') as f:
        assert list(csv.reader(f))[-1] == ['_tick', '_time', 'cases', 'failed']
    with open(basepath / 'logs.csv') as f:
        lines = f.read().splitlines()
    assert lines[0] == '# _tick,_time,cases'
    assert [line.split(',')[0] for line in lines[1:]] == ['0', '1']
    with open(basepath / 'cases.csv') as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CASE_FIELDS
    assert rows[0]['case'] == '2 0'
    meta = json.loads((basepath / 'meta.json').read_text())
    assert meta['successful'] is False
    assert meta['args'] == {'max_d': 3}
    assert meta['date_end'] is not None


def test_file_writer_resumes(tmp_path):
    writer = FileWriter(xpid='run', rootdir=str(tmp_path), symlink_to_latest=False)
    writer.log({'cases': 1})
    writer.close()
    resumed = FileWriter(xpid='run', rootdir=str(tmp_path), symlink_to_latest=False)
    resumed.log({'cases': 2})
    resumed.close()
    with open(tmp_path / 'run' / 'logs.csv') as f:
        ticks = [line.split(',')[0] for line in f.read().splitlines() if not line.startswith('#')]
    assert ticks == ['0', '1']
    assert not os.path.exists(tmp_path / 'latest')
