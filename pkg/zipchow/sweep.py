# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Batch checks of the identities over ranges of d, primes and subsets.

Each invariant enumerates picklable cases and checks one case at a time, so
cases can be spread over a process pool. Reports are ordered canonically:
invariants by name, then cases by their parameters, whatever the order in
which workers finish.
"""

import logging
import random
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from zipchow import azip, chevalley, strata, utils, weyl
from zipchow.azip import CyclicSubset, subsets_of_size
from zipchow.scalars import DOMAIN, scalar, specialize

# Coset enumeration bound for the classification sweep.
CLASSIFICATION_LIMIT = 5000

PROPORTIONALITY_MAX_N = 8

# Largest modulus swept per invariant when no max_d is configured.
MODULUS_BOUNDS = {
    'codim1': 10,
    'oracle': 8,
    'nonnegativity': 10,
    'reciprocity': 9,
    'interval': 9,
    'orthogonality': 8,
    'permutation': 10,
    'kunneth': 8,
}


@dataclass(frozen=True)
class SweepConfig:
    # None sweeps every invariant to its entry in MODULUS_BOUNDS.
    max_d: Optional[int] = None
    primes: Tuple[int, ...] = (2, 3, 5, 7)
    samples: int = 200
    seed: int = 1


Case = Tuple[str, tuple]


def _moduli(config: SweepConfig, name: str, start: int = 1) -> range:
    top = MODULUS_BOUNDS[name] if config.max_d is None else config.max_d
    return range(start, min(top, utils.max_d()) + 1)


def _pairs(d: int):
    for m in range(d + 1):
        basis = subsets_of_size(d, m)
        for I in basis:
            for J in basis:
                yield I, J


# Case enumeration.

def _codim1_cases(config):
    return [(d, i) for d in _moduli(config, 'codim1', 2) for i in range(d)]


def _subsets_up_to(config, name):
    return [(I,) for d in _moduli(config, name) for m in range(d + 1) for I in subsets_of_size(d, m)]


def _oracle_cases(config):
    return _subsets_up_to(config, 'oracle')


def _nonnegativity_cases(config):
    return [(I, p0) for (I,) in _subsets_up_to(config, 'nonnegativity')
            for p0 in (None,) + tuple(config.primes)]


def _reciprocity_cases(config):
    return [pair for d in _moduli(config, 'reciprocity') for pair in _pairs(d)]


def _orthogonality_cases(config):
    return [pair for d in _moduli(config, 'orthogonality') for pair in _pairs(d)]


def _interval_cases(config):
    return [(d, a, (a + length) % d) for d in _moduli(config, 'interval', 2)
            for a in range(d) for length in range(d - 1)]


def _permutation_cases(config):
    return [(d, m) for d in _moduli(config, 'permutation') for m in range(d + 1)]


def _classification_cases(config):
    return [(label,) for label in weyl.CLASSIFICATION_TYPES]


def _diagram_cases(config):
    return [(name,) for name in strata.FIXTURES]


def _hilbert_inert_cases(config):
    rng = random.Random(config.seed)
    cases = [(p0, ('p^3-1', 'p^2', 'p^3-1')) for p0 in config.primes]
    for _ in range(config.samples):
        p0 = rng.choice(config.primes)
        cases.append((p0, tuple(str(rng.randint(-20, 20)) for _ in range(3))))
    return cases


def _proportionality_cases(config):
    return [(n,) for n in range(2, PROPORTIONALITY_MAX_N + 1)]


# (criteria name, nef, expected status); A2 split is recorded as undecided.
CURVE_EXPECTATIONS = (
    ('C2', False, 'holds'),
    ('A2u', True, 'holds'),
    ('A2u', False, 'fails'),
    ('A2', False, 'fails'),
    ('A1^2', False, 'holds'),
    ('A1^3', False, 'holds'),
    ('A1^4', False, 'holds'),
)


def _curve_cases(config):
    def wanted(name):
        return not name.startswith('A1^') or config.max_d is None or int(name[3:]) <= config.max_d
    return [(name, nef, expected, p0) for name, nef, expected in CURVE_EXPECTATIONS
            for p0 in config.primes if wanted(name)]


def _partitions(d: int, smallest: int = 1) -> List[Tuple[int, ...]]:
    if d == 0:
        return [()]
    return [(first,) + rest for first in range(smallest, d + 1)
            for rest in _partitions(d - first, first)]


def _kunneth_cases(config):
    rng = random.Random(config.seed)
    cases = []
    for d in _moduli(config, 'kunneth', 2):
        for partition in _partitions(d):
            if len(partition) < 2:
                continue
            for m in range(1, d):
                subsets = subsets_of_size(d, m)
                cases.append((partition, rng.choice(subsets)))
    return cases[:config.samples]


# Checks. Each returns (ok, detail).

def _check_codim1(d, i):
    cardinality = azip.verify_expansion(azip.codim_one_expansion(d, i, 'cardinality'))
    modulus = azip.verify_expansion(azip.codim_one_expansion(d, i, 'modulus'))
    return cardinality and modulus == (d % 2 == 1), f'cardinality={cardinality} modulus={modulus}'


def _check_oracle(I):
    return azip.expand_oracle(I) == azip.expand_closed_form(I), ''


def _check_nonnegativity(I, p0):
    expansion = azip.expand_closed_form(I, p0)
    return expansion.effective, ','.join(str(J) for J in expansion.negative_labels())


def _check_reciprocity(I, J):
    record = azip.reciprocity_record(I, J)
    zero = azip.coeff_closed_form(I, J) == 0
    expected_modulus = len(I) % 2 == I.d % 2 or zero
    ok = record['cardinality'] and record['modulus'] == expected_modulus
    return ok, f"modulus={record['modulus']}"


def _check_orthogonality(I, J):
    return azip.orthogonality_check(I, J), ''


def _check_interval(d, a, b):
    return azip.interval_P_check(d, a, b), ''


def _check_permutation(d, m):
    return azip.permutation_mod_p(d, m), ''


def _doubled_middle(profile: List[int]) -> bool:
    middle = len(profile) // 2
    return profile[middle] == 2 and all(c == 1 for i, c in enumerate(profile) if i != middle)


def _check_classification(label):
    datum = weyl.root_datum(label)
    failures = []
    for removed in range(datum.rank):
        subset = [i for i in range(datum.rank) if i != removed]
        linear = weyl.is_linear(datum, subset)
        if linear != weyl.linear_by_classification(label, removed):
            failures.append(f'{removed + 1}: order formula')
        if weyl.coset_count(datum, subset) > CLASSIFICATION_LIMIT:
            continue
        profile = weyl.strat_type(datum, subset)
        if linear != all(m == 1 for m in profile):
            failures.append(f'{removed + 1}: profile')
        if label.startswith('D') and removed == 0 and not _doubled_middle(profile):
            failures.append(f'{removed + 1}: middle length')
    return not failures, ','.join(failures)


def _check_diagram(name):
    report = strata.verify_diagram(strata.load_fixture(name))
    return report.ok, '; '.join(f"{c['kind']} {c['subject']}" for c in report.failures())


def _check_hilbert_inert(p0, k):
    k = tuple(specialize(scalar(x), p0) for x in k)
    result = chevalley.hilbert_inert_cone(k, p0)
    column = DomainMatrix([[x] for x in result.m], (3, 1), DOMAIN)
    image = chevalley.inert_matrix(p0).matmul(column)
    closed = chevalley.inert_inverse(p0).matmul(DomainMatrix([[x] for x in k], (3, 1), DOMAIN))
    ok = all(image[i, 0].element == k[i] and closed[i, 0].element == result.m[i] for i in range(3))
    if k == tuple(specialize(scalar(x), p0) for x in ('p^3-1', 'p^2', 'p^3-1')):
        ok = ok and not result.in_pha and result.ample
    return ok, f'in_pha={result.in_pha} ample={result.ample}'


def _check_proportionality(n):
    return strata.proportionality_typeA(n), ''


def _check_curves(name, nef, expected, p0):
    verdict = strata.dual_cone_check(strata.criteria_for(name), p0, nef)
    return verdict.status == expected, f'{verdict.status} {verdict.violated or ""}'.strip()


def _check_kunneth(partition, I):
    return azip.verify_kunneth(partition, I), ''


@dataclass(frozen=True)
class Invariant:
    cases: Callable[[SweepConfig], List[tuple]]
    check: Callable[..., Tuple[bool, str]]


INVARIANTS: Dict[str, Invariant] = OrderedDict([
    ('codim1', Invariant(_codim1_cases, _check_codim1)),
    ('oracle', Invariant(_oracle_cases, _check_oracle)),
    ('nonnegativity', Invariant(_nonnegativity_cases, _check_nonnegativity)),
    ('reciprocity', Invariant(_reciprocity_cases, _check_reciprocity)),
    ('interval', Invariant(_interval_cases, _check_interval)),
    ('orthogonality', Invariant(_orthogonality_cases, _check_orthogonality)),
    ('permutation', Invariant(_permutation_cases, _check_permutation)),
    ('classification', Invariant(_classification_cases, _check_classification)),
    ('diagrams', Invariant(_diagram_cases, _check_diagram)),
    ('hilbert_inert', Invariant(_hilbert_inert_cases, _check_hilbert_inert)),
    ('proportionality', Invariant(_proportionality_cases, _check_proportionality)),
    ('curves', Invariant(_curve_cases, _check_curves)),
    ('kunneth', Invariant(_kunneth_cases, _check_kunneth)),
])


def _sort_key(value):
    if value is None:
        return (0,)
    if isinstance(value, (bool, int)):
        return (1, int(value))
    if isinstance(value, CyclicSubset):
        return (2, value.d, len(value), value.members)
    if isinstance(value, tuple):
        return (3, tuple(_sort_key(v) for v in value))
    return (4, str(value))


def case_key(params: tuple) -> tuple:
    """Lexicographic order on parameters, comparing numbers and subsets naturally."""
    return tuple(_sort_key(v) for v in params)


def _case_text(params: tuple) -> str:
    return ' '.join('symbolic' if x is None else str(x) for x in params)


def run_case(case: Case) -> Dict[str, object]:
    name, params = case
    try:
        ok, detail = INVARIANTS[name].check(*params)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        ok, detail = False, f'{type(exc).__name__}: {exc}'
    return {'invariant': name, 'case': _case_text(params), 'ok': bool(ok), 'detail': detail}


def resolve_invariants(text: str) -> List[str]:
    if text in ('', 'all'):
        return sorted(INVARIANTS)
    names = [name.strip() for name in text.split(',') if name.strip()]
    unknown = [name for name in names if name not in INVARIANTS]
    if unknown:
        raise ValueError(f'Unsupported invariant, {unknown[0]}')
    return sorted(set(names))


def run_sweep(names: Sequence[str], config: SweepConfig, num_processes: int = 1,
              progress: bool = True, timings: utils.Timings = None) -> List[Dict[str, object]]:
    """Results sorted by invariant name, then by case parameters."""
    results: List[Dict[str, object]] = []
    executor = ProcessPoolExecutor(max_workers=num_processes) if num_processes > 1 else None
    try:
        for name in sorted(set(names)):
            params = sorted(INVARIANTS[name].cases(config), key=case_key)
            cases = [(name, p) for p in params]
            logging.info('Sweeping %s over %d cases', name, len(cases))
            if executor is None:
                outcomes = map(run_case, cases)
            else:
                outcomes = executor.map(run_case, cases, chunksize=max(1, len(cases) // (4 * num_processes)))
            for outcome in tqdm(outcomes, total=len(cases), desc=name, disable=not progress):
                results.append(outcome)
                if not outcome['ok']:
                    logging.info('%s failed on %s: %s', name, outcome['case'], outcome['detail'])
            if timings is not None:
                timings.time(name)
    finally:
        if executor is not None:
            executor.shutdown()
    return results


def summarize(results: List[Dict[str, object]]) -> pd.DataFrame:
    """One row per invariant, sorted by name: cases, passed, failed."""
    columns = ['invariant', 'cases', 'passed', 'failed']
    if not results:
        return pd.DataFrame(columns=columns)
    frame = pd.DataFrame(results)
    summary = frame.groupby('invariant', sort=True).agg(cases=('ok', 'size'), passed=('ok', 'sum'))
    summary['failed'] = summary['cases'] - summary['passed']
    summary = summary.reset_index()
    return summary[columns].astype({'cases': int, 'passed': int, 'failed': int})
