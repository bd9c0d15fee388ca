# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Strata expansions for restriction of scalars of SL2 (type A1^d).

The Chow ring is R = Q[l_0..l_{d-1}]/(l_i^2). For a subset I of Z/d,
L_I is the monomial of the l_i, N_I the product of the strata weights
p*l_i - l_{i+1}, and P_I the product of p*l_i + l_{i+1}. The coefficients
a(I, J) of L_I = sum_J a(I, J) N_J have a closed form read off from the
maximal intervals of the complement of J.
"""

import itertools
import logging
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from zipchow import ring
from zipchow.ring import RingElement, RingPresentation
from zipchow.scalars import (
    DOMAIN,
    P,
    ScalarP,
    denominator_text,
    evaluate,
    format_scalar,
    is_nonnegative,
    numerator_text,
    scalar,
    specialize,
)
from zipchow.utils import max_d
from zipchow.weyl import ResourceBoundExceeded


class CardinalityMismatch(ValueError):
    pass


class SingularStrataMatrix(ArithmeticError):
    pass


def check_modulus(d: int) -> int:
    if d < 1:
        raise ValueError(f'd must be positive, got {d}')
    if d > max_d():
        raise ResourceBoundExceeded(f'd={d} exceeds ZIPCHOW_MAX_D={max_d()}')
    return d


@dataclass(frozen=True, order=True)
class CyclicSubset:
    d: int
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.d:
            raise ValueError(f'Mask {self.mask:b} has members outside Z/{self.d}')

    @classmethod
    def of(cls, d: int, members: Iterable[int]) -> 'CyclicSubset':
        mask = 0
        for i in members:
            mask |= 1 << (i % d)
        return cls(d, mask)

    @classmethod
    def full(cls, d: int) -> 'CyclicSubset':
        return cls(d, (1 << d) - 1)

    @classmethod
    def parse(cls, d: int, text: str) -> 'CyclicSubset':
        """Comma-separated members, e.g. '1,3'; the empty string is the empty set."""
        text = text.strip().strip('{}')
        members = [int(part) for part in text.split(',')] if text else []
        bad = [i for i in members if not 0 <= i < d]
        if bad:
            raise ValueError(f'Members {bad} are not in Z/{d}')
        return cls.of(d, members)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.d) if self.mask >> i & 1)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> (i % self.d) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count('1')

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def complement(self) -> 'CyclicSubset':
        return CyclicSubset(self.d, ((1 << self.d) - 1) ^ self.mask)

    def shift(self, k: int = 1) -> 'CyclicSubset':
        return CyclicSubset.of(self.d, (i + k for i in self.members))

    def is_full(self) -> bool:
        return self.mask == (1 << self.d) - 1

    def __str__(self):
        return '{' + ','.join(str(i) for i in self.members) + '}'


def subsets_of_size(d: int, m: int) -> List[CyclicSubset]:
    """All m-subsets of Z/d in lexicographic order of members."""
    return [CyclicSubset.of(d, c) for c in itertools.combinations(range(d), m)]


@dataclass(frozen=True)
class IntervalDecomposition:
    d: int
    intervals: Tuple[Tuple[int, int], ...]

    def members(self, a: int, b: int) -> List[int]:
        return [(a + k) % self.d for k in range((b - a) % self.d + 1)]

    def union(self) -> CyclicSubset:
        return CyclicSubset.of(self.d, itertools.chain.from_iterable(
            self.members(a, b) for a, b in self.intervals))


def interval_decompose(subset: CyclicSubset) -> IntervalDecomposition:
    """Maximal cyclic intervals of a nonempty subset, ordered by start."""
    d = subset.d
    if not len(subset):
        raise ValueError('Cannot decompose the empty subset')
    if subset.is_full():
        return IntervalDecomposition(d, ((0, d - 1),))
    intervals = []
    for a in subset.members:
        if (a - 1) in subset:
            continue
        b = a
        while (b + 1) in subset:
            b = (b + 1) % d
        intervals.append((a, b))
    return IntervalDecomposition(d, tuple(intervals))


def _closed_segments(decomposition: IntervalDecomposition) -> List[Tuple[int, List[int]]]:
    """Each interval [a, b] extended to [a, b + 1]."""
    return [(a, decomposition.members(a, (b + 1) % decomposition.d))
            for a, b in decomposition.intervals]


def monomial_L(subset: CyclicSubset, presentation: Optional[RingPresentation] = None) -> RingElement:
    presentation = presentation or ring.hilbert(subset.d)
    exponents = tuple(1 if i in subset else 0 for i in range(subset.d))
    return ring.monomial_element(presentation, exponents)


def _linear(d: int, i: int, coefficient: ScalarP, sign: int) -> Dict[Tuple[int, ...], ScalarP]:
    """coefficient * l_i + sign * l_{i+1} as a raw polynomial."""
    raw: Dict[Tuple[int, ...], ScalarP] = {}
    for index, c in ((i % d, coefficient), ((i + 1) % d, scalar(sign))):
        e = tuple(1 if k == index else 0 for k in range(d))
        raw[e] = raw.get(e, 0) + c
    return raw


def _product(subset: CyclicSubset, sign: int, p0: Optional[int]) -> RingElement:
    presentation = ring.hilbert(subset.d)
    weight = specialize(P, p0)
    result = ring.one(presentation)
    for i in subset.members:
        result = ring.multiply(result, ring.reduce(presentation, _linear(subset.d, i, weight, sign)))
    return result


def strata_N(subset: CyclicSubset, p0: Optional[int] = None) -> RingElement:
    """Class of the closed stratum: the product of p*l_i - l_{i+1} over i in J."""
    return _product(subset, -1, p0)


def positive_P(subset: CyclicSubset, p0: Optional[int] = None) -> RingElement:
    return _product(subset, 1, p0)


def strata_denominator(d: int, size: int) -> ScalarP:
    return P ** d + (-1) ** size


def _check_pair(I: CyclicSubset, J: CyclicSubset):
    if I.d != J.d:
        raise CardinalityMismatch(f'{I} and {J} live in different moduli {I.d} and {J.d}')
    if len(I) != len(J):
        raise CardinalityMismatch(f'|{I}| = {len(I)} but |{J}| = {len(J)}')


def exponent(I: CyclicSubset, J: CyclicSubset) -> Optional[int]:
    """e(I, J), or None when a(I, J) vanishes."""
    _check_pair(I, J)
    Jc = J.complement()
    if not len(I) or not len(Jc):
        return 0
    total = 0
    for a, segment in _closed_segments(interval_decompose(Jc)):
        hits = [x for x in segment if x in I]
        if len(hits) != 1:
            return None
        total += (hits[0] - a) % I.d
    return total


def coeff_closed_form(I: CyclicSubset, J: CyclicSubset) -> ScalarP:
    """a(I, J) = p^e(I,J) / (p^d + (-1)^|I|), zero when some segment misses I or meets it twice."""
    _check_pair(I, J)
    if not len(I):
        return scalar(1)
    if I.d <= 2:
        return expand_oracle(I).coefficient(J)
    e = exponent(I, J)
    if e is None:
        return scalar(0)
    return P ** e / strata_denominator(I.d, len(I))


def dual_exponent(Jp: CyclicSubset, Ip: CyclicSubset) -> Optional[int]:
    _check_pair(Jp, Ip)
    total = 0
    for a, segment in _closed_segments(interval_decompose(Jp)):
        missing = [x for x in segment if x not in Ip]
        if len(missing) != 1:
            return None
        total += (missing[0] - a) % Jp.d
    return total


def coeff_dual(Jp: CyclicSubset, Ip: CyclicSubset) -> ScalarP:
    """Coefficient of L_{I'} in P_{J'}, a product over the maximal intervals of J'."""
    _check_pair(Jp, Ip)
    if not len(Jp):
        return scalar(1)
    if Jp.d <= 2 or Jp.is_full():
        return positive_P(Jp).coefficient(monomial_L(Ip).terms[0][0])
    e = dual_exponent(Jp, Ip)
    return scalar(0) if e is None else P ** e


@dataclass(frozen=True)
class StrataExpansion:
    """A class written in a basis of strata classes.

    ``terms`` keeps nonzero coefficients only, keyed by stratum labels in a
    canonical order.
    """
    source: object
    terms: Tuple[Tuple[object, ScalarP], ...]
    p: Optional[int] = None
    meta: Dict[str, object] = field(default_factory=dict, compare=False, hash=False)

    def coefficient(self, label) -> ScalarP:
        for key, value in self.terms:
            if key == label:
                return value
        return scalar(0)

    @property
    def effective(self) -> bool:
        return all(is_nonnegative(c, self.p) for _, c in self.terms)

    def negative_labels(self) -> List[object]:
        return [key for key, c in self.terms if not is_nonnegative(c, self.p)]

    def to_json(self) -> dict:
        return {
            'terms': [{'J': str(key), 'num': numerator_text(c), 'den': denominator_text(c)}
                      for key, c in self.terms],
            'effective': self.effective,
        }

    def to_text(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(f'({format_scalar(c)}) * [{key}]' for key, c in self.terms)


def _nonzero(items: Iterable[Tuple[object, ScalarP]]) -> Tuple[Tuple[object, ScalarP], ...]:
    return tuple((k, c) for k, c in items if c != 0)


def strata_matrix(d: int, m: int, p0: Optional[int] = None) -> Tuple[DomainMatrix, List[CyclicSubset]]:
    """Matrix with row J holding the coordinates of N_J in the basis (L_K)."""
    basis = subsets_of_size(d, m)
    monomials = [monomial_L(K).terms[0][0] for K in basis]
    domain = DOMAIN if p0 is None else QQ
    rows = []
    for J in basis:
        element = strata_N(J, p0)
        row = []
        for mono in monomials:
            c = element.coefficient(mono)
            if p0 is not None:
                value = evaluate(c, p0)
                c = QQ(value.numerator, value.denominator)
            row.append(c)
        rows.append(row)
    return DomainMatrix(rows, (len(basis), len(basis)), domain), basis


def _to_scalar(value, p0: Optional[int]) -> ScalarP:
    if p0 is None:
        return value
    return scalar(Fraction(int(value.numerator), int(value.denominator)))


@lru_cache(maxsize=256)
def _inverse(d: int, m: int, p0: Optional[int]):
    matrix, basis = strata_matrix(d, m, p0)
    try:
        return matrix.inv(), basis
    except DMNonInvertibleMatrixError:
        raise SingularStrataMatrix(f'Strata matrix for d={d}, m={m} is singular')


def expand_oracle(I: CyclicSubset, p0: Optional[int] = None) -> StrataExpansion:
    """Expansion of L_I in strata classes by exact inversion of the strata matrix."""
    check_modulus(I.d)
    m = len(I)
    inverse, basis = _inverse(I.d, m, p0)
    row = basis.index(I)
    coefficients = [(J, _to_scalar(inverse[row, k].element, p0)) for k, J in enumerate(basis)]
    return StrataExpansion(I, _nonzero(coefficients), p0, {'d': I.d, 'method': 'oracle'})


def expand_closed_form(I: CyclicSubset, p0: Optional[int] = None) -> StrataExpansion:
    check_modulus(I.d)
    if I.d <= 2:
        return expand_oracle(I, p0)
    coefficients = [(J, specialize(coeff_closed_form(I, J), p0)) for J in subsets_of_size(I.d, len(I))]
    return StrataExpansion(I, _nonzero(coefficients), p0, {'d': I.d, 'method': 'closed_form'})


def reconstruct(expansion: StrataExpansion) -> RingElement:
    """sum_J a(I, J) N_J in R."""
    I = expansion.source
    total = ring.constant(ring.hilbert(I.d), 0)
    for J, c in expansion.terms:
        total = total + strata_N(J, expansion.p) * c
    return total


def verify_expansion(expansion: StrataExpansion) -> bool:
    return reconstruct(expansion) == monomial_L(expansion.source).at_p(expansion.p)


def reciprocity_sides(I: CyclicSubset, J: CyclicSubset, sign: str = 'cardinality') -> Tuple[ScalarP, ScalarP]:
    """(p^d + s) a(I, J) and the dual coefficient of L_{I^c} in P_{J^c}.

    ``sign`` selects s = (-1)^|I| ('cardinality') or s = (-1)^d ('modulus').
    """
    _check_pair(I, J)
    if sign == 'cardinality':
        factor = strata_denominator(I.d, len(I))
    elif sign == 'modulus':
        factor = strata_denominator(I.d, I.d)
    else:
        raise ValueError(f'Unsupported reciprocity sign, {sign}')
    return factor * coeff_closed_form(I, J), coeff_dual(J.complement(), I.complement())


def reciprocity_check(I: CyclicSubset, J: CyclicSubset, sign: str = 'cardinality') -> bool:
    lhs, rhs = reciprocity_sides(I, J, sign)
    return lhs == rhs


def reciprocity_record(I: CyclicSubset, J: CyclicSubset) -> Dict[str, object]:
    """Which of the two sign variants of reciprocity holds for (I, J)."""
    return {
        'd': I.d,
        'I': str(I),
        'J': str(J),
        'cardinality': reciprocity_check(I, J, 'cardinality'),
        'modulus': reciprocity_check(I, J, 'modulus'),
    }


def orthogonality_check(I: CyclicSubset, J: CyclicSubset) -> bool:
    """N_I * P_{J^c} is (p^d + (-1)^|I|) L_{Z/d} when I = J, zero otherwise."""
    _check_pair(I, J)
    product = ring.multiply(strata_N(I), positive_P(J.complement()))
    if I == J:
        expected = monomial_L(CyclicSubset.full(I.d)) * strata_denominator(I.d, len(I))
    else:
        expected = ring.constant(ring.hilbert(I.d), 0)
    return product == expected


def interval_P_check(d: int, a: int, b: int) -> bool:
    """P_[a,b] = sum_r p^r L_{[a, b+1] minus {a+r}} for a proper interval."""
    interval = CyclicSubset.of(d, ((a + k) for k in range((b - a) % d + 1)))
    if len(interval) >= d:
        raise ValueError(f'[{a},{b}] is not a proper interval of Z/{d}')
    segment = [(a + k) % d for k in range((b - a) % d + 2)]
    expected = ring.constant(ring.hilbert(d), 0)
    for r, x in enumerate(segment):
        expected = expected + monomial_L(CyclicSubset.of(d, (y for y in segment if y != x))) * P ** r
    return positive_P(interval) == expected


def codim_one_expansion(d: int, i: int, sign: str = 'cardinality') -> StrataExpansion:
    """l_i = sum_m p^{d-m-1} / (p^d + s) N_{i+m}; s = -1 ('cardinality') or (-1)^d ('modulus')."""
    denominator = strata_denominator(d, 1 if sign == 'cardinality' else d)
    terms = sorted(((CyclicSubset.of(d, [i + m]), P ** (d - m - 1) / denominator) for m in range(d)),
                   key=lambda item: item[0])
    return StrataExpansion(CyclicSubset.of(d, [i]), tuple(terms), None, {'d': d, 'sign': sign})


def exponent_bounds_hold(I: CyclicSubset) -> bool:
    """e(I, I) = d - |I| and e(I, J) <= d - |I| - 1 for every other J."""
    top = I.d - len(I)
    if exponent(I, I) != top:
        return False
    for J in subsets_of_size(I.d, len(I)):
        e = exponent(I, J)
        if J != I and e is not None and not 0 <= e <= top - 1:
            return False
    return True


def permutation_mod_p(d: int, m: int) -> bool:
    """The strata matrix at p = 0 has one entry +-1 in every row and column."""
    matrix, basis = strata_matrix(d, m, 0)
    rows = matrix.to_Matrix().tolist()
    n = len(basis)
    for line in rows + [list(col) for col in zip(*rows)]:
        nonzero = [x for x in line if x != 0]
        if len(nonzero) != 1 or abs(nonzero[0]) != 1:
            return False
    return n == len(rows)


def hodge_power_expansion(d: int, m: int, p0: Optional[int] = None) -> StrataExpansion:
    """(l_0 + ... + l_{d-1})^m = m! sum_{|I| = m} L_I in strata classes."""
    check_modulus(d)
    factorial = 1
    for k in range(2, m + 1):
        factorial *= k
    totals: Dict[CyclicSubset, ScalarP] = {}
    for I in subsets_of_size(d, m):
        for J, c in expand_closed_form(I, p0).terms:
            totals[J] = totals.get(J, 0) + c * factorial
    return StrataExpansion(f'hodge^{m}',
                           _nonzero(sorted(totals.items(), key=lambda item: item[0])), p0,
                           {'d': d, 'm': m})


# Products of restrictions of scalars.

def split_blocks(partition: Sequence[int], subset: CyclicSubset) -> List[CyclicSubset]:
    if sum(partition) != subset.d or any(d < 1 for d in partition):
        raise ValueError(f'Partition {list(partition)} does not sum to {subset.d}')
    blocks, offset = [], 0
    for d in partition:
        blocks.append(CyclicSubset.of(d, (i - offset for i in subset.members if offset <= i < offset + d)))
        offset += d
    return blocks


def join_blocks(partition: Sequence[int], blocks: Sequence[CyclicSubset]) -> CyclicSubset:
    members, offset = [], 0
    for d, block in zip(partition, blocks):
        members.extend(i + offset for i in block.members)
        offset += d
    return CyclicSubset.of(sum(partition), members)


def kunneth_expand(partition: Sequence[int], I: CyclicSubset, p0: Optional[int] = None) -> StrataExpansion:
    """Block-wise expansion; coefficients of a product stratum multiply."""
    blocks = split_blocks(partition, I)
    per_block = [expand_closed_form(block, p0).terms for block in blocks]
    terms = []
    for choice in itertools.product(*per_block):
        label = join_blocks(partition, [J for J, _ in choice])
        c = scalar(1)
        for _, value in choice:
            c = c * value
        terms.append((label, c))
    terms.sort(key=lambda item: item[0])
    return StrataExpansion(I, _nonzero(terms), p0, {'d': I.d, 'partition': list(partition)})


@lru_cache(maxsize=None)
def product_presentation(partition: Tuple[int, ...]) -> RingPresentation:
    presentation = ring.hilbert(partition[0])
    for d in partition[1:]:
        presentation = ring.tensor(presentation, ring.hilbert(d))
    return presentation


def _exterior(partition: Tuple[int, ...], factors: Sequence[RingElement]) -> RingElement:
    result, presentation = factors[0], ring.hilbert(partition[0])
    for d, factor in zip(partition[1:], factors[1:]):
        target = ring.tensor(presentation, ring.hilbert(d))
        result = ring.exterior_product(result, factor, target)
        presentation = target
    return result


def block_strata_N(partition: Sequence[int], J: CyclicSubset, p0: Optional[int] = None) -> RingElement:
    """Exterior product of the per-block strata classes."""
    partition = tuple(partition)
    return _exterior(partition, [strata_N(block, p0) for block in split_blocks(partition, J)])


def block_monomial_L(partition: Sequence[int], I: CyclicSubset) -> RingElement:
    partition = tuple(partition)
    return _exterior(partition, [monomial_L(block) for block in split_blocks(partition, I)])


def verify_kunneth(partition: Sequence[int], I: CyclicSubset) -> bool:
    """The block expansion reproduces L_I in the tensor product ring."""
    expansion = kunneth_expand(partition, I)
    total = ring.constant(product_presentation(tuple(partition)), 0)
    for J, c in expansion.terms:
        total = total + block_strata_N(partition, J) * c
    return total == block_monomial_L(partition, I)


def griffiths_direct_sum_effective(partition: Sequence[int], m: int, p0: Optional[int] = None) -> bool:
    """(sum of block Hodge classes)^m is strata effective on the product."""
    d = sum(partition)
    totals: Dict[CyclicSubset, ScalarP] = {}
    factorial = 1
    for k in range(2, m + 1):
        factorial *= k
    for I in subsets_of_size(d, m):
        for J, c in kunneth_expand(partition, I, p0).terms:
            totals[J] = totals.get(J, 0) + c * factorial
    verdict = all(is_nonnegative(c, p0) for c in totals.values())
    logging.info('Griffiths power %d on partition %s: %s', m, list(partition),
                 'effective' if verdict else 'not effective')
    return verdict


class HilbertStrataTable:
    """Strata classes N_J of A1^d, grouped by codimension |J|."""

    def __init__(self, d: int, p0: Optional[int] = None):
        self.d = check_modulus(d)
        self.p = p0
        self.presentation = ring.hilbert(d)

    def codim_classes(self, k: int) -> List[Tuple[CyclicSubset, RingElement]]:
        return [(J, strata_N(J, self.p)) for J in subsets_of_size(self.d, k)]

    def label(self, J: CyclicSubset) -> str:
        return str(J)

