# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Chevalley's formula, Schubert section cones and partial Hasse cones.

Characters are tuples of ScalarP in the character coordinates of the root
datum. The twist D_w sends chi to chi - p * sigma^{-1}(z w^{-1} chi).
"""

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from zipchow.azip import StrataExpansion
from zipchow.scalars import (
    DOMAIN,
    P,
    ScalarP,
    format_scalar,
    is_nonnegative,
    is_positive,
    scalar,
    specialize,
)
from zipchow.weyl import RootDatum, WeylElement, lower_neighbours, root_datum

ScalarCharacter = Tuple[ScalarP, ...]

CONVENTIONS = ('automorphic', 'lattice')


class SingularTwist(ArithmeticError):
    pass


def as_character(datum: RootDatum, values: Sequence) -> ScalarCharacter:
    if len(values) != datum.lattice_rank:
        raise ValueError(f'{datum.type_label} characters have {datum.lattice_rank} coordinates, got {len(values)}')
    return tuple(scalar(v) if not isinstance(v, str) else scalar(v.strip()) for v in values)


def parse_character(datum: RootDatum, text: str) -> ScalarCharacter:
    """Comma-separated coordinates such as ``p^3-1,p^2,p^3-1``."""
    return as_character(datum, text.split(','))


def character_text(chi: Sequence[ScalarP]) -> List[str]:
    return [format_scalar(c) for c in chi]


def _pair(chi: Sequence[ScalarP], nu: Sequence) -> ScalarP:
    total = scalar(0)
    for x, y in zip(chi, nu):
        if y:
            total = total + x * scalar(y)
    return total


def _twisted_coroots(datum: RootDatum, w: WeylElement):
    """(beta, w s_beta, w beta^v) for beta in E_w."""
    result = []
    for beta, target in lower_neighbours(datum, w):
        coroot = datum.coroot_cocharacter(datum.positive_system[beta])
        result.append((beta, target, datum.act_on_cocharacter(w, coroot)))
    return result


@dataclass(frozen=True)
class ChevalleyDivisor:
    base: WeylElement
    # (beta, w s_beta, -<lambda, w beta^v>)
    terms: Tuple[Tuple[Tuple[int, ...], WeylElement, ScalarP], ...]

    def coefficient(self, beta: Sequence[int]) -> ScalarP:
        for root, _, c in self.terms:
            if root == tuple(beta):
                return c
        return scalar(0)

    def is_zero(self) -> bool:
        return all(c == 0 for _, _, c in self.terms)

    def __add__(self, other: 'ChevalleyDivisor') -> 'ChevalleyDivisor':
        if other.base != self.base:
            raise ValueError('Divisors on different Schubert strata')
        return ChevalleyDivisor(self.base, tuple(
            (root, target, c + other.coefficient(root)) for root, target, c in self.terms))


def chevalley_divisor(datum: RootDatum, w: WeylElement, lam: Sequence) -> ChevalleyDivisor:
    """div(s) = -sum_{beta in E_w} <lambda, w beta^v> [Sbt_{w s_beta}]."""
    lam = as_character(datum, lam)
    terms = tuple((beta, target, -_pair(lam, coroot))
                  for beta, target, coroot in _twisted_coroots(datum, w))
    return ChevalleyDivisor(w, terms)


def sbt_cone_contains(datum: RootDatum, w: WeylElement, lam: Sequence, p0: Optional[int] = None) -> bool:
    """<lambda, w beta^v> <= 0 for every beta in E_w."""
    divisor = chevalley_divisor(datum, w, lam)
    return all(is_nonnegative(c, p0) for _, _, c in divisor.terms)


def default_z(datum: RootDatum, levi: Sequence[int] = ()) -> WeylElement:
    """sigma(w_{0,I}) w_0."""
    twisted = datum.frobenius_element(datum.longest_element(levi))
    return datum.multiply(twisted, datum.longest_element())


def _domain_matrix(rows) -> DomainMatrix:
    n = len(rows)
    return DomainMatrix([[scalar(x) for x in row] for row in rows], (n, len(rows[0])), DOMAIN)


def dw_matrix(datum: RootDatum, w: WeylElement, z: WeylElement, p: Optional[int] = None,
              inverse_frobenius: bool = True) -> DomainMatrix:
    n = datum.lattice_rank
    weight = P if p is None else scalar(p)
    frobenius = [[datum.frobenius[i][j] for j in range(n)] for i in range(n)]
    if inverse_frobenius:
        frobenius = [list(col) for col in zip(*frobenius)]
    zw = datum.multiply(z, datum.inverse(w))
    twist = _domain_matrix(frobenius) * _domain_matrix(datum.character_matrix(zw))
    identity = DomainMatrix.eye(n, DOMAIN)
    return identity - _scale(twist, weight)


def _scale(matrix: DomainMatrix, c: ScalarP) -> DomainMatrix:
    rows, cols = matrix.shape
    return DomainMatrix([[matrix[i, j].element * c for j in range(cols)] for i in range(rows)],
                        matrix.shape, DOMAIN)


def _apply(matrix: DomainMatrix, chi: Sequence[ScalarP]) -> ScalarCharacter:
    rows, cols = matrix.shape
    return tuple(sum((matrix[i, j].element * chi[j] for j in range(cols)), scalar(0)) for i in range(rows))


def dw_map(datum: RootDatum, w: WeylElement, z: WeylElement, p: Optional[int], chi: Sequence,
           inverse_frobenius: bool = True) -> ScalarCharacter:
    return _apply(dw_matrix(datum, w, z, p, inverse_frobenius), as_character(datum, chi))


def dw_inverse(datum: RootDatum, w: WeylElement, z: WeylElement, p: Optional[int] = None,
               inverse_frobenius: bool = True) -> DomainMatrix:
    matrix = dw_matrix(datum, w, z, p, inverse_frobenius)
    if matrix.det() == 0:
        raise SingularTwist(f'D_w is singular for w = {w} on {datum.type_label}')
    return matrix.inv()


@dataclass(frozen=True)
class ConeQuery:
    datum: RootDatum
    w: WeylElement
    lam: ScalarCharacter
    p: Optional[int] = None
    z: Optional[WeylElement] = None
    levi: FrozenSet[int] = field(default_factory=frozenset)
    convention: str = 'automorphic'
    inverse_frobenius: bool = True

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f'Unsupported convention, {self.convention}')

    @property
    def twist_element(self) -> WeylElement:
        return self.z if self.z is not None else default_z(self.datum, sorted(self.levi))


def pha_witness(query: ConeQuery) -> ScalarCharacter:
    """chi with D_w(chi) = -lambda (automorphic) or D_w(chi) = lambda (lattice)."""
    inverse = dw_inverse(query.datum, query.w, query.twist_element, query.p, query.inverse_frobenius)
    target = as_character(query.datum, query.lam)
    if query.convention == 'automorphic':
        target = tuple(-x for x in target)
    return _apply(inverse, target)


def pha_cone_contains(query: ConeQuery) -> Tuple[bool, ScalarCharacter]:
    chi = pha_witness(query)
    return sbt_cone_contains(query.datum, query.w, chi, query.p), chi


def divisor_class_on_stratum(datum: RootDatum, w: WeylElement, chi: Sequence,
                             p0: Optional[int] = None) -> StrataExpansion:
    """Class of the zero scheme of a section of weight chi on the stratum of w."""
    divisor = chevalley_divisor(datum, w, chi)
    terms = tuple((target, c) for _, target, c in divisor.terms if c != 0)
    return StrataExpansion(w, terms, p0, {'type': datum.type_label})


def _particular_solution(rows: List[List[ScalarP]], rhs: List[ScalarP]) -> List[ScalarP]:
    n = len(rows[0])
    augmented = DomainMatrix([list(r) + [b] for r, b in zip(rows, rhs)], (len(rows), n + 1), DOMAIN)
    reduced, pivots = augmented.rref()
    if n in pivots:
        raise ValueError('Inconsistent system')
    solution = [scalar(0)] * n
    for row_index, column in enumerate(pivots):
        solution[column] = reduced[row_index, n].element
    return solution


def hasse_weight_for(datum: RootDatum, w: WeylElement, beta: Sequence[int], p: Optional[int] = None,
                     z: Optional[WeylElement] = None, convention: str = 'automorphic'
                     ) -> Tuple[ScalarCharacter, ScalarCharacter]:
    """A character chi whose divisor on Sbt_w is [Sbt_{w s_beta}], and its weight.

    The weight is the partial Hasse weight -D_w(chi) (automorphic) or
    D_w(chi) (lattice).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f'Unsupported convention, {convention}')
    beta = tuple(beta)
    edges = _twisted_coroots(datum, w)
    if beta not in [b for b, _, _ in edges]:
        raise ValueError(f'{beta} is not a lower neighbour root of {w}')
    rows = [[scalar(x) for x in coroot] for _, _, coroot in edges]
    rhs = [scalar(-1 if b == beta else 0) for b, _, _ in edges]
    chi = tuple(_particular_solution(rows, rhs))
    twist = z if z is not None else default_z(datum)
    image = dw_map(datum, w, twist, p, chi)
    if convention == 'automorphic':
        image = tuple(-x for x in image)
    return chi, image


@dataclass(frozen=True)
class ConeGenerators:
    """A cone as nonnegative combinations of ``rays`` plus any multiple of ``lines``."""
    rays: Tuple[ScalarCharacter, ...]
    lines: Tuple[ScalarCharacter, ...] = ()


def sbt_cone_generators(datum: RootDatum, w: WeylElement) -> ConeGenerators:
    """Generators of {chi : <chi, w beta^v> <= 0 for beta in E_w}.

    The walls -w beta^v are completed to a basis by coordinate vectors; the
    columns of the inverse are rays for the walls and lines for the rest.
    """
    n = datum.lattice_rank
    walls = [[-scalar(x) for x in coroot] for _, _, coroot in _twisted_coroots(datum, w)]
    pivots: Sequence[int] = ()
    if walls:
        _, pivots = DomainMatrix(walls, (len(walls), n), DOMAIN).rref()
        if len(pivots) < len(walls):
            raise ValueError(f'Walls of the Schubert cone of {w} are dependent')
    rows = walls + [[scalar(int(i == j)) for j in range(n)] for i in range(n) if i not in pivots]
    inverse = DomainMatrix(rows, (n, n), DOMAIN).inv()
    columns = [tuple(inverse[i, j].element for i in range(n)) for j in range(n)]
    return ConeGenerators(tuple(columns[:len(walls)]), tuple(columns[len(walls):]))


def pha_cone_generators(datum: RootDatum, w: WeylElement, p: Optional[int] = None,
                        z: Optional[WeylElement] = None, convention: str = 'automorphic',
                        inverse_frobenius: bool = True) -> ConeGenerators:
    """Image of the Schubert cone of w under -D_w (automorphic) or D_w (lattice)."""
    if convention not in CONVENTIONS:
        raise ValueError(f'Unsupported convention, {convention}')
    twist = z if z is not None else default_z(datum)
    matrix = dw_matrix(datum, w, twist, p, inverse_frobenius)
    if convention == 'automorphic':
        matrix = _scale(matrix, scalar(-1))
    sbt = sbt_cone_generators(datum, w)
    return ConeGenerators(tuple(_apply(matrix, ray) for ray in sbt.rays),
                          tuple(_apply(matrix, line) for line in sbt.lines))


# The inert Hilbert threefold: A1^3 with Frobenius i -> i+1 and the
# stratum of w = s_0 s_2. Its weights are read in coordinates m with
# chi = (m_2, -m_0, m_1) for the witness chi, so that M m = k for
# M = -D_w . INERT_COORDINATES.

INERT_TYPE = 'A1^3'
INERT_COORDINATES = ((0, 0, 1), (-1, 0, 0), (0, 1, 0))


def inert_stratum() -> Tuple[RootDatum, WeylElement]:
    datum = root_datum(INERT_TYPE)
    return datum, datum.element(0, 2)


def inert_matrix(p: Optional[int] = None) -> DomainMatrix:
    """M = [[p, 0, -1], [1, p, 0], [0, -1, p]]."""
    datum, w = inert_stratum()
    twist = _scale(dw_matrix(datum, w, default_z(datum), p), scalar(-1))
    return twist.matmul(_domain_matrix(INERT_COORDINATES))


def inert_inverse(p: Optional[int] = None) -> DomainMatrix:
    """Closed form of M^{-1}: the adjugate over p^3 + 1."""
    q = P if p is None else scalar(p)
    det = q ** 3 + 1
    rows = [[q ** 2, 1, q], [-q, q ** 2, -1], [-1, q, q ** 2]]
    return DomainMatrix([[scalar(x) / det for x in row] for row in rows], (3, 3), DOMAIN)


@dataclass(frozen=True)
class InertConeResult:
    m: ScalarCharacter
    in_pha: bool
    ample: bool


def hilbert_inert_cone(k: Sequence, p: Optional[int] = None) -> InertConeResult:
    """Partial Hasse cone of the inert stratum (in_pha iff m_1, m_2 >= 0) and ampleness."""
    k = tuple(specialize(scalar(x), p) for x in k)
    if len(k) != 3:
        raise ValueError(f'Expected three weights, got {len(k)}')
    datum, w = inert_stratum()
    in_pha, chi = pha_cone_contains(ConeQuery(datum, w, k, p))
    m = (-chi[1], chi[2], chi[0])
    return InertConeResult(m, in_pha, hilbert_ample(k, p))


def hilbert_ample(k: Sequence, p: Optional[int] = None) -> bool:
    """p k_i - k_{i-1} > 0 for every i in Z/d."""
    k = tuple(specialize(scalar(x), p) for x in k)
    q = P if p is None else scalar(p)
    return all(is_positive(q * k[i] - k[i - 1], p) for i in range(len(k)))
