# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Strata tables, partial Hasse diagrams and curve criteria.

A diagram fixture lists flag strata closures [Y_w] with their classes in a
ring presentation, and edges labelled by the first Chern class of a partial
Hasse invariant on the source closure whose zero scheme is the target.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Rational, Symbol, expand
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, lpmin

from zipchow import azip, ring
from zipchow.azip import CyclicSubset, HilbertStrataTable, StrataExpansion
from zipchow.ring import RingElement, RingPresentation
from zipchow.scalars import (
    DOMAIN,
    P_SYMBOL,
    ScalarP,
    _TRANSFORMATIONS,
    evaluate,
    format_scalar,
    is_nonnegative,
    is_positive,
    scalar,
    specialize,
)
from zipchow.weyl import RootDatum, WeylElement, lower_neighbours, root_datum

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')

FIXTURES = {
    'C2': 'c2.json',
    'A2u': 'a2_unitary.json',
    'A2': 'a2_split.json',
}


class PathMismatch(ValueError):
    pass


class NotAPartialHasseGenerator(ValueError):
    pass


class ConeProgramInfeasible(ArithmeticError):
    pass


class ConeProgramUnbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class DiagramNode:
    name: str
    word: Tuple[int, ...]
    cls: str
    forms: Tuple[str, ...] = ()
    relation: Optional[str] = None


@dataclass(frozen=True)
class DiagramEdge:
    source: str
    target: Optional[str]
    label: str
    relation: Optional[str] = None


@dataclass(frozen=True)
class DiagramFixture:
    name: str
    type_label: str
    presentation: RingPresentation
    nodes: Tuple[DiagramNode, ...]
    edges: Tuple[DiagramEdge, ...]
    curve_basis: Tuple[str, ...] = ()
    hodge: Optional[str] = None

    @property
    def datum(self) -> RootDatum:
        return root_datum(self.type_label)

    def node(self, name: str) -> DiagramNode:
        for node in self.nodes:
            if node.name == name:
                return node
        raise KeyError(f'No node {name!r} in {self.name}')

    def element(self, node: DiagramNode) -> WeylElement:
        return self.datum.element(*node.word)

    def class_of(self, name: str) -> RingElement:
        return ring.reduce(self.presentation, self.node(name).cls)

    @property
    def top(self) -> DiagramNode:
        return max(self.nodes, key=lambda node: len(node.word))

    @property
    def point(self) -> DiagramNode:
        return min(self.nodes, key=lambda node: len(node.word))

    def out_edges(self, name: str) -> List[DiagramEdge]:
        return [edge for edge in self.edges if edge.source == name]


def load_fixture(name: str) -> DiagramFixture:
    """Load a bundled fixture by type (``C2``, ``A2u``, ``A2``) or a JSON path."""
    path = os.path.join(FIXTURE_DIR, FIXTURES[name]) if name in FIXTURES else name
    if not os.path.exists(path):
        raise ValueError(f'Unknown diagram fixture {name!r}')
    with open(path, 'r') as f:
        raw = json.load(f)
    nodes = tuple(
        DiagramNode(n['name'], tuple(i - 1 for i in n['word']), n['class'],
                    tuple(n.get('forms', ())), n.get('relation'))
        for n in raw['nodes'])
    edges = tuple(
        DiagramEdge(e['source'], e.get('target'), e['label'], e.get('relation'))
        for e in raw['edges'])
    return DiagramFixture(
        name=raw['name'],
        type_label=raw['type'],
        presentation=ring.presentation_by_name(raw['presentation']),
        nodes=nodes,
        edges=edges,
        curve_basis=tuple(raw.get('curve_basis', ())),
        hodge=raw.get('hodge'),
    )


@dataclass
class DiagramReport:
    fixture: str
    checks: List[Dict[str, object]] = field(default_factory=list)

    def record(self, kind: str, subject: str, ok: bool, detail: str = ''):
        self.checks.append({'kind': kind, 'subject': subject, 'ok': ok, 'detail': detail})
        if not ok:
            logging.info('%s: %s check failed for %s %s', self.fixture, kind, subject, detail)

    @property
    def ok(self) -> bool:
        return all(check['ok'] for check in self.checks)

    def failures(self) -> List[Dict[str, object]]:
        return [check for check in self.checks if not check['ok']]


def _raw_expr(presentation: RingPresentation, text: str):
    local = dict(zip(presentation.generators, presentation.symbols))
    local['p'] = P_SYMBOL
    return parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)


def _paths(fixture: DiagramFixture, target: str) -> List[List[DiagramEdge]]:
    """All edge paths from the top node to ``target``."""
    top = fixture.top.name
    if target == top:
        return [[]]
    paths = []
    for edge in fixture.edges:
        if edge.target == target:
            paths.extend(path + [edge] for path in _paths(fixture, edge.source))
    return paths


def verify_diagram(fixture: DiagramFixture, strict: bool = False) -> DiagramReport:
    """Check every edge, form, relation and path of a diagram.

    With ``strict`` the first disagreement between paths raises PathMismatch.
    """
    pres = fixture.presentation
    datum = fixture.datum
    report = DiagramReport(fixture.name)
    classes = {node.name: fixture.class_of(node.name) for node in fixture.nodes}
    zero = ring.constant(pres, 0)

    report.record('top', fixture.top.name, classes[fixture.top.name] == ring.one(pres))
    for node in fixture.nodes:
        for form in node.forms:
            report.record('form', node.name, ring.reduce(pres, form) == classes[node.name], form)
        if node.relation is not None:
            report.record('relation', node.name, ring.reduce(pres, node.relation).is_zero(), node.relation)

    for edge in fixture.edges:
        product = ring.multiply(ring.reduce(pres, edge.label), classes[edge.source])
        if edge.target is None:
            report.record('vanishing', f'{edge.source} -> 0', product.is_zero(), edge.label)
            if edge.relation is not None:
                report.record('relation', f'{edge.source} -> 0',
                              ring.reduce(pres, edge.relation).is_zero(), edge.relation)
            continue
        subject = f'{edge.source} -> {edge.target}'
        report.record('edge', subject, product == classes[edge.target], edge.label)
        source = fixture.element(fixture.node(edge.source))
        target = fixture.element(fixture.node(edge.target))
        neighbours = [w for _, w in lower_neighbours(datum, source)]
        report.record('bruhat', subject, target in neighbours)

    for node in fixture.nodes:
        paths = _paths(fixture, node.name)
        if len(paths) < 2:
            continue
        raw_products, reduced = set(), []
        for path in paths:
            raw = 1
            for edge in path:
                raw = raw * _raw_expr(pres, edge.label)
            raw_products.add(expand(raw))
            reduced.append(ring.reduce(pres, raw))
        agree = all(r == classes[node.name] for r in reduced)
        report.record('paths', node.name, agree,
                      f'{len(paths)} paths, {len(raw_products)} distinct raw products')
        if strict and not agree:
            raise PathMismatch(f'Paths into {node.name} of {fixture.name} disagree after reduction')

    point = classes[fixture.point.name]
    top_basis = ring.degree_basis(pres, pres.top_degree)
    report.record('degree', fixture.point.name,
                  len(top_basis) == 1 and is_positive(point.coefficient(top_basis[0])))
    return report


def point_degree(fixture: DiagramFixture) -> ScalarP:
    """Coefficient of the point class on the top-degree normal monomial."""
    top_basis = ring.degree_basis(fixture.presentation, fixture.presentation.top_degree)
    return fixture.class_of(fixture.point.name).coefficient(top_basis[0])


def _dot_quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def emit_dot(fixture: DiagramFixture) -> str:
    lines = [f'digraph {_dot_quote(fixture.name)} {{', '  rankdir=TB;']
    for node in fixture.nodes:
        label = f'{node.name}\\n{fixture.class_of(node.name).to_text()}'
        lines.append(f'  {_dot_quote(node.name)} [shape=box, label={_dot_quote(label)}];')
    vanishing = 0
    for edge in fixture.edges:
        target = edge.target
        if target is None:
            target = f'zero{vanishing}'
            vanishing += 1
            lines.append(f'  {_dot_quote(target)} [shape=plaintext, label="0"];')
        lines.append(f'  {_dot_quote(edge.source)} -> {_dot_quote(target)} '
                     f'[label={_dot_quote(edge.label)}];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


# Strata tables and expansions.

class FixtureStrataTable:
    """Strata classes of a diagram fixture grouped by codimension."""

    def __init__(self, fixture: DiagramFixture):
        self.fixture = fixture
        self.presentation = fixture.presentation

    def codim_classes(self, k: int) -> List[Tuple[str, RingElement]]:
        top = len(self.fixture.top.word)
        return [(node.name, self.fixture.class_of(node.name))
                for node in self.fixture.nodes if top - len(node.word) == k]


def strata_table(name: str, p0: Optional[int] = None):
    """``A1^d`` gives the Hilbert table; anything else is a diagram fixture."""
    if name.startswith('A1^'):
        return HilbertStrataTable(int(name[3:]), p0)
    return FixtureStrataTable(load_fixture(name))


def _coordinates(table, element: RingElement, k: int):
    classes = table.codim_classes(k)
    basis = ring.degree_basis(table.presentation, k)
    if len(classes) != len(basis):
        raise ValueError(f'{len(classes)} strata in codimension {k} but the graded piece has dimension {len(basis)}')
    return classes, basis


def expand_in_strata(table, element: RingElement, k: Optional[int] = None) -> StrataExpansion:
    """Write a homogeneous class as a combination of the codimension-k strata classes."""
    p0 = getattr(table, 'p', None)
    if k is None:
        k = element.degree if element.degree is not None else 0
    classes, basis = _coordinates(table, element, k)
    n = len(basis)
    if n == 0:
        return StrataExpansion(element.to_text(), (), p0)
    columns = [ring.coordinates(cls, basis) for _, cls in classes]
    matrix = DomainMatrix([[columns[j][i] for j in range(n)] for i in range(n)], (n, n), DOMAIN)
    rhs = DomainMatrix([[c] for c in ring.coordinates(element, basis)], (n, 1), DOMAIN)
    try:
        solution = matrix.lu_solve(rhs)
    except DMNonInvertibleMatrixError:
        raise ValueError(f'Strata classes of codimension {k} are not a basis')
    terms = tuple((label, solution[j, 0].element) for j, (label, _) in enumerate(classes)
                  if solution[j, 0].element != 0)
    return StrataExpansion(element.to_text(), terms, p0, {'codim': k})


def hasse_generator_power(table, lam: RingElement, m: int) -> StrataExpansion:
    """Strata expansion of lam^m, built one multiplication at a time.

    Each step expands lam * [Y_w] for every stratum w in the current
    support; a negative coefficient there means lam is not a partial Hasse
    generator on [Y_w].
    """
    current: Dict[object, ScalarP] = {}
    top_classes = table.codim_classes(0)
    if len(top_classes) != 1:
        raise ValueError('Strata table has no unique open stratum')
    current[top_classes[0][0]] = scalar(1)
    classes = dict(top_classes)
    for step in range(1, m + 1):
        following: Dict[object, ScalarP] = {}
        next_classes = dict(table.codim_classes(step))
        for label, c in current.items():
            expansion = expand_in_strata(table, ring.multiply(lam, classes[label]), step)
            negative = expansion.negative_labels()
            if negative:
                raise NotAPartialHasseGenerator(
                    f'{lam} times [{label}] has negative coefficient on {[str(x) for x in negative]}')
            for target, a in expansion.terms:
                following[target] = following.get(target, 0) + c * a
        current = {label: c for label, c in following.items() if c != 0}
        classes = next_classes
    terms = tuple(sorted(current.items(), key=lambda item: str(item[0])))
    return StrataExpansion(f'({lam})^{m}', terms, getattr(table, 'p', None), {'m': m})


def pha_generators(fixture: DiagramFixture) -> List[Tuple[str, RingElement]]:
    """Weights of the partial Hasse invariants cutting out codimension one strata."""
    return [(edge.target, ring.reduce(fixture.presentation, edge.label))
            for edge in fixture.out_edges(fixture.top.name)]


def solve_edge_label(presentation: RingPresentation, source: RingElement,
                     target: RingElement) -> RingElement:
    """A linear form ell with ell * source = target, if one exists."""
    n = presentation.ngens
    columns = []
    for name in presentation.generators:
        columns.append(ring.multiply(ring.generator(presentation, name), source))
    monomials = sorted({m for c in columns + [target] for m, _ in c.terms}, reverse=True)
    if not monomials:
        return ring.constant(presentation, 0)
    rows = [[c.coefficient(mono) for c in columns] + [target.coefficient(mono)] for mono in monomials]
    reduced, pivots = DomainMatrix(rows, (len(monomials), n + 1), DOMAIN).rref()
    if n in pivots:
        raise ValueError(f'No linear form carries {source} to {target}')
    coefficients = [scalar(0)] * n
    for row_index, column in enumerate(pivots):
        coefficients[column] = reduced[row_index, n].element
    if len(pivots) < n:
        logging.info('Edge label is not unique; free generators set to zero')
    raw = {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(coefficients)}
    return ring.reduce(presentation, raw)


# Curve criteria.

@dataclass(frozen=True)
class CurveCriteria:
    """Linear functionals on curve classes written in ``basis``.

    A curve class x is generically ordinary when ordinary.x >= 0, meets the
    Hodge bundle nonnegatively when nef.x >= 0 and is strata effective when
    strata.x >= 0. Degrees are normalized by the point class.
    """
    name: str
    basis: Tuple[str, ...]
    ordinary: Tuple[Tuple[ScalarP, ...], ...]
    strata: Tuple[Tuple[ScalarP, ...], ...]
    strata_labels: Tuple[str, ...]
    nef: Tuple[Tuple[ScalarP, ...], ...] = ()


def _degree_rows(presentation: RingPresentation, weights: Sequence[RingElement],
                 basis: Sequence[RingElement], point: ScalarP):
    top = ring.degree_basis(presentation, presentation.top_degree)[0]
    return tuple(tuple(ring.multiply(w, b).coefficient(top) / point for b in basis) for w in weights)


def _strata_rows(table, basis: Sequence[RingElement], codim: int):
    columns = [expand_in_strata(table, b, codim) for b in basis]
    labels = [label for label, _ in table.codim_classes(codim)]
    rows = tuple(tuple(col.coefficient(label) for col in columns) for label in labels)
    return rows, tuple(str(label) for label in labels)


def curve_criteria(fixture: DiagramFixture) -> CurveCriteria:
    pres = fixture.presentation
    basis = [ring.reduce(pres, text) for text in fixture.curve_basis]
    point = point_degree(fixture)
    ordinary = _degree_rows(pres, [w for _, w in pha_generators(fixture)], basis, point)
    nef = ()
    if fixture.hodge:
        nef = _degree_rows(pres, [ring.reduce(pres, fixture.hodge)], basis, point)
    strata, labels = _strata_rows(FixtureStrataTable(fixture), basis, pres.top_degree - 1)
    return CurveCriteria(fixture.name, fixture.curve_basis, ordinary, strata, labels, nef)


@lru_cache(maxsize=None)
def criteria_for(name: str) -> CurveCriteria:
    """Curve criteria for ``C2``, ``A2u``, ``A2`` or ``A1^d``."""
    if name.startswith('A1^'):
        return _criteria_A1d(int(name[3:]))
    return curve_criteria(load_fixture(name))


def _criteria_A1d(d: int) -> CurveCriteria:
    """Basis L^i, the product of all l_j with j != i."""
    table = HilbertStrataTable(d)
    pres = table.presentation
    full = CyclicSubset.full(d)
    basis = [azip.monomial_L(CyclicSubset.of(d, (j for j in range(d) if j != i))) for i in range(d)]
    point = azip.strata_N(full).coefficient(azip.monomial_L(full).terms[0][0])
    weights = [azip.strata_N(CyclicSubset.of(d, [i])) for i in range(d)]
    ordinary = _degree_rows(pres, weights, basis, point)
    strata, labels = _strata_rows(table, basis, d - 1)
    return CurveCriteria(f'A1^{d}', tuple(f'L^{i}' for i in range(d)), ordinary, strata, labels)


def satisfies(criteria: CurveCriteria, x: Sequence, which: str, p0: Optional[int] = None) -> bool:
    values = [scalar(v) for v in x]
    for row in getattr(criteria, which):
        total = sum((c * v for c, v in zip(row, values)), scalar(0))
        if not is_nonnegative(total, p0):
            return False
    return True


@dataclass(frozen=True)
class CurveVerdict:
    name: str
    curve: Tuple[str, ...]
    p: Optional[int]
    ordinary: bool
    strata_effective: bool
    nef: Optional[bool] = None

    @property
    def implication_holds(self) -> bool:
        """Generically ordinary (and nef, when checked) implies strata effective."""
        admissible = self.ordinary and self.nef is not False
        return self.strata_effective or not admissible

    @property
    def status(self) -> str:
        if self.strata_effective:
            return 'strata-effective'
        if not self.ordinary:
            return 'not generically-ordinary-certified'
        return 'not strata-effective'

    def to_json(self) -> dict:
        return {
            'curve': list(self.curve),
            'name': self.name,
            'nef': self.nef,
            'ordinary': self.ordinary,
            'p': 'symbolic' if self.p is None else self.p,
            'status': self.status,
            'strata_effective': self.strata_effective,
        }


def curve_verdict(criteria: CurveCriteria, x: Sequence, p0: Optional[int] = None) -> CurveVerdict:
    values = [scalar(v) for v in x]
    if len(values) != len(criteria.basis):
        raise ValueError(f'{criteria.name} curves have {len(criteria.basis)} coefficients, got {len(values)}')
    return CurveVerdict(
        name=criteria.name,
        curve=tuple(format_scalar(v) for v in values),
        p=p0,
        ordinary=satisfies(criteria, values, 'ordinary', p0),
        strata_effective=satisfies(criteria, values, 'strata', p0),
        nef=satisfies(criteria, values, 'nef', p0) if criteria.nef else None,
    )


def curve_cone_A1d(curve: Sequence, d: int, p0: Optional[int] = None) -> CurveVerdict:
    """[C] = sum_i a_i L^i on the flag space of A1^d."""
    return curve_verdict(criteria_for(f'A1^{d}'), curve, p0)


def curve_cone_C2(a, b, p0: Optional[int] = None) -> CurveVerdict:
    """[C] = a l1^2 l2 + b l1 l2^2."""
    return curve_verdict(criteria_for('C2'), (a, b), p0)


def curve_cone_A2u(a, b, p0: Optional[int] = None) -> CurveVerdict:
    """[C] = a l1 l2 + b l2^2, with the Hodge inequality alongside."""
    return curve_verdict(criteria_for('A2u'), (a, b), p0)


def curve_cone_A2_split(a, b, p0: Optional[int] = None) -> CurveVerdict:
    return curve_verdict(criteria_for('A2'), (a, b), p0)


@dataclass(frozen=True)
class DualConeVerdict:
    status: str  # 'holds' or 'fails'
    witness: Optional[Tuple[object, ...]] = None
    violated: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.status == 'holds'


def dual_cone_check(criteria: CurveCriteria, p0: int, use_nef: bool = False) -> DualConeVerdict:
    """Does every x with ordinary.x >= 0 (and nef.x >= 0) satisfy strata.x >= 0?

    Each strata functional is minimised over the admissible cone cut by the
    box [-1, 1]^n; a negative minimum gives a witness.
    """
    n = len(criteria.basis)
    xs = [Symbol(f'x{i}') for i in range(n)]

    def linear(row):
        total = 0
        for c, x in zip(row, xs):
            value = evaluate(c, p0)
            total += Rational(value.numerator, value.denominator) * x
        return total

    rows = list(criteria.ordinary) + (list(criteria.nef) if use_nef else [])
    constraints = [linear(row) >= 0 for row in rows if any(c != 0 for c in row)]
    constraints += [x >= -1 for x in xs] + [x <= 1 for x in xs]
    for label, row in zip(criteria.strata_labels, criteria.strata):
        if all(c == 0 for c in row):
            continue
        try:
            value, point = lpmin(linear(row), constraints)
        except InfeasibleLPError:
            raise ConeProgramInfeasible(f'Admissible cone of {criteria.name} is empty at p={p0}')
        except UnboundedLPError:
            raise ConeProgramUnbounded(f'Strata functional {label} is unbounded at p={p0}')
        if value < 0:
            witness = tuple(point.get(x, 0) for x in xs)
            logging.info('%s: strata functional %s is negative at %s', criteria.name, label, witness)
            return DualConeVerdict('fails', witness, label)
    return DualConeVerdict('holds')


def cone_inclusion_status(criteria: CurveCriteria, p0: int, use_nef: bool = False) -> str:
    """'strata-effective' when the inclusion is proven, 'indeterminate' otherwise.

    A failed inclusion only shows that these criteria cannot decide it.
    """
    return 'strata-effective' if dual_cone_check(criteria, p0, use_nef).holds else 'indeterminate'


# Further identities.

def hodge_nonnef_C2(p0: Optional[int] = None) -> Tuple[ScalarP, ScalarP]:
    """Degrees of l2 on [Y_sgn2] and on [Y_(12)], as multiples of l1 l2^3."""
    fixture = load_fixture('C2')
    pres = fixture.presentation
    top = ring.degree_basis(pres, pres.top_degree)[0]
    l2 = ring.generator(pres, 'l2')
    negative, positive = (ring.multiply(l2, fixture.class_of(name)).coefficient(top)
                          for name in ('sgn2', '(12)'))
    return specialize(negative, p0), specialize(positive, p0)


def proportionality_typeA(n: int, r: Optional[int] = None) -> bool:
    """c_r of the bundle with Chern roots -l_2, ..., -l_n equals l_1^r.

    With ``r`` unset every 1 <= r <= n - 1 is checked.
    """
    if n < 2:
        raise ValueError(f'n must be at least 2, got {n}')
    degrees = range(1, n) if r is None else [r]
    if r is not None and not 1 <= r <= n - 1:
        raise ValueError(f'r must lie in [1, {n - 1}], got {r}')
    pres = ring.flag_type_a(n)
    l1 = ring.generator(pres, 'l1')
    roots = [-ring.generator(pres, f'l{i}') for i in range(2, n + 1)]
    for k in degrees:
        if _elementary(pres, roots, k) != l1 ** k:
            logging.info('Proportionality fails in degree %d for n=%d', k, n)
            return False
    return True


def _elementary(pres: RingPresentation, variables: Sequence[RingElement], r: int) -> RingElement:
    # e_k(x_1..x_j) = e_k(x_1..x_{j-1}) + x_j e_{k-1}(x_1..x_{j-1})
    table = [ring.one(pres)] + [ring.constant(pres, 0)] * r
    for x in variables:
        for k in range(r, 0, -1):
            table[k] = table[k] + ring.multiply(x, table[k - 1])
    return table[r]
