# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Graded quotient rings Q(p)[generators]/(relations) with normal forms.

Relations have rational coefficients. Each presentation derives a fixed
rewriting system (a reduced Groebner basis under degree-lexicographic order
on the generator list) once, and every RingElement is stored reduced.
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ, Poly, Symbol, symbols
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.groebnertools import groebner, spoly
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as poly_ring

from zipchow.scalars import (
    DOMAIN,
    P_SYMBOL,
    ScalarP,
    _TRANSFORMATIONS,
    denominator_text,
    format_scalar,
    numerator_text,
    scalar,
    specialize,
)

Monomial = Tuple[int, ...]


class PresentationMismatch(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


def _degree_key(monomial: Monomial):
    return (sum(monomial), monomial)


@dataclass(frozen=True)
class RingPresentation:
    name: str
    generators: Tuple[str, ...]
    relations: Tuple[str, ...]
    top_degree: int
    # Generator counts of the tensor factors, in order.
    blocks: Tuple[int, ...] = ()
    degree_bound: Optional[int] = None

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"Repeated generator names in {self.name}")
        for relation in self.relation_polys:
            degrees = {sum(m) for m in relation.monoms()}
            if len(degrees) > 1:
                raise ValueError(
                    f"Relation {relation.as_expr()} of {self.name} is not homogeneous")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def max_degree(self) -> int:
        return self.degree_bound if self.degree_bound is not None else 2 * self.top_degree + 2

    @cached_property
    def symbols(self) -> Tuple[Symbol, ...]:
        return tuple(symbols(",".join(self.generators) + ","))

    @cached_property
    def poly_ring(self):
        return poly_ring(",".join(self.generators), QQ, grlex)[0]

    @cached_property
    def relation_polys(self):
        local = dict(zip(self.generators, self.symbols))
        return [
            self.poly_ring.from_expr(parse_expr(text, local_dict=local,
                                                transformations=_TRANSFORMATIONS))
            for text in self.relations
        ]

    @cached_property
    def rules(self):
        """Reduced Groebner basis; its leading terms are the rewrite rules."""
        return groebner(self.relation_polys, self.poly_ring)

    @cached_property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.LM for g in self.rules)

    @lru_cache(maxsize=None)
    def monomial_normal_form(self, monomial: Monomial) -> Tuple[Tuple[Monomial, ScalarP], ...]:
        if sum(monomial) > self.max_degree:
            raise DegreeOverflow(
                f"Degree {sum(monomial)} exceeds bound {self.max_degree} in {self.name}")
        if sum(monomial) > self.top_degree and self.is_truncated:
            return ()
        remainder = self.poly_ring({monomial: 1}).rem(self.rules)
        return tuple((m, scalar(c)) for m, c in remainder.terms())

    @cached_property
    def is_truncated(self) -> bool:
        """Every monomial above the top degree reduces to zero."""
        return not any(True for _ in self.normal_monomials(self.top_degree + 1))

    @cached_property
    def power_bounds(self) -> Tuple[Optional[int], ...]:
        """Smallest e with g^e a leading monomial, per generator."""
        bounds: List[Optional[int]] = [None] * self.ngens
        for lm in self.leading_monomials:
            support = [i for i, e in enumerate(lm) if e]
            if len(support) == 1:
                i = support[0]
                if bounds[i] is None or lm[i] < bounds[i]:
                    bounds[i] = lm[i]
        return tuple(bounds)

    def normal_monomials(self, degree: int) -> Iterable[Monomial]:
        """Monomials of the given degree divisible by no leading monomial."""
        bounds = self.power_bounds

        def extend(prefix: List[int], remaining: int):
            index = len(prefix)
            if index == self.ngens - 1:
                candidate = tuple(prefix + [remaining])
                if self.is_normal(candidate):
                    yield candidate
                return
            cap = remaining if bounds[index] is None else min(remaining, bounds[index] - 1)
            for e in range(cap, -1, -1):
                partial = tuple(prefix + [e] + [0] * (self.ngens - index - 1))
                if self.is_normal(partial):
                    yield from extend(prefix + [e], remaining - e)

        if self.ngens == 0:
            return
        yield from extend([], degree)

    def is_normal(self, monomial: Monomial) -> bool:
        return not any(all(a >= b for a, b in zip(monomial, lm))
                       for lm in self.leading_monomials)

    def monomial_text(self, monomial: Monomial) -> str:
        parts = []
        for name, exponent in zip(self.generators, monomial):
            if exponent == 1:
                parts.append(name)
            elif exponent > 1:
                parts.append(f"{name}^{exponent}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class RingElement:
    presentation: RingPresentation
    terms: Tuple[Tuple[Monomial, ScalarP], ...] = field(default=())

    @property
    def coefficients(self) -> Dict[Monomial, ScalarP]:
        return dict(self.terms)

    def coefficient(self, monomial: Monomial) -> ScalarP:
        return self.coefficients.get(tuple(monomial), scalar(0))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[int]:
        degrees = {sum(m) for m, _ in self.terms}
        if len(degrees) > 1:
            return None
        return degrees.pop() if degrees else None

    def _check(self, other: "RingElement"):
        if other.presentation != self.presentation:
            raise PresentationMismatch(
                f"{self.presentation.name} vs {other.presentation.name}")

    def __add__(self, other):
        if not isinstance(other, RingElement):
            other = constant(self.presentation, other)
        self._check(other)
        acc = self.coefficients
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return _from_normal(self.presentation, acc)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.presentation, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return multiply(self, other)
        c = scalar(other)
        return _from_normal(self.presentation, {m: c * v for m, v in self.terms})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = one(self.presentation)
        for _ in range(n):
            result = multiply(result, self)
        return result

    def at_p(self, p0: Optional[int]) -> "RingElement":
        return _from_normal(self.presentation,
                            {m: specialize(c, p0) for m, c in self.terms})

    def to_text(self) -> str:
        """Readable by ``reduce``: every coefficient is parenthesized."""
        if not self.terms:
            return "0"
        return " + ".join(f"({format_scalar(c)}) * {self.presentation.monomial_text(m)}"
                          for m, c in self.terms)

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation.name,
            "terms": [{"monomial": self.presentation.monomial_text(m),
                       "num": numerator_text(c),
                       "den": denominator_text(c)} for m, c in self.terms],
        }

    def __str__(self):
        return self.to_text()


def _from_normal(presentation: RingPresentation, coefficients: Dict[Monomial, ScalarP]) -> RingElement:
    items = [(m, c) for m, c in coefficients.items() if c != 0]
    items.sort(key=lambda item: _degree_key(item[0]), reverse=True)
    return RingElement(presentation, tuple(items))


def _reduce_terms(presentation: RingPresentation,
                  raw: Iterable[Tuple[Monomial, ScalarP]]) -> RingElement:
    acc: Dict[Monomial, ScalarP] = {}
    for monomial, c in raw:
        for m, q in presentation.monomial_normal_form(tuple(monomial)):
            acc[m] = acc.get(m, 0) + c * q
    return _from_normal(presentation, acc)


RawPolynomial = Union[str, "RingElement", Dict[Monomial, object], object]


def reduce(presentation: RingPresentation, raw: RawPolynomial) -> RingElement:
    """Normal form of a polynomial in the generators with coefficients in Q(p).

    ``raw`` may be text such as ``(p-1)*(l1+l2)``, a sympy expression, a
    monomial-to-coefficient map, or an element (re-reduced, which is a no-op).
    """
    if isinstance(raw, RingElement):
        if raw.presentation != presentation:
            raise PresentationMismatch(f"{raw.presentation.name} vs {presentation.name}")
        return _reduce_terms(presentation, raw.terms)
    if isinstance(raw, dict):
        return _reduce_terms(presentation, ((m, scalar(c)) for m, c in raw.items()))
    if isinstance(raw, str):
        local = dict(zip(presentation.generators, presentation.symbols))
        local["p"] = P_SYMBOL
        raw = parse_expr(raw, local_dict=local, transformations=_TRANSFORMATIONS)
    poly = Poly(raw, *presentation.symbols, domain=DOMAIN)
    return _reduce_terms(presentation, poly.as_dict(native=True).items())


def multiply(a: RingElement, b: RingElement) -> RingElement:
    if a.presentation != b.presentation:
        raise PresentationMismatch(f"{a.presentation.name} vs {b.presentation.name}")
    raw: Dict[Monomial, ScalarP] = {}
    for ma, ca in a.terms:
        for mb, cb in b.terms:
            m = tuple(x + y for x, y in zip(ma, mb))
            raw[m] = raw.get(m, 0) + ca * cb
    return _reduce_terms(a.presentation, raw.items())


def constant(presentation: RingPresentation, value) -> RingElement:
    return _from_normal(presentation, {(0,) * presentation.ngens: scalar(value)})


def one(presentation: RingPresentation) -> RingElement:
    return constant(presentation, 1)


def generator(presentation: RingPresentation, name: str) -> RingElement:
    index = presentation.generators.index(name)
    monomial = tuple(1 if i == index else 0 for i in range(presentation.ngens))
    return _reduce_terms(presentation, [(monomial, scalar(1))])


def monomial_element(presentation: RingPresentation, monomial: Monomial) -> RingElement:
    return _reduce_terms(presentation, [(tuple(monomial), scalar(1))])


def degree_basis(presentation: RingPresentation, m: int) -> List[Monomial]:
    """Normal-form monomials spanning the degree-m piece, largest first."""
    if m < 0:
        raise ValueError(f"Negative degree {m}")
    if m > presentation.top_degree and presentation.is_truncated:
        return []
    basis = list(presentation.normal_monomials(m))
    basis.sort(key=_degree_key, reverse=True)
    return basis


def graded_dimensions(presentation: RingPresentation) -> List[int]:
    return [len(degree_basis(presentation, m)) for m in range(presentation.top_degree + 1)]


def check_confluence(presentation: RingPresentation) -> bool:
    """Every overlap of two rewrite rules resolves, and the ring is truncated."""
    rules = presentation.rules
    for f, g in itertools.combinations(rules, 2):
        if spoly(f, g, presentation.poly_ring).rem(rules) != 0:
            return False
    return presentation.is_truncated


def coordinates(element: RingElement, basis: Sequence[Monomial]) -> List[ScalarP]:
    coefficients = element.coefficients
    extra = set(coefficients) - set(basis)
    if extra:
        raise ValueError(f"Element {element} is not in the span of the given basis")
    return [coefficients.get(m, scalar(0)) for m in basis]


def tensor(pA: RingPresentation, pB: RingPresentation) -> RingPresentation:
    """Graded tensor product; clashing generator names of pB get a suffix."""
    used = set(pA.generators)
    renamed = []
    for name in pB.generators:
        new, k = name, 2
        while new in used:
            new, k = f"{name}_{k}", k + 1
        used.add(new)
        renamed.append(new)
    substitution = {old: Symbol(new) for old, new in zip(pB.symbols, renamed)}
    relations = list(pA.relations)
    for poly in pB.relation_polys:
        relations.append(str(poly.as_expr().xreplace(substitution)))
    blocks_a = pA.blocks or (pA.ngens,)
    blocks_b = pB.blocks or (pB.ngens,)
    return RingPresentation(
        name=f"{pA.name} x {pB.name}",
        generators=tuple(pA.generators) + tuple(renamed),
        relations=tuple(relations),
        top_degree=pA.top_degree + pB.top_degree,
        blocks=blocks_a + blocks_b,
    )


def exterior_product(a: RingElement, b: RingElement, target: RingPresentation) -> RingElement:
    na, nb = a.presentation.ngens, b.presentation.ngens
    if na + nb != target.ngens:
        raise PresentationMismatch(
            f"{a.presentation.name} and {b.presentation.name} do not span {target.name}")
    left = _reduce_terms(target, ((m + (0,) * nb, c) for m, c in a.terms))
    right = _reduce_terms(target, (((0,) * na + m, c) for m, c in b.terms))
    return multiply(left, right)


# Presentations used throughout.

@lru_cache(maxsize=None)
def hilbert(d: int) -> RingPresentation:
    """Q[l_0..l_{d-1}]/(l_i^2): the Chow ring for restriction of scalars of SL2."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    names = tuple(f"l{i}" for i in range(d))
    return RingPresentation(name=f"R{d}", generators=names,
                            relations=tuple(f"{n}^2" for n in names), top_degree=d)


@lru_cache(maxsize=None)
def siegel_c2() -> RingPresentation:
    return RingPresentation(name="C2", generators=("l1", "l2"),
                            relations=("l1^2+l2^2", "l1^2*l2^2"), top_degree=4)


@lru_cache(maxsize=None)
def unitary_a2() -> RingPresentation:
    return RingPresentation(name="A2u", generators=("l1", "l2"),
                            relations=("l1^2+l2^2+l1*l2", "l1*l2^2+l1^2*l2"), top_degree=3)


@lru_cache(maxsize=None)
def split_a2() -> RingPresentation:
    return RingPresentation(name="A2", generators=("l1", "l2"),
                            relations=("l1^2+l2^2+l1*l2", "l1^2*l2+l1*l2^2"), top_degree=3)


def _complete_homogeneous(names: Sequence[str], k: int) -> str:
    terms = ("*".join(combo) for combo in itertools.combinations_with_replacement(names, k))
    return "+".join(terms)


@lru_cache(maxsize=None)
def flag_type_a(n: int) -> RingPresentation:
    """Cohomology of the full flag variety of GL_n.

    The ideal of elementary symmetric functions is given by its Groebner
    basis h_k(l_k, ..., l_n), k = 1..n.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    names = tuple(f"l{i}" for i in range(1, n + 1))
    relations = tuple(_complete_homogeneous(names[k - 1:], k) for k in range(1, n + 1))
    return RingPresentation(name=f"Fl{n}", generators=names, relations=relations,
                            top_degree=n * (n - 1) // 2)


PRESENTATIONS = {
    "C2": siegel_c2,
    "A2u": unitary_a2,
    "A2": split_a2,
}


def presentation_by_name(name: str) -> RingPresentation:
    if name in PRESENTATIONS:
        return PRESENTATIONS[name]()
    if name.startswith("R") and name[1:].isdigit():
        return hilbert(int(name[1:]))
    if name.startswith("Fl") and name[2:].isdigit():
        return flag_type_a(int(name[2:]))
    raise ValueError(f"Unknown ring presentation {name!r}")


def siegel_c2_lambdas() -> Tuple[RingElement, RingElement]:
    """lambda_1 = l1 + l2 and lambda_2 = l1*l2 inside the C2 flag ring."""
    pres = siegel_c2()
    return reduce(pres, "l1+l2"), reduce(pres, "l1*l2")
