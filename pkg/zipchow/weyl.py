# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Root data, Weyl groups and Bruhat combinatorics for the finite types in use.

Simple roots are numbered as in Bourbaki's Planches; indices are 0-based in
code (Bourbaki's alpha_1 is index 0). For restriction of scalars A1^d the
index i is the factor i of Z/d.
"""

import logging
import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

Character = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[int, ...], ...]


class UnsupportedCartanType(ValueError):
    pass


class ResourceBoundExceeded(RuntimeError):
    pass


_TYPE_RE = re.compile(r"^(?P<letter>[A-G])(?P<rank>\d+)(?:\^(?P<power>\d+))?(?P<unitary>u)?$")

_RANK_LIMITS = {"A": (1, 8), "B": (2, 6), "C": (2, 6), "D": (4, 6),
                "E": (6, 8), "F": (4, 4), "G": (2, 2)}

_EXCEPTIONAL_ORDERS = {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
                       ("F", 4): 1152, ("G", 2): 12}
_EXCEPTIONAL_ROOTS = {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}


def weyl_order(letter: str, rank: int) -> int:
    if letter == "A":
        return math.factorial(rank + 1)
    if letter in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if letter == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if (letter, rank) in _EXCEPTIONAL_ORDERS:
        return _EXCEPTIONAL_ORDERS[(letter, rank)]
    raise UnsupportedCartanType(f"Unsupported Cartan type {letter}{rank}")


def positive_root_count(letter: str, rank: int) -> int:
    if letter == "A":
        return rank * (rank + 1) // 2
    if letter in ("B", "C"):
        return rank * rank
    if letter == "D":
        return rank * (rank - 1)
    if (letter, rank) in _EXCEPTIONAL_ROOTS:
        return _EXCEPTIONAL_ROOTS[(letter, rank)]
    raise UnsupportedCartanType(f"Unsupported Cartan type {letter}{rank}")


@dataclass(frozen=True)
class WeylElement:
    # Columns are w(alpha_j) in simple-root coordinates.
    action: Matrix
    word: Tuple[int, ...] = field(compare=False)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.action, dtype=np.int64)

    def is_identity(self) -> bool:
        return not self.word

    def __str__(self):
        if not self.word:
            return "e"
        return "s" + ".s".join(str(i) for i in self.word)


def _to_tuple(matrix: np.ndarray) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in matrix)


def _positive_system(cartan: Matrix) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """Positive roots mapped to their coroots, both in simple coordinates."""
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    system = {s: s for s in simple}
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        cobeta = system[beta]
        for i in range(r):
            c = sum(beta[j] * cartan[j][i] for j in range(r))
            image = list(beta)
            image[i] -= c
            image = tuple(image)
            if image == beta or min(image) < 0 or image in system:
                continue
            cc = sum(cartan[i][j] * cobeta[j] for j in range(r))
            coimage = list(cobeta)
            coimage[i] -= cc
            system[image] = tuple(coimage)
            queue.append(image)
    return dict(sorted(system.items(), key=lambda item: (sum(item[0]), item[0])))


def _components(cartan: Matrix, nodes: Iterable[int]) -> List[List[int]]:
    nodes = sorted(nodes)
    remaining, components = set(nodes), []
    for start in nodes:
        if start not in remaining:
            continue
        component, stack = [], [start]
        remaining.discard(start)
        while stack:
            i = stack.pop()
            component.append(i)
            for j in list(remaining):
                if cartan[i][j] != 0:
                    remaining.discard(j)
                    stack.append(j)
        components.append(sorted(component))
    return components


def _short_nodes(cartan: Matrix) -> int:
    """Count simple roots of minimal length in a connected Cartan matrix."""
    r = len(cartan)
    lengths = {0: Fraction(1)}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(r):
            if j not in lengths and cartan[i][j] != 0:
                lengths[j] = lengths[i] * cartan[j][i] / cartan[i][j]
                stack.append(j)
    shortest = min(lengths.values())
    return sum(1 for v in lengths.values() if v == shortest)


def _identify(cartan: Matrix, nodes: Sequence[int]) -> Tuple[str, int]:
    sub = tuple(tuple(cartan[i][j] for j in nodes) for i in nodes)
    rank, count = len(nodes), len(_positive_system(sub))
    simply_laced = all(sub[i][j] in (0, -1) for i in range(rank) for j in range(rank) if i != j)
    if simply_laced:
        if count == rank * (rank + 1) // 2:
            return "A", rank
        if rank >= 4 and count == rank * (rank - 1):
            return "D", rank
        for (letter, r), n in _EXCEPTIONAL_ROOTS.items():
            if letter == "E" and r == rank and n == count:
                return "E", rank
    else:
        if rank == 2 and count == 6:
            return "G", 2
        if rank == 4 and count == 24:
            return "F", 4
        if count == rank * rank:
            return ("B" if _short_nodes(sub) == 1 and rank > 2 else "C"), rank
    raise UnsupportedCartanType(f"Cannot identify component of rank {rank} with {count} positive roots")


@dataclass(frozen=True)
class RootDatum:
    type_label: str
    simple_roots: Tuple[Character, ...] = field(compare=False, repr=False)
    simple_coroots: Tuple[Character, ...] = field(compare=False, repr=False)
    # Matrix of Frobenius on character coordinates.
    frobenius: Tuple[Tuple[int, ...], ...] = field(compare=False, repr=False)

    def __post_init__(self):
        images = [self.apply_frobenius(alpha) for alpha in self.simple_roots]
        if sorted(images) != sorted(self.simple_roots):
            raise UnsupportedCartanType(f"Frobenius of {self.type_label} does not permute the simple roots")

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def lattice_rank(self) -> int:
        return len(self.simple_roots[0])

    @cached_property
    def cartan(self) -> Matrix:
        return tuple(
            tuple(int(pairing(a, c)) for c in self.simple_coroots) for a in self.simple_roots)

    @cached_property
    def frobenius_permutation(self) -> Tuple[int, ...]:
        images = [self.apply_frobenius(alpha) for alpha in self.simple_roots]
        return tuple(self.simple_roots.index(image) for image in images)

    def apply_frobenius(self, chi: Sequence, inverse: bool = False) -> Character:
        f = np.array(self.frobenius, dtype=object)
        if inverse:
            f = f.T  # signed permutation matrices are orthogonal
        return tuple(Fraction(x) for x in f.dot(np.array(list(chi), dtype=object)))

    @cached_property
    def positive_system(self) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
        return _positive_system(self.cartan)

    @cached_property
    def _positive_matrix(self) -> np.ndarray:
        return np.array(list(self.positive_system), dtype=np.int64).T

    @cached_property
    def components(self) -> Tuple[Tuple[str, int], ...]:
        return tuple(_identify(self.cartan, c) for c in _components(self.cartan, range(self.rank)))

    @cached_property
    def order(self) -> int:
        return math.prod(weyl_order(letter, rank) for letter, rank in self.components)

    def coroot_cocharacter(self, coroot: Sequence[int]) -> Character:
        return _combine(coroot, self.simple_coroots)

    # Weyl group elements.

    @cached_property
    def _reflections(self) -> List[np.ndarray]:
        matrices = []
        for i in range(self.rank):
            s = np.identity(self.rank, dtype=np.int64)
            for j in range(self.rank):
                s[i, j] -= self.cartan[j][i]
            matrices.append(s)
        return matrices

    def identity(self) -> WeylElement:
        return WeylElement(_to_tuple(np.identity(self.rank, dtype=np.int64)), ())

    def simple_reflection(self, i: int) -> WeylElement:
        return self.element(i)

    def _word_matrix(self, word: Iterable[int]) -> np.ndarray:
        m = np.identity(self.rank, dtype=np.int64)
        for i in word:
            m = m @ self._reflections[i]
        return m

    def from_matrix(self, matrix: np.ndarray) -> WeylElement:
        """Wrap a matrix, recovering a reduced word by peeling right descents."""
        m, peeled = np.array(matrix, dtype=np.int64), []
        while True:
            descents = [i for i in range(self.rank) if (m[:, i] < 0).any()]
            if not descents:
                break
            m = m @ self._reflections[descents[0]]
            peeled.append(descents[0])
        if not (m == np.identity(self.rank, dtype=np.int64)).all():
            raise ValueError("Matrix is not a Weyl group element")
        return WeylElement(_to_tuple(matrix), tuple(reversed(peeled)))

    def element(self, *word: int) -> WeylElement:
        for i in word:
            if not 0 <= i < self.rank:
                raise ValueError(f"Simple index {i} out of range for {self.type_label}")
        return self.from_matrix(self._word_matrix(word))

    def multiply(self, u: WeylElement, v: WeylElement) -> WeylElement:
        return self.from_matrix(u.matrix @ v.matrix)

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.from_matrix(self._word_matrix(reversed(w.word)))

    def inversion_count(self, w: WeylElement) -> int:
        """Number of positive roots sent to negative roots."""
        images = w.matrix @ self._positive_matrix
        return int((images.max(axis=0) <= 0).sum())

    def right_descents(self, w: WeylElement) -> List[int]:
        return [i for i in range(self.rank) if (w.matrix[:, i] < 0).any()]

    def longest_element(self, subset: Optional[Iterable[int]] = None) -> WeylElement:
        nodes = range(self.rank) if subset is None else sorted(subset)
        m = np.identity(self.rank, dtype=np.int64)
        while True:
            ascents = [i for i in nodes if (m[:, i] >= 0).all()]
            if not ascents:
                return self.from_matrix(m)
            m = m @ self._reflections[ascents[0]]

    def frobenius_element(self, w: WeylElement, inverse: bool = False) -> WeylElement:
        perm = self.frobenius_permutation
        if inverse:
            perm = tuple(perm.index(i) for i in range(self.rank))
        return self.element(*(perm[i] for i in w.word))

    def reflection_for_root(self, root: Sequence[int]) -> WeylElement:
        coroot = self.positive_system[tuple(root)]
        beta = np.array(root, dtype=np.int64)
        s = np.identity(self.rank, dtype=np.int64)
        for j in range(self.rank):
            s[:, j] -= sum(self.cartan[j][k] * coroot[k] for k in range(self.rank)) * beta
        return self.from_matrix(s)

    # Characters.

    def reflect_character(self, i: int, chi: Sequence) -> Character:
        c = pairing(chi, self.simple_coroots[i])
        return tuple(Fraction(x) - c * a for x, a in zip(chi, self.simple_roots[i]))

    def act(self, w: WeylElement, chi: Sequence) -> Character:
        result = tuple(Fraction(x) for x in chi)
        for i in reversed(w.word):
            result = self.reflect_character(i, result)
        return result

    def act_on_cocharacter(self, w: WeylElement, nu: Sequence) -> Character:
        result = tuple(Fraction(x) for x in nu)
        for i in reversed(w.word):
            c = pairing(self.simple_roots[i], result)
            result = tuple(x - c * a for x, a in zip(result, self.simple_coroots[i]))
        return result

    def character_matrix(self, w: WeylElement) -> List[List[Fraction]]:
        """Matrix of w on character coordinates, columns are images of basis vectors."""
        n = self.lattice_rank
        columns = [self.act(w, [int(i == j) for j in range(n)]) for i in range(n)]
        return [[columns[j][i] for j in range(n)] for i in range(n)]


def pairing(chi: Sequence, nu: Sequence) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(chi, nu)), Fraction(0))


def _combine(coefficients: Sequence[int], basis: Sequence[Character]) -> Character:
    n = len(basis[0])
    return tuple(sum((c * b[k] for c, b in zip(coefficients, basis)), Fraction(0)) for k in range(n))


def _unit(n: int, i: int, scale=1) -> Character:
    return tuple(Fraction(scale) if k == i else Fraction(0) for k in range(n))


def _diff(n: int, i: int, j: int) -> Character:
    return tuple(Fraction(int(k == i) - int(k == j)) for k in range(n))


def _classical(letter: str, rank: int):
    if letter == "A":
        n = rank + 1
        roots = [_diff(n, i, i + 1) for i in range(rank)]
        return roots, list(roots)
    n = rank
    roots = [_diff(n, i, i + 1) for i in range(rank - 1)]
    coroots = list(roots)
    if letter == "B":
        roots.append(_unit(n, n - 1))
        coroots.append(_unit(n, n - 1, 2))
    elif letter == "C":
        roots.append(_unit(n, n - 1, 2))
        coroots.append(_unit(n, n - 1))
    else:
        last = tuple(Fraction(int(k in (n - 2, n - 1))) for k in range(n))
        roots.append(last)
        coroots.append(last)
    return roots, coroots


def _g2():
    a1 = (Fraction(1), Fraction(-1), Fraction(0))
    a2 = (Fraction(-2), Fraction(1), Fraction(1))
    return [a1, a2], [a1, tuple(x / 3 for x in a2)]


def _f4():
    half = Fraction(1, 2)
    roots = [_diff(4, 1, 2), _diff(4, 2, 3), _unit(4, 3), (half, -half, -half, -half)]
    coroots = [_diff(4, 1, 2), _diff(4, 2, 3), _unit(4, 3, 2), tuple(2 * x for x in roots[3])]
    return roots, coroots


def _e_cartan(rank: int) -> List[List[int]]:
    # Bourbaki: chain 1-3-4-5-...-rank, node 2 attached to node 4.
    edges = [(1, 3), (2, 4), (3, 4)] + [(k, k + 1) for k in range(4, rank)]
    cartan = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for a, b in edges:
        cartan[a - 1][b - 1] = cartan[b - 1][a - 1] = -1
    return cartan


def _e_type(rank: int):
    cartan = _e_cartan(rank)
    roots = [_unit(rank, i) for i in range(rank)]
    coroots = [tuple(Fraction(cartan[i][j]) for i in range(rank)) for j in range(rank)]
    return roots, coroots


def _identity_matrix(n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def root_datum(label: str) -> RootDatum:
    """Parse labels such as ``C2``, ``A1^5`` or ``A2u``."""
    match = _TYPE_RE.match(label.strip())
    if match is None:
        raise UnsupportedCartanType(f"Unsupported Cartan type {label!r}")
    letter, rank = match["letter"], int(match["rank"])
    power, unitary = match["power"], match["unitary"]
    if power is not None:
        if letter != "A" or rank != 1 or unitary:
            raise UnsupportedCartanType(f"Only A1^d products are supported, got {label!r}")
        d = int(power)
        if d < 1:
            raise UnsupportedCartanType(f"A1^d needs d >= 1, got {label!r}")
        roots = [_unit(d, i, 2) for i in range(d)]
        coroots = [_unit(d, i) for i in range(d)]
        shift = tuple(tuple(int(k == (i + 1) % d) for i in range(d)) for k in range(d))
        return RootDatum(label, tuple(roots), tuple(coroots), shift)
    low, high = _RANK_LIMITS[letter]
    if not low <= rank <= high or (letter == "E" and rank not in (6, 7, 8)):
        raise UnsupportedCartanType(f"Unsupported Cartan type {label!r}")
    if unitary:
        if (letter, rank) != ("A", 2):
            raise UnsupportedCartanType(f"Only the unitary form A2u is supported, got {label!r}")
        roots, coroots = _classical("A", 2)
        # e_i -> -e_{2-i}
        twist = tuple(tuple(-int(k == 2 - i) for i in range(3)) for k in range(3))
        return RootDatum(label, tuple(roots), tuple(coroots), twist)
    if letter in "ABCD":
        roots, coroots = _classical(letter, rank)
    elif letter == "G":
        roots, coroots = _g2()
    elif letter == "F":
        roots, coroots = _f4()
    else:
        roots, coroots = _e_type(rank)
    return RootDatum(label, tuple(roots), tuple(coroots), _identity_matrix(len(roots[0])))


def positive_roots(datum: RootDatum) -> List[Tuple[int, ...]]:
    """Positive roots in simple-root coordinates, ordered by height."""
    roots = list(datum.positive_system)
    expected = sum(positive_root_count(letter, rank) for letter, rank in datum.components)
    if len(roots) != expected:
        raise UnsupportedCartanType(
            f"{datum.type_label}: generated {len(roots)} positive roots, expected {expected}")
    return roots


def _check_subset(datum: RootDatum, subset: Iterable[int]) -> FrozenSet[int]:
    subset = frozenset(subset)
    bad = [i for i in subset if not 0 <= i < datum.rank]
    if bad:
        raise ValueError(f"Simple indices {bad} out of range for {datum.type_label}")
    return subset


def min_coset_reps(datum: RootDatum, subset: Iterable[int],
                   limit: Optional[int] = None) -> List[WeylElement]:
    """Minimal length representatives of W_I \\ W, ordered by length.

    v is minimal iff v^{-1}(alpha_i) > 0 for every i in I. The set is grown
    by right multiplication, one length at a time.
    """
    subset = _check_subset(datum, subset)
    reflections = datum._reflections
    identity = np.identity(datum.rank, dtype=np.int64)
    found: Dict[Matrix, WeylElement] = {}
    level = [(identity, identity, ())]
    found[_to_tuple(identity)] = WeylElement(_to_tuple(identity), ())
    while level:
        following = []
        for m, m_inv, word in level:
            for j in range(datum.rank):
                if (m[:, j] < 0).any():
                    continue
                n = m @ reflections[j]
                key = _to_tuple(n)
                if key in found:
                    continue
                n_inv = reflections[j] @ m_inv
                if any((n_inv[:, i] < 0).any() for i in subset):
                    continue
                found[key] = WeylElement(key, word + (j,))
                if limit is not None and len(found) > limit:
                    raise ResourceBoundExceeded(
                        f"More than {limit} coset representatives for {datum.type_label}")
                following.append((n, n_inv, word + (j,)))
        level = following
    return list(found.values())


def weyl_group(datum: RootDatum, limit: Optional[int] = None) -> List[WeylElement]:
    return min_coset_reps(datum, (), limit=limit)


def lower_neighbours(datum: RootDatum, w: WeylElement) -> List[Tuple[Tuple[int, ...], WeylElement]]:
    """Pairs (beta, w s_beta) with beta positive and l(w s_beta) = l(w) - 1."""
    result = []
    for beta in datum.positive_system:
        candidate = datum.multiply(w, datum.reflection_for_root(beta))
        if candidate.length == w.length - 1:
            result.append((beta, candidate))
    return result


@lru_cache(maxsize=None)
def bruhat_le(datum: RootDatum, u: WeylElement, w: WeylElement) -> bool:
    if w.is_identity():
        return u.is_identity()
    s = w.word[-1]
    ws = datum.multiply(w, datum.simple_reflection(s))
    if s in datum.right_descents(u):
        return bruhat_le(datum, datum.multiply(u, datum.simple_reflection(s)), ws)
    return bruhat_le(datum, u, ws)


def levi_components(datum: RootDatum, subset: Iterable[int]) -> List[Tuple[str, int, List[int]]]:
    subset = _check_subset(datum, subset)
    return [_identify(datum.cartan, nodes) + (nodes,) for nodes in _components(datum.cartan, subset)]


def levi_label(datum: RootDatum, subset: Iterable[int]) -> str:
    parts = [f"{letter}{rank}" for letter, rank, _ in levi_components(datum, subset)]
    return "x".join(parts) if parts else "T"


def coset_count(datum: RootDatum, subset: Iterable[int]) -> int:
    """|W| / |W_I| from order formulas."""
    levi = math.prod(weyl_order(letter, rank) for letter, rank, _ in levi_components(datum, subset))
    return datum.order // levi


def complement_half(datum: RootDatum, subset: Iterable[int]) -> int:
    """|Phi \\ Phi_I| / 2 from order formulas."""
    total = sum(positive_root_count(letter, rank) for letter, rank in datum.components)
    levi = sum(positive_root_count(letter, rank) for letter, rank, _ in levi_components(datum, subset))
    return total - levi


def strat_type(datum: RootDatum, subset: Iterable[int], limit: Optional[int] = None) -> List[int]:
    subset = _check_subset(datum, subset)
    reps = min_coset_reps(datum, subset, limit=limit)
    histogram = [0] * (complement_half(datum, subset) + 1)
    for v in reps:
        histogram[v.length] += 1
    return histogram


def is_linear(datum: RootDatum, subset: Iterable[int]) -> bool:
    """|W_I \\ W| = 1 + |Phi \\ Phi_I| / 2."""
    subset = _check_subset(datum, subset)
    return coset_count(datum, subset) == 1 + complement_half(datum, subset)


def linear_by_classification(label: str, removed: int) -> bool:
    """Linear maximal parabolics: (A_n, A_{n-1}), (B_n, B_{n-1}), (C_n, C_{n-1}) and rank two.

    ``removed`` is the 0-based simple root outside the Levi.
    """
    letter, rank = label[0], int(label[1:])
    if rank <= 2 and letter in "ABCG":
        return True
    if letter == "A":
        return removed in (0, rank - 1)
    if letter in "BC":
        return removed == 0
    return False


CLASSIFICATION_TYPES = (
    [f"A{n}" for n in range(1, 9)] + [f"B{n}" for n in range(2, 7)]
    + [f"C{n}" for n in range(2, 7)] + [f"D{n}" for n in range(4, 7)]
    + ["G2", "F4", "E6", "E7", "E8"])


def classification_table(types: Sequence[str] = CLASSIFICATION_TYPES,
                         limit: Optional[int] = None) -> List[dict]:
    """Linearity of every maximal parabolic of every listed type.

    The stratification type is enumerated when the coset count is at most
    ``limit``; otherwise only the order-formula test is reported.
    """
    rows = []
    for label in types:
        datum = root_datum(label)
        for removed in range(datum.rank):
            subset = [i for i in range(datum.rank) if i != removed]
            row = {
                "type": label,
                "removed": removed + 1,
                "levi": levi_label(datum, subset),
                "cosets": coset_count(datum, subset),
                "half_complement": complement_half(datum, subset),
                "linear": is_linear(datum, subset),
                "strat_type": None,
            }
            if limit is None or row["cosets"] <= limit:
                row["strat_type"] = strat_type(datum, subset, limit=limit)
            else:
                logging.info("%s minus alpha_%d: %d cosets, enumeration skipped",
                             label, removed + 1, row["cosets"])
            rows.append(row)
    return rows


def parse_word(text: str) -> Tuple[int, ...]:
    """Words are written with 1-based Bourbaki indices, e.g. ``1,2,1``."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(part) - 1 for part in text.split(","))


def parse_element(datum: RootDatum, text: str) -> WeylElement:
    if text.strip() == "w0":
        return datum.longest_element()
    return datum.element(*parse_word(text))


def parse_subset(datum: RootDatum, text: str) -> FrozenSet[int]:
    """Comma-separated 1-based simple indices."""
    if not text.strip():
        return frozenset()
    return _check_subset(datum, (int(part) - 1 for part in text.split(",")))
