"""
Sets of permutations and their product algebra

PermSet is a finite set of permutations other than {()}; SqSet adds the
requirement that every element is a fixed-point-free product of q-cycles on
the common support. star places its right operand on fresh points above
the left operand's support; delta takes the diagonal of repeated copies.
"""

import itertools
import logging
import re
from functools import reduce
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, InvalidSet, ParseError
from .group_engine import GroupHandle, orbits
from .perm_core import IDENTITY, Permutation, is_q_regular, parse_permutation, shift_map

logger = logging.getLogger(__name__)

_SET_RE = re.compile(r"^\s*\{(.*)\}\s*$", re.DOTALL)


class PermSet:
    """
    A finite set of finitary permutations

    Usage:
        X = PermSet.parse("{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }")
        len(X), X.degree          # 3, 4
    """

    def __init__(self, elements: Iterable[Permutation], _allow_unit: bool = False):
        self.elements: FrozenSet[Permutation] = frozenset(elements)
        if not self.elements:
            raise InvalidSet("A permutation set must be nonempty")
        if self.elements == {IDENTITY} and not _allow_unit:
            raise InvalidSet("{()} is only allowed as the unit of star")
        self.support: FrozenSet[int] = frozenset().union(*(x.support for x in self.elements))
        self._sorted = tuple(sorted(self.elements))

    @classmethod
    def unit(cls) -> "PermSet":
        """The set {()}, neutral for star."""
        return PermSet([IDENTITY], _allow_unit=True)

    @classmethod
    def parse(cls, text: str) -> "PermSet":
        return cls(_parse_elements(text))

    @property
    def is_unit(self) -> bool:
        return self.elements == {IDENTITY}

    @property
    def degree(self) -> int:
        return len(self.support)

    @property
    def key(self) -> Tuple:
        return (self.degree, tuple(x.sort_key for x in self._sorted))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self._sorted)

    def __contains__(self, x: Permutation) -> bool:
        return x in self.elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermSet):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __le__(self, other: "PermSet") -> bool:
        return self.elements <= other.elements

    def __str__(self) -> str:
        return "{ " + ", ".join(str(x) for x in self._sorted) + " }"

    def __repr__(self) -> str:
        return f"{type(self).__name__}('{self}')"

    def _rebuild(self, elements: Iterable[Permutation]) -> "PermSet":
        return PermSet(elements, _allow_unit=True)

    def conjugate(self, g: Permutation) -> "PermSet":
        return self._rebuild(x.conjugate(g) for x in self.elements)

    def relabel(self, mapping: Dict[int, int]) -> "PermSet":
        return self._rebuild(x.relabel(mapping) for x in self.elements)

    def generated_group(self) -> GroupHandle:
        return GroupHandle(self.elements, domain=self.support, name=f"<{self}>")

    def to_dict(self) -> Dict:
        return {"elements": [str(x) for x in self._sorted], "degree": self.degree, "size": len(self)}


class SqSet(PermSet):
    """
    A set of fixed-point-free products of q-cycles with a common support

    Raises:
        InvalidSet: if some element is not a product of q-cycles moving
            exactly the common support
    """

    def __init__(self, elements: Iterable[Permutation], q: int):
        super().__init__(elements)
        if q < 2:
            raise InvalidSet(f"q must be at least 2, got {q}")
        self.q = q
        for x in self.elements:
            if not is_q_regular(x, q, self.support):
                raise InvalidSet(f"{x} is not a fixed-point-free product of {q}-cycles on {sorted(self.support)}")

    @classmethod
    def parse(cls, text: str, q: Optional[int] = None) -> "SqSet":
        """Parse a set; q defaults to the length of the first cycle."""
        elements = _parse_elements(text)
        if q is None:
            q = len(elements[0].cycles()[0]) if elements and not elements[0].is_identity else 0
        return cls(elements, q)

    @classmethod
    def from_permset(cls, X: PermSet, q: int) -> "SqSet":
        return X if isinstance(X, SqSet) and X.q == q else cls(X.elements, q)

    @property
    def rank(self) -> int:
        """Number of q-cycles in each element."""
        return self.degree // self.q

    def _rebuild(self, elements: Iterable[Permutation]) -> PermSet:
        return SqSet(elements, self.q)

    def to_dict(self) -> Dict:
        result = super().to_dict()
        result["q"] = self.q
        return result


def _parse_elements(text: str) -> List[Permutation]:
    match = _SET_RE.match(text)
    if not match:
        raise ParseError("A set must be written as { perm, perm, ... }", context=text)
    body = match.group(1)
    parts, depth, current = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    parts = [p for p in parts if p.strip()]
    if not parts:
        raise ParseError("Empty set", context=text)
    return [parse_permutation(p) for p in parts]


def parse_set(text: str, q: Optional[int] = None) -> PermSet:
    """Parse as an SqSet when possible, else as a plain PermSet."""
    elements = _parse_elements(text)
    try:
        if q is None:
            return SqSet.parse(text)
        return SqSet(elements, q)
    except InvalidSet:
        if q is not None:
            raise
        return PermSet(elements)


def _wrap(elements: Iterable[Permutation], *sources: PermSet) -> PermSet:
    qs = {X.q if isinstance(X, SqSet) else None for X in sources if not X.is_unit}
    if len(qs) == 1 and None not in qs:
        return SqSet(elements, qs.pop())
    return PermSet(elements, _allow_unit=True)


def fixed_point_free_class(q: int, points: Iterable[int]) -> List[Permutation]:
    """All fixed-point-free products of q-cycles moving exactly the given points."""
    pts = sorted(points)
    if len(pts) % q:
        return []
    result: List[Permutation] = []

    def build(remaining: Tuple[int, ...], cycles: List[Tuple[int, ...]]):
        if not remaining:
            result.append(Permutation.from_cycles(cycles))
            return
        first, rest = remaining[0], remaining[1:]
        for others in itertools.permutations(rest, q - 1):
            left = tuple(p for p in rest if p not in others)
            build(left, cycles + [(first,) + others])

    build(tuple(pts), [])
    return sorted(result)


# ----------------------------------------------------------------------
# Products
# ----------------------------------------------------------------------

def shift(X: PermSet, offset: int) -> PermSet:
    """Order-preserving relabeling of supp(X) onto offset+1, offset+2, ..."""
    return X.relabel(shift_map(X.support, offset))


def star(X: PermSet, Y: PermSet) -> PermSet:
    """X * Y: Y moved onto fresh points above supp(X), then all products x y."""
    if X.is_unit:
        return Y
    if Y.is_unit:
        return X
    moved = shift(Y, max(X.support))
    return _wrap((x.compose(y) for x in X for y in moved), X, Y)


def star_power(X: PermSet, s: int) -> PermSet:
    if s < 0:
        raise ValueError("Exponent must be non-negative")
    if s == 0:
        return PermSet.unit()
    return reduce(star, [X] * s)


def delta(X: PermSet, s: int) -> PermSet:
    """The diagonal of X^s: each x is repeated on s consecutive copies of supp(X)."""
    if s < 1:
        raise ValueError("Diagonal exponent must be positive")
    if X.is_unit or s == 1:
        return X
    top, d = max(X.support), X.degree
    maps = [shift_map(X.support, top + i * d) for i in range(s - 1)]
    return _wrap((reduce(Permutation.compose, [x] + [x.relabel(m) for m in maps]) for x in X), X)


def project(X: PermSet, points: Iterable[int]) -> PermSet:
    """Restriction of every element to a union of <X>-orbits."""
    points = frozenset(points)
    return _wrap((x.restrict(points & x.support) for x in X), X)


# ----------------------------------------------------------------------
# Canonical forms and equivalence
# ----------------------------------------------------------------------

def _check_support(X: PermSet, caps: Caps) -> None:
    if X.degree > caps.support_cap:
        raise CapExceeded("Support too large", caps.support_cap, X.degree, context=str(X))


def _code_blocks(elements: Sequence[Dict[int, int]], order: Sequence[int]) -> Tuple:
    """
    Lower bound on the code of any relabeling extending order

    New label j+1 goes to order[j]. Each element contributes the word of
    new labels of the images of order[0], order[1], ...; images not yet
    labeled are at least k+1. The code is the tuple, over prefix lengths,
    of the sorted truncated words.
    """
    k = len(order)
    new = {a: i + 1 for i, a in enumerate(order)}
    words = [tuple(new.get(x.get(a, a), k + 1) for a in order) for x in elements]
    return tuple(tuple(sorted(w[:j] for w in words)) for j in range(1, k + 1))


def canonical_form(X: PermSet, caps: Optional[Caps] = None) -> PermSet:
    """
    The least relabeling of X onto {1..d(X)}

    Branch and bound over the order in which support points receive new
    labels, pruning every prefix whose lower-bound code already exceeds the
    best complete code.

    Raises:
        CapExceeded: if d(X) > caps.support_cap
    """
    caps = caps or DEFAULT_CAPS
    if X.is_unit:
        return X
    _check_support(X, caps)
    points = sorted(X.support)

    if len(X) == 1:
        # One element: consecutive cycles, shorter cycles first
        (x,) = X.elements
        order = [a for c in sorted(x.cycles(), key=len) for a in c]
        order += [a for a in points if a not in set(order)]
        return X.relabel({a: i for i, a in enumerate(order, start=1)})
    if isinstance(X, SqSet) and len(X) == len(fixed_point_free_class(X.q, points)):
        return SqSet(fixed_point_free_class(X.q, range(1, X.degree + 1)), X.q)

    elements = [x.moved for x in X]
    best: Optional[Tuple] = None
    best_order: List[int] = []
    order: List[int] = []

    def search(remaining: List[int]):
        nonlocal best, best_order
        code = _code_blocks(elements, order)
        if best is not None and code > best[:len(order)]:
            return
        if not remaining:
            if best is None or code < best:
                best, best_order = code, list(order)
            return
        for i, a in enumerate(remaining):
            order.append(a)
            search(remaining[:i] + remaining[i + 1:])
            order.pop()

    search(points)
    return X.relabel({a: i for i, a in enumerate(best_order, start=1)})


def equivalence_key(X: PermSet, caps: Optional[Caps] = None) -> Tuple:
    """Sorted canonical forms of the irreducible factors; equal exactly for equivalent sets."""
    q = X.q if isinstance(X, SqSet) else None
    factors = irreducible_factors(X, caps)
    return (q, tuple(sorted(canonical_form(f, caps).key for f in factors)))


def equivalent(X: PermSet, Y: PermSet, caps: Optional[Caps] = None) -> bool:
    """True iff X^s = Y for some relabeling s of the support."""
    if len(X) != len(Y) or X.degree != Y.degree:
        return False
    if sorted(x.cycle_type() for x in X) != sorted(y.cycle_type() for y in Y):
        return False
    return equivalence_key(X, caps)[1] == equivalence_key(Y, caps)[1]


# ----------------------------------------------------------------------
# Factorization
# ----------------------------------------------------------------------

def support_orbits(X: PermSet) -> List[FrozenSet[int]]:
    """Orbits of <X> on supp(X)."""
    return list(orbits(X.generated_group()))


def is_transitive_set(X: PermSet) -> bool:
    return len(support_orbits(X)) == 1


def irreducible_factors(X: PermSet, caps: Optional[Caps] = None) -> List[PermSet]:
    """
    Split X into irreducible factors on unions of <X>-orbits

    A bipartition (alpha, beta) of the orbit blocks splits X when X is the
    set of all products of its projections to alpha and to beta. Factors
    keep their original support points.

    Raises:
        CapExceeded: if d(X) > caps.support_cap
    """
    caps = caps or DEFAULT_CAPS
    if X.is_unit:
        return []
    _check_support(X, caps)
    blocks = sorted(support_orbits(X), key=lambda b: (len(b), min(b)))
    if len(blocks) == 1:
        return [X]

    first, rest = blocks[0], blocks[1:]
    for size in range(0, len(rest)):
        for chosen in itertools.combinations(rest, size):
            alpha = first.union(*chosen)
            beta = X.support - alpha
            A, B = project(X, alpha), project(X, beta)
            if len(A) * len(B) != len(X):
                continue
            if all(a.compose(b) in X.elements for a in A for b in B):
                logger.debug(f"Split {X} along {sorted(alpha)} | {sorted(beta)}")
                return irreducible_factors(A, caps) + irreducible_factors(B, caps)
    return [X]


def is_irreducible(X: PermSet, caps: Optional[Caps] = None) -> bool:
    return not X.is_unit and len(irreducible_factors(X, caps)) == 1


def coprime(X: PermSet, Y: PermSet, caps: Optional[Caps] = None) -> bool:
    """True iff no irreducible factor of X is equivalent to one of Y."""
    keys_x = {canonical_form(f, caps).key for f in irreducible_factors(X, caps)}
    keys_y = {canonical_form(f, caps).key for f in irreducible_factors(Y, caps)}
    return not keys_x & keys_y


def factor_multiplicities(X: PermSet, caps: Optional[Caps] = None) -> List[Tuple[PermSet, int]]:
    """Irreducible factors grouped by equivalence: (canonical factor, exponent) pairs."""
    counts: Dict[Tuple, List] = {}
    for f in irreducible_factors(X, caps):
        c = canonical_form(f, caps)
        counts.setdefault(c.key, [c, 0])[1] += 1
    return [(c, n) for _, (c, n) in sorted(counts.items())]
