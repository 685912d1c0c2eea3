"""
Finitary permutations

Permutations act on the right and compose left to right: compose(a, b)
applies a first, then b, so that x^(gh) = (x^g)^h with x^g = g^-1 x g.
Only moved points are stored; points are positive integers.
"""

import re
from functools import reduce
from math import lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .errors import ParseError

CycleType = Tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """
    Immutable finitary permutation of the positive integers

    Two permutations are equal iff they move the same points the same way.
    The canonical text lists disjoint cycles, each starting at its least
    point, sorted by least point; the identity prints as ().

    Usage:
        x = Permutation.parse("(1 2)(3 4)")
        y = x.conjugate(Permutation.parse("(2 3)"))   # (1 3)(2 4)
    """

    __slots__ = ("_map", "_key", "_hash")

    def __init__(self, mapping: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        items = dict(mapping or {})
        moved = {}
        for point, image in items.items():
            if not isinstance(point, int) or not isinstance(image, int) or point < 1 or image < 1:
                raise ValueError(f"Points must be positive integers, got {point}->{image}")
            if point != image:
                moved[point] = image
        if set(moved) != set(moved.values()):
            raise ValueError("Mapping is not a bijection on its moved points")
        self._set_map(moved)

    def _set_map(self, moved: Dict[int, int]) -> None:
        self._map = moved
        self._key = tuple(sorted(moved.items()))
        self._hash = hash(self._key)

    @classmethod
    def _from_map(cls, moved: Dict[int, int]) -> "Permutation":
        # Trusted constructor: moved is already a fixed-point-free bijection
        obj = cls.__new__(cls)
        obj._set_map(moved)
        return obj

    @classmethod
    def identity(cls) -> "Permutation":
        return cls._from_map({})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build a permutation from disjoint cycles."""
        moved: Dict[int, int] = {}
        seen = set()
        for cycle in cycles:
            cycle = list(cycle)
            if seen.intersection(cycle) or len(set(cycle)) != len(cycle):
                raise ValueError(f"Cycles are not disjoint: {cycle}")
            seen.update(cycle)
            if len(cycle) < 2:
                continue
            for i, point in enumerate(cycle):
                moved[point] = cycle[(i + 1) % len(cycle)]
        return cls(moved)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return parse_permutation(text)

    def __reduce__(self):
        return (Permutation._from_map, (dict(self._map),))

    # ------------------------------------------------------------------
    # Basic queries
    # ------------------------------------------------------------------

    @property
    def moved(self) -> Dict[int, int]:
        return dict(self._map)

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    @property
    def is_identity(self) -> bool:
        return not self._map

    @property
    def sort_key(self) -> Tuple[Tuple[int, int], ...]:
        return self._key

    def __call__(self, point: int) -> int:
        return self._map.get(point, point)

    image = __call__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return f"Permutation('{self}')"

    def __str__(self) -> str:
        return format_permutation(self)

    # ------------------------------------------------------------------
    # Group operations
    # ------------------------------------------------------------------

    def compose(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        a, b = self._map, other._map
        if not a:
            return other
        if not b:
            return self
        moved = {}
        for point in a.keys() | b.keys():
            image = a.get(point, point)
            image = b.get(image, image)
            if image != point:
                moved[point] = image
        return Permutation._from_map(moved)

    __mul__ = compose

    def inverse(self) -> "Permutation":
        return Permutation._from_map({v: k for k, v in self._map.items()})

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity()
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return self^g = g^-1 * self * g; the cycle (i j ..) becomes (i^g j^g ..)."""
        if not g._map:
            return self
        gm = g._map
        return Permutation._from_map({gm.get(a, a): gm.get(b, b) for a, b in self._map.items()})

    def commutes_with(self, other: "Permutation") -> bool:
        return self.conjugate(other) == self

    def relabel(self, mapping: Mapping[int, int]) -> "Permutation":
        """Transport along a bijection defined on (at least) the support."""
        return Permutation._from_map({mapping[a]: mapping[b] for a, b in self._map.items()})

    def restrict(self, points: Iterable[int]) -> "Permutation":
        """Restriction to a union of cycles."""
        points = set(points)
        moved = {a: b for a, b in self._map.items() if a in points}
        if set(moved.values()) != set(moved):
            raise ValueError("Restriction points are not a union of cycles")
        return Permutation._from_map(moved)

    # ------------------------------------------------------------------
    # Cycle structure
    # ------------------------------------------------------------------

    def cycles(self) -> List[Tuple[int, ...]]:
        result = []
        seen = set()
        for start in sorted(self._map):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self._map[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self._map[point]
            result.append(tuple(cycle))
        return result

    def cycle_type(self) -> CycleType:
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        return reduce(lcm, (len(c) for c in self.cycles()), 1)


# ----------------------------------------------------------------------
# Functional interface
# ----------------------------------------------------------------------

IDENTITY = Permutation.identity()


def compose(a: Permutation, b: Permutation) -> Permutation:
    return a.compose(b)


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def conjugate(x: Permutation, g: Permutation) -> Permutation:
    return x.conjugate(g)


def support(x: Permutation) -> frozenset:
    return x.support


def cycles(x: Permutation) -> List[Tuple[int, ...]]:
    return x.cycles()


def cycle_type(x: Permutation) -> CycleType:
    return x.cycle_type()


def order(x: Permutation) -> int:
    return x.order()


def is_q_regular(x: Permutation, q: int, domain: Iterable[int]) -> bool:
    """True iff every cycle of x has length q and x moves exactly the domain."""
    if x.support != frozenset(domain):
        return False
    return all(len(c) == q for c in x.cycles())


def product(perms: Iterable[Permutation]) -> Permutation:
    return reduce(compose, perms, IDENTITY)


def format_permutation(x: Permutation) -> str:
    cyc = x.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cyc)


def parse_permutation(text: str) -> Permutation:
    """
    Parse cycle notation such as "(1 2)(3 4)"; "()" is the identity

    Raises:
        ParseError: if the text is not a product of disjoint cycles
    """
    stripped = re.sub(r"\s+", "", text)
    if not stripped:
        raise ParseError("Empty permutation text", context=text)
    if _CYCLE_RE.sub("", text).strip():
        raise ParseError("Unexpected characters outside cycles", context=text)

    parsed: List[List[int]] = []
    for body in _CYCLE_RE.findall(text):
        tokens = body.split()
        if not tokens:
            continue
        try:
            points = [int(t) for t in tokens]
        except ValueError as e:
            raise ParseError(f"Non-integer point in cycle ({body})", context=text, original_error=e)
        if any(p < 1 for p in points):
            raise ParseError("Points must be positive integers", context=text)
        parsed.append(points)

    try:
        return Permutation.from_cycles(parsed)
    except ValueError as e:
        raise ParseError(str(e), context=text, original_error=e)


def iter_points(perms: Iterable[Permutation]) -> Iterator[int]:
    for x in perms:
        yield from x.support


def max_point(perms: Iterable[Permutation], default: int = 0) -> int:
    return max(iter_points(perms), default=default)


def shift_map(points: Iterable[int], offset: int) -> Dict[int, int]:
    """Order-preserving map of points onto offset+1, offset+2, ..."""
    return {p: offset + i for i, p in enumerate(sorted(points), start=1)}


def standard_relabeling(points: Iterable[int]) -> Dict[int, int]:
    return shift_map(points, 0)
