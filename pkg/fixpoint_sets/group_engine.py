"""
Finite permutation groups at desk scale

Groups are given by generators and enumerated breadth first on demand.
Subgroups such as centralizers and set stabilizers are found by filtering
enumerated elements; every enumeration is guarded by a cap and raises
CapExceeded beyond it.
"""

import logging
from collections import deque
from dataclasses import dataclass
from math import factorial
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import multiplicity

from .config import DEFAULT_CAPS
from .errors import CapExceeded, NotPGroup
from .perm_core import IDENTITY, Permutation

logger = logging.getLogger(__name__)

Action = Union[str, Callable[[Hashable, Permutation], Hashable]]


@dataclass(frozen=True)
class OrbitPartition:
    """Orbits of a group on a finite set, each block a frozenset"""
    blocks: Tuple[frozenset, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self.blocks)

    def block_of(self, item: Hashable) -> frozenset:
        for block in self.blocks:
            if item in block:
                return block
        raise KeyError(item)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(sorted(len(b) for b in self.blocks))


class GroupHandle:
    """
    A finite permutation group given by generators

    Elements are enumerated lazily (breadth first from the generators) and
    kept in sort_key order, so every derived construction is reproducible.

    Usage:
        S4 = symmetric_group(range(1, 5))
        len(S4.enumerate())      # 24
    """

    def __init__(
        self,
        generators: Iterable[Permutation],
        domain: Optional[Iterable[int]] = None,
        name: Optional[str] = None,
        order_hint: Optional[int] = None
    ):
        self.generators: Tuple[Permutation, ...] = tuple(sorted({g for g in generators if not g.is_identity}))
        support = frozenset().union(*(g.support for g in self.generators))
        self.domain: frozenset = frozenset(domain) if domain is not None else support
        if not support <= self.domain:
            raise ValueError(f"Generators move points outside the domain {sorted(self.domain)}")
        self.name = name
        self._order = order_hint
        self._elements: Optional[List[Permutation]] = None
        self._element_set: Optional[frozenset] = None
        self._parents: Optional[Dict[Permutation, Tuple[Permutation, int]]] = None
        self._sylow: Dict[int, "GroupHandle"] = {}

    @classmethod
    def from_elements(
        cls,
        elements: Iterable[Permutation],
        domain: Optional[Iterable[int]] = None,
        name: Optional[str] = None
    ) -> "GroupHandle":
        """Wrap a known element set (closed under composition) with a small generating set."""
        element_set = frozenset(elements) | {IDENTITY}
        generators: List[Permutation] = []
        span = {IDENTITY}
        for g in sorted(element_set):
            if g not in span:
                generators.append(g)
                span = set(_closure(generators))
        if span != element_set:
            raise ValueError("Element set is not closed under composition")
        group = cls(generators, domain=domain, name=name, order_hint=len(element_set))
        group._elements = sorted(element_set)
        group._element_set = element_set
        return group

    # ------------------------------------------------------------------
    # Enumeration
    # ------------------------------------------------------------------

    def enumerate(self, cap: Optional[int] = None) -> List[Permutation]:
        """
        Return all elements in sort_key order

        Raises:
            CapExceeded: if the group has more than cap elements
        """
        cap = DEFAULT_CAPS.group_cap if cap is None else cap
        if self._elements is not None:
            if len(self._elements) > cap:
                raise CapExceeded("Group too large to enumerate", cap, len(self._elements), context=str(self))
            return self._elements
        if self._order is not None and self._order > cap:
            raise CapExceeded("Group too large to enumerate", cap, self._order, context=str(self))

        parents = self._bfs(cap)
        self._parents = parents
        self._elements = sorted(parents)
        self._element_set = frozenset(parents)
        self._order = len(self._elements)
        logger.debug(f"Enumerated {self}: {self._order} elements")
        return self._elements

    def _bfs(self, cap: int) -> Dict[Permutation, Tuple[Permutation, int]]:
        parents: Dict[Permutation, Tuple[Permutation, int]] = {IDENTITY: (IDENTITY, -1)}
        queue = deque([IDENTITY])
        while queue:
            h = queue.popleft()
            for i, s in enumerate(self.generators):
                hs = h.compose(s)
                if hs not in parents:
                    parents[hs] = (h, i)
                    if len(parents) > cap:
                        raise CapExceeded("Group too large to enumerate", cap, len(parents), context=str(self))
                    queue.append(hs)
        return parents

    @property
    def elements(self) -> List[Permutation]:
        return self.enumerate()

    def element_set(self, cap: Optional[int] = None) -> frozenset:
        self.enumerate(cap)
        return self._element_set

    def order(self, cap: Optional[int] = None) -> int:
        if self._order is None:
            self.enumerate(cap)
        return self._order

    def contains(self, g: Permutation, cap: Optional[int] = None) -> bool:
        if not g.support <= self.domain:
            return False
        return g in self.element_set(cap)

    __contains__ = contains

    def word(self, g: Permutation, cap: Optional[int] = None) -> List[int]:
        """Generator indices i1, i2, ... with g = gens[i1] * gens[i2] * ..."""
        if self._parents is None:
            self._parents = self._bfs(DEFAULT_CAPS.group_cap if cap is None else cap)
        if g not in self._parents:
            raise ValueError(f"{g} is not an element of {self}")
        word = []
        while not g.is_identity:
            g, i = self._parents[g]
            word.append(i)
        return word[::-1]

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def is_p_group(self, p: int, cap: Optional[int] = None) -> bool:
        n = self.order(cap)
        return n == p ** multiplicity(p, n)

    def cached_sylow(self, p: int) -> Optional["GroupHandle"]:
        return self._sylow.get(p)

    def set_sylow(self, p: int, P: "GroupHandle") -> None:
        """Record a known Sylow p-subgroup (used by constructions that build one directly)."""
        self._sylow[p] = P

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "generators": [str(g) for g in self.generators],
            "domain": sorted(self.domain),
            "order": self._order,
        }

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        label = f"{self.name} " if self.name else ""
        return f"<GroupHandle {label}<{gens}> on {len(self.domain)} points>"

    __str__ = __repr__


def _closure(generators: Sequence[Permutation]) -> List[Permutation]:
    seen = {IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        h = queue.popleft()
        for s in generators:
            hs = h.compose(s)
            if hs not in seen:
                seen.add(hs)
                queue.append(hs)
    return list(seen)


# ----------------------------------------------------------------------
# Standard groups
# ----------------------------------------------------------------------

def symmetric_group(points: Iterable[int]) -> GroupHandle:
    pts = sorted(set(points))
    gens = []
    if len(pts) >= 2:
        gens.append(Permutation.from_cycles([pts[:2]]))
        gens.append(Permutation.from_cycles([pts]))
    return GroupHandle(gens, domain=pts, name=f"Sym({len(pts)})", order_hint=factorial(len(pts)))


def trivial_group(domain: Iterable[int] = ()) -> GroupHandle:
    return GroupHandle([], domain=domain, name="1", order_hint=1)


def subgroup(generators: Iterable[Permutation], domain: Optional[Iterable[int]] = None,
             name: Optional[str] = None) -> GroupHandle:
    return GroupHandle(generators, domain=domain, name=name)


def element_centralizer(x: Permutation, domain: Optional[Iterable[int]] = None) -> GroupHandle:
    """
    C_{Sym(domain)}(x) from explicit generators

    For each cycle length l with m cycles the centralizer contains the wreath
    product Z_l wr Sym(m); points of the domain fixed by x contribute a full
    symmetric group.
    """
    domain = frozenset(domain) if domain is not None else x.support
    by_length: Dict[int, List[Tuple[int, ...]]] = {}
    for c in x.cycles():
        by_length.setdefault(len(c), []).append(c)

    gens: List[Permutation] = []
    order = 1
    for length, cyc in sorted(by_length.items()):
        m = len(cyc)
        order *= length ** m * factorial(m)
        gens.append(Permutation.from_cycles([cyc[0]]))
        if m >= 2:
            gens.append(Permutation.from_cycles(list(zip(cyc[0], cyc[1]))))
        if m >= 3:
            gens.append(Permutation({cyc[i][k]: cyc[(i + 1) % m][k] for i in range(m) for k in range(length)}))
    fixed = sorted(domain - x.support)
    order *= factorial(len(fixed))
    if len(fixed) >= 2:
        gens.extend(symmetric_group(fixed).generators)
    return GroupHandle(gens, domain=domain, name=f"C({x})", order_hint=order)


def sym_centralizer(H: GroupHandle, domain: Optional[Iterable[int]] = None,
                    cap: Optional[int] = None) -> GroupHandle:
    """
    C_{Sym(domain)}(H) built from the orbit structure of H

    Only H is enumerated. On an orbit with base point w and stabilizer K,
    every point b with stabilizer K gives the centralizing map h(w) -> h(b);
    orbits with equal stabilizers at matched base points are permuted by
    the maps h(w_i) -> h(w_j). The order is the product over stabilizer
    classes of |N_H(K)/K|^m * m!.
    """
    domain = frozenset(domain) if domain is not None else H.domain
    if not frozenset().union(*(g.support for g in H.generators)) <= domain:
        raise ValueError(f"{H} moves points outside {sorted(domain)}")
    elements = H.enumerate(cap)
    stabilizer = {a: frozenset(g for g in elements if g(a) == a) for a in domain}
    blocks = orbits(GroupHandle(H.generators, domain=domain), domain)

    # stabilizer class -> [(base point, transversal from the base point)]
    classes: Dict[frozenset, List[Tuple[int, Dict[int, Permutation]]]] = {}
    for block in blocks:
        w0 = min(block)
        K = stabilizer[w0]
        if K not in classes:
            # another point of this orbit may carry a stabilizer already seen
            hit = next((b for b in sorted(block) if stabilizer[b] in classes), None)
            if hit is not None:
                w0, K = hit, stabilizer[hit]
        transversal: Dict[int, Permutation] = {}
        for g in elements:
            transversal.setdefault(g(w0), g)
        classes.setdefault(K, []).append((w0, transversal))

    gens: List[Permutation] = []
    order = 1
    for K, members in classes.items():
        w, transversal = members[0]
        twins = [b for b in sorted(transversal) if stabilizer[b] == K]
        for b in twins:
            if b != w:
                gens.append(Permutation({a: t(b) for a, t in transversal.items()}))
        m = len(members)
        order *= len(twins) ** m * factorial(m)
        if m >= 2:
            w1, t1 = members[1]
            swap = {a: t(w1) for a, t in transversal.items()}
            swap.update({a: t(w) for a, t in t1.items()})
            gens.append(Permutation(swap))
        if m >= 3:
            cycle = {}
            for i, (wi, ti) in enumerate(members):
                w_next = members[(i + 1) % m][0]
                cycle.update({a: t(w_next) for a, t in ti.items()})
            gens.append(Permutation(cycle))
    return GroupHandle(gens, domain=domain, name=f"C({H.name or 'H'})", order_hint=order)


def conjugator(x: Permutation, y: Permutation) -> Permutation:
    """
    An element g with x^g = y

    Raises:
        ValueError: if x and y have different cycle types
    """
    if x.cycle_type() != y.cycle_type():
        raise ValueError(f"{x} and {y} are not conjugate")
    xs = sorted(x.cycles(), key=len)
    ys = sorted(y.cycles(), key=len)
    mapping: Dict[int, int] = {}
    for cx, cy in zip(xs, ys):
        mapping.update(zip(cx, cy))
    spare_sources = sorted(y.support - x.support)
    spare_targets = sorted(x.support - y.support)
    mapping.update(zip(spare_sources, spare_targets))
    return Permutation(mapping)


def sylow_sym(n: int, p: int, offset: int = 0) -> GroupHandle:
    """
    Sylow p-subgroup of Sym({offset+1 .. offset+n}) as a tower of wreath products

    Each base-p digit a_k of n contributes a_k blocks of p^k consecutive points,
    each carrying C_p wr ... wr C_p (k factors).
    """
    if n < 1:
        raise ValueError("n must be positive")
    digits = []
    rest = n
    while rest:
        digits.append(rest % p)
        rest //= p

    gens: List[Permutation] = []
    start = offset
    for k in range(len(digits) - 1, -1, -1):
        for _ in range(digits[k]):
            gens.extend(_wreath_tower(k, p, start))
            start += p ** k
    order = p ** multiplicity(p, factorial(n))
    return GroupHandle(gens, domain=range(offset + 1, offset + n + 1),
                       name=f"Syl_{p}(Sym({n}))", order_hint=order)


def _wreath_tower(k: int, p: int, start: int) -> List[Permutation]:
    if k == 0:
        return []
    gens = _wreath_tower(k - 1, p, start)
    size, block = p ** k, p ** (k - 1)
    gens.append(Permutation({start + j: start + (j - 1 + block) % size + 1 for j in range(1, size + 1)}))
    return gens


def direct_product(G1: GroupHandle, G2: GroupHandle) -> Tuple[GroupHandle, Dict[int, int]]:
    """G1 x G2 with G2 moved above G1's domain; returns the group and G2's relabeling."""
    offset = max(G1.domain, default=0)
    relabel = {pt: pt + offset for pt in G2.domain}
    gens = list(G1.generators) + [g.relabel(relabel) for g in G2.generators]
    order = None
    if G1._order is not None and G2._order is not None:
        order = G1._order * G2._order
    return GroupHandle(gens, domain=G1.domain | frozenset(relabel.values()),
                       name=f"{G1.name or 'G1'}x{G2.name or 'G2'}", order_hint=order), relabel


def wreath_product(G: GroupHandle, u: int, p: Optional[int] = None,
                   cap: Optional[int] = None) -> Tuple[GroupHandle, List[int]]:
    """
    G wr Sym(u) in its imprimitive action on u copies of G's domain

    Point d of copy i (1-based) becomes (i-1)*m + rank(d), m = |domain|.
    When p is given a Sylow p-subgroup Syl_p(G) wr Syl_p(Sym(u)) is attached.

    Returns:
        (wreath group, sorted points of G's domain)
    """
    points = sorted(G.domain)
    m = len(points)
    rank = {pt: i for i, pt in enumerate(points, start=1)}

    def on_copy(g: Permutation, i: int) -> Permutation:
        return Permutation._from_map({(i - 1) * m + rank[a]: (i - 1) * m + rank[b] for a, b in g.moved.items()})

    def top(sigma: Permutation) -> Permutation:
        return Permutation._from_map({(i - 1) * m + j: (sigma(i) - 1) * m + j
                                      for i in sigma.support for j in range(1, m + 1)})

    gens = [on_copy(g, 1) for g in G.generators]
    gens += [top(s) for s in symmetric_group(range(1, u + 1)).generators]
    order = G.order(cap) ** u * factorial(u)
    W = GroupHandle(gens, domain=range(1, m * u + 1), name=f"{G.name or 'G'} wr Sym({u})", order_hint=order)

    if p is not None:
        P = sylow_p(G, p, cap)
        sylow_gens = [on_copy(g, i) for g in P.generators for i in range(1, u + 1)]
        sylow_gens += [top(s) for s in sylow_sym(u, p).generators]
        sylow_order = P.order(cap) ** u * p ** multiplicity(p, factorial(u))
        W.set_sylow(p, GroupHandle(sylow_gens, domain=W.domain, name=f"Syl_{p}({W.name})",
                                   order_hint=sylow_order))
    return W, points


# ----------------------------------------------------------------------
# Orbits
# ----------------------------------------------------------------------

def _act(action: Action) -> Callable[[Hashable, Permutation], Hashable]:
    if action == "point":
        return lambda x, g: g(x)
    if action == "conjugation":
        return lambda x, g: x.conjugate(g)
    if callable(action):
        return action
    raise ValueError(f"Unknown action {action!r}")


def orbits(G: GroupHandle, X: Optional[Iterable[Hashable]] = None, action: Action = "point") -> OrbitPartition:
    """Orbit partition of X (default: G's domain) under the generators."""
    act = _act(action)
    remaining = set(G.domain if X is None else X)
    blocks = []
    for start in sorted(remaining, key=_sort_key):
        if start not in remaining:
            continue
        block = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for g in G.generators:
                y = act(x, g)
                if y not in block:
                    block.add(y)
                    queue.append(y)
        remaining -= block
        blocks.append(frozenset(block))
    return OrbitPartition(tuple(blocks))


def _sort_key(item: Hashable):
    return item.sort_key if isinstance(item, Permutation) else item


# ----------------------------------------------------------------------
# Subgroups by filtering
# ----------------------------------------------------------------------

def centralizer(G: GroupHandle, S: Iterable[Permutation], cap: Optional[int] = None) -> GroupHandle:
    """{g in G : s^g = s for every s in S}"""
    S = list(S)
    kept = [g for g in G.enumerate(cap) if all(s.conjugate(g) == s for s in S)]
    return GroupHandle.from_elements(kept, domain=G.domain, name="C")


def set_stabilizer(G: GroupHandle, X: Iterable[Permutation], cap: Optional[int] = None) -> GroupHandle:
    """{g in G : X^g = X}"""
    X = frozenset(X)
    kept = [g for g in G.enumerate(cap) if all(x.conjugate(g) in X for x in X)]
    return GroupHandle.from_elements(kept, domain=G.domain, name="N")


def normalizes(g: Permutation, H: GroupHandle, cap: Optional[int] = None) -> bool:
    elements = H.element_set(cap)
    return all(h.conjugate(g) in elements for h in H.generators)


def normalizer(G: GroupHandle, H: GroupHandle, cap: Optional[int] = None) -> GroupHandle:
    kept = [g for g in G.enumerate(cap) if normalizes(g, H, cap)]
    return GroupHandle.from_elements(kept, domain=G.domain, name="N")


# ----------------------------------------------------------------------
# Sylow subgroups
# ----------------------------------------------------------------------

def p_part(n: int, p: int) -> int:
    return p ** multiplicity(p, n)


def p_element_part(g: Permutation, p: int) -> Permutation:
    """The p-part of g: g^m where m is the p'-part of the order of g."""
    n = g.order()
    return g ** (n // p_part(n, p))


def sylow_p(G: GroupHandle, p: int, cap: Optional[int] = None) -> GroupHandle:
    """
    A Sylow p-subgroup of G

    Starts from the trivial subgroup and repeatedly adjoins the p-part of the
    first element of N_G(P0) whose p-part lies outside P0. Results are cached
    on the handle.
    """
    cached = G.cached_sylow(p)
    if cached is not None:
        return cached

    target = p_part(G.order(cap), p)
    elements = G.enumerate(cap)
    gens: List[Permutation] = []
    current = {IDENTITY}
    while len(current) < target:
        for g in elements:
            if g in current or not all(h.conjugate(g) in current for h in gens):
                continue
            h = p_element_part(g, p)
            if h not in current:
                gens.append(h)
                current = set(_closure(gens))
                break
        else:
            raise RuntimeError(f"No p-element extends a subgroup of order {len(current)} in {G}")
    P = GroupHandle.from_elements(current, domain=G.domain, name=f"Syl_{p}")
    logger.debug(f"Sylow {p}-subgroup of order {len(current)} in {G}")
    G.set_sylow(p, P)
    return P


# ----------------------------------------------------------------------
# Subgroup lattices of small p-groups
# ----------------------------------------------------------------------

def _orbit_invariant(elements: frozenset) -> Tuple:
    cycle_types = tuple(sorted(g.cycle_type() for g in elements))
    return (len(elements), cycle_types)


def conjugating_element(H: frozenset, K: frozenset, ambient: GroupHandle,
                        cap: Optional[int] = None) -> Optional[Permutation]:
    """Some g in ambient with H^g = K, or None."""
    if len(H) != len(K):
        return None
    gens = GroupHandle.from_elements(H).generators
    for g in ambient.enumerate(cap):
        if all(h.conjugate(g) in K for h in gens):
            return g
    return None


def is_conjugate_subgroup(H: GroupHandle, K: GroupHandle, ambient: GroupHandle,
                          cap: Optional[int] = None) -> bool:
    return conjugating_element(H.element_set(cap), K.element_set(cap), ambient, cap) is not None


def subgroups_up_to_conjugacy(P: GroupHandle, ambient: GroupHandle, p: int,
                              cap: Optional[int] = None,
                              group_cap: Optional[int] = None) -> List[GroupHandle]:
    """
    One representative per ambient-conjugacy class of subgroups of the p-group P

    Every subgroup K > 1 of a p-group has a normal subgroup H of index p, so
    K = <H, g> for some g normalizing H with g^p in H. The lattice is built
    layer by layer from the trivial subgroup, then filtered by conjugacy in
    the ambient group.

    Raises:
        CapExceeded: if |P| > cap
        NotPGroup: if |P| is not a power of p
    """
    cap = DEFAULT_CAPS.subgroup_cap if cap is None else cap
    elements = P.enumerate(cap)
    if not P.is_p_group(p):
        raise NotPGroup(f"Order {len(elements)} is not a power of {p}", context=str(P))

    trivial = frozenset({IDENTITY})
    found = {trivial}
    layer = [trivial]
    while layer:
        nxt = []
        for H in layer:
            covered = set(H)
            for g in elements:
                if g in covered:
                    continue
                covered.update(h.compose(g) for h in H)
                if not all(h.conjugate(g) in H for h in H) or g ** p not in H:
                    continue
                K = frozenset(h.compose(g ** i) for h in H for i in range(p))
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        layer = nxt
    logger.debug(f"{len(found)} subgroups in {P}")

    buckets: Dict[Tuple, List[frozenset]] = {}
    for K in sorted(found, key=lambda s: (len(s), sorted(g.sort_key for g in s))):
        bucket = buckets.setdefault(_orbit_invariant(K), [])
        if not any(conjugating_element(K, R, ambient, group_cap) is not None for R in bucket):
            bucket.append(K)

    reps = [R for bucket in buckets.values() for R in bucket]
    reps.sort(key=lambda s: (len(s), sorted(g.sort_key for g in s)))
    return [GroupHandle.from_elements(R, domain=P.domain, name=f"Q{i}") for i, R in enumerate(reps)]


# ----------------------------------------------------------------------
# Permutation isomorphism
# ----------------------------------------------------------------------

def permutation_isomorphism(G: GroupHandle, H: GroupHandle,
                            cap: Optional[int] = None) -> Optional[Dict[int, int]]:
    """
    A bijection f from G's domain onto H's domain with f^-1 G f = H, or None

    Points of G's domain are assigned in order; for every generator g the
    elements of H agreeing with the partial conjugate a^f -> (a^g)^f are
    tracked, and a branch dies as soon as one of those lists is empty.
    """
    if len(G.domain) != len(H.domain) or G.order(cap) != H.order(cap):
        return None
    source = sorted(G.domain)
    targets = sorted(H.domain)
    size_g = {a: len(block) for block in orbits(G) for a in block}
    size_h = {b: len(block) for block in orbits(H) for b in block}
    h_elements = H.enumerate(cap)
    f: Dict[int, int] = {}

    def consistent(candidates: List[Permutation], g: Permutation, a: int) -> List[Permutation]:
        # pairs (a, g(a)) and (g^-1(a), a) that just became fully assigned
        pairs = []
        if g(a) in f:
            pairs.append((f[a], f[g(a)]))
        pre = g.inverse()(a)
        if pre in f and pre != a:
            pairs.append((f[pre], f[a]))
        return [h for h in candidates if all(h(x) == y for x, y in pairs)]

    def search(i: int, candidates: List[List[Permutation]]) -> bool:
        if i == len(source):
            return True
        a = source[i]
        used = set(f.values())
        for b in targets:
            if b in used or size_h[b] != size_g[a]:
                continue
            f[a] = b
            narrowed = [consistent(c, g, a) for c, g in zip(candidates, G.generators)]
            if all(narrowed) and search(i + 1, narrowed):
                return True
            del f[a]
        return False

    if search(0, [list(h_elements) for _ in G.generators]):
        return dict(f)
    return None
