"""
Modules over GF(p): permutation modules, endomorphism algebras, decomposition

A ModuleRep is a right kG-module (v -> v @ A_g, so A_gh = A_g @ A_h). A
module may carry a normal p-subgroup `kernel` acting trivially; it is then
treated as a module for G/kernel, and projectivity is judged there.

Decomposition works inside the endomorphism algebra E = End_kG(M): an
idempotent e in E cuts out the summand M e, and random elements of e E e are
split by their Fitting decomposition until every idempotent is primitive.
Primitivity is only ever asserted with a deterministic certificate.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from . import gfp
from .config import DEFAULT_CAPS, Caps
from .errors import ActionNotClosed, CapExceeded, DecompositionInconclusive, NotPGroup
from .gfp import MatGFp
from .group_engine import (GroupHandle, _act, direct_product, orbits, p_part, sylow_p,
                           wreath_product)
from .perm_core import Permutation

logger = logging.getLogger(__name__)

PointAction = Callable[[Hashable, Permutation], Hashable]


def _label_key(label: Hashable):
    if isinstance(label, Permutation):
        return label.sort_key
    if isinstance(label, tuple):
        return tuple(_label_key(x) for x in label)
    return label


@dataclass
class ModuleRep:
    """
    A finite-dimensional kG-module given by generator matrices

    Attributes:
        p: Characteristic of the field GF(p)
        group: The acting group
        action: Generator -> action matrix
        basis_labels: Labels of the basis vectors (elements of X for kX)
        kernel: Normal p-subgroup acting trivially; the module is read as a
            module for group/kernel
        point_action: For permutation modules, label x and element g -> x^g
        name: Display name
    """
    p: int
    group: GroupHandle
    action: Dict[Permutation, MatGFp]
    basis_labels: List[Hashable]
    kernel: Optional[GroupHandle] = None
    point_action: Optional[PointAction] = None
    name: str = ""
    _matrix_cache: Dict[Permutation, MatGFp] = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def is_permutation(self) -> bool:
        return self.point_action is not None

    @property
    def label_index(self) -> Dict[Hashable, int]:
        if "_index" not in self.__dict__:
            self.__dict__["_index"] = {label: i for i, label in enumerate(self.basis_labels)}
        return self.__dict__["_index"]

    def images(self, g: Permutation) -> List[int]:
        """Basis index of label_i^g for each i (permutation modules only)."""
        index = self.label_index
        return [index[self.point_action(label, g)] for label in self.basis_labels]

    def matrix_of(self, g: Permutation) -> MatGFp:
        if g in self.action:
            return self.action[g]
        if g in self._matrix_cache:
            return self._matrix_cache[g]
        if self.is_permutation:
            A = gfp.zeros(self.dim, self.dim)
            A[np.arange(self.dim), self.images(g)] = 1
        else:
            A = gfp.identity(self.dim)
            for i in self.group.word(g):
                A = gfp.matmul(A, self.action[self.group.generators[i]], self.p)
        self._matrix_cache[g] = A
        return A

    def induced_permutation_group(self) -> GroupHandle:
        """The permutation group induced on basis indices 1..dim (permutation modules only)."""
        gens = []
        for g in self.group.generators:
            imgs = self.images(g)
            gens.append(Permutation({i + 1: j + 1 for i, j in enumerate(imgs)}))
        return GroupHandle(gens, domain=range(1, self.dim + 1), name=f"image({self.name or 'M'})")

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "p": self.p,
            "dim": self.dim,
            "group": self.group.to_dict(),
            "permutation": self.is_permutation,
        }


def perm_module(G: GroupHandle, X: Sequence[Hashable], action, p: int,
                kernel: Optional[GroupHandle] = None, name: str = "") -> ModuleRep:
    """
    The permutation module kX

    Args:
        G: Acting group
        X: Finite G-set (labels are sorted into a deterministic order)
        action: "point", "conjugation" or a callable (x, g) -> x^g
        p: Characteristic
        kernel: Optional normal p-subgroup acting trivially

    Raises:
        ActionNotClosed: if some generator maps X outside X
    """
    act = _act(action)
    labels = sorted(set(X), key=_label_key)
    index = {label: i for i, label in enumerate(labels)}
    matrices = {}
    for g in G.generators:
        A = gfp.zeros(len(labels), len(labels))
        for i, label in enumerate(labels):
            image = act(label, g)
            if image not in index:
                raise ActionNotClosed(f"{g} maps {label} outside the set", context=name or "perm_module")
            A[i, index[image]] = 1
        matrices[g] = A
    if kernel is not None:
        for k in kernel.generators:
            if any(act(label, k) != label for label in labels):
                raise ActionNotClosed(f"Kernel element {k} acts nontrivially", context=name or "perm_module")
    return ModuleRep(p=p, group=G, action=matrices, basis_labels=labels,
                     kernel=kernel, point_action=act, name=name)


def natural_module(G: GroupHandle, p: int, name: str = "") -> ModuleRep:
    return perm_module(G, sorted(G.domain), "point", p, name=name or f"k[{len(G.domain)} points]")


def direct_sum(M1: ModuleRep, M2: ModuleRep) -> ModuleRep:
    """M1 + M2 for modules over the same group; labels become (0, x) and (1, y)."""
    if M1.group is not M2.group or M1.p != M2.p:
        raise ValueError("Direct sums need a common group and characteristic")
    labels = [(0, x) for x in M1.basis_labels] + [(1, y) for y in M2.basis_labels]
    action = {}
    for g in M1.group.generators:
        A = gfp.zeros(len(labels), len(labels))
        A[:M1.dim, :M1.dim] = M1.action[g]
        A[M1.dim:, M1.dim:] = M2.action[g]
        action[g] = A
    point_action = None
    if M1.is_permutation and M2.is_permutation:
        acts = (M1.point_action, M2.point_action)
        point_action = lambda x, g: (x[0], acts[x[0]](x[1], g))
    return ModuleRep(p=M1.p, group=M1.group, action=action, basis_labels=labels,
                     kernel=M1.kernel, point_action=point_action, name=f"{M1.name}+{M2.name}")


def tensor_module(M1: ModuleRep, M2: ModuleRep) -> ModuleRep:
    """The outer tensor product M1 (x) M2 as a module for G1 x G2."""
    if M1.p != M2.p:
        raise ValueError("Tensor factors need a common characteristic")
    if M1.kernel is not None or M2.kernel is not None:
        raise ValueError("Tensor products of quotient modules are not supported")
    G, relabel = direct_product(M1.group, M2.group)
    unlabel = {v: k for k, v in relabel.items()}
    I1, I2 = gfp.identity(M1.dim), gfp.identity(M2.dim)
    action = {g: np.kron(M1.action[g], I2) for g in M1.group.generators}
    for h in M2.group.generators:
        action[h.relabel(relabel)] = np.kron(I1, M2.action[h])
    labels = list(itertools.product(M1.basis_labels, M2.basis_labels))

    point_action = None
    if M1.is_permutation and M2.is_permutation:
        left_domain = M1.group.domain

        def point_action(x, w):
            g = Permutation({a: b for a, b in w.moved.items() if a in left_domain})
            h = Permutation({unlabel[a]: unlabel[b] for a, b in w.moved.items() if a not in left_domain})
            return (M1.point_action(x[0], g), M2.point_action(x[1], h))

    return ModuleRep(p=M1.p, group=G, action=action, basis_labels=labels,
                     point_action=point_action, name=f"{M1.name}(x){M2.name}")


def restrict(M: ModuleRep, H: GroupHandle) -> ModuleRep:
    """Res^G_H M for a subgroup H of M.group."""
    action = {h: M.matrix_of(h) for h in H.generators}
    kernel = M.kernel if M.kernel is not None and all(k in H for k in M.kernel.generators) else None
    return ModuleRep(p=M.p, group=H, action=action, basis_labels=list(M.basis_labels),
                     kernel=kernel, point_action=M.point_action, name=f"Res({M.name})")


def wreath_power_module(M: ModuleRep, u: int, caps: Optional[Caps] = None) -> ModuleRep:
    """
    M^(wr u): the module for G wr Sym(u) on u-tuples of basis labels

    Base generators act coordinatewise and the top Sym(u) permutes
    coordinates; restricted to the base group this is M (x) ... (x) M.

    Raises:
        CapExceeded: if dim(M)^u > caps.dim_cap or |G|^u * u! > caps.group_cap
    """
    caps = caps or DEFAULT_CAPS
    if u < 1:
        raise ValueError("u must be positive")
    if u == 1:
        return M
    if M.kernel is not None:
        raise ValueError("Wreath powers of quotient modules are not supported")
    dim = M.dim ** u
    if dim > caps.dim_cap:
        raise CapExceeded("Wreath power module too large", caps.dim_cap, dim, context=f"{M.name}^wr{u}")

    W, points = wreath_product(M.group, u, p=M.p, cap=caps.group_cap)
    if W.order() > caps.group_cap:
        raise CapExceeded("Wreath product too large", caps.group_cap, W.order(), context=W.name)
    m = len(points)
    labels = list(itertools.product(M.basis_labels, repeat=u))
    name = f"{M.name or 'M'}^wr{u}"

    if M.is_permutation:
        base_act = M.point_action

        def point_action(x, w):
            y = [None] * u
            for i in range(u):
                images = [w(i * m + j) for j in range(1, m + 1)]
                target = (images[0] - 1) // m
                g = Permutation({points[j]: points[(img - 1) % m] for j, img in enumerate(images)})
                y[target] = base_act(x[i], g)
            return tuple(y)

        return perm_module(W, labels, point_action, M.p, name=name)

    # General modules: base generators as Kronecker products, top generators permute tensor slots
    n = M.dim
    action = {}
    for w in W.generators:
        slots = {(a - 1) // m for a in w.support}
        if len(slots) == 1 and all((w(a) - 1) // m == (a - 1) // m for a in w.support):
            i = slots.pop()
            g = Permutation({points[(a - 1) % m]: points[(w(a) - 1) % m] for a in w.support})
            factors = [gfp.identity(n)] * u
            factors[i] = M.matrix_of(g)
            A = factors[0]
            for F in factors[1:]:
                A = np.kron(A, F)
            action[w] = A % M.p
        else:
            sigma = {i: (w(i * m + 1) - 1) // m for i in range(u)}
            A = gfp.zeros(dim, dim)
            for idx, t in enumerate(itertools.product(range(n), repeat=u)):
                s = [0] * u
                for i in range(u):
                    s[sigma[i]] = t[i]
                target = 0
                for digit in s:
                    target = target * n + digit
                A[idx, target] = 1
            action[w] = A
    return ModuleRep(p=M.p, group=W, action=action, basis_labels=labels, name=name)


# ----------------------------------------------------------------------
# Norms and projectivity
# ----------------------------------------------------------------------

def _coset_representatives(elements: Sequence[Permutation], kernel: Optional[GroupHandle]) -> List[Permutation]:
    if kernel is None or kernel.is_trivial:
        return list(elements)
    K = kernel.enumerate()
    reps, seen = [], set()
    for g in elements:
        if g in seen:
            continue
        reps.append(g)
        seen.update(g.compose(k) for k in K)
    return reps


def norm_matrix(M: ModuleRep, P: GroupHandle, cap: Optional[int] = None) -> Tuple[MatGFp, int]:
    """
    Matrix of the norm element of P (modulo M.kernel) on M

    Returns:
        (norm matrix, |P : P cap kernel|)

    Raises:
        NotPGroup: if |P| is not a power of p
    """
    if not P.is_p_group(M.p, cap):
        raise NotPGroup(f"|P| = {P.order(cap)} is not a power of {M.p}", context=str(P))
    reps = _coset_representatives(P.enumerate(cap), M.kernel)
    N = gfp.zeros(M.dim, M.dim)
    for g in reps:
        N += M.matrix_of(g)
    return N % M.p, len(reps)


def norm_rank(M: ModuleRep, P: GroupHandle, cap: Optional[int] = None) -> int:
    """Rank of the norm element of P on M: the number of free kP-summands."""
    N, _ = norm_matrix(M, P, cap)
    return gfp.rank(N, M.p)


def is_projective_over_pgroup(M: ModuleRep, P: GroupHandle, cap: Optional[int] = None) -> bool:
    N, index = norm_matrix(M, P, cap)
    return gfp.rank(N, M.p) * index == M.dim


def regular_orbit_projective(G: GroupHandle, X: Sequence[Hashable], action, p: int,
                             cap: Optional[int] = None) -> bool:
    """For a p-group G: kX is projective iff every G-orbit on X is regular."""
    if not G.is_p_group(p, cap):
        raise NotPGroup(f"|G| = {G.order(cap)} is not a power of {p}", context=str(G))
    return all(len(block) == G.order(cap) for block in orbits(G, X, action))


# ----------------------------------------------------------------------
# Endomorphism algebra
# ----------------------------------------------------------------------

def commutant_basis(M: ModuleRep, caps: Optional[Caps] = None) -> List[MatGFp]:
    """
    A basis of End_kG(M)

    Permutation modules use the orbital matrices (G-orbits on X x X); other
    modules solve X A_g = A_g X for every generator.
    """
    caps = caps or DEFAULT_CAPS
    n = M.dim
    if M.is_permutation:
        gen_images = [M.images(g) for g in M.group.generators]
        label = -np.ones((n, n), dtype=np.int64)
        basis = []
        for i in range(n):
            for j in range(n):
                if label[i, j] >= 0:
                    continue
                k = len(basis)
                label[i, j] = k
                queue = deque([(i, j)])
                while queue:
                    a, b = queue.popleft()
                    for img in gen_images:
                        c, d = img[a], img[b]
                        if label[c, d] < 0:
                            label[c, d] = k
                            queue.append((c, d))
                basis.append(None)
        return [(label == k).astype(np.int64) for k in range(len(basis))]

    if n > caps.linear_commutant_cap:
        raise CapExceeded("Commutant linear system too large", caps.linear_commutant_cap, n,
                          context=M.name or "commutant")
    I = gfp.identity(n)
    blocks = [np.kron(I, A.T) - np.kron(A, I) for A in M.action.values()]
    if not blocks:
        return [gfp.identity(n)[[i]].T @ gfp.identity(n)[[j]] for i in range(n) for j in range(n)]
    solutions = gfp.nullspace(np.vstack(blocks) % M.p, M.p)
    return [solutions[:, k].reshape(n, n) for k in range(solutions.shape[1])]


# ----------------------------------------------------------------------
# Decomposition
# ----------------------------------------------------------------------

@dataclass
class Summand:
    """
    One indecomposable summand M e

    Attributes:
        dim: Dimension of the summand
        projective: Whether the summand is projective (for G/kernel)
        idempotent: Primitive idempotent of End(M) whose row space is the summand
        certificate: How indecomposability was established
    """
    dim: int
    projective: bool
    idempotent: MatGFp = field(repr=False)
    certificate: str = ""

    def to_dict(self) -> Dict:
        return {"dim": self.dim, "projective": self.projective}


@dataclass
class DecompReport:
    """Direct-sum decomposition of a module into indecomposables"""
    dim: int
    p: int
    summands: List[Summand] = field(default_factory=list)
    inconclusive: bool = False

    @property
    def np(self) -> int:
        return sum(1 for s in self.summands if s.projective)

    @property
    def signature(self) -> Tuple[Tuple[int, bool], ...]:
        return tuple(sorted((s.dim, s.projective) for s in self.summands))

    def to_dict(self) -> Dict:
        return {
            "dim": self.dim,
            "p": self.p,
            "summands": [s.to_dict() for s in self.summands],
            "np": self.np,
            "inconclusive": self.inconclusive,
        }


def _fitting_split(f: MatGFp, e: MatGFp, p: int) -> Optional[Tuple[MatGFp, MatGFp]]:
    """
    Split the summand M e along the Fitting decomposition of f in e E e

    M = im f^N + ker f^N; the projection onto im f^N is a polynomial in f, so
    it and e minus it are orthogonal idempotents of E below e.
    """
    n = f.shape[0]
    g = gfp.matpow(f, n, p)
    r = gfp.rank(g, p)
    if r == 0 or r == gfp.rank(e, p):
        return None
    T = np.vstack([gfp.row_space(g, p), gfp.left_nullspace(g, p)])
    D = np.diag([1] * r + [0] * (n - r)).astype(np.int64)
    e1 = gfp.matmul(gfp.matmul(gfp.inverse(T, p), D, p), T, p)
    return e1, (e - e1) % p


def _local_basis(e: MatGFp, basis: Sequence[MatGFp], p: int) -> List[MatGFp]:
    n = e.shape[0]
    rows = np.vstack([gfp.matmul(gfp.matmul(e, b, p), e, p).reshape(1, -1) for b in basis])
    return [v.reshape(n, n) for v in gfp.row_space(rows, p)]


def _is_nilpotent(x: MatGFp, p: int) -> bool:
    return gfp.is_zero(gfp.matpow(x, x.shape[0], p))


def _span_rows(mats: Sequence[MatGFp], p: int, n: int) -> MatGFp:
    if not mats:
        return gfp.zeros(0, n * n)
    return gfp.row_space(np.vstack([m.reshape(1, -1) for m in mats]), p)


def _is_nilpotent_subalgebra(span: MatGFp, p: int, n: int) -> bool:
    """True iff the span is closed under products and some power of it vanishes."""
    ideal = [v.reshape(n, n) for v in span]
    power = ideal
    for _ in range(len(ideal) + 1):
        if not power:
            return True
        products = [gfp.matmul(a, b, p) for a in power for b in ideal]
        if any(not gfp.span_contains(span, x.reshape(-1), p) for x in products):
            return False
        power = [v.reshape(n, n) for v in _span_rows(products, p, n)]
    return not power


class _Splitter:
    """Finds a splitting of M e or certifies that e is primitive."""

    def __init__(self, basis: Sequence[MatGFp], p: int, caps: Caps, rng: np.random.Generator):
        self.basis = basis
        self.p = p
        self.caps = caps
        self.rng = rng

    def _try_element(self, x: MatGFp, e: MatGFp):
        for lam in range(self.p):
            split = _fitting_split((x - lam * e) % self.p, e, self.p)
            if split is not None:
                return split
        return None

    def run(self, e: MatGFp) -> Tuple[Optional[Tuple[MatGFp, MatGFp]], str]:
        p = self.p
        n = e.shape[0]
        local = _local_basis(e, self.basis, p)
        if len(local) == 1:
            return None, "one-dimensional endomorphism ring"

        for _ in range(self.caps.split_attempts):
            coeffs = self.rng.integers(0, p, size=len(local))
            f = sum(int(c) * a for c, a in zip(coeffs, local)) % p
            split = _fitting_split(f, e, p)
            if split is not None:
                return split, ""

        # e E e = k e + J with J a nilpotent ideal certifies a local ring
        nil_parts = []
        for a in local:
            for lam in range(p):
                x = (a - lam * e) % p
                if _is_nilpotent(x, p):
                    nil_parts.append(x)
                    break
                split = _fitting_split(x, e, p)
                if split is not None:
                    return split, ""
            else:
                nil_parts = None
                break
        if nil_parts is not None:
            span = _span_rows(nil_parts, p, n)
            if _is_nilpotent_subalgebra(span, p, n):
                return None, "scalars plus nilpotent ideal"
            for a, b in itertools.product(nil_parts, repeat=2):
                for x in (gfp.matmul(a, b, p), (a + b) % p):
                    split = self._try_element(x, e)
                    if split is not None:
                        return split, ""

        points = (p ** len(local) - 1) // (p - 1)
        if points > self.caps.idempotent_search_cap:
            raise DecompositionInconclusive(
                f"Local algebra of dimension {len(local)} too large for exhaustive confirmation",
                context="decompose")
        for coeffs in itertools.product(range(p), repeat=len(local)):
            nonzero = [c for c in coeffs if c]
            if not nonzero or nonzero[0] != 1:
                continue
            f = sum(c * a for c, a in zip(coeffs, local)) % p
            split = _fitting_split(f, e, p)
            if split is not None:
                return split, ""
        return None, "exhaustive scan"


def decompose(M: ModuleRep, seed: Optional[int] = None, caps: Optional[Caps] = None,
              sylow: Optional[GroupHandle] = None) -> DecompReport:
    """
    Decompose M into indecomposables and flag the projective ones

    A summand is projective iff its restriction to a Sylow p-subgroup (of
    G/kernel) is free, i.e. rank(e N) * |P : kernel| = dim M e for the norm N.

    Raises:
        CapExceeded: if dim M > caps.dim_cap
        DecompositionInconclusive: if a summand can neither be split nor
            certified indecomposable within the budgets
    """
    caps = caps or DEFAULT_CAPS
    seed = caps.seed if seed is None else seed
    if M.dim > caps.dim_cap:
        raise CapExceeded("Module too large to decompose", caps.dim_cap, M.dim, context=M.name)
    report = DecompReport(dim=M.dim, p=M.p)
    if M.dim == 0:
        return report

    P = sylow or sylow_p(M.group, M.p, caps.group_cap)
    N, index = norm_matrix(restrict(M, P), P, caps.group_cap)

    def summand(e: MatGFp, certificate: str) -> Summand:
        d = gfp.rank(e, M.p)
        projective = gfp.rank(gfp.matmul(e, N, M.p), M.p) * index == d
        return Summand(dim=d, projective=projective, idempotent=e, certificate=certificate)

    group_order = M.group.order(caps.group_cap)
    kernel_order = M.kernel.order(caps.group_cap) if M.kernel is not None else 1
    quotient_order = group_order // kernel_order
    if M.is_permutation and quotient_order == p_part(quotient_order, M.p):
        # Transitive permutation modules of p-groups are indecomposable
        index_of = M.label_index
        for block in orbits(M.group, M.basis_labels, M.point_action):
            e = gfp.zeros(M.dim, M.dim)
            for label in block:
                e[index_of[label], index_of[label]] = 1
            report.summands.append(summand(e, "transitive p-group orbit"))
    else:
        basis = commutant_basis(M, caps)
        splitter = _Splitter(basis, M.p, caps, np.random.default_rng(seed))
        work = [gfp.identity(M.dim)]
        while work:
            e = work.pop()
            split, certificate = splitter.run(e)
            if split is None:
                report.summands.append(summand(e, certificate))
            else:
                work.extend(split)

    report.summands.sort(key=lambda s: (s.dim, s.projective))
    logger.debug(f"Decomposed {M.name or 'module'} (dim {M.dim}, p={M.p}): "
                 f"{[(s.dim, s.projective) for s in report.summands]}")
    return report


def np_count(M: ModuleRep, seed: Optional[int] = None, caps: Optional[Caps] = None) -> int:
    """np(M): the number of projective indecomposable summands."""
    return decompose(M, seed=seed, caps=caps).np


def has_projective_summand(M: ModuleRep, seed: Optional[int] = None, caps: Optional[Caps] = None) -> bool:
    return np_count(M, seed=seed, caps=caps) >= 1
