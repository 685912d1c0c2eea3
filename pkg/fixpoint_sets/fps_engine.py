"""
Fixed point sets for the conjugation action on fixed-point-free classes

For X in S^q with support D, G_X = Sym(D) acts by conjugation on the class
of fixed-point-free products of q-cycles on D (the ambient class). The
engine computes S_X (pointwise stabilizer), Q_X (a Sylow p-subgroup of
S_X), N_X (set stabilizer) and M_X = N_X / S_X acting faithfully on X, and
decides closedness and the fixed-point-set property. The Broue oracle
recomputes the fixed point sets of the whole class from scratch, one vertex
class at a time.
"""

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from math import factorial, prod
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .config import DEFAULT_CAPS, Caps
from .errors import (BudgetExhausted, CapExceeded, DecompositionInconclusive, InvalidSet,
                     TheoremViolation)
from .group_engine import (GroupHandle, conjugator, element_centralizer, is_conjugate_subgroup,
                           normalizer, orbits, p_part, subgroups_up_to_conjugacy, sylow_p, sylow_sym,
                           sym_centralizer, symmetric_group)
from .modlin import (DecompReport, ModuleRep, decompose, has_projective_summand, perm_module, tensor_module,
                     wreath_power_module)
from .perm_core import Permutation, is_q_regular
from .setalg import (PermSet, SqSet, coprime, delta, equivalence_key, factor_multiplicities,
                     fixed_point_free_class, project, star, star_power)

logger = logging.getLogger(__name__)

Kappa = Union[int, BudgetExhausted]


@dataclass(frozen=True)
class AmbientClass:
    """All fixed-point-free products of q-cycles on a support"""
    q: int
    support: FrozenSet[int]
    elements: Tuple[Permutation, ...]

    @staticmethod
    def expected_size(q: int, d: int) -> int:
        m = d // q
        return factorial(d) // (q ** m * factorial(m))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Permutation) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> FrozenSet[Permutation]:
        return frozenset(self.elements)

    def as_set(self) -> SqSet:
        return SqSet(self.elements, self.q)


@lru_cache(maxsize=64)
def _ambient(q: int, support: FrozenSet[int]) -> AmbientClass:
    return AmbientClass(q, support, tuple(fixed_point_free_class(q, support)))


def _require_sq(X: PermSet) -> SqSet:
    if not isinstance(X, SqSet):
        raise InvalidSet("Fixed point set computations need a set of fixed-point-free q-cycle products",
                         context=str(X))
    return X


def ambient(X: PermSet, caps: Optional[Caps] = None) -> AmbientClass:
    """
    The class of X: every fixed-point-free product of q-cycles on supp(X)

    Raises:
        InvalidSet: if X is not an SqSet
        CapExceeded: if d(X) > caps.support_cap
    """
    caps = caps or DEFAULT_CAPS
    X = _require_sq(X)
    if X.degree > caps.support_cap:
        raise CapExceeded("Support too large for the ambient class", caps.support_cap, X.degree,
                          context=str(X))
    return _ambient(X.q, X.support)


# ----------------------------------------------------------------------
# S_X, Q_X, N_X, M_X
# ----------------------------------------------------------------------

@dataclass
class SetStructure:
    """
    Groups attached to an SqSet X

    Attributes:
        S: Pointwise stabilizer of X in Sym(supp X)
        N: Set stabilizer of X in Sym(supp X)
        M: Image of N acting on X, on the indices 1..|X| of X's sorted elements
        labels: X's elements in index order
    """
    X: SqSet
    S: GroupHandle
    N: GroupHandle
    M: GroupHandle
    labels: Tuple[Permutation, ...]

    def vertex(self, p: int, cap: Optional[int] = None) -> GroupHandle:
        return sylow_p(self.S, p, cap)


@lru_cache(maxsize=256)
def _pointwise_stabilizer(X: SqSet, caps: Caps) -> GroupHandle:
    cap = caps.group_cap
    C = element_centralizer(next(iter(X)), X.support)
    if C.order() <= cap:
        S = GroupHandle.from_elements((g for g in C.enumerate(cap) if all(x.commutes_with(g) for x in X)),
                                      domain=X.support, name="S_X")
    else:
        # C(x) is out of reach; build the centralizer of <X> from its orbits
        S = sym_centralizer(X.generated_group(), X.support, cap)
    S.name = "S_X"
    return S


@lru_cache(maxsize=256)
def _structure(X: SqSet, caps: Caps) -> SetStructure:
    cap = caps.group_cap
    x0 = next(iter(X))
    S = _pointwise_stabilizer(X, caps)

    if len(X) == AmbientClass.expected_size(X.q, X.degree):
        N = symmetric_group(X.support)
    else:
        c_elements = element_centralizer(x0, X.support).enumerate(cap)
        kept = []
        for y in X:
            c = conjugator(x0, y)
            for g in c_elements:
                h = g.compose(c)
                if all(x.conjugate(h) in X.elements for x in X):
                    kept.append(h)
        N = GroupHandle.from_elements(kept, domain=X.support, name="N_X")
    N.name = "N_X"

    labels = tuple(X)
    index = {x: i for i, x in enumerate(labels, start=1)}
    images = [Permutation({index[x]: index[x.conjugate(g)] for x in labels}) for g in N.generators]
    M = GroupHandle(images, domain=range(1, len(labels) + 1), name="M_X",
                    order_hint=N.order(cap) // S.order(cap))
    logger.debug(f"|S_X|={S.order()} |N_X|={N.order(cap)} |M_X|={M.order()} for {X}")
    return SetStructure(X=X, S=S, N=N, M=M, labels=labels)


def structure(X: PermSet, caps: Optional[Caps] = None) -> SetStructure:
    caps = caps or DEFAULT_CAPS
    return _structure(_require_sq(X), caps)


def stab_S(X: PermSet, caps: Optional[Caps] = None) -> GroupHandle:
    caps = caps or DEFAULT_CAPS
    return _pointwise_stabilizer(_require_sq(X), caps)


def vertex_Q(X: PermSet, p: int, caps: Optional[Caps] = None) -> GroupHandle:
    caps = caps or DEFAULT_CAPS
    return sylow_p(stab_S(X, caps), p, caps.group_cap)


def normalizer_N(X: PermSet, caps: Optional[Caps] = None) -> GroupHandle:
    return structure(X, caps).N


def quotient_M(X: PermSet, caps: Optional[Caps] = None) -> GroupHandle:
    return structure(X, caps).M


def quotient_module(X: PermSet, p: int, caps: Optional[Caps] = None) -> ModuleRep:
    """kX as a permutation module for M_X."""
    M = quotient_M(X, caps)
    return perm_module(M, sorted(M.domain), "point", p, name="kX")


# ----------------------------------------------------------------------
# Closure
# ----------------------------------------------------------------------

def fix_set(Q: GroupHandle, amb: AmbientClass) -> List[Permutation]:
    """Elements of the ambient class fixed by every element of Q."""
    return [xi for xi in amb.elements if all(xi.commutes_with(u) for u in Q.generators)]


def fixed_class_elements(H: GroupHandle, q: int, support: FrozenSet[int],
                         caps: Optional[Caps] = None) -> List[Permutation]:
    """
    Fixed-point-free products of q-cycles on support commuting with H

    Filters C_{Sym(support)}(H) when that is smaller than the ambient class,
    and the ambient class otherwise.

    Raises:
        CapExceeded: if neither the centralizer nor the ambient class fits the caps
    """
    caps = caps or DEFAULT_CAPS
    support = frozenset(support)
    class_size = AmbientClass.expected_size(q, len(support))
    C = None if H.is_trivial else sym_centralizer(H, support, caps.group_cap)
    if C is not None and (C.order() < class_size or len(support) > caps.support_cap):
        return [g for g in C.enumerate(caps.group_cap) if is_q_regular(g, q, support)]
    if len(support) > caps.support_cap:
        raise CapExceeded("Support too large for the ambient class", caps.support_cap, len(support))
    return fix_set(H, _ambient(q, support))


def closure(X: PermSet, p: int, caps: Optional[Caps] = None) -> SqSet:
    """c(X) = Fix(Q_X) within the ambient class; always contains X."""
    caps = caps or DEFAULT_CAPS
    X = _require_sq(X)
    Q = vertex_Q(X, p, caps)
    return SqSet(fixed_class_elements(Q, X.q, X.support, caps), X.q)


def is_closed(X: PermSet, p: int, caps: Optional[Caps] = None) -> bool:
    return closure(X, p, caps) == X


def is_exact(X: PermSet, p: int, caps: Optional[Caps] = None) -> bool:
    """Q_X moves every point of supp(X)."""
    Q = vertex_Q(X, p, caps)
    return frozenset().union(*(g.support for g in Q.generators)) == X.support


def is_projective_set(X: PermSet, p: int, caps: Optional[Caps] = None) -> bool:
    return vertex_Q(X, p, caps).is_trivial


def central_witness(X: PermSet, p: int, caps: Optional[Caps] = None) -> Optional[Permutation]:
    """An element of Z(Q_X) of order p moving every point of supp(X), if one exists."""
    caps = caps or DEFAULT_CAPS
    Q = vertex_Q(X, p, caps)
    for z in Q.enumerate(caps.group_cap):
        if z.order() == p and z.support == X.support and all(z.commutes_with(g) for g in Q.generators):
            return z
    return None


def check_closed_identities(X: PermSet, p: int, caps: Optional[Caps] = None) -> None:
    """
    For closed X: Fix(S_X) = X and N_X normalizes S_X; exact closed X has
    a central fixed-point-free element of order p in Q_X

    Raises:
        TheoremViolation: if an identity fails on this instance
    """
    caps = caps or DEFAULT_CAPS
    st = structure(X, caps)
    if frozenset(fixed_class_elements(st.S, X.q, X.support, caps)) != X.elements:
        raise TheoremViolation("Fix(S_X) differs from X for a closed set", context=str(X))
    S_elements = st.S.element_set(caps.group_cap)
    if not all(s.conjugate(g) in S_elements for g in st.N.generators for s in st.S.generators):
        raise TheoremViolation("N_X does not normalize S_X", context=str(X))
    if is_exact(X, p, caps) and central_witness(X, p, caps) is None:
        raise TheoremViolation("No central fixed-point-free element of order p in Q_X", context=str(X))


def frattini_holds(X: PermSet, p: int, caps: Optional[Caps] = None) -> bool:
    """|N_N(Q)| * |S| / |N_S(Q)| = |N| for Q = Q_X."""
    caps = caps or DEFAULT_CAPS
    cap = caps.group_cap
    st = structure(X, caps)
    Q = st.vertex(p, cap)
    n_q = normalizer(st.N, Q, cap).order(cap)
    s_q = normalizer(st.S, Q, cap).order(cap)
    return n_q * st.S.order(cap) == st.N.order(cap) * s_q


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------

@dataclass
class FpsReport:
    """Verdict on one set; fixed_point_set is None when the module test was inconclusive"""
    set: str
    p: int
    q: int
    degree: int
    size: int
    closed: bool
    exact: bool
    projective: bool
    fixed_point_set: Optional[bool]
    S_order: int
    N_order: int
    Q_order: int
    Q_gens: List[str]
    M_order: int
    np: Optional[int] = None
    module: Optional[DecompReport] = None
    kappa: Optional[Kappa] = None
    central_witness: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.fixed_point_set is None:
            return "unknown"
        return "yes" if self.fixed_point_set else "no"

    def to_dict(self) -> Dict:
        result = {
            "set": self.set,
            "p": self.p,
            "q": self.q,
            "degree": self.degree,
            "size": self.size,
            "closed": self.closed,
            "exact": self.exact,
            "projective": self.projective,
            "fixed_point_set": self.fixed_point_set,
            "S_order": self.S_order,
            "N_order": self.N_order,
            "Q_order": self.Q_order,
            "Q_gens": self.Q_gens,
            "M_order": self.M_order,
            "np": self.np,
        }
        if self.module is not None:
            result["module"] = self.module.to_dict()
        if self.kappa is not None:
            result["kappa"] = self.kappa if isinstance(self.kappa, int) else str(self.kappa)
        if self.central_witness is not None:
            result["central_witness"] = self.central_witness
        result["notes"] = list(self.notes)
        return result


def is_fixed_point_set(X: PermSet, p: int, caps: Optional[Caps] = None, seed: Optional[int] = None,
                       with_kappa: bool = False) -> FpsReport:
    """
    Decide whether X is a fixed point set: X closed and kX has a projective
    summand as a module for M_X

    Raises:
        CapExceeded: if a group or module exceeds the caps
        TheoremViolation: if a closed-set identity fails
    """
    caps = caps or DEFAULT_CAPS
    X = _require_sq(X)
    st = structure(X, caps)
    Q = st.vertex(p, caps.group_cap)
    closed = is_closed(X, p, caps)
    report = FpsReport(
        set=str(X), p=p, q=X.q, degree=X.degree, size=len(X),
        closed=closed, exact=is_exact(X, p, caps), projective=Q.is_trivial,
        fixed_point_set=False,
        S_order=st.S.order(), N_order=st.N.order(caps.group_cap), Q_order=Q.order(),
        Q_gens=[str(g) for g in Q.generators], M_order=st.M.order(caps.group_cap),
    )
    if not closed:
        report.notes.append(f"closure has {len(closure(X, p, caps))} elements")
        return report

    check_closed_identities(X, p, caps)
    if report.exact:
        report.central_witness = str(central_witness(X, p, caps))
    try:
        module = decompose(quotient_module(X, p, caps), seed=seed, caps=caps)
    except DecompositionInconclusive as e:
        logger.warning(f"Module test inconclusive for {X}: {e}")
        report.fixed_point_set = None
        report.notes.append(f"inconclusive: {e.message}")
        return report
    report.module = module
    report.np = module.np
    report.fixed_point_set = module.np >= 1
    if with_kappa and report.fixed_point_set:
        try:
            report.kappa = kappa(X, p, caps, seed=seed)
        except DecompositionInconclusive as e:
            report.notes.append(f"kappa inconclusive: {e.message}")
    return report


# ----------------------------------------------------------------------
# Orbit factorization
# ----------------------------------------------------------------------

@dataclass
class OrbitFactorization:
    """Orbits of <Q_X, X> on supp(X) with the induced factors of X and Q_X"""
    orbits: List[FrozenSet[int]]
    factors: List[SqSet]
    q_factor_orders: List[int]

    @property
    def transitive(self) -> bool:
        return len(self.orbits) == 1


def q_tilde(X: PermSet, p: int, caps: Optional[Caps] = None) -> GroupHandle:
    """<Q_X, X>"""
    Q = vertex_Q(X, p, caps)
    return GroupHandle(list(Q.generators) + list(X), domain=X.support, name="Q~_X")


def orbit_factorization(X: PermSet, p: int, caps: Optional[Caps] = None) -> OrbitFactorization:
    """
    Factor an exact closed X along the orbits of <Q_X, X>; X is the product
    of its projections and Q_X the product of its restrictions

    Raises:
        ValueError: if X is not exact and closed
        TheoremViolation: if either factorization fails on this instance
    """
    caps = caps or DEFAULT_CAPS
    if not (is_exact(X, p, caps) and is_closed(X, p, caps)):
        raise ValueError(f"{X} is not exact and closed at p={p}")
    blocks = sorted(orbits(q_tilde(X, p, caps)), key=min)
    factors = [project(X, b) for b in blocks]
    if prod(len(f) for f in factors) != len(X) or \
            {reduce(Permutation.compose, combo) for combo in itertools.product(*factors)} != X.elements:
        raise TheoremViolation("X is not the product of its orbit projections", context=str(X))

    Q_elements = vertex_Q(X, p, caps).enumerate(caps.group_cap)
    q_orders = [len({g.restrict(b & g.support) for g in Q_elements}) for b in blocks]
    if prod(q_orders) != len(Q_elements):
        raise TheoremViolation("Q_X is not the product of its orbit restrictions", context=str(X))
    return OrbitFactorization(orbits=blocks, factors=factors, q_factor_orders=q_orders)


# ----------------------------------------------------------------------
# Structure orders
# ----------------------------------------------------------------------

@dataclass
class StructureOrders:
    """Measured and predicted |N|, |S|, |M| for *^s Y and Delta^s Y"""
    s: int
    star: Dict[str, int]
    star_predicted: Dict[str, int]
    delta: Dict[str, int]
    delta_predicted: Dict[str, int]

    @property
    def consistent(self) -> bool:
        return self.star == self.star_predicted and \
            self.delta["S"] == self.delta_predicted["S"] and self.delta["M"] == self.delta_predicted["M"]


def _orders(X: PermSet, caps: Caps) -> Dict[str, int]:
    st = structure(X, caps)
    return {"N": st.N.order(caps.group_cap), "S": st.S.order(caps.group_cap), "M": st.M.order(caps.group_cap)}


def structure_orders(Y: PermSet, s: int, caps: Optional[Caps] = None) -> StructureOrders:
    """
    Orders of N, S, M for *^s Y and Delta^s Y against the wreath predictions
    |N| = |N_Y|^s s!, |S| = |S_Y|^s, |M| = |M_Y|^s s! for the star power and
    |S| = |S_Y|^s s!, |M| = |M_Y| for the diagonal (Y irreducible, |Y| > 1)
    """
    caps = caps or DEFAULT_CAPS
    base = _orders(Y, caps)
    fs = factorial(s)
    return StructureOrders(
        s=s,
        star=_orders(star_power(Y, s), caps),
        star_predicted={"N": base["N"] ** s * fs, "S": base["S"] ** s, "M": base["M"] ** s * fs},
        delta=_orders(delta(Y, s), caps),
        delta_predicted={"N": base["S"] ** s * fs * base["M"], "S": base["S"] ** s * fs, "M": base["M"]},
    )


def coprime_by_normalizer(X: PermSet, Y: PermSet, caps: Optional[Caps] = None) -> bool:
    """N_{X*Y} = N_X * N_Y, compared through orders."""
    caps = caps or DEFAULT_CAPS
    return normalizer_N(star(X, Y), caps).order(caps.group_cap) == \
        normalizer_N(X, caps).order(caps.group_cap) * normalizer_N(Y, caps).order(caps.group_cap)


def _require_fps(X: SqSet, p: int, caps: Caps, seed: Optional[int], what: str, source: PermSet) -> None:
    if not is_closed(X, p, caps):
        raise TheoremViolation(f"{what} is not closed", context=f"{X} in {source}")
    try:
        verdict = has_projective_summand(quotient_module(X, p, caps), seed=seed, caps=caps)
    except DecompositionInconclusive as e:
        logger.warning(f"{what} {X} of {source}: module test inconclusive: {e}")
        return
    if not verdict:
        raise TheoremViolation(f"{what} is not a fixed point set", context=f"{X} in {source}")


def check_reduction(X: PermSet, p: int, caps: Optional[Caps] = None, seed: Optional[int] = None) -> List[SqSet]:
    """
    For a fixed point set X: every irreducible factor, and for each class
    of equivalent factors both Y = (that factor)^m and its co-factor Z with
    X ~ Y * Z, are fixed point sets

    Returns:
        The sets that were checked

    Raises:
        TheoremViolation: if one of them is not a fixed point set
    """
    caps = caps or DEFAULT_CAPS
    X = _require_sq(X)
    classes = factor_multiplicities(X, caps)
    if len(classes) == 1 and classes[0][1] == 1:
        return []
    checked: List[SqSet] = []
    for factor, _ in classes:
        _require_fps(factor, p, caps, seed, "Irreducible factor", X)
        checked.append(factor)
    if len(classes) > 1:
        for i, (factor, m) in enumerate(classes):
            Y = star_power(factor, m)
            Z = reduce(star, [star_power(f, k) for j, (f, k) in enumerate(classes) if j != i])
            for part in (Y, Z):
                _require_fps(part, p, caps, seed, "Coprime co-factor", X)
                checked.append(part)
    logger.debug(f"Reduction holds for {X}: {len(checked)} sets checked")
    return checked


def check_coprime_structure(X: PermSet, Y: PermSet, p: int, caps: Optional[Caps] = None,
                            seed: Optional[int] = None) -> None:
    """
    For coprime X and Y: S_{X*Y} = S_X x S_Y, M_{X*Y} = M_X x M_Y and
    k(X*Y) matches kX (x) kY, compared through orders and projective counts

    Raises:
        InvalidSet: if X and Y share an equivalent irreducible factor
        TheoremViolation: if a product identity fails
    """
    caps = caps or DEFAULT_CAPS
    cap = caps.group_cap
    X, Y = _require_sq(X), _require_sq(Y)
    if not coprime(X, Y, caps):
        raise InvalidSet("Sets are not coprime", context=f"{X} and {Y}")
    XY = _require_sq(star(X, Y))
    if stab_S(XY, caps).order(cap) != stab_S(X, caps).order(cap) * stab_S(Y, caps).order(cap):
        raise TheoremViolation("S of a coprime product is not the product of the S groups", context=str(XY))
    if quotient_M(XY, caps).order(cap) != quotient_M(X, caps).order(cap) * quotient_M(Y, caps).order(cap):
        raise TheoremViolation("M of a coprime product is not the product of the M groups", context=str(XY))
    product = decompose(tensor_module(quotient_module(X, p, caps), quotient_module(Y, p, caps)),
                        seed=seed, caps=caps)
    joint = decompose(quotient_module(XY, p, caps), seed=seed, caps=caps)
    if product.np != joint.np or len(product.summands) != len(joint.summands):
        raise TheoremViolation(f"k(X*Y) has {joint.np} projective summands, kX (x) kY has {product.np}",
                               context=str(XY))


# ----------------------------------------------------------------------
# kappa
# ----------------------------------------------------------------------

def kappa_trajectory(X: PermSet, p: int, caps: Optional[Caps] = None,
                     seed: Optional[int] = None) -> Tuple[List[Tuple[int, int]], Kappa]:
    """
    np of (kX)^(wr u) over M_X wr Sym(u) for u = 1, 2, ... until it vanishes

    Returns:
        ([(u, np), ...], kappa) where kappa is the first u with np = 0, or
        BudgetExhausted when the u or dimension budget runs out first
    """
    caps = caps or DEFAULT_CAPS
    base = quotient_module(X, p, caps)
    trajectory: List[Tuple[int, int]] = []
    for u in range(1, caps.kappa_max_u + 1):
        if len(base.basis_labels) ** u > caps.kappa_max_dim:
            logger.warning(f"kappa budget for {X}: dimension {len(base.basis_labels) ** u} at u={u}")
            return trajectory, BudgetExhausted(u - 1, "dimension budget")
        try:
            module = wreath_power_module(base, u, caps)
        except CapExceeded as e:
            logger.warning(f"kappa budget for {X} at u={u}: {e}")
            return trajectory, BudgetExhausted(u - 1, "group budget")
        n_proj = decompose(module, seed=seed, caps=caps).np
        trajectory.append((u, n_proj))
        logger.debug(f"kappa({X}) u={u}: np={n_proj}")
        if n_proj == 0:
            return trajectory, u
    return trajectory, BudgetExhausted(caps.kappa_max_u)


def kappa(X: PermSet, p: int, caps: Optional[Caps] = None, seed: Optional[int] = None) -> Kappa:
    """The least u for which (kX)^(wr u) has no projective summand."""
    return kappa_trajectory(X, p, caps, seed)[1]


# ----------------------------------------------------------------------
# Broue oracle
# ----------------------------------------------------------------------

@dataclass
class OracleEntry:
    """One vertex class Q with nonempty Fix(Q) and the module test over N_G(Q)/Q"""
    Q_order: int
    Q_gens: List[str]
    set: SqSet
    np: int
    sylow_in_S: bool

    @property
    def kept(self) -> bool:
        return self.np >= 1

    def to_dict(self) -> Dict:
        return {
            "Q_order": self.Q_order,
            "Q_gens": self.Q_gens,
            "set": str(self.set),
            "size": len(self.set),
            "np": self.np,
            "sylow_in_S": self.sylow_in_S,
        }


@dataclass
class OracleResult:
    """Fixed point sets of the class found vertex by vertex, with the summand ledger"""
    p: int
    q: int
    n: int
    entries: List[OracleEntry]
    reports: List[FpsReport]
    total_summands: int
    classes_examined: int

    @property
    def kept(self) -> List[OracleEntry]:
        return [e for e in self.entries if e.kept]

    @property
    def ledger_sum(self) -> int:
        return sum(e.np for e in self.kept)

    @property
    def ledger_ok(self) -> bool:
        return self.ledger_sum == self.total_summands

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "classes_examined": self.classes_examined,
            "kept": [e.to_dict() for e in self.kept],
            "reports": [r.to_dict() for r in self.reports],
            "ledger": {
                "total_summands": self.total_summands,
                "sum_np": self.ledger_sum,
                "ok": self.ledger_ok,
            },
        }


def _evaluate_vertex(args) -> Optional[OracleEntry]:
    q_gens, q, d, p, caps, seed = args
    amb = _ambient(q, frozenset(range(1, d + 1)))
    Q = GroupHandle(q_gens, domain=amb.support)
    fixed = fix_set(Q, amb)
    if not fixed:
        return None
    X = SqSet(fixed, q)
    st = structure(X, caps)
    sylow_in_S = Q.order() == p_part(st.S.order(caps.group_cap), p) and \
        is_conjugate_subgroup(Q, st.vertex(p, caps.group_cap), st.S, caps.group_cap)
    N_Q = normalizer(st.N, Q, caps.group_cap)
    module = perm_module(N_Q, X, "conjugation", p, kernel=Q, name=f"k Fix(Q), |Q|={Q.order()}")
    n_proj = decompose(module, seed=seed, caps=caps).np
    logger.debug(f"|Q|={Q.order()}: |Fix|={len(X)}, np={n_proj}, Sylow in S_X: {sylow_in_S}")
    return OracleEntry(Q_order=Q.order(), Q_gens=[str(g) for g in Q.generators], set=X,
                       np=n_proj, sylow_in_S=sylow_in_S)


def broue_oracle(p: int, q: int, n: int, caps: Optional[Caps] = None, seed: Optional[int] = None,
                 jobs: int = 1) -> OracleResult:
    """
    All fixed point sets of the class of fixed-point-free q-cycle products
    in Sym(qn), found from the vertex side

    Every subgroup Q of a Sylow p-subgroup, up to conjugacy in Sym(qn), with
    Fix(Q) nonempty is tested: Q is a vertex of kXi iff k Fix(Q) has a
    projective summand for N(Q)/Q. The summand counts are checked against a
    full decomposition of kXi.

    Raises:
        CapExceeded: if qn > caps.oracle_max_degree or a group exceeds its cap
        TheoremViolation: if a kept vertex is not a Sylow p-subgroup of S_X, or a
            factor or coprime co-factor of a kept set is not a fixed point set
    """
    caps = caps or DEFAULT_CAPS
    seed = caps.seed if seed is None else seed
    d = q * n
    if d > caps.oracle_max_degree:
        raise CapExceeded("Degree beyond oracle scope", caps.oracle_max_degree, d, context=f"p={p} q={q} n={n}")
    G = symmetric_group(range(1, d + 1))
    P = sylow_sym(d, p)
    classes = subgroups_up_to_conjugacy(P, G, p, cap=caps.subgroup_cap, group_cap=caps.group_cap)
    logger.info(f"Oracle p={p} q={q} n={n}: {len(classes)} subgroup classes of a Sylow {p}-subgroup of Sym({d})")

    tasks = [(Q.generators, q, d, p, caps, seed) for Q in classes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as executor:
            results = list(executor.map(_evaluate_vertex, tasks))
    else:
        results = [_evaluate_vertex(t) for t in tasks]
    entries = [e for e in results if e is not None]

    for e in entries:
        if e.kept and not e.sylow_in_S:
            raise TheoremViolation(f"Vertex of order {e.Q_order} is not Sylow in S_X", context=str(e.set))

    seen: Dict[Tuple, OracleEntry] = {}
    for e in entries:
        if e.kept:
            key = equivalence_key(e.set, caps)
            if key in seen:
                raise TheoremViolation("Two vertex classes give equivalent fixed point sets", context=str(e.set))
            seen[key] = e

    amb = _ambient(q, frozenset(range(1, d + 1)))
    total = len(decompose(perm_module(G, amb.elements, "conjugation", p, name="k Xi"),
                          seed=seed, caps=caps).summands)
    reports = [is_fixed_point_set(e.set, p, caps, seed=seed) for e in entries if e.kept]
    for e in entries:
        if e.kept:
            check_reduction(e.set, p, caps, seed=seed)
    result = OracleResult(p=p, q=q, n=n, entries=entries, reports=reports,
                          total_summands=total, classes_examined=len(classes))
    logger.info(f"Oracle kept {len(result.kept)} classes; ledger {result.ledger_sum} vs {total} summands")
    return result
