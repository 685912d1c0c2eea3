"""
Classification of fixed point sets for prime q

Every fixed point set is W * V with W projective-free and V empty or an
irreducible projective fixed point set (a full class). W is a product of
powers of pairwise inequivalent irreducible exact fixed point sets, each a
diagonal Delta^(p^i) of a transitive one, and transitive ones have degree
q or pq. The pipeline builds these candidates bottom up, re-verifies every
entry with the engine, and can compare the result with the Broue oracle.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Tuple

from sympy import isprime

from .config import DEFAULT_CAPS, Caps
from .errors import BudgetExhausted, InvalidSet, TheoremViolation
from .fps_engine import (FpsReport, Kappa, OracleResult, _ambient, broue_oracle, fix_set,
                         is_exact, is_fixed_point_set, kappa)
from .group_engine import GroupHandle, element_centralizer
from .perm_core import Permutation
from .setalg import (SqSet, delta, equivalence_key, fixed_point_free_class, is_irreducible,
                     is_transitive_set, star, star_power)

logger = logging.getLogger(__name__)


@dataclass
class ClassEntry:
    """One set in the classification with its re-verification report"""
    set: SqSet
    form: str
    report: FpsReport
    kappa: Optional[Kappa] = None
    notes: List[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.set.degree

    @property
    def verified(self) -> bool:
        return self.report.fixed_point_set is True

    def to_dict(self) -> Dict:
        result = {
            "form": self.form,
            "set": str(self.set),
            "degree": self.degree,
            "size": len(self.set),
            "verdict": self.report.verdict,
            "closed": self.report.closed,
            "exact": self.report.exact,
            "projective": self.report.projective,
            "np": self.report.np,
        }
        if self.kappa is not None:
            result["kappa"] = self.kappa if isinstance(self.kappa, int) else str(self.kappa)
        result["notes"] = list(self.notes)
        return result


@dataclass
class ConditionTReport:
    """Elements y of the class commuting with x and permuting x's cycles transitively"""
    x: Permutation
    ys: List[Permutation]
    conjugate_in_centralizer: bool
    stabilizer_is_xy: bool

    def to_dict(self) -> Dict:
        return {
            "x": str(self.x),
            "count": len(self.ys),
            "ys": [str(y) for y in self.ys],
            "conjugate_in_centralizer": self.conjugate_in_centralizer,
            "stabilizer_is_xy": self.stabilizer_is_xy,
        }


@dataclass
class Comparison:
    """Oracle against classification at one degree"""
    agreements: List[str]
    misses: List[str]
    extras: List[str]
    ledger_ok: bool
    total_summands: int
    ledger_sum: int

    @property
    def verdict(self) -> str:
        return "AGREE" if not self.misses and not self.extras and self.ledger_ok else "DISAGREE"

    def to_dict(self) -> Dict:
        return {
            "verdict": self.verdict,
            "agreements": self.agreements,
            "misses": self.misses,
            "extras": self.extras,
            "ledger": {"total_summands": self.total_summands, "sum_np": self.ledger_sum, "ok": self.ledger_ok},
        }


@dataclass
class ClassificationReport:
    p: int
    q: int
    max_degree: int
    transitive: List[ClassEntry] = field(default_factory=list)
    condition_t: Optional[ConditionTReport] = None
    irreducible_exact: List[ClassEntry] = field(default_factory=list)
    projective_free: List[ClassEntry] = field(default_factory=list)
    projective_irreducible: List[ClassEntry] = field(default_factory=list)
    all: List[ClassEntry] = field(default_factory=list)
    comparison: Optional[Comparison] = None

    def to_dict(self) -> Dict:
        result = {
            "p": self.p,
            "q": self.q,
            "max_degree": self.max_degree,
            "transitive": [e.to_dict() for e in self.transitive],
            "condition_t": self.condition_t.to_dict() if self.condition_t else None,
            "irreducible_exact": [e.to_dict() for e in self.irreducible_exact],
            "projective_free": [e.to_dict() for e in self.projective_free],
            "projective_irreducible": [e.to_dict() for e in self.projective_irreducible],
            "all": [e.to_dict() for e in self.all],
        }
        if self.comparison is not None:
            result["comparison"] = self.comparison.to_dict()
        return result


def _check_primes(p: int, q: int) -> None:
    if not isprime(p):
        raise InvalidSet(f"p must be prime, got {p}")
    if not isprime(q):
        raise InvalidSet(f"Classification needs prime q, got {q}")


def _entry(X: SqSet, form: str, p: int, caps: Caps, seed: Optional[int]) -> ClassEntry:
    return ClassEntry(set=X, form=form, report=is_fixed_point_set(X, p, caps, seed=seed))


def _dedupe(entries: List[ClassEntry], caps: Caps) -> List[ClassEntry]:
    seen = set()
    result = []
    for e in entries:
        key = equivalence_key(e.set, caps)
        if key not in seen:
            seen.add(key)
            result.append(e)
    return result


def _block_element(p: int, q: int) -> Permutation:
    """(1 .. q)(q+1 .. 2q) ... with p cycles."""
    return Permutation.from_cycles([range(i * q + 1, (i + 1) * q + 1) for i in range(p)])


def condition_t(p: int, caps: Optional[Caps] = None) -> ConditionTReport:
    """
    Find every y in the class of x = (1..p)(p+1..2p)... on p^2 points that
    commutes with x and permutes the cycles of x transitively, then test
    whether all such y are conjugate under C(x) and whether each has
    Stab_{C(x)}(y) = <x, y>
    """
    caps = caps or DEFAULT_CAPS
    x = _block_element(p, p)
    d = p * p
    cycle_of = {a: i for i, c in enumerate(x.cycles()) for a in c}
    C = element_centralizer(x, range(1, d + 1))
    c_elements = C.enumerate(caps.group_cap)

    ys = []
    for y in _ambient(p, frozenset(range(1, d + 1))).elements:
        if not y.commutes_with(x):
            continue
        step = {cycle_of[a]: cycle_of[y(a)] for a in range(1, d + 1)}
        reached, i = {0}, step[0]
        while i not in reached:
            reached.add(i)
            i = step[i]
        if len(reached) == p:
            ys.append(y)

    conjugate = all(any(ys[0].conjugate(c) == y for c in c_elements) for y in ys)
    stabilizer = True
    for y in ys:
        stab = frozenset(c for c in c_elements if y.commutes_with(c))
        if stab != GroupHandle([x, y]).element_set(caps.group_cap):
            stabilizer = False
    logger.debug(f"condition (T) at p={p}: {len(ys)} elements, conjugate={conjugate}, stabilizer={stabilizer}")
    return ConditionTReport(x=x, ys=ys, conjugate_in_centralizer=conjugate, stabilizer_is_xy=stabilizer)


def transitive_candidates(p: int, q: int, caps: Optional[Caps] = None, seed: Optional[int] = None,
                          max_degree: Optional[int] = None) -> Tuple[List[ClassEntry], Optional[ConditionTReport]]:
    """
    Candidate transitive irreducible exact fixed point sets, each verified

    Degree q: all q-cycles of Sym(q), tested for every p, and for p = q the
    powers of one q-cycle. Degree pq with
    p != q: the class elements centralizing z, the product of p-cycles
    running down the columns of x = (1..q)(q+1..2q)... Degree p^2 with
    p = q: Fix(<x>) and Fix(<x, y>) for y satisfying condition (T).

    Returns:
        (candidates, condition (T) report or None)
    """
    caps = caps or DEFAULT_CAPS
    _check_primes(p, q)
    max_degree = caps.support_cap if max_degree is None else max_degree
    candidates: List[ClassEntry] = []
    t_report = None

    if q <= max_degree:
        X = SqSet(fixed_point_free_class(q, range(1, q + 1)), q)
        candidates.append(_entry(X, f"{q}-cycles of Sym({q})", p, caps, seed))
        if p == q:
            # the powers of one q-cycle; the full class again only for q <= 3
            y = Permutation.from_cycles([range(1, q + 1)])
            powers = SqSet(fix_set(GroupHandle([y]), _ambient(q, frozenset(range(1, q + 1)))), q)
            if powers != X:
                candidates.append(_entry(powers, f"Fix(<{y}>)", p, caps, seed))

    d = p * q
    if d <= max_degree:
        support = frozenset(range(1, d + 1))
        if p != q:
            z = Permutation.from_cycles([[i * q + j for i in range(p)] for j in range(1, q + 1)])
            X = SqSet(fix_set(GroupHandle([z]), _ambient(q, support)), q)
            candidates.append(_entry(X, f"Fix(<{z}>)", p, caps, seed))
        else:
            x = _block_element(p, p)
            t_report = condition_t(p, caps)
            X = SqSet(fix_set(GroupHandle([x]), _ambient(q, support)), q)
            candidates.append(_entry(X, f"Fix(<{x}>)", p, caps, seed))
            if t_report.ys:
                y = t_report.ys[0]
                X = SqSet(fix_set(GroupHandle([x, y]), _ambient(q, support)), q)
                candidates.append(_entry(X, f"Fix(<{x}, {y}>)", p, caps, seed))

    for c in candidates:
        c.notes.append("transitive" if is_transitive_set(c.set) else "not transitive")
        if c.verified and not is_exact(c.set, p, caps):
            c.notes.append("not exact")
    return candidates, t_report


def _transitive_exact(candidates: List[ClassEntry], p: int, caps: Caps) -> List[ClassEntry]:
    kept = [c for c in candidates
            if c.verified and is_exact(c.set, p, caps) and is_transitive_set(c.set)
            and is_irreducible(c.set, caps)]
    return _dedupe(kept, caps)


def irreducible_exact_fps(p: int, q: int, max_degree: int, caps: Optional[Caps] = None,
                          seed: Optional[int] = None,
                          transitive: Optional[List[ClassEntry]] = None) -> List[ClassEntry]:
    """
    Delta^(p^i) Y for every verified transitive irreducible exact Y and every
    i with p^i d(Y) <= max_degree

    A one-element Y has reducible diagonals (Delta^s {y} = {y}^s), so only
    Y itself is listed; its powers come back as projective-free products.
    """
    caps = caps or DEFAULT_CAPS
    if transitive is None:
        transitive, _ = transitive_candidates(p, q, caps, seed, max_degree)
    entries: List[ClassEntry] = []
    for Y in _transitive_exact(transitive, p, caps):
        s = 1
        while s * Y.degree <= max_degree:
            if s > 1 and len(Y.set) == 1:
                break
            X = delta(Y.set, s)
            e = _entry(X, Y.form if s == 1 else f"Delta^{s} {Y.set}", p, caps, seed)
            if not is_irreducible(X, caps):
                raise TheoremViolation(f"Diagonal power {s} is reducible", context=str(Y.set))
            if e.verified:
                entries.append(e)
            else:
                logger.warning(f"{e.form} failed re-verification: {e.report.verdict}")
            s *= p
    return _dedupe(entries, caps)


def _exponent_bound(entry: ClassEntry, max_degree: int, caps: Caps) -> int:
    by_degree = max_degree // entry.degree
    if len(entry.set) == 1:
        # M is trivial for every power of a single element
        return min(by_degree, caps.exponent_cap)
    if isinstance(entry.kappa, int):
        return min(entry.kappa - 1, by_degree, caps.exponent_cap)
    return min(by_degree, caps.exponent_cap)


def projective_free_fps(p: int, q: int, max_degree: int, caps: Optional[Caps] = None,
                        seed: Optional[int] = None,
                        irreducible: Optional[List[ClassEntry]] = None) -> List[ClassEntry]:
    """
    Products Y_1^a_1 * ... * Y_t^a_t of pairwise inequivalent irreducible
    exact fixed point sets with 1 <= a_i < kappa(Y_i) and total degree at
    most max_degree, each re-verified
    """
    caps = caps or DEFAULT_CAPS
    if irreducible is None:
        irreducible = irreducible_exact_fps(p, q, max_degree, caps, seed)
    for e in irreducible:
        if e.kappa is None and 2 * e.degree <= max_degree:
            e.kappa = kappa(e.set, p, caps, seed=seed)
            if isinstance(e.kappa, BudgetExhausted):
                e.notes.append(f"kappa {e.kappa}; exponents limited by degree")

    bounds = [_exponent_bound(e, max_degree, caps) for e in irreducible]
    entries: List[ClassEntry] = []

    def build(i: int, chosen: List[Tuple[ClassEntry, int]], degree: int):
        if i == len(irreducible):
            if chosen:
                factors = [star_power(e.set, a) for e, a in chosen]
                X = reduce(star, factors)
                form = " * ".join(e.form if a == 1 else f"({e.form})^{a}" for e, a in chosen)
                entry = _entry(X, form, p, caps, seed)
                if any(isinstance(e.kappa, BudgetExhausted) for e, _ in chosen):
                    entry.notes.append("exponent range not bounded by kappa")
                entries.append(entry)
            return
        build(i + 1, chosen, degree)
        e = irreducible[i]
        for a in range(1, bounds[i] + 1):
            if degree + a * e.degree > max_degree:
                break
            build(i + 1, chosen + [(e, a)], degree + a * e.degree)

    build(0, [], 0)
    kept = []
    for e in entries:
        if e.verified:
            kept.append(e)
        else:
            logger.warning(f"Projective-free candidate {e.form} failed re-verification: {e.report.verdict}")
    return _dedupe(kept, caps)


def projective_irreducible_fps(p: int, q: int, max_degree: int, caps: Optional[Caps] = None,
                               seed: Optional[int] = None) -> List[ClassEntry]:
    """Full classes on qn points that are projective fixed point sets."""
    caps = caps or DEFAULT_CAPS
    entries = []
    for n in range(1, max_degree // q + 1):
        X = SqSet(_ambient(q, frozenset(range(1, q * n + 1))).elements, q)
        e = _entry(X, f"Xi({q}, {q * n})", p, caps, seed)
        if e.report.projective and e.verified:
            entries.append(e)
    return entries


def all_fps(p: int, q: int, max_degree: int, caps: Optional[Caps] = None,
            seed: Optional[int] = None) -> ClassificationReport:
    """
    Every fixed point set of degree at most max_degree as W * V

    Raises:
        InvalidSet: if p or q is not prime
    """
    caps = caps or DEFAULT_CAPS
    _check_primes(p, q)
    report = ClassificationReport(p=p, q=q, max_degree=max_degree)
    report.transitive, report.condition_t = transitive_candidates(p, q, caps, seed, max_degree)
    report.irreducible_exact = irreducible_exact_fps(p, q, max_degree, caps, seed, report.transitive)
    report.projective_free = projective_free_fps(p, q, max_degree, caps, seed, report.irreducible_exact)
    report.projective_irreducible = projective_irreducible_fps(p, q, max_degree, caps, seed)

    combined = [e for e in report.projective_free if e.verified]
    combined += report.projective_irreducible
    for W, V in itertools.product(report.projective_free, report.projective_irreducible):
        if W.verified and W.degree + V.degree <= max_degree:
            entry = _entry(star(W.set, V.set), f"{W.form} * {V.form}", p, caps, seed)
            if entry.verified:
                combined.append(entry)
            else:
                logger.warning(f"{entry.form} failed re-verification: {entry.report.verdict}")
    report.all = sorted(_dedupe(combined, caps), key=lambda e: (e.degree, len(e.set), str(e.set)))
    logger.info(f"Classification p={p} q={q} degree<={max_degree}: {len(report.all)} fixed point sets")
    return report


def compare(oracle: OracleResult, classification: ClassificationReport, degree: int,
            caps: Optional[Caps] = None) -> Comparison:
    """Match oracle classes and classification entries of one degree by equivalence."""
    caps = caps or DEFAULT_CAPS
    found = {equivalence_key(e.set, caps): str(e.set) for e in oracle.kept}
    predicted = {equivalence_key(e.set, caps): str(e.set) for e in classification.all if e.degree == degree}
    return Comparison(
        agreements=sorted(found[k] for k in found.keys() & predicted.keys()),
        misses=sorted(found[k] for k in found.keys() - predicted.keys()),
        extras=sorted(predicted[k] for k in predicted.keys() - found.keys()),
        ledger_ok=oracle.ledger_ok,
        total_summands=oracle.total_summands,
        ledger_sum=oracle.ledger_sum,
    )


def check_transitive_degrees(oracle: OracleResult, caps: Optional[Caps] = None) -> None:
    """
    Raises:
        TheoremViolation: if a transitive irreducible exact oracle set has
            degree other than q or pq
    """
    caps = caps or DEFAULT_CAPS
    for e in oracle.kept:
        X = e.set
        if is_transitive_set(X) and is_irreducible(X, caps) and is_exact(X, oracle.p, caps):
            if X.degree not in (oracle.q, oracle.p * oracle.q):
                raise TheoremViolation(f"Transitive exact fixed point set of degree {X.degree}", context=str(X))


def verify_against_oracle(p: int, q: int, n: int, caps: Optional[Caps] = None, seed: Optional[int] = None,
                          jobs: int = 1) -> Tuple[ClassificationReport, OracleResult]:
    """
    Run the oracle and the classification for degree qn and compare them

    Returns:
        (classification report with its comparison filled in, oracle result)
    """
    caps = caps or DEFAULT_CAPS
    oracle = broue_oracle(p, q, n, caps, seed=seed, jobs=jobs)
    check_transitive_degrees(oracle, caps)
    classification = all_fps(p, q, q * n, caps, seed)
    classification.comparison = compare(oracle, classification, q * n, caps)
    logger.info(f"verify p={p} q={q} n={n}: {classification.comparison.verdict}")
    return classification, oracle
