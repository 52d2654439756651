"""Constructive spread-approximation procedures.

All searches are exact and exhaustive over subsets of members, with the
deterministic tie-break (largest score, then smallest size, then
lexicographically smallest rank tuple).  Guarantees that only hold for
large n are reported as flags; only the unconditional ones raise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ._exact import as_fraction, ceil_power
from .errors import (
    InvalidInput,
    InvariantViolation,
    PreconditionViolation,
    ResourceLimit,
    UndefinedRatio,
)
from .family import (
    SetFamily,
    SpreadReport,
    concentration,
    is_t_intersecting,
    quotient,
    restrict,
    restrict_over_family,
    spreadness_check,
    subset_counts,
)

DEFAULT_SEARCH_CAP = 2 ** 22


# ---------------------------------------------------------------- weight rules

class WeightRule:
    """Positive weight w(s) attached to restriction sets of size s.

    Scores |A[S]| * w(|S|) need not be rational, so a rule exposes
    ``power(s) = w(s) ** degree`` for a fixed integer ``degree``; comparing
    ``|A[S]| ** degree * power(|S|)`` is exact and order-preserving.
    """

    degree: int = 1

    def power(self, size: int) -> Fraction:
        raise NotImplementedError

    def weight(self, size: int) -> float:
        return float(self.power(size)) ** (1.0 / self.degree)


@dataclass(frozen=True)
class GeometricWeight(WeightRule):
    """w(s) = base ** s."""

    base: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        if self.base <= 0:
            raise InvalidInput("geometric weight needs a positive base")

    def power(self, size: int) -> Fraction:
        return self.base ** size


class ConcentrationPowerWeight(WeightRule):
    """w(s) = d_s(U) ** (-2 delta) for a context family U and rational delta."""

    def __init__(self, context: SetFamily, delta):
        self.context = context
        self.delta = as_fraction(delta)
        if self.delta <= 0:
            raise InvalidInput("delta must be positive")
        self.degree = self.delta.denominator
        self._d: dict[int, Fraction] = {}

    def d(self, size: int) -> Fraction:
        if size not in self._d:
            self._d[size] = concentration(self.context, size).d
        return self._d[size]

    def power(self, size: int) -> Fraction:
        d = self.d(size)
        if d == 0:
            raise UndefinedRatio(f"d_{size} of the context family is 0")
        return d ** (-2 * self.delta.numerator)


class WeightedArgmax(NamedTuple):
    subset: frozenset[int]
    score_power: Fraction
    degree: int
    count: int

    @property
    def score(self):
        """|A[S]| * w(|S|): exact when the rule is rational, else a float."""
        if self.degree == 1:
            return self.score_power
        return float(self.score_power) ** (1.0 / self.degree)


def argmax_weighted_restriction(
    a: SetFamily,
    rule: WeightRule,
    size_cap: int | None = None,
    work_cap: int = DEFAULT_SEARCH_CAP,
) -> WeightedArgmax:
    """S maximizing |a[S]| * w(|S|) over ∅ and all subsets of members."""
    if not len(a):
        raise InvalidInput("argmax over an empty family")
    counts = subset_counts(a, size_cap)
    if len(counts) > work_cap:
        raise ResourceLimit(f"{len(counts)} candidate sets exceed cap {work_cap}")
    # best count per size (lex-smallest on ties), then compare across sizes
    per_size: dict[int, tuple[int, tuple[int, ...]]] = {}
    for s, cnt in counts.items():
        key = tuple(sorted(s))
        cur = per_size.get(len(s))
        if cur is None or cnt > cur[0] or (cnt == cur[0] and key < cur[1]):
            per_size[len(s)] = (cnt, key)
    best = None
    for size in sorted(per_size):
        cnt, key = per_size[size]
        sp = cnt ** rule.degree * rule.power(size)
        if best is None or sp > best[0]:
            best = (sp, size, key, cnt)
    sp, _, key, cnt = best
    return WeightedArgmax(frozenset(key), sp, rule.degree, cnt)


# --------------------------------------------------------- spread restrictions

@dataclass(frozen=True)
class SpreadRestriction:
    subset: frozenset[int]
    quotient_report: SpreadReport
    size_bound: float
    size_bound_holds: bool
    score: Fraction


def find_spread_restriction(
    a: SetFamily,
    u: SetFamily,
    r,
    r_prime,
    assume_u_spread: bool = True,
) -> SpreadRestriction:
    """Find S with a(S) r'-spread and |S| <= log(|u|/|a|) / log(r/r').

    S maximizes |a[S]| r'^|S|.  Spreadness of the quotient follows from that
    maximality alone and is always enforced.  The size bound additionally
    needs u to be r-spread; it is enforced when ``assume_u_spread``.
    """
    r, r_prime = as_fraction(r), as_fraction(r_prime)
    if not 0 < r_prime < r:
        raise InvalidInput(f"need 0 < r' < r, got r' = {r_prime}, r = {r}")
    if not len(a):
        raise InvalidInput("empty family")
    if not a.issubfamily(u):
        raise PreconditionViolation("a must be a subfamily of u")
    best = argmax_weighted_restriction(a, GeometricWeight(r_prime))
    s = best.subset
    report = spreadness_check(quotient(a, s), r_prime)
    if not report.holds:
        raise InvariantViolation(
            f"quotient by maximizer {sorted(s)} is not {r_prime}-spread "
            f"(ratio {report.worst_ratio})"
        )
    # |s| <= log(|u|/|a|)/log(r/r')  <=>  (r/r')^|s| * |a| <= |u|
    holds = (r / r_prime) ** len(s) * len(a) <= len(u)
    bound = math.log(len(u) / len(a)) / math.log(r / r_prime)
    if assume_u_spread and not holds:
        raise InvariantViolation(
            f"|S| = {len(s)} exceeds log(|u|/|a|)/log(r/r') = {bound:.4f}"
        )
    return SpreadRestriction(s, report, bound, holds, best.score_power)


# --------------------------------------------------------------- density boost

def delta_admissible(eps, delta) -> bool:
    """0 < delta < 1/6 and 12 delta (1 - ln delta) < eps."""
    eps, delta = float(as_fraction(eps)), float(as_fraction(delta))
    return 0 < delta < 1 / 6 and 12 * delta * (1 - math.log(delta)) < eps


def density_boost_hypothesis(r, n: int) -> bool:
    """r > n^0.99."""
    return float(as_fraction(r)) > n ** 0.99


def strong_approximation_hypothesis(r, eps, t: int, n: int) -> bool:
    """r > max(20 eps t, sqrt(n))."""
    r, eps = as_fraction(r), as_fraction(eps)
    if r <= 20 * eps * t:
        return False
    # r > sqrt(n)  <=>  r^2 > n
    return r * r > n


@dataclass(frozen=True)
class DensityBoostResult:
    x: frozenset[int]
    ratio: Fraction
    threshold: float
    target_size: int
    member_size: int
    meets_threshold: bool
    boost_set: frozenset[int]
    boost_set_small: bool
    incidence: int
    delta_admissible: bool


def density_boost_target(member_size: int, t: int, delta) -> int:
    """t - ceil(m ** (1 - delta)) for member size m."""
    return t - ceil_power(member_size, 1 - as_fraction(delta))


def density_boost_search(
    a: SetFamily,
    u: SetFamily,
    t: int,
    eps,
    delta,
    cap: int = DEFAULT_SEARCH_CAP,
) -> DensityBoostResult:
    """Exhaustively find the t'-set X maximizing |a[X]|, t' = t - ceil(m^(1-delta)).

    Also runs the auxiliary maximization of d_|S|(u)^(-2 delta) |a[S]| and
    reports the incidence count sum_A C(|A ∩ S|, t').  Nothing here is
    asserted: the comparison with e^(-eps t) is only guaranteed for large n.
    """
    eps, delta = as_fraction(eps), as_fraction(delta)
    if not len(a):
        raise InvalidInput("empty family")
    if t < 1:
        raise InvalidInput("t must be at least 1")
    if not 0 < delta < Fraction(1, 6):
        raise InvalidInput("delta must lie in (0, 1/6)")
    if not a.issubfamily(u):
        raise PreconditionViolation("a must be a subfamily of u")
    m = u.max_member_size()
    target = density_boost_target(m, t, delta)
    if target < 0:
        raise InvalidInput(
            f"target size t - ceil({m}^(1-{delta})) = {target} is negative"
        )
    work = sum(math.comb(len(f), target) for f in a.members)
    if work > cap:
        raise ResourceLimit(f"{work} candidate {target}-sets exceed cap {cap}")
    counts: dict[tuple[int, ...], int] = {}
    for f in a.members:
        for combo in itertools.combinations(sorted(f), target):
            counts[combo] = counts.get(combo, 0) + 1
    best_count = max(counts.values())
    x = frozenset(min(k for k, v in counts.items() if v == best_count))
    ratio = Fraction(best_count, len(a))
    threshold = math.exp(-float(eps) * t)

    boost = argmax_weighted_restriction(a, ConcentrationPowerWeight(u, delta)).subset
    incidence = sum(math.comb(len(f & boost), target) for f in a.members)
    return DensityBoostResult(
        x=x,
        ratio=ratio,
        threshold=threshold,
        target_size=target,
        member_size=m,
        meets_threshold=float(ratio) >= threshold,
        boost_set=boost,
        boost_set_small=len(boost) <= (1 + 6 * delta) * t,
        incidence=incidence,
        delta_admissible=delta_admissible(eps, delta),
    )


# --------------------------------------------------------------------- peeling

@dataclass(frozen=True)
class PeelStep:
    core: frozenset[int]
    quotient_report: SpreadReport
    size_before: int
    size_after: int
    removed: SetFamily
    core_small: bool


@dataclass(frozen=True)
class PeelResult:
    cores: tuple[frozenset[int], ...]
    residual: SetFamily
    steps: tuple[PeelStep, ...]
    stop_threshold: Fraction
    cores_small: bool
    cores_t_intersecting: bool

    def core_family(self, universe) -> SetFamily:
        return SetFamily(universe, tuple(dict.fromkeys(self.cores)))


def spread_approximation(
    a: SetFamily,
    u: SetFamily,
    t: int,
    r,
    eps,
    stop_threshold=None,
) -> PeelResult:
    """Peel ``a`` into cores Y_1..Y_s plus a small residual.

    Each step takes Y_i = find_spread_restriction(A_i, u, r, r/2) and
    removes the members of A_i that contain Y_i.  The loop stops once
    |A_i| <= stop_threshold (default c_t(u) / 1000) or A_i is empty.
    """
    r, eps = as_fraction(r), as_fraction(eps)
    if stop_threshold is None:
        stop = Fraction(concentration(u, t).c, 1000) if len(u) else Fraction(0)
    else:
        stop = as_fraction(stop_threshold)
    if stop < 0:
        raise InvalidInput("stop threshold must be non-negative")
    if not a.issubfamily(u):
        raise PreconditionViolation("a must be a subfamily of u")
    current = a
    steps = []
    while len(current) and len(current) > stop:
        found = find_spread_restriction(current, u, r, r / 2, assume_u_spread=False)
        y = found.subset
        removed = restrict(current, y)
        rest = current.minus(removed)
        steps.append(
            PeelStep(
                core=y,
                quotient_report=found.quotient_report,
                size_before=len(current),
                size_after=len(rest),
                removed=removed,
                core_small=len(y) <= (1 + eps) * t,
            )
        )
        current = rest
    cores = tuple(s.core for s in steps)
    core_family = SetFamily.of(a.universe, cores)
    return PeelResult(
        cores=cores,
        residual=current,
        steps=tuple(steps),
        stop_threshold=stop,
        cores_small=all(s.core_small for s in steps),
        cores_t_intersecting=is_t_intersecting(core_family, t),
    )


# ---------------------------------------------------------- structure bound

@dataclass(frozen=True)
class StructureBound:
    witness: frozenset[int] | None
    ratio: Fraction
    covered: int
    best_t_set: frozenset[int] | None
    s_t_intersecting: bool


def is_trivial(s: SetFamily, t: int) -> bool:
    """All members of a nonempty ``s`` share some common t-set."""
    if not len(s):
        return False
    common = frozenset.intersection(*s.members)
    return len(common) >= t


def verify_structure_bound(a: SetFamily, s: SetFamily, t: int, eps) -> StructureBound:
    """Look for a t-set T with |a[s]| <= eps |a[T]|; report the best ratio.

    The best ratio min_T |a[s]| / |a[T]| is attained at the T maximizing
    |a[T]|, i.e. at the argmax of c_t(a).
    """
    eps = as_fraction(eps)
    if is_trivial(s, t):
        raise PreconditionViolation(f"the core family is trivial (shares a {t}-set)")
    covered = len(restrict_over_family(a, s))
    if not len(a):
        raise UndefinedRatio("empty family")
    conc = concentration(a, t)
    if conc.c == 0:
        raise UndefinedRatio(f"no member of a has {t} elements")
    ratio = Fraction(covered, conc.c)
    return StructureBound(
        witness=conc.argmax if ratio <= eps else None,
        ratio=ratio,
        covered=covered,
        best_t_set=conc.argmax,
        s_t_intersecting=is_t_intersecting(s, t),
    )
