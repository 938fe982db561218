"""Cohomology of the general prioritary sheaf on X_m (m <= 5), P^2 and the quadric.

The recursion dualizes when the L-degree of the slope is too negative,
settles the cases that are non-special outright, and otherwise contracts a
(-1)-curve that the slope meets in degree < -1 and tracks the length of
``R^1 pi_*`` that the contraction moves into h^1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .chern import (
    ChernCharacter,
    CohomologyVector,
    contraction_length,
    discriminant,
    euler,
    pushforward,
    serre_dual,
    twist,
)
from .errors import DomainError, EmptyPrioritaryStack
from .goodbundle import weyl_delta_min
from .lattice import Divisor, Surface, minus_one_curves
from .weyl import orbit_min_pairing

__all__ = [
    "CaseTag",
    "ContractionData",
    "BNVerdict",
    "contraction_data",
    "general_cohomology",
    "is_non_special",
    "hirzebruch_verdict",
    "check_supported",
]

MAX_BN_POINTS = 5


class CaseTag(str, Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    BASE_P2 = "BaseP2"
    BASE_HIRZEBRUCH = "BaseHirzebruch"
    BASE_QUADRIC = "BaseQuadric"
    DUALIZED = "Dualized"


@dataclass(frozen=True)
class ContractionData:
    """Splitting ``O(-k-1)^d + O(-k)^(r-d)`` on ``curve``, with 0 <= d < r, and the length m of R^1."""

    curve: Divisor
    k: int
    d: int
    m: int


@dataclass(frozen=True)
class BNVerdict:
    h: CohomologyVector
    case_trace: tuple = field(default=())

    @property
    def non_special(self) -> bool:
        return self.h.non_special

    @property
    def case_tag(self) -> CaseTag:
        return self.case_trace[-1]


def contraction_data(v: ChernCharacter, curve: Divisor) -> ContractionData:
    if v.r < 2:
        raise DomainError("contraction data is defined for rank >= 2")
    deg = v.c1.dot(curve)  # r * nu.C
    k = math.floor(Fraction(-deg, v.r))  # -1 < nu.C + k <= 0
    d = -(deg + v.r * k)
    assert 0 <= d < v.r and -(v.r * k + d) == deg
    return ContractionData(curve, k, d, contraction_length(v.r, k, d))


def check_supported(surface: Surface):
    if not surface.is_quadric and surface.m > MAX_BN_POINTS:
        raise DomainError(f"Brill-Noether classification needs m <= {MAX_BN_POINTS}, got {surface}")


def _check_input(v: ChernCharacter):
    check_supported(v.surface)
    if v.r < 2:
        raise DomainError("rank must be at least 2; use lbcoh for line bundles")
    floor = weyl_delta_min(v.r, v.nu)
    if discriminant(v) < floor:
        raise EmptyPrioritaryStack(
            f"discriminant {discriminant(v)} is below the prioritary floor {floor}"
        )


def _nonspecial_vector(chi: int) -> CohomologyVector:
    return CohomologyVector(max(chi, 0), max(-chi, 0), 0)


def _h1_only(v: ChernCharacter) -> CohomologyVector:
    chi = euler(v)
    assert chi <= 0, f"h0 = h2 = 0 forces chi <= 0, got chi = {chi} for {v}"
    return CohomologyVector(0, -chi, 0)


@lru_cache(maxsize=4096)
def _case2(nu: Divisor) -> bool:
    s = nu.surface
    if s.m == 1:
        return nu.dot(s.L) <= -1 or nu.dot(s.L - s.E(1)) <= -1
    return orbit_min_pairing(nu, s.L) <= -1 or orbit_min_pairing(nu, s.L - s.E(1)) <= -1


@lru_cache(maxsize=4096)
def _negative_curves(nu: Divisor) -> tuple:
    return tuple(c for c in minus_one_curves(nu.surface) if nu.dot(c) < -1)


def _curve_key(nu: Divisor):
    return lambda c: (nu.dot(c), c.coeffs)


def _default_choice(nu: Divisor, candidates: Sequence[Divisor]) -> Divisor:
    return min(candidates, key=_curve_key(nu))


def general_cohomology(
    v: ChernCharacter,
    choose: Callable[[Divisor, Sequence[Divisor]], Divisor] | None = None,
) -> BNVerdict:
    """(h0, h1, h2) of the general sheaf in the prioritary stack of ``v``.

    ``choose(nu, candidates)`` picks the curve to contract in the recursive
    case; any choice gives the same answer.
    """
    _check_input(v)
    return _solve(v, choose or _default_choice)


def _solve(v: ChernCharacter, choose) -> BNVerdict:
    s = v.surface
    nu = v.nu
    if s.is_quadric:
        x, y = nu.coeffs[1], nu.coeffs[0]  # pairings with F1 and F2
        if x < -1 and y < -1:
            inner = _solve(serre_dual(v), choose)
            return BNVerdict(inner.h.reversed(), (CaseTag.DUALIZED,) + inner.case_trace)
        if x <= -1 or y <= -1:
            return BNVerdict(_h1_only(v), (CaseTag.BASE_QUADRIC,))
        return BNVerdict(_nonspecial_vector(euler(v)), (CaseTag.BASE_QUADRIC,))

    if nu.a < -2:
        inner = _solve(serre_dual(v), choose)
        return BNVerdict(inner.h.reversed(), (CaseTag.DUALIZED,) + inner.case_trace)
    if s.m == 0:
        return BNVerdict(_nonspecial_vector(euler(v)), (CaseTag.BASE_P2,))
    if _case2(nu):
        return BNVerdict(_h1_only(v), (CaseTag.CASE2,))
    negative = _negative_curves(nu)
    if not negative:
        return BNVerdict(_nonspecial_vector(euler(v)), (CaseTag.CASE1,))
    curve = choose(nu, negative)
    data = contraction_data(v, curve)
    w, m = pushforward(v, curve, data.k, data.d)
    inner = _solve(w, choose)
    assert inner.h.h2 == 0, "h2 of the pushforward must vanish here"
    h = CohomologyVector(inner.h.h0, inner.h.h1 + m, 0)
    assert h.euler == euler(v)
    return BNVerdict(h, (CaseTag.CASE3,) + inner.case_trace)


def _disjoint_maximal_collections(curves: Sequence[Divisor]):
    """Collections of pairwise disjoint curves that no further curve can extend."""
    n = len(curves)
    found = []
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            chosen = [curves[i] for i in combo]
            if any(p.dot(q) != 0 for p, q in combinations(chosen, 2)):
                continue
            if any(all(curves[j].dot(c) == 0 for c in chosen) for j in range(n) if j not in combo):
                continue
            found.append(chosen)
    return found


def is_non_special(v: ChernCharacter) -> bool:
    """Closed-form non-speciality test, without running the contraction recursion."""
    _check_input(v)
    s = v.surface
    if s.is_quadric or s.m == 0:
        return _solve(v, _default_choice).non_special
    if v.nu.a < -2:
        v = serre_dual(v)
    nu = v.nu
    if _case2(nu):
        return True
    negative = [c for c in minus_one_curves(s) if nu.dot(c) < -1]
    if not negative:
        return True
    collections = _disjoint_maximal_collections(negative)
    smallest = min(len(c) for c in collections)
    best = [c for c in collections if len(c) == smallest]
    verdicts = {euler(v) <= -sum(contraction_data(v, c).m for c in chosen) for chosen in best}
    assert len(verdicts) == 1, "minimal collections disagree"
    return verdicts.pop()


def hirzebruch_verdict(e: int, v: ChernCharacter) -> BNVerdict:
    """General-sheaf cohomology on F_0 (the quadric) or F_1 (= X_1) by the fiber/section rules."""
    if e not in (0, 1):
        raise DomainError("only F_0 and F_1 are del Pezzo")
    s = v.surface
    if e == 0 and not s.is_quadric:
        raise DomainError("F_0 queries live on the quadric")
    if e == 1 and (s.is_quadric or s.m != 1):
        raise DomainError("F_1 queries live on X1")
    if v.r < 1:
        raise DomainError("positive rank required")
    if e == 1:
        fiber, section = s.L - s.E(1), s.E(1)
    else:
        fiber, section = s.F(1), s.F(2)
    nu = v.nu
    if nu.dot(fiber) < -1:
        inner = hirzebruch_verdict(e, serre_dual(v))
        return BNVerdict(inner.h.reversed(), (CaseTag.DUALIZED,) + inner.case_trace)
    tag = (CaseTag.BASE_HIRZEBRUCH,)
    if nu.dot(fiber) == -1:
        return BNVerdict(_h1_only(v), tag)
    if nu.dot(section) >= -1:
        return BNVerdict(_nonspecial_vector(euler(v)), tag)
    m = 1
    while True:
        shifted = nu - section * m
        if shifted.dot(fiber) <= -1:
            return BNVerdict(_h1_only(v), tag)
        if shifted.dot(section) >= -1:
            break
        m += 1
    h0 = max(euler(twist(v, section * -m)), 0)
    return BNVerdict(CohomologyVector(h0, h0 - euler(v), 0), tag)
