"""Nonemptiness of moduli of anticanonically semistable sheaves on X_m, m <= 6.

The Drezet-Le Potier test is run against every *numerically* exceptional
character (``chi(E, E) = 1``) of smaller rank in the relevant slope window.
Numerical candidates may include classes realized by no exceptional bundle,
so a failure is reported as a numerical certificate, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .chern import ChernCharacter, discriminant, euler_pair, twist
from .errors import DomainError
from .lattice import Divisor, Surface, canonical
from .weyl import simple_roots

__all__ = [
    "anticanonical_degree",
    "is_numerically_exceptional",
    "exceptional_candidates",
    "DLResult",
    "dl_condition",
    "is_primitive",
    "Verdict",
    "ExistenceVerdict",
    "classify",
]

MAX_EXISTENCE_POINTS = 6


def anticanonical_degree(v: ChernCharacter) -> Fraction:
    """``mu(v) = nu(v).(-K)``, not divided by K^2."""
    if v.r < 1:
        raise DomainError("rank 0 has no slope")
    return Fraction(v.c1.dot(-canonical(v.surface)), v.r)


def is_numerically_exceptional(v: ChernCharacter) -> bool:
    return v.r >= 1 and euler_pair(v, v) == 1


def _check_surface(s: Surface):
    if s.is_quadric:
        raise DomainError("existence on the quadric is out of scope")
    if s.m > MAX_EXISTENCE_POINTS:
        raise DomainError(f"existence needs m <= {MAX_EXISTENCE_POINTS}, got {s}")


@lru_cache(maxsize=None)
def _orthogonal_basis(s: Surface) -> tuple:
    """A Z-basis of the orthogonal complement of K in Pic(X_m)."""
    if s.m == 0:
        return ()
    if s.m >= 3:
        basis = simple_roots(s)
    else:
        basis = [Divisor(s, (1, 3) + (0,) * (s.m - 1))]
        basis += [s.E(i + 1) - s.E(i) for i in range(1, s.m)]
    gram = [[x.dot(y) for y in basis] for x in basis]
    assert abs(_det(gram)) == s.K2, "orthogonal basis does not span K-perp"
    return tuple(basis)


def _det(mat) -> Fraction:
    m = [[Fraction(x) for x in row] for row in mat]
    n, det = len(m), Fraction(1)
    for i in range(n):
        pivot = next((j for j in range(i, n) if m[j][i] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        for j in range(i + 1, n):
            f = m[j][i] / m[i][i]
            m[j] = [a - f * b for a, b in zip(m[j], m[i])]
    return det


def _solve(mat, rhs) -> list:
    n = len(mat)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for i in range(n):
        pivot = next(j for j in range(i, n) if m[j][i] != 0)
        m[i], m[pivot] = m[pivot], m[i]
        for j in range(n):
            if j != i and m[j][i] != 0:
                f = m[j][i] / m[i][i]
                m[j] = [a - f * b for a, b in zip(m[j], m[i])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _ldl(gram):
    """``G = U^T diag(D) U`` with U unit upper triangular, exactly."""
    n = len(gram)
    d = [Fraction(0)] * n
    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        d[i] = gram[i][i] - sum(d[k] * u[k][i] ** 2 for k in range(i))
        for j in range(i + 1, n):
            u[i][j] = (gram[i][j] - sum(d[k] * u[k][i] * u[k][j] for k in range(i))) / d[i]
    return d, u


def _close_vectors(gram, center, radius) -> Iterator[tuple]:
    """Integer z with ``(z - center)^T gram (z - center) <= radius`` (gram positive definite)."""
    n = len(gram)
    if radius < 0:
        return
    if n == 0:
        yield ()
        return
    d, u = _ldl(gram)
    z = [0] * n

    def rec(i, budget):
        shift = sum(u[i][j] * (z[j] - center[j]) for j in range(i + 1, n))
        mid = center[i] - shift
        half = math.sqrt(float(budget / d[i])) + 1
        for zi in range(math.floor(mid - half), math.ceil(mid + half) + 1):
            term = d[i] * (zi - mid) ** 2
            if term > budget:
                continue
            z[i] = zi
            if i == 0:
                yield tuple(z)
            else:
                yield from rec(i - 1, budget - term)

    yield from rec(n - 1, Fraction(radius))


def _exceptional_ch2(rank: int, c1: Divisor):
    """ch2 forced by chi(E, E) = 1, or None if c2 would not be integral."""
    c2 = Fraction((rank - 1) * c1.square + rank * rank - 1, 2 * rank)
    if c2.denominator != 1:
        return None
    return Fraction(c1.square, 2) - c2


def exceptional_candidates(
    surface: Surface,
    rank_below: int,
    mu_window: tuple,
    v_for_bound: ChernCharacter,
    pairing: str | None = None,
) -> list:
    """Numerically exceptional characters of rank < ``rank_below`` with mu in the closed window.

    With ``v_for_bound`` only candidates that could pair positively with it
    are kept (``pairing`` ``"left"`` for chi(E, v), ``"right"`` for chi(v, E),
    ``None`` for either); every dropped candidate provably pairs to <= 0.
    """
    return list(_iter_candidates(surface, rank_below, mu_window, v_for_bound, pairing))


def _iter_candidates(surface, rank_below, mu_window, v_for_bound, pairing):
    """Lazy form of ``exceptional_candidates``, lowest rank first."""
    _check_surface(surface)
    if v_for_bound is None:
        raise DomainError("the candidate set is infinite without v_for_bound")
    lo, hi = Fraction(mu_window[0]), Fraction(mu_window[1])
    k2 = surface.K2
    mk = -canonical(surface)
    e1 = surface.E(1) if surface.m else None
    basis = _orthogonal_basis(surface)
    gram_pos = [[-x.dot(y) for y in basis] for x in basis]
    for rank in range(1, rank_below):
        delta_e = Fraction(rank * rank - 1, 2 * rank * rank)
        for n in range(math.ceil(rank * lo), math.floor(rank * hi) + 1):
            if surface.m == 0:
                if n % 3:
                    continue
                anchor = surface.L * (n // 3)
            else:
                anchor = e1 * n
            assert anchor.dot(mk) == n
            mu_v = Fraction(v_for_bound.c1.dot(mk), v_for_bound.r)
            s_left = (Fraction(n, rank) - mu_v) / k2
            choices = {"left": [s_left], "right": [-s_left], None: [s_left, -s_left]}[pairing]
            rho = max(
                2 * (1 - delta_e - discriminant(v_for_bound)) - s * (1 - s) * k2 for s in choices
            )
            if rho < 0:
                continue
            # rank * (nu_v - nu_E) projected to K-perp is c - sum z_j beta_j
            target = v_for_bound.c1 * Fraction(rank, v_for_bound.r) - anchor
            proj = target - canonical(surface) * Fraction(target.dot(canonical(surface)), k2)
            center = _solve([[x.dot(y) for y in basis] for x in basis], [proj.dot(x) for x in basis]) if basis else []
            for z in _close_vectors(gram_pos, center, rho * rank * rank):
                c1 = anchor
                for zj, beta in zip(z, basis):
                    c1 = c1 + beta * zj
                ch2 = _exceptional_ch2(rank, c1)
                if ch2 is None:
                    continue
                e = ChernCharacter(surface, rank, c1, ch2)
                assert is_numerically_exceptional(e)
                yield e


@dataclass(frozen=True)
class DLResult:
    holds: bool
    witness: ChernCharacter | None = None
    window: str | None = None  # "DL1" or "DL2" for a failure
    shortcut: bool = False


def _scan(v: ChernCharacter, window: str, line_bundles_only: bool):
    mu, k2 = anticanonical_degree(v), v.surface.K2
    if window == "DL1":
        bounds, pairing = (mu, mu + k2), "left"
    else:
        bounds, pairing = (mu - k2, mu), "right"
    rank_below = 2 if line_bundles_only else v.r
    for e in _iter_candidates(v.surface, rank_below, bounds, v, pairing):
        value = euler_pair(e, v) if window == "DL1" else euler_pair(v, e)
        if value > 0:
            return e
    return None


def dl_condition(v: ChernCharacter, *, full_scan: bool = False, line_bundles_only: bool = False) -> DLResult:
    """Check both DL windows; the two are exchanged by ``E -> E (x) K``."""
    _check_surface(v.surface)
    if v.r < 2:
        raise DomainError("the DL condition is posed for rank >= 2")
    if not full_scan and discriminant(v) >= 1:
        return DLResult(True, shortcut=True)
    w1 = _scan(v, "DL1", line_bundles_only)
    w2 = _scan(v, "DL2", line_bundles_only)
    assert (w1 is None) == (w2 is None), "DL1 and DL2 scans disagree"
    k = canonical(v.surface)
    if w1 is not None:
        dual = twist(w1, k)
        assert euler_pair(v, dual) == euler_pair(w1, v) > 0
        return DLResult(False, w1, "DL1")
    return DLResult(True)


def is_primitive(v: ChernCharacter) -> bool:
    c2 = v.c2
    if not isinstance(c2, int):
        raise DomainError("primitivity needs an integral character")
    return math.gcd(v.r, c2, *v.c1.coeffs) == 1


class Verdict(str, Enum):
    STABLE_NONEMPTY = "StableNonempty"
    SEMISTABLE_ONLY = "SemistableNonemptyStableEmpty"
    NO_NONEXCEPTIONAL_STABLE = "NoNonexceptionalStable"
    OUTSIDE_SCOPE = "OutsideScope"


@dataclass(frozen=True)
class ExistenceVerdict:
    verdict: Verdict
    witness: ChernCharacter | None = None
    reason: str | None = None
    dl: DLResult | None = None


def classify(v: ChernCharacter) -> ExistenceVerdict:
    _check_surface(v.surface)
    if v.r < 2:
        raise DomainError("classification is for rank >= 2")
    delta = discriminant(v)
    if delta < Fraction(1, 2):
        return ExistenceVerdict(
            Verdict.OUTSIDE_SCOPE,
            reason="discriminant below 1/2: semi-exceptional range, strictly semistable moduli may exist",
        )
    dl = dl_condition(v)
    if not dl.holds:
        return ExistenceVerdict(
            Verdict.NO_NONEXCEPTIONAL_STABLE,
            witness=dl.witness,
            reason="DL condition fails against a numerically exceptional candidate",
            dl=dl,
        )
    if delta > Fraction(1, 2) or is_primitive(v):
        return ExistenceVerdict(Verdict.STABLE_NONEMPTY, dl=dl)
    return ExistenceVerdict(Verdict.SEMISTABLE_ONLY, reason="discriminant 1/2 and v not primitive", dl=dl)
