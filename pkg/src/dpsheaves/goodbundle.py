"""Good bundles: the minimal-discriminant direct sums of line bundles.

For a rank r and total slope nu there is a unique twist D and data
``(a, b, d_1..d_m)`` such that nu is the slope of
``O(-2L)^a + O(-L)^b`` modified along ``d_i`` copies of ``O_{E_i}(-1)``
and then twisted by D.  The modification is realized by distributing the
``E_i`` among the summands from left to right, re-sorting between steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chern import ChernCharacter, CohomologyVector, direct_sum, discriminant, line_bundle
from .errors import DomainError
from .lattice import Divisor, Surface, canonical
from .lbcoh import h_vector
from .weyl import group_matrices

__all__ = [
    "GoodBundle",
    "normalize_slope",
    "construct",
    "delta_min",
    "delta_min_closed_form",
    "weyl_delta_min",
    "weyl_prioritary_nonempty",
    "prioritary_nonempty",
    "good_bundle_h_vector",
    "quadric_pullback",
    "format_summands",
    "build_from_data",
]


@dataclass(frozen=True)
class GoodBundle:
    surface: Surface
    r: int
    summands: tuple  # ordered Divisors, twist included
    twist: Divisor
    a: int
    b: int
    d: tuple

    @property
    def character(self) -> ChernCharacter:
        return direct_sum(line_bundle(x) for x in self.summands)

    @property
    def untwisted(self) -> tuple:
        return tuple(x - self.twist for x in self.summands)

    def __str__(self) -> str:
        return format_summands(self.summands)


def format_summands(summands) -> str:
    """``O(-2L+E1) + O(-L)^2`` style, grouping consecutive equal summands."""
    groups = []
    for x in summands:
        if groups and groups[-1][0] == x:
            groups[-1][1] += 1
        else:
            groups.append([x, 1])
    return " + ".join(f"O({x})" + (f"^{n}" if n > 1 else "") for x, n in groups)


def _check(r: int, nu: Divisor):
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"rank must be a positive integer, got {r!r}")
    if nu.surface.is_quadric:
        raise DomainError("good bundles are built on X_m; pull quadric slopes back to X_2")
    if not (nu * r).is_integral:
        raise DomainError(f"r * nu = {nu * r} is not integral")


def normalize_slope(r: int, nu: Divisor):
    """Return ``(D, a, b, d)`` with ``(nu - D).L`` in (-2, -1] and ``(nu - D).E_i`` in (-1, 0]."""
    _check(r, nu)
    s = nu.surface
    coeffs = (math.ceil(nu.a) + 1,) + tuple(math.ceil(beta) for beta in nu.b)
    twist = Divisor(s, coeffs)
    rest = nu - twist
    a = r * (-1 - rest.a)
    d = tuple(r * rest.dot(s.E(i)) * -1 for i in range(1, s.m + 1))
    a, d = int(a), tuple(int(x) for x in d)
    assert 0 <= a < r and all(0 <= x < r for x in d)
    return twist, a, r - a, d


def _order_key(d: Divisor):
    s = d.surface
    return (d.dot(-canonical(s)), -d.a, tuple(d.dot(s.E(i)) for i in range(1, s.m + 1)))


def build_from_data(surface: Surface, a: int, b: int, d, twist: Divisor | None = None) -> tuple:
    """Run the distribution steps on ``O(-2L)^a + O(-L)^b`` with the given ``d_i``."""
    r = a + b
    if len(d) != surface.m:
        raise DomainError(f"need {surface.m} values d_i, got {len(d)}")
    if any(not 0 <= x <= r for x in d):
        raise DomainError(f"each d_i must lie in [0, {r}]")
    row = [surface.L * -2] * a + [-surface.L] * b
    for i, di in enumerate(d, 1):
        e = surface.E(i)
        row = [x + e if j < di else x for j, x in enumerate(row)]
        row.sort(key=_order_key)
    if twist is not None:
        row = [x + twist for x in row]
    return tuple(row)


def construct(r: int, nu: Divisor) -> GoodBundle:
    twist, a, b, d = normalize_slope(r, nu)
    summands = build_from_data(nu.surface, a, b, d, twist)
    g = GoodBundle(nu.surface, r, summands, twist, a, b, d)
    assert g.character.c1 == nu * r
    return g


def delta_min_closed_form(r: int, a: int, b: int, d) -> Fraction:
    """Discriminant of the base sum plus the shift ``d(r-d)/(2r^2)`` per curve."""
    base = Fraction((2 * a + b) ** 2, 2 * r * r) - Fraction(4 * a + b, 2 * r)
    return base + sum(Fraction(x * (r - x), 2 * r * r) for x in d)


def quadric_pullback(d: Divisor) -> Divisor:
    """Pull a class on the quadric back to X_2, with ``F_1 -> L-E_1`` and ``F_2 -> L-E_2``."""
    x2 = Surface.blowup(2)
    f1, f2 = d.coeffs
    return (x2.L - x2.E(1)) * f1 + (x2.L - x2.E(2)) * f2


@lru_cache(maxsize=65536)
def delta_min(r: int, nu: Divisor) -> Fraction:
    """Smallest discriminant of a prioritary sheaf of rank r and total slope nu."""
    if nu.surface.is_quadric:
        nu = quadric_pullback(nu)
    g = construct(r, nu)
    value = discriminant(g.character)
    assert value == delta_min_closed_form(r, g.a, g.b, g.d)
    return value


@lru_cache(maxsize=65536)
def weyl_delta_min(r: int, nu: Divisor) -> Fraction:
    """Largest ``delta_min(r, sigma(nu))`` over the Weyl group.

    A sheaf prioritary with respect to every translate ``sigma(L)`` needs
    the discriminant floor of each frame, so this is the floor for that stack.
    The closed form only sees ``r sigma(nu)`` modulo r, so the whole orbit is
    scored at once with integer arithmetic.
    """
    if nu.surface.is_quadric:
        nu = quadric_pullback(nu)
    _check(r, nu)
    s = nu.surface
    c1 = np.array([int(x) for x in (nu * r).coeffs], dtype=np.int64)
    images = group_matrices(s) @ c1
    a = (-images[:, 0]) % r
    b = r - a
    d = (-images[:, 1:]) % r
    score = (2 * a + b) ** 2 - r * (4 * a + b) + (d * (r - d)).sum(axis=1)
    best = int(score.argmax())
    value = Fraction(int(score[best]), 2 * r * r)
    witness = Divisor(s, tuple(Fraction(int(x), r) for x in images[best]))
    assert value == delta_min(r, witness)
    return value


def weyl_prioritary_nonempty(v: ChernCharacter) -> bool:
    """Necessary condition for sheaves prioritary with respect to every Weyl translate of L."""
    if v.r < 2:
        raise DomainError("prioritary stacks are considered for rank >= 2")
    return discriminant(v) >= weyl_delta_min(v.r, v.nu)


def prioritary_nonempty(v: ChernCharacter) -> bool:
    if v.r < 2:
        raise DomainError("prioritary stacks are considered for rank >= 2")
    return discriminant(v) >= delta_min(v.r, v.nu)


def good_bundle_h_vector(g: GoodBundle, twist: Divisor | None = None) -> CohomologyVector:
    total = CohomologyVector(0, 0, 0)
    for x in g.summands:
        total = total + h_vector(x if twist is None else x + twist)
    return total
