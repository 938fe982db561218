"""Chern characters on supported surfaces and their Riemann-Roch calculus."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError, ParseError
from .lattice import (
    Divisor,
    Surface,
    _exact,
    canonical,
    format_divisor,
    format_rational,
    is_minus_one_class,
    parse_divisor,
    parse_rational,
)

__all__ = [
    "ChernCharacter",
    "CohomologyVector",
    "line_bundle",
    "direct_sum",
    "slope",
    "discriminant",
    "hilbert_P",
    "euler",
    "euler_pair",
    "euler_pair_slopes",
    "serre_dual",
    "twist",
    "elementary_modification",
    "et_discriminant_shift",
    "contraction_length",
    "blowdown",
    "pushforward",
    "parse_character",
    "format_character",
]


@dataclass(frozen=True)
class ChernCharacter:
    """``(r, c1, ch2)``; ``c2 = c1^2/2 - ch2`` must be an integer."""

    surface: Surface
    r: int
    c1: Divisor
    ch2: int | Fraction

    def __post_init__(self):
        if not isinstance(self.r, int) or isinstance(self.r, bool) or self.r < 0:
            raise DomainError(f"rank must be a nonnegative integer, got {self.r!r}")
        if self.c1.surface != self.surface:
            raise DomainError("c1 lives on a different surface")
        if not self.c1.is_integral:
            raise DomainError(f"c1 = {self.c1} is not integral")
        object.__setattr__(self, "ch2", _exact(self.ch2))
        if (Fraction(self.c1.square, 2) - self.ch2).denominator != 1:
            raise DomainError(f"c2 = {self.c1.square}/2 - ({self.ch2}) is not an integer")

    @classmethod
    def from_c2(cls, surface: Surface, r: int, c1: Divisor, c2: int) -> ChernCharacter:
        return cls(surface, r, c1, Fraction(c1.square, 2) - c2)

    @property
    def c2(self) -> int:
        x = Fraction(self.c1.square, 2) - self.ch2
        return x.numerator if x.denominator == 1 else x

    @property
    def nu(self) -> Divisor:
        return slope(self)

    @property
    def delta(self) -> Fraction:
        return discriminant(self)

    @property
    def chi(self) -> int:
        return euler(self)

    def __add__(self, other: ChernCharacter) -> ChernCharacter:
        if other.surface != self.surface:
            raise DomainError("surface mismatch")
        return ChernCharacter(self.surface, self.r + other.r, self.c1 + other.c1, self.ch2 + other.ch2)

    def __str__(self) -> str:
        return format_character(self)


@dataclass(frozen=True)
class CohomologyVector:
    h0: int
    h1: int
    h2: int

    def __post_init__(self):
        if min(self.h0, self.h1, self.h2) < 0:
            raise DomainError(f"negative cohomology {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)

    @property
    def euler(self) -> int:
        return self.h0 - self.h1 + self.h2

    @property
    def non_special(self) -> bool:
        return sum(1 for h in self.as_tuple() if h) <= 1

    def reversed(self) -> CohomologyVector:
        return CohomologyVector(self.h2, self.h1, self.h0)

    def __add__(self, other: CohomologyVector) -> CohomologyVector:
        return CohomologyVector(self.h0 + other.h0, self.h1 + other.h1, self.h2 + other.h2)


def line_bundle(d: Divisor) -> ChernCharacter:
    return ChernCharacter(d.surface, 1, d, Fraction(d.square, 2))


def direct_sum(parts: Iterable[ChernCharacter]) -> ChernCharacter:
    parts = list(parts)
    if not parts:
        raise DomainError("empty direct sum")
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def _need_rank(v: ChernCharacter):
    if v.r < 1:
        raise DomainError("slope and discriminant need positive rank")


def slope(v: ChernCharacter) -> Divisor:
    _need_rank(v)
    return v.c1 / v.r


def discriminant(v: ChernCharacter) -> Fraction:
    _need_rank(v)
    nu = slope(v)
    return Fraction(nu.square) / 2 - Fraction(v.ch2) / v.r


def hilbert_P(nu: Divisor) -> Fraction:
    """``1 + nu.(nu - K)/2``, the Euler characteristic of a line bundle of class nu."""
    return 1 + Fraction(nu.dot(nu - canonical(nu.surface))) / 2


def euler_pair(v: ChernCharacter, w: ChernCharacter) -> int | Fraction:
    """``chi(v, w)`` by Riemann-Roch; valid for any ranks, including 0."""
    if v.surface != w.surface:
        raise DomainError("surface mismatch")
    mk = -canonical(v.surface)
    x = (
        v.r * w.r
        + Fraction((v.r * w.c1 - w.r * v.c1).dot(mk), 2)
        + v.r * w.ch2
        + w.r * v.ch2
        - v.c1.dot(w.c1)
    )
    return _exact(x)


def euler_pair_slopes(v: ChernCharacter, w: ChernCharacter) -> Fraction:
    """``r(v) r(w) (P(nu(w) - nu(v)) - Delta(v) - Delta(w))``, a second path for positive ranks."""
    return _exact(v.r * w.r * (hilbert_P(slope(w) - slope(v)) - discriminant(v) - discriminant(w)))


def euler(v: ChernCharacter) -> int:
    """``chi(v) = r + c1.(-K)/2 + ch2``."""
    x = v.r + Fraction(v.c1.dot(-canonical(v.surface)), 2) + v.ch2
    assert x.denominator == 1
    return x.numerator


def serre_dual(v: ChernCharacter) -> ChernCharacter:
    """Numerics of ``v^* (x) K``."""
    k = canonical(v.surface)
    c1 = -v.c1 + k * v.r
    ch2 = v.ch2 - v.c1.dot(k) + Fraction(v.r * k.square, 2)
    return ChernCharacter(v.surface, v.r, c1, ch2)


def twist(v: ChernCharacter, d: Divisor) -> ChernCharacter:
    """Numerics of ``v (x) O(d)``."""
    if not d.is_integral:
        raise DomainError("twist by a non-integral class")
    ch2 = v.ch2 + v.c1.dot(d) + Fraction(v.r * d.square, 2)
    return ChernCharacter(v.surface, v.r, v.c1 + d * v.r, ch2)


def elementary_modification(v: ChernCharacter, n: int = 1) -> ChernCharacter:
    """Kernel of a surjection onto ``n`` general points: ch2 drops by n."""
    if n < 0:
        raise DomainError("elementary modification needs n >= 0")
    _need_rank(v)
    return ChernCharacter(v.surface, v.r, v.c1, v.ch2 - n)


def et_discriminant_shift(r: int, d: int) -> Fraction:
    """Discriminant gained by an elementary transformation along a (-1)-curve of colength d."""
    if not 0 <= d < r:
        raise DomainError(f"need 0 <= d < r, got r={r}, d={d}")
    return Fraction(d * (r - d), 2 * r * r)


def contraction_length(r: int, k: int, d: int) -> int:
    """Length of ``R^1 pi_*`` for a sheaf restricting to ``O(-k-1)^d + O(-k)^(r-d)`` on the curve.

    ``h^1(O_P1(-j)) = j - 1`` for ``j >= 2``; summing gives
    ``d k(k+1)/2 + (r-d) k(k-1)/2`` when ``k >= 1`` and zero otherwise.
    """
    if not 0 <= d < r:
        raise DomainError(f"need 0 <= d < r, got r={r}, d={d}")
    if k <= 0:
        return 0
    return d * k * (k + 1) // 2 + (r - d) * k * (k - 1) // 2


def blowdown(surface: Surface, curve: Divisor):
    """Contract ``curve`` on X_m.

    Returns ``(target, push)`` where ``push`` maps divisor classes to the
    target surface.  Curves other than ``L-E1-E2`` on X_2 are first moved to
    ``E_m`` by a Weyl element; ``L-E1-E2`` on X_2 contracts to the quadric.
    """
    from .weyl import conjugator

    if surface.is_quadric or surface.m == 0:
        raise DomainError(f"{surface} has no (-1)-curves to contract")
    if not is_minus_one_class(curve):
        raise DomainError(f"{curve} is not a (-1)-class")
    if surface.m == 2 and curve == surface.L - surface.E(1) - surface.E(2):
        target = Surface.quadric()
        f1_pull, f2_pull = surface.L - surface.E(2), surface.L - surface.E(1)

        def push(d: Divisor) -> Divisor:
            return Divisor(target, (d.dot(f1_pull), d.dot(f2_pull)))

        return target, push
    sigma = conjugator(curve, surface.E(surface.m))
    target = Surface.blowup(surface.m - 1)

    def push(d: Divisor) -> Divisor:
        return Divisor(target, sigma(d).coeffs[:-1])

    return target, push


def pushforward(v: ChernCharacter, curve: Divisor, k: int, d: int):
    """Numerics of the pushforward of a general sheaf along the contraction of ``curve``.

    ``(k, d)`` records the splitting type ``O(-k-1)^d + O(-k)^(r-d)`` on the
    curve.  Returns ``(target character, m)`` where ``m`` is the length of
    ``R^1 pi_*``; ``chi(target) = chi(v) + m``.
    """
    if v.r < 1:
        raise DomainError("pushforward needs positive rank")
    if v.c1.dot(curve) != -(v.r * k + d):
        raise DomainError(f"splitting (k={k}, d={d}) has degree {-(v.r * k + d)}, but c1.C = {v.c1.dot(curve)}")
    m = contraction_length(v.r, k, d)
    target, push = blowdown(v.surface, curve)
    ch2 = v.ch2 - Fraction(v.c1.dot(curve), 2) + m
    w = ChernCharacter(target, v.r, push(v.c1), ch2)
    assert euler(w) == euler(v) + m
    return w, m


# -- text form -----------------------------------------------------------------
_FIELD = re.compile(r"\s*(r|c1|ch2|c2)\s*=\s*([^;]*)")


def parse_character(text: str, surface: Surface) -> ChernCharacter:
    """Parse ``"r=2; c1=L-E1; ch2=-1/2"`` (or with ``c2=<int>`` instead of ch2)."""
    fields = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        match = _FIELD.fullmatch(chunk)
        if not match:
            raise ParseError(f"cannot parse character field {chunk.strip()!r}")
        if match.group(1) in fields:
            raise ParseError(f"duplicate field {match.group(1)}")
        fields[match.group(1)] = match.group(2).strip()
    if "r" not in fields or "c1" not in fields:
        raise ParseError("a character needs r= and c1=")
    if ("ch2" in fields) == ("c2" in fields):
        raise ParseError("give exactly one of ch2= and c2=")
    try:
        r = int(fields["r"])
    except ValueError as exc:
        raise ParseError(f"rank {fields['r']!r} is not an integer") from exc
    c1 = parse_divisor(fields["c1"], surface)
    if "ch2" in fields:
        return ChernCharacter(surface, r, c1, parse_rational(fields["ch2"]))
    c2 = parse_rational(fields["c2"])
    if not isinstance(c2, int):
        raise DomainError(f"c2 = {fields['c2']} is not an integer")
    return ChernCharacter.from_c2(surface, r, c1, c2)


def format_character(v: ChernCharacter) -> str:
    return f"r={v.r}; c1={format_divisor(v.c1)}; ch2={format_rational(v.ch2)}"
