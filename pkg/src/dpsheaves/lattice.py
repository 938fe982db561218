"""Picard lattices of the del Pezzo surfaces X_m (blowups of P^2) and the quadric.

Coordinates follow the convention ``(a; b_1, ..., b_m)`` for the class
``aL - b_1 E_1 - ... - b_m E_m``, so that ``D . E_i = b_i``.  On the quadric a
class is ``(f_1, f_2)`` meaning ``f_1 F_1 + f_2 F_2``.  All coefficients are
exact integers or :class:`fractions.Fraction`; floats are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from operator import mul
from typing import Iterable, Sequence

from .errors import DomainError, ParseError

__all__ = [
    "Surface",
    "Divisor",
    "intersect",
    "canonical",
    "minus_one_curves",
    "is_minus_one_class",
    "is_nef",
    "parse_divisor",
    "format_rational",
    "parse_rational",
]

MAX_BLOWUP_POINTS = 8


def _exact(x) -> int | Fraction:
    """Normalize an exact rational: ints stay ints, integral Fractions become ints."""
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _exact(Fraction(x.numerator, x.denominator))
    raise TypeError(f"inexact coefficient {x!r}; use int or Fraction")


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> int | Fraction:
    try:
        return _exact(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class Surface:
    """A supported del Pezzo model: ``Surface.blowup(m)`` or ``Surface.quadric()``."""

    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind == "quadric":
            if self.m != 0:
                raise DomainError("the quadric carries no blowup points")
        elif self.kind == "blowup":
            if not 0 <= self.m <= MAX_BLOWUP_POINTS:
                raise DomainError(f"X_m is supported for 0 <= m <= {MAX_BLOWUP_POINTS}, got m={self.m}")
        else:
            raise DomainError(f"unknown surface kind {self.kind!r}")

    @classmethod
    def blowup(cls, m: int) -> Surface:
        return cls("blowup", m)

    @classmethod
    def quadric(cls) -> Surface:
        return cls("quadric", 0)

    @classmethod
    def parse(cls, text: str) -> Surface:
        """Accepts ``P2``, ``Q`` and ``X0`` .. ``X8``."""
        t = text.strip()
        if t.upper() in ("Q", "P1XP1"):
            return cls.quadric()
        if t.upper() == "P2":
            return cls.blowup(0)
        match = re.fullmatch(r"[Xx](\d+)", t)
        if not match:
            raise ParseError(f"unknown surface {text!r}; expected Xm, P2 or Q")
        return cls.blowup(int(match.group(1)))

    @property
    def is_quadric(self) -> bool:
        return self.kind == "quadric"

    @property
    def rank(self) -> int:
        """Rank of the Picard lattice."""
        return 2 if self.is_quadric else self.m + 1

    @property
    def name(self) -> str:
        if self.is_quadric:
            return "Q"
        return "P2" if self.m == 0 else f"X{self.m}"

    def __str__(self) -> str:
        return self.name

    def divisor(self, *coeffs) -> Divisor:
        return Divisor(self, tuple(coeffs))

    @property
    def zero(self) -> Divisor:
        return Divisor(self, (0,) * self.rank)

    @property
    def L(self) -> Divisor:
        if self.is_quadric:
            raise DomainError("the quadric has no line class L")
        return Divisor(self, (1,) + (0,) * self.m)

    def E(self, i: int) -> Divisor:
        """The exceptional class ``E_i`` (1-based)."""
        if self.is_quadric or not 1 <= i <= self.m:
            raise DomainError(f"E{i} does not exist on {self}")
        b = [0] * self.m
        b[i - 1] = -1
        return Divisor(self, (0, *b))

    def F(self, i: int) -> Divisor:
        """A ruling class ``F_1`` or ``F_2`` of the quadric."""
        if not self.is_quadric or i not in (1, 2):
            raise DomainError(f"F{i} does not exist on {self}")
        return Divisor(self, (1, 0) if i == 1 else (0, 1))

    @property
    def K(self) -> Divisor:
        return canonical(self)

    @property
    def K2(self) -> int:
        """Degree ``K^2`` of the surface."""
        return 8 if self.is_quadric else 9 - self.m


@dataclass(frozen=True)
class Divisor:
    """A class in Pic(X) or Pic(X) (x) Q, stored in the ``(a; b_i)`` convention."""

    surface: Surface
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_exact(c) for c in self.coeffs)
        if len(coeffs) != self.surface.rank:
            raise DomainError(
                f"{self.surface} needs {self.surface.rank} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: Divisor):
        if not isinstance(other, Divisor):
            return NotImplemented
        if other.surface != self.surface:
            raise DomainError(f"surface mismatch: {self.surface} vs {other.surface}")
        return None

    def __add__(self, other: Divisor) -> Divisor:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Divisor(self.surface, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: Divisor) -> Divisor:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Divisor(self.surface, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> Divisor:
        return Divisor(self.surface, tuple(-x for x in self.coeffs))

    def __mul__(self, scalar) -> Divisor:
        if isinstance(scalar, Divisor):
            return NotImplemented
        s = _exact(scalar)
        return Divisor(self.surface, tuple(x * s for x in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Divisor:
        s = Fraction(_exact(scalar))
        return Divisor(self.surface, tuple(Fraction(x) / s for x in self.coeffs))

    def dot(self, other: Divisor) -> int | Fraction:
        """Intersection number with ``other``."""
        if not (isinstance(other, Divisor) and other.surface is self.surface):
            self._check(other)
        x, y = self.coeffs, other.coeffs
        if self.surface.is_quadric:
            value = x[0] * y[1] + x[1] * y[0]
        else:
            value = x[0] * y[0] - sum(map(mul, x[1:], y[1:]))
        return value if type(value) is int else _exact(value)

    @property
    def square(self):
        return self.dot(self)

    # -- accessors ----------------------------------------------------------
    @property
    def a(self):
        """Coefficient of L (degree against L)."""
        return self.coeffs[0]

    @property
    def b(self) -> tuple:
        return self.coeffs[1:]

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        return format_divisor(self)

    def __repr__(self) -> str:
        return f"Divisor({self.surface}, {format_divisor(self)!r})"


def intersect(d1: Divisor, d2: Divisor):
    return d1.dot(d2)


def canonical(surface: Surface) -> Divisor:
    if surface.is_quadric:
        return Divisor(surface, (-2, -2))
    return Divisor(surface, (-3,) + (-1,) * surface.m)


# -- (-1)-curves ------------------------------------------------------------
def _nonneg_solutions(n: int, total: int, sqsum: int, cap: int) -> Iterable[tuple]:
    """Nonincreasing n-tuples of integers in [0, cap] with the given sum and sum of squares."""
    if n == 0:
        if total == 0 and sqsum == 0:
            yield ()
        return
    for x in range(min(cap, total), -1, -1):
        if x * x > sqsum:
            continue
        # remaining n-1 entries are at most x
        if total - x > (n - 1) * x or sqsum - x * x > (n - 1) * x * x:
            continue
        for rest in _nonneg_solutions(n - 1, total - x, sqsum - x * x, x):
            yield (x,) + rest


def _permutations_unique(t: tuple) -> set:
    from itertools import permutations

    return set(permutations(t))


@lru_cache(maxsize=None)
def minus_one_curves(surface: Surface) -> tuple[Divisor, ...]:
    """All (-1)-curve classes on ``surface``, in a fixed deterministic order.

    For ``a >= 1`` a (-1)-curve ``aL - sum b_i E_i`` has all ``b_i >= 0`` with
    ``sum b_i = 3a - 1`` and ``sum b_i^2 = a^2 + 1``; Cauchy-Schwarz bounds ``a``.
    P^2 and the quadric have none.
    """
    if surface.is_quadric or surface.m == 0:
        return ()
    m = surface.m
    curves = [surface.E(i) for i in range(1, m + 1)]
    a = 1
    while (3 * a - 1) ** 2 <= m * (a * a + 1):
        shapes = _nonneg_solutions(m, 3 * a - 1, a * a + 1, a)
        found = set()
        for shape in shapes:
            found |= _permutations_unique(shape)
        for b in sorted(found, reverse=True):
            curves.append(Divisor(surface, (a, *b)))
        a += 1
    return tuple(curves)


def is_minus_one_class(d: Divisor) -> bool:
    return d.square == -1 and d.dot(canonical(d.surface)) == -1


def is_nef(nu: Divisor) -> bool:
    s = nu.surface
    if s.is_quadric:
        return all(c >= 0 for c in nu.coeffs)
    if s.m == 0:
        return nu.a >= 0
    if s.m == 1:
        return nu.dot(s.E(1)) >= 0 and nu.dot(s.L - s.E(1)) >= 0
    return all(nu.dot(c) >= 0 for c in minus_one_curves(s))


# -- text grammar -------------------------------------------------------------
_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?(L|E\d+|F[12])")
_CONST = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_divisor(text: str, surface: Surface) -> Divisor:
    """Parse signed terms such as ``"2L-E1-E2"`` or ``"-3/2L+E1"``; ``"0"`` is zero."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty divisor expression")
    if _CONST.fullmatch(s):
        if parse_rational(s) != 0:
            raise ParseError(f"bare constant {text!r} is not a divisor")
        return surface.zero
    coeffs = [Fraction(0)] * surface.rank
    pos = 0
    while pos < len(s):
        match = _TERM.match(s, pos)
        if not match or (pos > 0 and not match.group(1)):
            raise ParseError(f"cannot parse divisor {text!r} at {s[pos:]!r}")
        sign = -1 if match.group(1) == "-" else 1
        c = sign * Fraction(match.group(2) or 1)
        token = match.group(3)
        try:
            if token == "L":
                basis = surface.L
            elif token[0] == "E":
                basis = surface.E(int(token[1:]))
            else:
                basis = surface.F(int(token[1:]))
        except DomainError as exc:
            raise ParseError(f"token {token} is not defined on {surface}") from exc
        for i, x in enumerate(basis.coeffs):
            coeffs[i] += c * x
        pos = match.end()
    return Divisor(surface, tuple(coeffs))


def _term(coeff, token: str) -> str:
    c = Fraction(coeff)
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    body = token if mag == 1 else f"{format_rational(mag)}{token}"
    return sign + body


def format_divisor(d: Divisor) -> str:
    s = d.surface
    if s.is_quadric:
        pieces = [(d.coeffs[0], "F1"), (d.coeffs[1], "F2")]
    else:
        pieces = [(d.coeffs[0], "L")] + [(-b, f"E{i}") for i, b in enumerate(d.coeffs[1:], 1)]
    out = "".join(_term(c, tok) for c, tok in pieces if c != 0)
    if not out:
        return "0"
    return out[1:] if out[0] == "+" else out


def divisor_from_sequence(surface: Surface, coeffs: Sequence) -> Divisor:
    return Divisor(surface, tuple(coeffs))
