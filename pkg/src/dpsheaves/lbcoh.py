"""Cohomology of line bundles on X_m (m <= 8) and on the quadric.

On a del Pezzo surface a line bundle with ``D.C >= -1`` for every (-1)-curve
has no h^1 once effective (the SHGH statement is a theorem here), and every
negative intersection with a (-1)-curve C forces C into the base locus.
"""

from __future__ import annotations

from .chern import CohomologyVector, euler, line_bundle
from .errors import DomainError
from .lattice import Divisor, canonical, minus_one_curves

__all__ = ["h0", "h_vector", "is_minus_one_special", "reduce_base_curves"]


def _check(d: Divisor):
    if not d.is_integral:
        raise DomainError(f"{d} is not an integral class")


def reduce_base_curves(d: Divisor) -> Divisor:
    """Strip (-1)-curves that ``d`` meets negatively; h^0 is unchanged."""
    s = d.surface
    curves = minus_one_curves(s)
    if s.m == 1:
        # L - E1 is not a (-1)-curve but E1 still is the only fixed component
        curves = (s.E(1),)
    mk = -canonical(s)
    while d.dot(mk) >= 0:
        for c in curves:
            n = d.dot(c)
            if n < 0:
                d = d - c
                break
        else:
            return d
    return d


def h0(d: Divisor) -> int:
    _check(d)
    s = d.surface
    if s.is_quadric:
        p = lambda x: x + 1 if x >= 0 else 0  # noqa: E731
        return p(d.coeffs[0]) * p(d.coeffs[1])
    if s.m == 0:
        a = d.a
        return (a + 1) * (a + 2) // 2 if a >= 0 else 0
    d = reduce_base_curves(d)
    if d.dot(-canonical(s)) < 0 or d.a < 0:
        return 0
    if s.m == 1:
        # effective cone of X_1 is spanned by E1 and L - E1; D = aL - bE1 with b >= 0 now
        if d.a < d.b[0]:
            return 0
        return euler(line_bundle(d))
    # no (-1)-curve meets d negatively, so d is nef on X_m, m >= 2
    return euler(line_bundle(d))


def h_vector(d: Divisor) -> CohomologyVector:
    _check(d)
    zero = h0(d)
    two = h0(canonical(d.surface) - d)
    one = zero + two - euler(line_bundle(d))
    assert one >= 0, f"negative h1 for {d}"
    return CohomologyVector(zero, one, two)


def is_minus_one_special(d: Divisor) -> bool:
    """Effective and meeting some (-1)-curve in degree at most -2."""
    return h0(d) > 0 and any(d.dot(c) <= -2 for c in minus_one_curves(d.surface))
