"""Random inputs shared by the property tests."""

import math
import random
from fractions import Fraction

from hypothesis import strategies as st

from dpsheaves.chern import ChernCharacter
from dpsheaves.goodbundle import weyl_delta_min
from dpsheaves.lattice import Divisor, Surface

BN_SURFACES = [Surface.blowup(m) for m in range(0, 6)] + [Surface.quadric()]


def c2_floor(s: Surface, r: int, c1: Divisor) -> int:
    """Smallest c2 whose character clears the prioritary floor of every Weyl frame."""
    floor = weyl_delta_min(r, c1 / r)
    return math.ceil(r * floor + Fraction((r - 1) * c1.square, 2 * r))


def character(s: Surface, r: int, coeffs, extra: int) -> ChernCharacter:
    c1 = Divisor(s, tuple(coeffs))
    return ChernCharacter.from_c2(s, r, c1, c2_floor(s, r, c1) + extra)


def random_character(rng: random.Random, surfaces=BN_SURFACES, rmax=6, box=6, extra_max=6) -> ChernCharacter:
    s = rng.choice(surfaces)
    r = rng.randint(2, rmax)
    coeffs = [rng.randint(-box, box) for _ in range(s.rank)]
    return character(s, r, coeffs, rng.randint(0, extra_max))


@st.composite
def characters(draw, surfaces=BN_SURFACES, rmax=6, box=6, extra_max=6):
    s = draw(st.sampled_from(surfaces))
    r = draw(st.integers(2, rmax))
    coeffs = draw(st.lists(st.integers(-box, box), min_size=s.rank, max_size=s.rank))
    return character(s, r, coeffs, draw(st.integers(0, extra_max)))


@st.composite
def divisors(draw, surface, box=6, rational=False):
    if rational:
        coeff = st.fractions(min_value=-box, max_value=box, max_denominator=6)
    else:
        coeff = st.integers(-box, box)
    return Divisor(surface, tuple(draw(coeff) for _ in range(surface.rank)))
