"""The Weyl group of X_m acting on Pic(X_m) by reflections in (-2)-roots.

Orbits are computed by breadth-first search on classes rather than on group
elements, so even E_6 queries (|W| = 51840) stay cheap.  ``group_order`` does
materialize the group, as integer matrices, to validate the root system.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .lattice import Divisor, Surface, canonical

__all__ = [
    "WeylElement",
    "simple_roots",
    "simple_reflections",
    "reflect",
    "group_order",
    "group_matrices",
    "orbit",
    "orbit_min_pairing",
    "conjugator",
]


def reflect(d: Divisor, root: Divisor) -> Divisor:
    """``s_r(D) = D + (D.r) r`` for a root with ``r^2 = -2``."""
    return d + root * d.dot(root)


@lru_cache(maxsize=None)
def simple_roots(surface: Surface) -> tuple[Divisor, ...]:
    """Simple roots ``E_i - E_{i+1}`` and, once m >= 3, ``L - E_1 - E_2 - E_3``.

    On X_2 the only root is ``E_1 - E_2`` (the group is A_1 of order 2);
    ``L - E_1 - E_2`` has square -1 and is a curve, not a root.
    """
    if surface.is_quadric or surface.m < 2:
        return ()
    m = surface.m
    roots = [surface.E(i) - surface.E(i + 1) for i in range(1, m)]
    if m >= 3:
        roots.append(surface.L - surface.E(1) - surface.E(2) - surface.E(3))
    for r in roots:
        assert r.square == -2 and r.dot(canonical(surface)) == 0
    return tuple(roots)


@dataclass(frozen=True)
class WeylElement:
    """A lattice isometry fixing K, stored as an integer matrix acting on coordinate columns."""

    surface: Surface
    matrix: tuple

    @classmethod
    def reflection(cls, root: Divisor) -> WeylElement:
        s = root.surface
        cols = [reflect(Divisor(s, tuple(int(i == j) for i in range(s.rank))), root).coeffs for j in range(s.rank)]
        rows = tuple(tuple(cols[j][i] for j in range(s.rank)) for i in range(s.rank))
        return cls(s, rows)

    @classmethod
    def identity(cls, surface: Surface) -> WeylElement:
        n = surface.rank
        return cls(surface, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __call__(self, d: Divisor) -> Divisor:
        return Divisor(self.surface, tuple(sum(x * y for x, y in zip(row, d.coeffs)) for row in self.matrix))

    def __matmul__(self, other: WeylElement) -> WeylElement:
        n = self.surface.rank
        cols = list(zip(*other.matrix))
        rows = tuple(tuple(sum(self.matrix[i][k] * cols[j][k] for k in range(n)) for j in range(n)) for i in range(n))
        return WeylElement(self.surface, rows)

    def preserves_form(self) -> bool:
        s = self.surface
        basis = [Divisor(s, tuple(int(i == j) for i in range(s.rank))) for j in range(s.rank)]
        return all(self(x).dot(self(y)) == x.dot(y) for x in basis for y in basis)

    def fixes_canonical(self) -> bool:
        return self(canonical(self.surface)) == canonical(self.surface)


def simple_reflections(surface: Surface) -> list[WeylElement]:
    return [WeylElement.reflection(r) for r in simple_roots(surface)]


def _gram(surface: Surface) -> np.ndarray:
    return np.diag([1] + [-1] * surface.m).astype(np.int64)


def _closure(surface: Surface, gens: list) -> list:
    gram = _gram(surface)
    k = np.array(canonical(surface).coeffs, dtype=np.int64)
    ident = np.eye(surface.rank, dtype=np.int64)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        stacked = np.stack(frontier)
        nxt = []
        for g in gens:
            for h in g @ stacked:
                key = h.tobytes()
                if key not in seen:
                    assert np.array_equal(h.T @ gram @ h, gram), "Gram matrix not preserved"
                    assert np.array_equal(h @ k, k), "canonical class moved"
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


def group_order(m: int, generators: list[WeylElement] | None = None) -> int:
    """Order of the group generated by the simple reflections of X_m, by BFS closure."""
    if not 2 <= m <= 6:
        raise DomainError(f"group_order supports 2 <= m <= 6, got {m}")
    s = Surface.blowup(m)
    gens = [np.array(g.matrix, dtype=np.int64) for g in (generators or simple_reflections(s))]
    return len(_closure(s, gens))


@lru_cache(maxsize=None)
def group_matrices(surface: Surface) -> np.ndarray:
    """Every element of W_m as an integer matrix, stacked; just the identity when m < 2."""
    if surface.is_quadric or surface.m > 6:
        raise DomainError(f"group elements are materialized for X_m with m <= 6, got {surface}")
    gens = [np.array(g.matrix, dtype=np.int64) for g in simple_reflections(surface)]
    out = np.stack(_closure(surface, gens))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=4096)
def _orbit_tree(d: Divisor) -> dict:
    """BFS over the orbit of ``d``; maps each class to (parent class, root index)."""
    roots = simple_roots(d.surface)
    tree = {d: None}
    queue = deque([d])
    while queue:
        x = queue.popleft()
        for i, r in enumerate(roots):
            y = reflect(x, r)
            if y not in tree:
                tree[y] = (x, i)
                queue.append(y)
    return tree


def orbit(d: Divisor) -> frozenset:
    """The W_m-orbit of a class (``{d}`` when m < 2 or on the quadric)."""
    return frozenset(_orbit_tree(d))


def orbit_min_pairing(nu: Divisor, d: Divisor):
    """``min over sigma of nu . sigma(d)``."""
    return min(nu.dot(x) for x in _orbit_tree(d))


def conjugator(source: Divisor, target: Divisor) -> WeylElement:
    """An element sigma with ``sigma(source) = target``; DomainError if none exists."""
    tree = _orbit_tree(source)
    if target not in tree:
        raise DomainError(f"{target} is not in the orbit of {source}")
    roots = simple_roots(source.surface)
    word = []
    x = target
    while tree[x] is not None:
        x, i = tree[x]
        word.append(i)
    sigma = WeylElement.identity(source.surface)
    # word lists reflections from target back to source; apply source-side first
    for i in reversed(word):
        sigma = WeylElement.reflection(roots[i]) @ sigma
    assert sigma(source) == target
    return sigma
