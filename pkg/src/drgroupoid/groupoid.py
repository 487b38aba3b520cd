"""The Deaconu-Renault groupoid of a finite system.

Elements are triples (x, g, y) with g = m - n for some m, n in N^k such that
T^m x = T^n y.  The cocycle of an element is its displacement g.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import lattice as lat
from .dynsys import FiniteSystem, _apply_idx, eventual_data, orbit
from .errors import DimensionMismatch, InputError, LatticeMismatch, NotComposable
from .lattice import Lattice


@dataclass(frozen=True, order=True)
class GroupoidElement:
    range: str
    displacement: tuple[int, ...]
    source: str

    def __str__(self) -> str:
        g = ",".join(map(str, self.displacement))
        return f"({self.range},{g},{self.source})"


@dataclass(frozen=True, order=True)
class QuotientElement:
    range: str
    displacement: tuple[int, ...]  # canonical coset representative mod lattice
    source: str
    lattice: Lattice

    def __str__(self) -> str:
        g = ",".join(map(str, self.displacement))
        return f"({self.range},[{g}],{self.source})"


def _split(g: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(max(a, 0) for a in g), tuple(max(-a, 0) for a in g)


@lru_cache(maxsize=None)
def _contains_idx(sys: FiniteSystem, x: int, g: tuple[int, ...], y: int) -> bool:
    plus, minus = _split(g)
    u, v = _apply_idx(sys, plus, x), _apply_idx(sys, minus, y)
    # BFS in X x X under the diagonal moves (u, v) -> (T_i u, T_i v)
    seen = {(u, v)}
    todo = deque(seen)
    while todo:
        u, v = todo.popleft()
        if u == v:
            return True
        for T in sys.maps:
            nxt = (T[u], T[v])
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


def contains(sys: FiniteSystem, x, g: Sequence[int], y) -> bool:
    """Whether (x, g, y) lies in the groupoid."""
    if len(g) != sys.k:
        raise DimensionMismatch(sys.k, len(g))
    return _contains_idx(sys, sys.index(x), tuple(int(a) for a in g), sys.index(y))


def element(sys: FiniteSystem, x, g: Sequence[int], y) -> GroupoidElement:
    """A validated groupoid element."""
    if not contains(sys, x, g, y):
        raise InputError(f"({x},{tuple(g)},{y}) is not in the groupoid")
    return GroupoidElement(sys.name(sys.index(x)), tuple(int(a) for a in g), sys.name(sys.index(y)))


def unit(sys: FiniteSystem, x) -> GroupoidElement:
    return GroupoidElement(sys.name(sys.index(x)), (0,) * sys.k, sys.name(sys.index(x)))


def compose(sys: FiniteSystem, a: GroupoidElement, b: GroupoidElement) -> GroupoidElement:
    if a.source != b.range:
        raise NotComposable(a, b)
    g = tuple(p + q for p, q in zip(a.displacement, b.displacement))
    return element(sys, a.range, g, b.source)


def inverse(a: GroupoidElement) -> GroupoidElement:
    return GroupoidElement(a.source, tuple(-p for p in a.displacement), a.range)


@lru_cache(maxsize=None)
def isotropy_group(sys: FiniteSystem, y) -> Lattice:
    """L_y = {g : (y, g, y) in the groupoid}, in HNF.

    Generated by the periods c_i e_i together with the differences m - n over the
    clamped box on which T^m y = T^n y.
    """
    yi = sys.index(y)
    ev = eventual_data(sys, y)
    gens = []
    for i, c in enumerate(ev.period):
        gens.append(tuple(c if j == i else 0 for j in range(sys.k)))
    images: dict[int, list[tuple[int, ...]]] = {}
    for m in itertools.product(*(range(b) for b in ev.box)):
        images.setdefault(_apply_idx(sys, m, yi), []).append(m)
    for ms in images.values():
        base = ms[0]
        for m in ms[1:]:
            gens.append(tuple(a - b for a, b in zip(m, base)))
    return lat.hnf(gens, sys.k)


def quotient_element(sys: FiniteSystem, a: GroupoidElement, H: Lattice) -> QuotientElement:
    if not contains(sys, a.range, a.displacement, a.source):
        raise InputError(f"{a} is not in the groupoid")
    return QuotientElement(a.range, lat.reduce(H, a.displacement), a.source, H)


def quotient_compose(sys: FiniteSystem, a: QuotientElement, b: QuotientElement) -> QuotientElement:
    if a.lattice != b.lattice:
        raise LatticeMismatch(f"{a.lattice} vs {b.lattice}")
    if a.source != b.range:
        raise NotComposable(a, b)
    g = tuple(p + q for p, q in zip(a.displacement, b.displacement))
    return quotient_element(sys, GroupoidElement(a.range, g, b.source), a.lattice)


def quotient_inverse(sys: FiniteSystem, a: QuotientElement) -> QuotientElement:
    g = tuple(-p for p in a.displacement)
    return quotient_element(sys, GroupoidElement(a.source, g, a.range), a.lattice)


def quotient_isotropy_is_trivial(sys: FiniteSystem, Y: Iterable, H: Lattice) -> bool:
    """Whether every isotropy lattice over Y equals H, i.e. the quotient by
    {(y, h, y) : h in H} has trivial isotropy over Y."""
    return all(isotropy_group(sys, y) == H for y in Y)


def connecting_displacements(sys: FiniteSystem, x) -> dict[str, tuple[int, ...]]:
    """For each y in [x], a displacement g_y with (x, g_y, y) in the groupoid.

    Found by BFS over the moves y -> T_i y (adds e_i) and T_i z = y -> z
    (subtracts e_i), visiting maps and points in declaration order.
    """
    k = sys.k
    xi = sys.index(x)
    pre: dict[int, list[tuple[int, int]]] = {}
    for i, T in enumerate(sys.maps):
        for z, t in enumerate(T):
            pre.setdefault(t, []).append((i, z))
    disp = {xi: (0,) * k}
    todo = deque([xi])
    while todo:
        y = todo.popleft()
        g = disp[y]
        steps = [(T[y], i, 1) for i, T in enumerate(sys.maps)]
        steps += [(z, i, -1) for i, z in pre.get(y, [])]
        for z, i, s in steps:
            if z not in disp:
                disp[z] = tuple(a + s * (j == i) for j, a in enumerate(g))
                todo.append(z)
    out = {sys.name(y): g for y, g in disp.items()}
    assert set(out) == set(orbit(sys, x))
    return out
