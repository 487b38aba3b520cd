"""Finite discrete N^k dynamical systems.

A system is a finite point set with k commuting self-maps T_1..T_k.  On a finite
discrete space every self-map is a local homeomorphism, orbit closures are
orbits, and all the constructions downstream become exactly computable.

Points are named by strings; internally the maps are stored as index tuples.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import BadIndex, InputError, NonCommuting, NotInvariant

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class FiniteSystem:
    points: tuple[str, ...]
    maps: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.maps)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, x) -> int:
        if isinstance(x, int) and not isinstance(x, bool):
            if 0 <= x < len(self.points):
                return x
            raise BadIndex(x)
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise BadIndex(x) from None

    def name(self, i: int) -> str:
        return self.points[i]

    def step(self, i: int, x: int) -> int:
        """T_{i+1} on point indices (i is 0-based)."""
        return self.maps[i][x]

    def sort(self, pts: Iterable) -> tuple[str, ...]:
        """Names of the given points in declaration order."""
        return tuple(self.points[j] for j in sorted({self.index(p) for p in pts}))


@dataclass(frozen=True)
class EventualData:
    """Per-coordinate preperiod a_i and period c_i on the reachable set of a point."""

    preperiod: MultiIndex
    period: MultiIndex

    def clamp(self, m: Sequence[int]) -> MultiIndex:
        """Smallest multi-index acting like m on the reachable set."""
        out = []
        for mi, a, c in zip(m, self.preperiod, self.period):
            out.append(mi if mi < a else a + (mi - a) % c)
        return tuple(out)

    @property
    def box(self) -> MultiIndex:
        """Exclusive upper bounds a_i + c_i of the clamped box."""
        return tuple(a + c for a, c in zip(self.preperiod, self.period))


def validate_system(points: Sequence[str], maps: Sequence[Sequence[int]]) -> FiniteSystem:
    """Build a system from point names and k maps given as target indices.

    Raises BadIndex for out-of-range targets and NonCommuting(i, j, x) (1-based
    map numbers) for the first pair of maps that disagree at x.
    """
    points = tuple(str(p) for p in points)
    if len(set(points)) != len(points):
        raise InputError("duplicate point names")
    if not points:
        raise InputError("a system needs at least one point")
    if not maps:
        raise InputError("a system needs at least one map")
    n = len(points)
    clean = []
    for T in maps:
        if len(T) != n:
            raise InputError(f"map has {len(T)} entries for {n} points")
        row = []
        for t in T:
            if isinstance(t, bool) or not isinstance(t, int) or not 0 <= t < n:
                raise BadIndex(t)
            row.append(t)
        clean.append(tuple(row))
    for i, j in itertools.combinations(range(len(clean)), 2):
        Ti, Tj = clean[i], clean[j]
        for x in range(n):
            if Ti[Tj[x]] != Tj[Ti[x]]:
                raise NonCommuting(i + 1, j + 1, points[x])
    return FiniteSystem(points, tuple(clean))


def _apply_idx(sys: FiniteSystem, n: Sequence[int], x: int) -> int:
    for i, ni in enumerate(n):
        T = sys.maps[i]
        for _ in range(ni):
            x = T[x]
    return x


def apply(sys: FiniteSystem, n: Sequence[int], x) -> str:
    """T^n x."""
    if len(n) != sys.k or any(ni < 0 for ni in n):
        raise InputError(f"multi-index {tuple(n)} is not in N^{sys.k}")
    return sys.points[_apply_idx(sys, n, sys.index(x))]


def _components(sys: FiniteSystem) -> list[int]:
    """Component label (least member index) of each point."""
    parent = list(range(len(sys)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for T in sys.maps:
        for x, y in enumerate(T):
            a, b = find(x), find(y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(len(sys))]


def orbit(sys: FiniteSystem, x) -> tuple[str, ...]:
    """The orbit [x], which is also its closure; sorted by declaration order."""
    comp = _components(sys)
    c = comp[sys.index(x)]
    return tuple(p for p, cp in zip(sys.points, comp) if cp == c)


orbit_closure = orbit


@dataclass(frozen=True)
class QuasiOrbit:
    representative: str
    points: tuple[str, ...]
    irreducible: bool = True


@dataclass(frozen=True)
class QuasiOrbitPartition:
    classes: tuple[QuasiOrbit, ...]
    # None when the system is larger than the enumeration bound
    closed_invariant_subsets: tuple[frozenset, ...] | None = field(default=None)

    def class_of(self, x) -> QuasiOrbit:
        for c in self.classes:
            if x in c.points:
                return c
        raise BadIndex(x)


def is_groupoid_invariant(sys: FiniteSystem, S: Iterable) -> bool:
    """Whether S is closed under every T_i and every T_i^{-1}."""
    idx = {sys.index(p) for p in S}
    for T in sys.maps:
        for x, y in enumerate(T):
            if (x in idx) != (y in idx):
                return False
    return True


def closed_invariant_subsets(sys: FiniteSystem) -> list[frozenset]:
    """Every invariant subset (all subsets are closed here), by brute force."""
    out = []
    names = sys.points
    for mask in range(1 << len(names)):
        S = frozenset(names[i] for i in range(len(names)) if mask >> i & 1)
        if is_groupoid_invariant(sys, S):
            out.append(S)
    return out


def irreducible_subsets(subsets: Sequence[frozenset]) -> list[frozenset]:
    """Nonempty members of a family of closed invariant sets that are not unions
    of two proper members of the family."""
    pool = set(subsets)
    out = []
    for C in subsets:
        if not C:
            continue
        proper = [A for A in pool if A < C]
        if not any(A | B == C for A in proper for B in proper):
            out.append(C)
    return out


def quasi_orbits(sys: FiniteSystem, max_invariant_subsets: int = 8) -> QuasiOrbitPartition:
    """Orbits (= quasi-orbits here) with their least-declared representative.

    When |X| <= ``max_invariant_subsets`` all closed invariant subsets are also
    enumerated, for cross-checking irreducibility.
    """
    comp = _components(sys)
    classes = []
    for c in sorted(set(comp)):
        pts = tuple(p for p, cp in zip(sys.points, comp) if cp == c)
        classes.append(QuasiOrbit(pts[0], pts, True))
    subsets = None
    if len(sys) <= max_invariant_subsets:
        subsets = tuple(sorted(closed_invariant_subsets(sys), key=lambda s: (len(s), sys.sort(s))))
    return QuasiOrbitPartition(tuple(classes), subsets)


@lru_cache(maxsize=None)
def reachable(sys: FiniteSystem, x) -> tuple[str, ...]:
    """{T^n x : n in N^k}."""
    start = sys.index(x)
    seen = {start}
    todo = deque([start])
    while todo:
        y = todo.popleft()
        for T in sys.maps:
            z = T[y]
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return sys.sort(seen)


@lru_cache(maxsize=None)
def eventual_data(sys: FiniteSystem, x) -> EventualData:
    """Least a_i, c_i with T_i^(a_i + c_i) = T_i^(a_i) on the reachable set of x."""
    R = [sys.index(p) for p in reachable(sys, x)]
    pre, per = [], []
    for T in sys.maps:
        # iterate the whole reachable set as a vector until it repeats
        seen = {}
        state = tuple(R)
        t = 0
        while state not in seen:
            seen[state] = t
            state = tuple(T[y] for y in state)
            t += 1
        a = seen[state]
        pre.append(a)
        per.append(t - a)
    return EventualData(tuple(pre), tuple(per))


def restrict(sys: FiniteSystem, S: Iterable) -> FiniteSystem:
    """The subsystem on a forward-invariant set S (T_i S inside S for all i)."""
    idx = sorted({sys.index(p) for p in S})
    if not idx:
        raise InputError("cannot restrict to the empty set")
    pos = {old: new for new, old in enumerate(idx)}
    maps = []
    for i, T in enumerate(sys.maps):
        row = []
        for x in idx:
            if T[x] not in pos:
                raise NotInvariant(sys.points[x], i + 1)
            row.append(pos[T[x]])
        maps.append(tuple(row))
    return FiniteSystem(tuple(sys.points[x] for x in idx), tuple(maps))
