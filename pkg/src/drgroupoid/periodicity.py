"""Periodicity invariants of an orbit closure.

For an orbit closure C = [x] (every singleton is open in a finite discrete
space) the pairs (m, n) with T^m y = T^n y for all y in U form a monoid
Sigma_U.  Their union over nonempty U is Sigma(x); its differences form the
lattice H(x), and Sigma(x) = {(m, n) : m - n in H(x)}.  Y(x) is the largest
subset of C on which Sigma_Y already equals Sigma(x).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import lattice as lat
from .dynsys import FiniteSystem, _apply_idx, eventual_data, orbit
from .errors import BoundTooSmall, DimensionMismatch, EmptySet, VerificationFailure
from .groupoid import isotropy_group
from .lattice import Lattice

Pair = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class PeriodicityProfile:
    quasi_orbit: str
    closure: tuple[str, ...]
    H: Lattice
    Y: tuple[str, ...]
    sigma_min: tuple[Pair, ...]
    per_point: tuple[tuple[str, Lattice], ...]
    search_bound: int

    def lattice_at(self, y: str) -> Lattice:
        return dict(self.per_point)[y]


def _clamped_apply(sys: FiniteSystem, m: Sequence[int], y: int) -> int:
    return _apply_idx(sys, eventual_data(sys, sys.name(y)).clamp(m), y)


def sigma_u_member(sys: FiniteSystem, U: Iterable, m: Sequence[int], n: Sequence[int]) -> bool:
    """Whether T^m y = T^n y for every y in U."""
    idx = [sys.index(y) for y in U]
    if not idx:
        raise EmptySet("Sigma_U needs a nonempty U")
    if len(m) != sys.k or len(n) != sys.k:
        raise DimensionMismatch(sys.k, len(m) if len(m) != sys.k else len(n))
    return all(_clamped_apply(sys, m, y) == _clamped_apply(sys, n, y) for y in idx)


def _dominates(big: Pair, small: Pair) -> bool:
    return all(a >= b for a, b in zip(big[0] + big[1], small[0] + small[1]))


def _unit_pairs(k: int) -> list[Pair]:
    out = []
    for i in range(k):
        e = tuple(int(i == j) for j in range(k))
        out.append((e, e))
    return out


def _split(g: Sequence[int]) -> Pair:
    return tuple(max(a, 0) for a in g), tuple(max(-a, 0) for a in g)


def _minimal(cands: Iterable[Pair]) -> list[Pair]:
    cands = sorted(set(cands), key=lambda p: (sum(p[0]) + sum(p[1]), p))
    out: list[Pair] = []
    for c in cands:
        if not any(_dominates(c, s) for s in out):
            out.append(c)
    return out


def minimal_pairs(H: Lattice, bound: int) -> tuple[Pair, ...]:
    """Minimal nonzero elements of {(m, n) : m - n in H}, searched over |g| <= bound.

    A minimal pair either has m = n = e_i, or has disjoint supports and so is
    (g+, g-) for some nonzero g in H.  The result is checked against the HNF
    rows of H, their negatives, and every g in H with |g| <= 2*bound;
    BoundTooSmall if one of these dominates no pair found.
    """
    k = H.k
    cands = _unit_pairs(k)
    cands += [_split(g) for g in lat.points_in_box(H, bound) if any(g)]
    smin = _minimal(cands)
    rows = [g for r in H.basis for g in (r, tuple(-a for a in r))]
    checks = _unit_pairs(k) + [_split(g) for g in rows + list(lat.points_in_box(H, 2 * bound)) if any(g)]
    for c in checks:
        if not any(_dominates(c, s) for s in smin):
            raise BoundTooSmall(bound)
    return tuple(sorted(smin, key=lambda p: (sum(p[0]) + sum(p[1]), p)))


def default_bound(sys: FiniteSystem, closure: Sequence[str]) -> int:
    box = max(max(eventual_data(sys, y).box) for y in closure)
    return len(closure) * box


@lru_cache(maxsize=None)
def profile(sys: FiniteSystem, x, bound: int | None = None, retries: int = 4) -> PeriodicityProfile:
    closure = orbit(sys, x)
    per_point = tuple((y, isotropy_group(sys, y)) for y in closure)
    H = lat.join((L for _, L in per_point), sys.k)
    # directedness of the Sigma_U makes the union of the L_y one of the L_y
    if not any(L == H for _, L in per_point):
        raise VerificationFailure(f"isotropy lattices over {closure} are not directed")
    M = bound if bound is not None else default_bound(sys, closure)
    for attempt in range(retries + 1):
        try:
            smin = minimal_pairs(H, M)
            break
        except BoundTooSmall:
            if attempt == retries:
                raise
            M *= 2
    Y = tuple(
        y for y in closure
        if all(_clamped_apply(sys, m, sys.index(y)) == _clamped_apply(sys, n, sys.index(y)) for m, n in smin)
    )
    return PeriodicityProfile(closure[0], closure, H, Y, smin, per_point, M)


def sigma_member(prof: PeriodicityProfile, m: Sequence[int], n: Sequence[int]) -> bool:
    if len(m) != prof.H.k or len(n) != prof.H.k:
        raise DimensionMismatch(prof.H.k, len(m))
    return lat.member(prof.H, [a - b for a, b in zip(m, n)])


def sigma_min(sys: FiniteSystem, prof: PeriodicityProfile) -> tuple[Pair, ...]:
    return prof.sigma_min


def box_pairs(k: int, B: int):
    rng = range(B + 1)
    for mn in itertools.product(rng, repeat=2 * k):
        yield tuple(mn[:k]), tuple(mn[k:])


def generation_failures(prof: PeriodicityProfile, B: int) -> list[Pair]:
    """Members of Sigma in [0,B]^2k that are not sums of minimal pairs."""
    k = prof.H.k
    gen = {((0,) * k, (0,) * k): True}

    def generated(p: Pair) -> bool:
        if p not in gen:
            gen[p] = False
            for s in prof.sigma_min:
                if _dominates(p, s):
                    q = (tuple(a - b for a, b in zip(p[0], s[0])), tuple(a - b for a, b in zip(p[1], s[1])))
                    if sigma_member(prof, *q) and generated(q):
                        gen[p] = True
                        break
        return gen[p]

    pairs = sorted(box_pairs(k, B), key=lambda p: sum(p[0]) + sum(p[1]))
    return [p for p in pairs if sigma_member(prof, *p) and not generated(p)]


def check_sigma_group_property(sys: FiniteSystem, prof: PeriodicityProfile, B: int) -> bool:
    """Exhaustive check on [0,B]^2k of Sigma membership against direct evaluation
    on Y(x), and of Sigma = (Sigma - Sigma) restricted to N^k x N^k."""
    k = sys.k
    members = []
    for m, n in box_pairs(k, B):
        lattice_says = sigma_member(prof, m, n)
        if lattice_says != sigma_u_member(sys, prof.Y, m, n):
            return False
        if lattice_says:
            members.append((m, n))
    member_set = set(members)
    for (m, n), (p, q) in itertools.product(members, repeat=2):
        d = (tuple(a - b for a, b in zip(m, p)), tuple(a - b for a, b in zip(n, q)))
        if min(d[0] + d[1]) >= 0 and d not in member_set:
            return False
    return True
