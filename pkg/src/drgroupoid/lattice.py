"""Subgroups of Z^k in Hermite normal form, and exact character arithmetic.

A character of Z^k is written as an angle vector theta in [0,1)^k with rational
entries, standing for z = exp(2 pi i theta); z^g = exp(2 pi i theta.g).  The
restriction of that character to a lattice H is recorded as the vector of
theta.b mod 1 over the HNF rows b of H, which determines it uniquely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, InputError

Vector = tuple[int, ...]
RationalAngle = tuple[Fraction, ...]
CharacterLabel = tuple[Fraction, ...]


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^k, stored by its row Hermite normal form.

    Rows are independent, pivots (first nonzero entries) are positive and sit in
    strictly increasing columns, and entries above each pivot lie in [0, pivot).
    Two lattices are equal iff their bases are equal.
    """

    k: int
    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_pivot(row) for row in self.basis)

    def __contains__(self, g) -> bool:
        return member(self, g)

    def __str__(self) -> str:
        if not self.basis:
            return "0"
        if self.k == 1:
            d = self.basis[0][0]
            return "Z" if d == 1 else f"{d}Z"
        return "<" + ", ".join("(" + ",".join(map(str, row)) + ")" for row in self.basis) + ">"


def _pivot(row: Sequence[int]) -> int:
    for j, a in enumerate(row):
        if a:
            return j
    return -1


def zero_lattice(k: int) -> Lattice:
    return Lattice(k, ())


def full_lattice(k: int) -> Lattice:
    return Lattice(k, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))


def hnf(generators: Iterable[Sequence[int]], k: int | None = None) -> Lattice:
    """HNF basis of the subgroup generated by ``generators``.

    ``k`` is needed when the generator list is empty.
    """
    rows = [list(map(int, g)) for g in generators]
    if k is None:
        if not rows:
            raise InputError("ambient rank required for an empty generator list")
        k = len(rows[0])
    for r in rows:
        if len(r) != k:
            raise DimensionMismatch(k, len(r))
    rows = [r for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(k):
        live = [r for r in rows if r[col]]
        rows = [r for r in rows if not r[col]]
        # Euclid on column ``col`` among the rows that are nonzero there
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rows.append(r)
            live = nxt
        if live:
            piv = live[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
    for i, row in enumerate(basis):
        c = _pivot(row)
        p = row[c]
        for j in range(i):
            q = basis[j][c] // p
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], row)]
    return Lattice(k, tuple(tuple(r) for r in basis))


def _check_dim(L: Lattice, g: Sequence) -> None:
    if len(g) != L.k:
        raise DimensionMismatch(L.k, len(g))


def reduce(L: Lattice, g: Sequence[int]) -> Vector:
    """Canonical representative of the coset g + L.

    Each pivot entry is brought into [0, pivot) in HNF row order; the result is
    the same for every member of the coset.
    """
    _check_dim(L, g)
    v = list(map(int, g))
    for row in L.basis:
        c = _pivot(row)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def member(L: Lattice, g: Sequence[int]) -> bool:
    return not any(reduce(L, g))


def coordinates(L: Lattice, g: Sequence[int]) -> tuple[int, ...]:
    """Integer coefficients of a member g against the HNF rows."""
    _check_dim(L, g)
    v = list(map(int, g))
    coeffs = []
    for row in L.basis:
        c = _pivot(row)
        q, r = divmod(v[c], row[c])
        if r:
            raise InputError(f"{tuple(g)} is not in {L}")
        coeffs.append(q)
        v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        raise InputError(f"{tuple(g)} is not in {L}")
    return tuple(coeffs)


def is_sublattice(A: Lattice, B: Lattice) -> bool:
    return all(member(B, row) for row in A.basis)


def join(lattices: Iterable[Lattice], k: int) -> Lattice:
    return hnf((row for L in lattices for row in L.basis), k)


def points_in_box(L: Lattice, bound: int) -> Iterator[Vector]:
    """All members of L with every |entry| <= bound, in a deterministic order."""
    k = L.k
    basis = L.basis
    pivots = L.pivots
    out: list[Vector] = []

    def walk(i: int, v: list[int]) -> None:
        if i == len(basis):
            if all(abs(a) <= bound for a in v):
                out.append(tuple(v))
            return
        row, c = basis[i], pivots[i]
        p = row[c]
        # rows after i vanish in column c, so v[c] + t*p is final there
        lo = -((bound + v[c]) // p)
        hi = (bound - v[c]) // p
        for t in range(lo, hi + 1):
            walk(i + 1, [a + t * b for a, b in zip(v, row)])

    walk(0, [0] * k)
    return iter(out)


# --- rational angles -------------------------------------------------------


def make_angle(values: Iterable) -> RationalAngle:
    """Normalize to a tuple of Fractions in [0, 1)."""
    out = []
    for v in values:
        f = Fraction(v) if not isinstance(v, str) else parse_rational(v)
        out.append(f - (f.numerator // f.denominator))
    return tuple(out)


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc


def parse_angle(text: str, k: int | None = None) -> RationalAngle:
    """Parse ``"1/3"`` or ``"1/4,1/3"`` into a normalized angle."""
    parts = [p for p in text.replace(" ", "").strip("()").split(",") if p]
    theta = make_angle(parse_rational(p) for p in parts)
    if k is not None and len(theta) != k:
        raise DimensionMismatch(k, len(theta))
    return theta


def format_rational(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def format_angle(theta: Sequence[Fraction]) -> str:
    return ",".join(format_rational(f) for f in theta)


def angle_sub(theta: RationalAngle, omega: RationalAngle) -> RationalAngle:
    return make_angle(a - b for a, b in zip(theta, omega))


def angle_add(theta: RationalAngle, omega: RationalAngle) -> RationalAngle:
    return make_angle(a + b for a, b in zip(theta, omega))


def pairing(theta: Sequence[Fraction], g: Sequence[int]) -> Fraction:
    """theta . g, exactly."""
    return sum((Fraction(a) * b for a, b in zip(theta, g)), Fraction(0))


def annihilator_member(H: Lattice, theta: RationalAngle) -> bool:
    """Whether exp(2 pi i theta) kills every element of H."""
    _check_dim(H, theta)
    return all(pairing(theta, b).denominator == 1 for b in H.basis)


def restrict_character(H: Lattice, theta: RationalAngle) -> CharacterLabel:
    _check_dim(H, theta)
    return make_angle(pairing(theta, b) for b in H.basis)


# --- Smith normal form -----------------------------------------------------


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Return (D, U, V) with U*A*V = D, U and V unimodular, D diagonal.

    The diagonal entries d_1 | d_2 | ... are nonnegative.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(map(int, r)) for r in A]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for M in (D, V):
            for r in M:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return D, U, V


def smith_invariants(H: Lattice) -> tuple[tuple[int, ...], int]:
    """Invariant factors of H inside Z^k and the free rank k - rank(H).

    Z^k / H is isomorphic to Z/d_1 + ... + Z/d_r + Z^(k - r).
    """
    if not H.basis:
        return (), H.k
    D, _, _ = smith_normal_form(H.basis, H.k)
    return tuple(D[i][i] for i in range(H.rank)), H.k - H.rank


def annihilator_generators(H: Lattice):
    """Describe the annihilator of H in T^k.

    Returns (finite, free): ``finite`` is a list of (angle, order) pairs whose
    multiples give the finite part; ``free`` lists integer directions v such that
    every t*v (t real) lies in the annihilator.  Any element of the annihilator
    is sum a_i*finite_i + sum t_j*free_j mod 1.
    """
    k = H.k
    if not H.basis:
        return [], [tuple(int(i == j) for j in range(k)) for i in range(k)]
    D, _, V = smith_normal_form(H.basis, k)
    finite = []
    for i in range(H.rank):
        d = D[i][i]
        if d > 1:
            finite.append((make_angle(Fraction(V[r][i], d) for r in range(k)), d))
    free = [tuple(V[r][j] for r in range(k)) for j in range(H.rank, k)]
    return finite, free


def annihilator_elements(H: Lattice, free_denominator: int = 1) -> list[RationalAngle]:
    """All annihilator elements reachable with free parameters in (1/q)Z.

    With ``free_denominator`` 1 and H of full rank this is the whole finite
    group H^perp.
    """
    finite, free = annihilator_generators(H)
    q = free_denominator
    ranges = [range(d) for _, d in finite] + [range(q) for _ in free]
    out = set()
    for coeffs in itertools.product(*ranges):
        acc = [Fraction(0)] * H.k
        for (ang, _), a in zip(finite, coeffs):
            acc = [x + a * y for x, y in zip(acc, ang)]
        for v, t in zip(free, coeffs[len(finite):]):
            acc = [x + Fraction(t, q) * y for x, y in zip(acc, v)]
        out.add(make_angle(acc))
    return sorted(out)


def dual_description(H: Lattice) -> str:
    """Text shape of the character group of H and of its annihilator."""
    factors, free = smith_invariants(H)
    r = H.rank
    dual = "trivial" if r == 0 else ("T" if r == 1 else f"T^{r}")
    parts = [f"Z/{d}" for d in factors if d > 1]
    if free:
        parts.append("T" if free == 1 else f"T^{free}")
    perp = " x ".join(parts) if parts else "trivial"
    return f"characters of {H} form {dual}; annihilator in T^{H.k} is {perp}"
