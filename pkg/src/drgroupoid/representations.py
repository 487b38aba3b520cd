"""Numerical side: the convolution *-algebra C_c(G_T), the gauge action, the
fibre-summing map onto the quotient by interior isotropy, the orbit
representations pi_{x,theta}, and identity batteries.

Exact arithmetic decides ideal equality elsewhere; here everything is complex
floating point compared at a fixed tolerance.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import lattice as lat
from .dynsys import FiniteSystem, orbit, quasi_orbits
from .errors import (
    BatteryFailure,
    InputError,
    LatticeMismatch,
    MixedQuasiOrbits,
    SourceMismatch,
    SupportNotInLattice,
    VerificationFailure,
)
from .groupoid import GroupoidElement, connecting_displacements, contains, element, unit
from .lattice import Lattice, RationalAngle
from .periodicity import profile

PRUNE = 1e-12
DEFAULT_TOLERANCE = 1e-9

Key = tuple  # (range, displacement, source)


@lru_cache(maxsize=4096)
def _phase(f: Fraction) -> complex:
    f = f - math.floor(f)
    return cmath.exp(2j * math.pi * float(f))


def phase(theta: Sequence[Fraction], g: Sequence[int]) -> complex:
    """exp(2 pi i theta.g), reduced mod 1 exactly before going to floats."""
    return _phase(lat.pairing(theta, g))


class _FiniteFunction:
    """A finitely supported complex function on a set of hashable keys."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping | Iterable = ()):
        acc: dict = defaultdict(complex)
        items = values.items() if isinstance(values, Mapping) else values
        for key, v in items:
            acc[key] += complex(v)
        self._values = {key: v for key, v in acc.items() if abs(v) > PRUNE}

    def _new(self, values):
        return type(self)(values)

    def items(self):
        return self._values.items()

    def support(self):
        return sorted(self._values)

    def __getitem__(self, key) -> complex:
        return self._values.get(key, 0j)

    def __len__(self) -> int:
        return len(self._values)

    def __bool__(self) -> bool:
        return bool(self._values)

    def __add__(self, other):
        return self._new(list(self.items()) + list(other.items()))

    def __sub__(self, other):
        return self._new(list(self.items()) + [(k, -v) for k, v in other.items()])

    def __neg__(self):
        return self._new({k: -v for k, v in self.items()})

    def __mul__(self, c):
        return self._new({k: c * v for k, v in self.items()})

    __rmul__ = __mul__

    def distance(self, other) -> float:
        keys = set(self._values) | set(other._values)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v:.6g}" for k, v in sorted(self.items()))
        return f"{type(self).__name__}({{{body}}})"


class CcFunction(_FiniteFunction):
    """Finitely supported function on the groupoid, keyed by GroupoidElement."""

    __slots__ = ()


class QuotientFunction(_FiniteFunction):
    """Finitely supported function on G/{(y,h,y): h in H}.

    Keys are (range, canonical displacement mod H, source).
    """

    __slots__ = ("lattice",)

    def __init__(self, values=(), lattice: Lattice | None = None):
        if lattice is None:
            raise InputError("a quotient function needs its lattice")
        self.lattice = lattice
        super().__init__(
            ((r, lat.reduce(lattice, g), s), v)
            for (r, g, s), v in (values.items() if isinstance(values, Mapping) else values)
        )

    def _new(self, values):
        return QuotientFunction(values, self.lattice)

    def __add__(self, other):
        _same_lattice(self, other)
        return super().__add__(other)

    def __sub__(self, other):
        _same_lattice(self, other)
        return super().__sub__(other)

    def distance(self, other) -> float:
        _same_lattice(self, other)
        return super().distance(other)


def _same_lattice(a: QuotientFunction, b: QuotientFunction) -> None:
    if a.lattice != b.lattice:
        raise LatticeMismatch(f"{a.lattice} vs {b.lattice}")


@dataclass(frozen=True)
class FinSuppHFun:
    """Finitely supported function on a lattice H."""

    lattice: Lattice
    values: tuple[tuple[tuple[int, ...], complex], ...]

    @classmethod
    def make(cls, H: Lattice, values: Mapping[Sequence[int], complex]) -> "FinSuppHFun":
        acc: dict = defaultdict(complex)
        for n, v in values.items():
            n = tuple(int(a) for a in n)
            if not lat.member(H, n):
                raise SupportNotInLattice(f"{n} is not in {H}")
            acc[n] += complex(v)
        return cls(H, tuple(sorted((n, v) for n, v in acc.items() if abs(v) > PRUNE)))


def indicator(sys: FiniteSystem, x, g: Sequence[int], y) -> CcFunction:
    return CcFunction({element(sys, x, g, y): 1.0})


def unit_indicator(sys: FiniteSystem, x) -> CcFunction:
    return CcFunction({unit(sys, x): 1.0})


def validate_function(sys: FiniteSystem, f: CcFunction) -> None:
    for a, _ in f.items():
        if not contains(sys, a.range, a.displacement, a.source):
            raise InputError(f"{a} is not in the groupoid")


# --- the *-algebra ---------------------------------------------------------


def convolve(f: CcFunction, g: CcFunction) -> CcFunction:
    """(f*g)(x, d, y) = sum over (x, h, u) of f(x, h, u) g(u, d - h, y)."""
    by_range = defaultdict(list)
    for b, v in g.items():
        by_range[b.range].append((b, v))
    out = []
    for a, fa in f.items():
        for b, gb in by_range.get(a.source, ()):
            d = tuple(p + q for p, q in zip(a.displacement, b.displacement))
            out.append((GroupoidElement(a.range, d, b.source), fa * gb))
    return CcFunction(out)


def involution(f: CcFunction) -> CcFunction:
    return CcFunction(
        (GroupoidElement(a.source, tuple(-p for p in a.displacement), a.range), v.conjugate())
        for a, v in f.items()
    )


def i_norm(f: CcFunction) -> float:
    """sup over units of the larger of the source-fibre and range-fibre l^1 sums."""
    by_source: dict = defaultdict(float)
    by_range: dict = defaultdict(float)
    for a, v in f.items():
        by_source[a.source] += abs(v)
        by_range[a.range] += abs(v)
    return max(list(by_source.values()) + list(by_range.values()), default=0.0)


def gauge_act(theta: RationalAngle, f: CcFunction) -> CcFunction:
    """alpha_theta(f)(x, g, y) = exp(2 pi i theta.g) f(x, g, y)."""
    return CcFunction({a: phase(theta, a.displacement) * v for a, v in f.items()})


def conditional_expectation(f: CcFunction) -> CcFunction:
    """Restriction of f to displacement zero."""
    return CcFunction({a: v for a, v in f.items() if not any(a.displacement)})


# --- quotient by interior isotropy ------------------------------------------


def _lattice_of(sys: FiniteSystem, x) -> Lattice:
    return profile(sys, orbit(sys, x)[0]).H


def kappa(sys: FiniteSystem, f: CcFunction, H: Lattice) -> QuotientFunction:
    """Sum f over displacement cosets mod H."""
    seen = {_lattice_of(sys, p) for a, _ in f.items() for p in (a.range, a.source)}
    if len(seen) > 1:
        raise MixedQuasiOrbits("support meets quasi-orbits with different lattices; split f first")
    return QuotientFunction((((a.range, a.displacement, a.source), v) for a, v in f.items()), H)


def quotient_convolve(F: QuotientFunction, G: QuotientFunction) -> QuotientFunction:
    _same_lattice(F, G)
    by_range = defaultdict(list)
    for (r, g, s), v in G.items():
        by_range[r].append((g, s, v))
    out = []
    for (r, h, s), v in F.items():
        for g, t, w in by_range.get(s, ()):
            out.append(((r, tuple(a + b for a, b in zip(h, g)), t), v * w))
    return QuotientFunction(out, F.lattice)


def quotient_involution(F: QuotientFunction) -> QuotientFunction:
    return QuotientFunction(
        (((s, tuple(-a for a in g), r), v.conjugate()) for (r, g, s), v in F.items()), F.lattice
    )


def quotient_gauge_act(theta: RationalAngle, F: QuotientFunction) -> QuotientFunction:
    """The induced action on the quotient, evaluated on canonical representatives.

    Only well defined when theta annihilates the lattice.
    """
    return QuotientFunction((((r, g, s), phase(theta, g) * v) for (r, g, s), v in F.items()), F.lattice)


def lift_indicator(key: tuple, H: Lattice) -> CcFunction:
    """A preimage under kappa of the indicator of one quotient element."""
    r, g, s = key
    return CcFunction({GroupoidElement(r, lat.reduce(H, g), s): 1.0})


# --- module action of c_c(H) ---------------------------------------------------


def phi_dot(sys: FiniteSystem, phi: FinSuppHFun, f: CcFunction) -> CcFunction:
    """(phi . f)(x, g, y) = sum_n phi(n) f(x, g - n, y)."""
    out = []
    for a, v in f.items():
        for n, c in phi.values:
            g = tuple(p + q for p, q in zip(a.displacement, n))
            if not contains(sys, a.range, g, a.source):
                raise VerificationFailure(f"shift of {a} by {n} left the groupoid")
            out.append((GroupoidElement(a.range, g, a.source), c * v))
    return CcFunction(out)


def fourier(phi: FinSuppHFun, theta: RationalAngle) -> complex:
    return sum((c * phase(theta, n) for n, c in phi.values), 0j)


# --- representations ---------------------------------------------------------


def pi_matrix(sys: FiniteSystem, x, theta: RationalAngle, f: CcFunction) -> np.ndarray:
    """Matrix of pi_{x,theta}(f) on l^2([x]) in the sorted basis of [x].

    Entry [u, y] is the sum over (u, g, y) in supp f of exp(2 pi i theta.g) f(u, g, y).
    """
    pts = orbit(sys, x)
    pos = {p: i for i, p in enumerate(pts)}
    M = np.zeros((len(pts), len(pts)), dtype=complex)
    for a, v in f.items():
        if a.source in pos:
            M[pos[a.range], pos[a.source]] += phase(theta, a.displacement) * v
    return M


def omega_matrix(sys: FiniteSystem, x, f: CcFunction) -> np.ndarray:
    return pi_matrix(sys, x, (Fraction(0),) * sys.k, f)


def op_norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def regular_apply(sys: FiniteSystem, x, f: CcFunction, v: Mapping[GroupoidElement, complex]) -> dict:
    """L^x(f) on a finitely supported vector of l^2(G_x)."""
    name = sys.name(sys.index(x))
    by_source = defaultdict(list)
    for a, c in f.items():
        by_source[a.source].append((a, c))
    out: dict = defaultdict(complex)
    for gamma, c in v.items():
        if gamma.source != name:
            raise SourceMismatch(f"{gamma} does not have source {name}")
        for a, fa in by_source.get(gamma.range, ()):
            d = tuple(p + q for p, q in zip(a.displacement, gamma.displacement))
            out[GroupoidElement(a.range, d, gamma.source)] += fa * c
    return {k: w for k, w in out.items() if abs(w) > PRUNE}


# --- intertwiners -------------------------------------------------------------


@dataclass
class Intertwiner:
    points: tuple[str, ...]
    displacements: dict[str, tuple[int, ...]]
    diagonal: np.ndarray
    residual: float

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


def generator_battery(sys: FiniteSystem, x) -> list[CcFunction]:
    """Units and the elementary arrows (y, e_i, T_i y) with their inverses over [x]."""
    pts = orbit(sys, x)
    out = [unit_indicator(sys, y) for y in pts]
    for y in pts:
        for i in range(sys.k):
            e = tuple(int(i == j) for j in range(sys.k))
            ty = sys.name(sys.step(i, sys.index(y)))
            f = indicator(sys, y, e, ty)
            out += [f, involution(f)]
    return out


def intertwiner(sys: FiniteSystem, x, theta: RationalAngle, omega: RationalAngle,
                tolerance: float = DEFAULT_TOLERANCE) -> Intertwiner | None:
    """Diagonal unitary U with U pi_{x,theta}(f) = pi_{x,omega}(f) U, or None.

    None exactly when omega - theta does not annihilate H(x).
    """
    H = _lattice_of(sys, x)
    delta = lat.angle_sub(omega, theta)
    if not lat.annihilator_member(H, delta):
        return None
    pts = orbit(sys, x)
    disp = connecting_displacements(sys, x)
    diag = np.array([phase(delta, tuple(-a for a in disp[y])) for y in pts])
    U = np.diag(diag)
    residual = 0.0
    for f in generator_battery(sys, x):
        lhs = U @ pi_matrix(sys, x, theta, f)
        rhs = pi_matrix(sys, x, omega, f) @ U
        residual = max(residual, op_norm(lhs - rhs))
    if residual > tolerance:
        raise VerificationFailure(f"intertwiner residual {residual:.3e} exceeds {tolerance}")
    return Intertwiner(pts, disp, diag, residual)


# --- random inputs and the identity battery ----------------------------------


IDENTITIES = {
    1: "kappa is a *-homomorphism",
    2: "kappa intertwines the gauge actions on the annihilator",
    3: "kappa(alpha(phi.f)) = phi^(theta) kappa(alpha(f))",
    4: "Phi-equivariance under annihilator translation",
    5: "pi_{x,theta} is a *-homomorphism",
    6: "pi_{x,theta} = omega_[x] o alpha_theta",
    7: "operator norm bounded by the I-norm",
}


@lru_cache(maxsize=None)
def valid_elements(sys: FiniteSystem, x, bound: int = 4) -> tuple[GroupoidElement, ...]:
    """Every (u, g, v) over [x] with |g|_inf <= bound, sorted."""
    pts = orbit(sys, x)
    out = []
    for g in itertools.product(range(-bound, bound + 1), repeat=sys.k):
        for u in pts:
            for v in pts:
                if contains(sys, u, g, v):
                    out.append(GroupoidElement(u, g, v))
    return tuple(sorted(out))


def random_function(rng: np.random.Generator, elements: Sequence[GroupoidElement], max_support: int = 5) -> CcFunction:
    size = int(rng.integers(1, max_support + 1))
    picks = rng.choice(len(elements), size=min(size, len(elements)), replace=False)
    vals = rng.random(len(picks)) + 1j * rng.random(len(picks))
    return CcFunction({elements[int(i)]: complex(v) for i, v in zip(picks, vals)})


def random_angle(rng: np.random.Generator, k: int, max_denominator: int = 12) -> RationalAngle:
    out = []
    for _ in range(k):
        q = int(rng.integers(1, max_denominator + 1))
        out.append(Fraction(int(rng.integers(0, q)), q))
    return lat.make_angle(out)


def random_annihilator_angle(rng: np.random.Generator, H: Lattice, max_denominator: int = 12) -> RationalAngle:
    finite, free = lat.annihilator_generators(H)
    acc = [Fraction(0)] * H.k
    for ang, d in finite:
        a = int(rng.integers(0, d))
        acc = [s + a * t for s, t in zip(acc, ang)]
    for v in free:
        q = int(rng.integers(1, max_denominator + 1))
        t = Fraction(int(rng.integers(0, q)), q)
        acc = [s + t * c for s, c in zip(acc, v)]
    return lat.make_angle(acc)


def random_phi(rng: np.random.Generator, H: Lattice, max_support: int = 3) -> FinSuppHFun:
    vals = {}
    for _ in range(int(rng.integers(1, max_support + 1))):
        coeffs = rng.integers(-2, 3, size=H.rank) if H.rank else []
        n = tuple(sum(int(c) * row[j] for c, row in zip(coeffs, H.basis)) for j in range(H.k))
        vals[n] = complex(rng.random() + 1j * rng.random())
    return FinSuppHFun.make(H, vals)


@dataclass
class BatteryReport:
    seed: int
    trials: int
    tolerance: float
    max_residual: dict[int, float] = field(default_factory=dict)
    worst_input: dict[int, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.max_residual.values())

    @property
    def overall_residual(self) -> float:
        return max(self.max_residual.values(), default=0.0)

    def failing(self) -> list[int]:
        return [i for i, r in sorted(self.max_residual.items()) if r > self.tolerance]

    def lines(self) -> list[str]:
        out = []
        for i in sorted(IDENTITIES):
            r = self.max_residual.get(i, 0.0)
            out.append(f"({i}) {'PASS' if r <= self.tolerance else 'FAIL'} max residual {r:.3e}  {IDENTITIES[i]}")
        return out


def identity_battery(sys: FiniteSystem, trials: int = 100, tolerance: float = DEFAULT_TOLERANCE,
                     seed: int = 0, lattice_override: Lattice | None = None) -> BatteryReport:
    """Check identities (1)-(7) on seeded random inputs.

    Each trial picks a quasi-orbit, functions f, g supported over it with
    displacements |g|_inf <= 4, an angle theta with denominators <= 12, an
    angle eta annihilating H, and phi supported in H.  ``lattice_override``
    replaces H in kappa (a negative control).  Raises BatteryFailure for the
    lowest-numbered failing identity, carrying the full report.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    report = BatteryReport(seed, trials, tolerance, {i: 0.0 for i in IDENTITIES})
    reps = [c.representative for c in quasi_orbits(sys, 0).classes]

    def record(i, residual, inputs):
        if i not in report.worst_input or residual > report.max_residual[i]:
            report.max_residual[i] = residual
            report.worst_input[i] = inputs

    for t in range(trials):
        rep = reps[int(rng.integers(0, len(reps)))]
        H = profile(sys, rep).H
        Hk = lattice_override if lattice_override is not None else H
        elems = valid_elements(sys, rep)
        f = random_function(rng, elems)
        g = random_function(rng, elems)
        theta = random_angle(rng, sys.k)
        eta = random_annihilator_angle(rng, H)
        phi = random_phi(rng, H)
        pts = orbit(sys, rep)
        x = pts[int(rng.integers(0, len(pts)))]
        tag = (f"trial={t} orbit={rep} x={x} theta={lat.format_angle(theta)} "
               f"eta={lat.format_angle(eta)} f={f!r} g={g!r}")

        kf, kg = kappa(sys, f, Hk), kappa(sys, g, Hk)
        r1 = max(kappa(sys, convolve(f, g), Hk).distance(quotient_convolve(kf, kg)),
                 kappa(sys, involution(f), Hk).distance(quotient_involution(kf)))
        record(1, r1, tag)

        r2 = kappa(sys, gauge_act(eta, f), Hk).distance(quotient_gauge_act(eta, kf))
        record(2, r2, tag)

        lhs = kappa(sys, gauge_act(theta, phi_dot(sys, phi, f)), Hk)
        rhs = fourier(phi, theta) * kappa(sys, gauge_act(theta, f), Hk)
        record(3, lhs.distance(rhs), tag)

        shifted = kappa(sys, gauge_act(lat.angle_add(theta, eta), f), Hk)
        record(4, shifted.distance(quotient_gauge_act(eta, kappa(sys, gauge_act(theta, f), Hk))), tag)

        Pf, Pg = pi_matrix(sys, x, theta, f), pi_matrix(sys, x, theta, g)
        r5 = max(op_norm(pi_matrix(sys, x, theta, convolve(f, g)) - Pf @ Pg),
                 op_norm(pi_matrix(sys, x, theta, involution(f)) - Pf.conj().T))
        record(5, r5, tag)

        record(6, op_norm(Pf - omega_matrix(sys, x, gauge_act(theta, f))), tag)

        record(7, max(0.0, op_norm(Pf) - i_norm(f)), tag)

    bad = report.failing()
    if bad:
        i = bad[0]
        raise BatteryFailure(i, report.worst_input[i], report.max_residual[i], report)
    return report
