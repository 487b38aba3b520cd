"""The primitive-ideal catalogue.

Prim C*(G_T) is parametrized by pairs (x, theta): (x, theta) and (y, omega) give
the same ideal iff x and y have the same orbit closure and omega - theta
annihilates H(x).  A label is therefore (quasi-orbit representative, restriction
of theta to H(x)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lattice as lat
from .dynsys import FiniteSystem, orbit, quasi_orbits, restrict
from .errors import DimensionMismatch, NotSeparable, VerificationFailure
from .groupoid import GroupoidElement
from .lattice import CharacterLabel, Lattice, RationalAngle
from .periodicity import PeriodicityProfile, profile, sigma_u_member
from .representations import (
    DEFAULT_TOLERANCE,
    CcFunction,
    op_norm,
    phase,
    pi_matrix,
)


@dataclass(frozen=True, order=True)
class PrimIdealLabel:
    quasi_orbit: str
    character: CharacterLabel

    def __str__(self) -> str:
        return f"({self.quasi_orbit}, [{lat.format_angle(self.character)}])"


@dataclass(frozen=True)
class CatalogueEntry:
    quasi_orbit: str
    points: tuple[str, ...]
    H: Lattice
    smith_invariants: tuple[tuple[int, ...], int]
    Y: tuple[str, ...]
    dual_description: str


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    reason: str


def _label_profile(sys: FiniteSystem, x) -> PeriodicityProfile:
    return profile(sys, orbit(sys, x)[0])


def classify(sys: FiniteSystem, x, theta: RationalAngle) -> PrimIdealLabel:
    prof = _label_profile(sys, x)
    return PrimIdealLabel(prof.quasi_orbit, lat.restrict_character(prof.H, theta))


def equivalent(sys: FiniteSystem, a: tuple, b: tuple) -> Verdict:
    (x, theta), (y, omega) = a, b
    for t in (theta, omega):
        if len(t) != sys.k:
            raise DimensionMismatch(sys.k, len(t))
    px, py = _label_profile(sys, x), _label_profile(sys, y)
    if px.closure != py.closure:
        return Verdict(False, f"orbit closures differ: {px.quasi_orbit} vs {py.quasi_orbit}")
    delta = lat.angle_sub(omega, theta)
    if not lat.annihilator_member(px.H, delta):
        return Verdict(False, f"character clause: difference {lat.format_angle(delta)} does not annihilate H = {px.H}")
    return Verdict(True, f"same orbit closure and difference {lat.format_angle(delta)} annihilates H = {px.H}")


def catalogue(sys: FiniteSystem, retries: int = 4) -> list[CatalogueEntry]:
    out = []
    for c in quasi_orbits(sys, 0).classes:
        prof = profile(sys, c.representative, retries=retries)
        out.append(CatalogueEntry(
            c.representative, c.points, prof.H, lat.smith_invariants(prof.H), prof.Y,
            lat.dual_description(prof.H),
        ))
    return out


@dataclass
class Witness:
    """h in C_c(G_T) with pi_{killed}(h) = 0 and pi_{survivor}(h) != 0."""

    function: CcFunction
    killed: tuple
    survivor: tuple
    killed_norm: float
    surviving_norm: float
    n: tuple[int, ...] | None = None
    kind: str = "character"


def separating_witness(sys: FiniteSystem, a: tuple, b: tuple,
                       tolerance: float = DEFAULT_TOLERANCE) -> Witness:
    """An element of ker pi_b outside ker pi_a, for inequivalent a = (x, theta), b = (y, omega).

    Different closures: the indicator of the unit at x.  Same closure: with n the
    first HNF row of H(x) on which theta and omega differ, h = w^n 1_(x,0,x) -
    1_(x,n,x) where w = exp(2 pi i omega).
    """
    (x, theta), (y, omega) = a, b
    verdict = equivalent(sys, a, b)
    if verdict.equivalent:
        raise NotSeparable(f"{a} and {b} give the same primitive ideal")
    x = sys.name(sys.index(x))
    zero = (0,) * sys.k
    px, py = _label_profile(sys, x), _label_profile(sys, y)
    if px.closure != py.closure:
        h = CcFunction({GroupoidElement(x, zero, x): 1.0})
        n, kind = None, "support"
    else:
        n = next(row for row in px.H.basis if lat.pairing(theta, row) % 1 != lat.pairing(omega, row) % 1)
        h = CcFunction({
            GroupoidElement(x, zero, x): phase(omega, n),
            GroupoidElement(x, n, x): -1.0,
        })
        kind = "character"
    killed = op_norm(pi_matrix(sys, y, omega, h))
    survives = op_norm(pi_matrix(sys, x, theta, h))
    if killed > tolerance or survives < 1e-3:
        raise VerificationFailure(f"witness failed: killed norm {killed:.3e}, surviving norm {survives:.3e}")
    return Witness(h, b, a, killed, survives, n, kind)


@dataclass
class ComponentTopology:
    quasi_orbit: str
    applied_to: tuple[str, ...]
    whole_component: bool
    hypothesis_holds: bool
    H: Lattice
    dual_description: str


@dataclass
class TopologyReport:
    """Verdict on the Jacobson topology.

    ``determined`` is True when the special-case theorem applies to every
    component; then Prim is the disjoint union over quasi-orbits of the
    character groups of H, and a product QO x H^ when there is one lattice.
    """

    determined: bool
    irreducible: bool
    components: list[ComponentTopology] = field(default_factory=list)
    statement: str = ""


def _hypothesis_on(sys: FiniteSystem, Y: tuple[str, ...], prof: PeriodicityProfile) -> bool:
    # T restricted to Y: Sigma over each orbit closure inside Y must be all of Sigma
    sub = restrict(sys, Y)
    for y in sub.points:
        closure = orbit(sub, y)
        if not all(sigma_u_member(sub, closure, m, n) for m, n in prof.sigma_min):
            return False
    return True


def jacobson_topology(sys: FiniteSystem, retries: int = 4) -> TopologyReport:
    classes = quasi_orbits(sys, 0).classes
    comps = []
    for c in classes:
        prof = profile(sys, c.representative, retries=retries)
        comps.append(ComponentTopology(
            c.representative, prof.Y, prof.Y == prof.closure, _hypothesis_on(sys, prof.Y, prof),
            prof.H, lat.dual_description(prof.H),
        ))
    determined = all(c.hypothesis_holds for c in comps)
    irreducible = len(comps) == 1
    if not determined:
        statement = ("not determined: the hypotheses of the special-case theorem fail, and the "
                     "general classification carries no topological information")
    elif irreducible:
        statement = f"Prim is homeomorphic to QO x H^ with QO a single point and H = {comps[0].H}"
    elif len({c.H for c in comps}) == 1:
        statement = (f"Prim is homeomorphic to QO x H^ with QO discrete on {len(comps)} points "
                     f"and H = {comps[0].H}")
    else:
        statement = "Prim is the disjoint union over the discrete quasi-orbit space of the character groups H(x)^"
    return TopologyReport(determined, irreducible, comps, statement)


def c0_kernel_order(sys: FiniteSystem, a: tuple, b: tuple) -> str:
    """Compare ker pi_a and ker pi_b intersected with C_0(X).

    ker pi_{x,.} meets C_0(X) in the functions vanishing on the closure of [x],
    so the order is reversed inclusion of orbit closures.  Returns "equal",
    "first_contained" (ker_a strictly inside ker_b), "second_contained" or
    "incomparable".
    """
    A, B = set(orbit(sys, a[0])), set(orbit(sys, b[0]))
    return closure_order(A, B)


def closure_order(A: set, B: set) -> str:
    if A == B:
        return "equal"
    if B < A:
        return "first_contained"
    if A < B:
        return "second_contained"
    return "incomparable"

