from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drgroupoid import fixtures as fx
from drgroupoid import lattice as lat
from drgroupoid import representations as rp
from drgroupoid.errors import (
    BatteryFailure,
    LatticeMismatch,
    MixedQuasiOrbits,
    SourceMismatch,
    SupportNotInLattice,
)
from drgroupoid.groupoid import GroupoidElement as E
from drgroupoid.periodicity import profile
from oracles import pi_oracle, random_system

seeds = st.integers(0, 10**6)


def _setup(seed):
    sys = random_system(seed)
    rng = np.random.default_rng(seed)
    x = sys.points[int(rng.integers(0, len(sys)))]
    elems = rp.valid_elements(sys, x, 3)
    return sys, rng, x, elems


def test_convolution_example():
    f = rp.indicator(fx.CYCLE3, "p0", (1,), "p1")
    g = rp.indicator(fx.CYCLE3, "p1", (1,), "p2")
    h = rp.convolve(f, g)
    assert h[E("p0", (2,), "p2")] == 1
    assert len(h) == 1
    assert rp.involution(f)[E("p1", (-1,), "p0")] == 1


def test_pi_example():
    h = rp.CcFunction({E("p0", (0,), "p0"): 1, E("p0", (3,), "p0"): -1})
    assert rp.op_norm(rp.pi_matrix(fx.CYCLE3, "p0", (F(0),), h)) == 0
    M = rp.pi_matrix(fx.CYCLE3, "p0", (F(1, 6),), h)
    assert np.allclose(M, np.diag([2, 0, 0]))


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_pi_matches_defining_formula(seed):
    sys, rng, x, elems = _setup(seed)
    f = rp.random_function(rng, elems)
    theta = rp.random_angle(rng, sys.k)
    assert np.allclose(rp.pi_matrix(sys, x, theta, f), pi_oracle(sys, x, theta, f))


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_algebra_laws(seed):
    sys, rng, x, elems = _setup(seed)
    f, g, h = (rp.random_function(rng, elems) for _ in range(3))
    lhs = rp.convolve(rp.convolve(f, g), h)
    rhs = rp.convolve(f, rp.convolve(g, h))
    assert lhs.distance(rhs) < 1e-12
    assert rp.involution(rp.convolve(f, g)).distance(rp.convolve(rp.involution(g), rp.involution(f))) < 1e-12
    theta = rp.random_angle(rng, sys.k)
    assert rp.gauge_act(theta, rp.convolve(f, g)).distance(
        rp.convolve(rp.gauge_act(theta, f), rp.gauge_act(theta, g))) < 1e-12
    M = rp.pi_matrix(sys, x, theta, f)
    assert rp.op_norm(M) <= rp.i_norm(f) + 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_regular_representation_contains_pi(seed):
    # on the basis delta_(x, g, y) the left regular rep is convolution by f
    sys, rng, x, elems = _setup(seed)
    f = rp.random_function(rng, elems)
    v = {rp.unit(sys, x): 1.0}
    out = rp.regular_apply(sys, x, f, v)
    direct = rp.convolve(f, rp.CcFunction({rp.unit(sys, x): 1.0}))
    assert rp.CcFunction(out).distance(direct) < 1e-12


def test_regular_apply_source_check():
    with pytest.raises(SourceMismatch):
        rp.regular_apply(fx.CYCLE3, "p0", rp.unit_indicator(fx.CYCLE3, "p0"), {E("p1", (0,), "p1"): 1})


def test_kappa_and_errors():
    H = lat.hnf([(3,)])
    f = rp.CcFunction({E("p0", (0,), "p0"): 1, E("p0", (3,), "p0"): 2, E("p0", (1,), "p1"): 1j})
    k = rp.kappa(fx.CYCLE3, f, H)
    assert k[("p0", (0,), "p0")] == 3
    assert k[("p0", (1,), "p1")] == 1j
    other = rp.QuotientFunction({}, lat.full_lattice(1))
    with pytest.raises(LatticeMismatch):
        k.distance(other)
    with pytest.raises(SupportNotInLattice):
        rp.FinSuppHFun.make(H, {(1,): 1})
    # a function straddling two orbits with different lattices
    from drgroupoid.dynsys import validate_system

    sys = validate_system(["a", "b", "c"], [[1, 0, 2]])
    g = rp.CcFunction({E("a", (0,), "a"): 1, E("c", (0,), "c"): 1})
    with pytest.raises(MixedQuasiOrbits):
        rp.kappa(sys, g, profile(sys, "a").H)


def test_battery_passes_on_fixtures(fixture_system):
    report = rp.identity_battery(fixture_system, trials=30, seed=1)
    assert report.passed
    assert report.overall_residual <= 1e-9
    assert len(report.lines()) == 7


def test_battery_negative_control():
    with pytest.raises(BatteryFailure) as exc:
        rp.identity_battery(fx.CYCLE3, trials=30, lattice_override=lat.full_lattice(1))
    assert exc.value.identity == 2
    assert not exc.value.report.passed


def test_intertwiner_cycle3():
    U = rp.intertwiner(fx.CYCLE3, "p0", (F(0),), (F(1, 3),))
    w = np.exp(-2j * np.pi / 3)
    assert np.allclose(U.diagonal, [1, w, w ** 2])
    assert U.residual < 1e-12
    assert rp.intertwiner(fx.CYCLE3, "p0", (F(0),), (F(1, 6),)) is None


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_intertwiner_on_random_functions(seed):
    sys, rng, x, elems = _setup(seed)
    H = profile(sys, x).H
    theta = rp.random_angle(rng, sys.k)
    omega = lat.angle_add(theta, rp.random_annihilator_angle(rng, H))
    U = rp.intertwiner(sys, x, theta, omega)
    f = rp.random_function(rng, elems)
    lhs = U.matrix @ rp.pi_matrix(sys, x, theta, f)
    rhs = rp.pi_matrix(sys, x, omega, f) @ U.matrix
    assert np.abs(lhs - rhs).max() < 1e-9


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_fourier_of_phi_action(seed):
    # pi_{x,theta}(phi . f) = phi^(theta) pi_{x,theta}(f), for theta killing H
    sys, rng, x, elems = _setup(seed)
    H = profile(sys, x).H
    theta = rp.random_annihilator_angle(rng, H)
    phi = rp.random_phi(rng, H)
    f = rp.random_function(rng, elems)
    lhs = rp.pi_matrix(sys, x, theta, rp.phi_dot(sys, phi, f))
    rhs = rp.fourier(phi, theta) * rp.pi_matrix(sys, x, theta, f)
    assert np.abs(lhs - rhs).max() < 1e-9
