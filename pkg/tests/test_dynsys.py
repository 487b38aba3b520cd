import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drgroupoid import dynsys as ds
from drgroupoid import fixtures as fx
from drgroupoid.errors import BadIndex, InputError, NonCommuting, NotInvariant
from oracles import brute_orbits, naive_apply, random_system

seeds = st.integers(0, 10**6)


def test_validation_errors():
    with pytest.raises(NonCommuting) as exc:
        ds.validate_system(["a", "b", "c"], [[1, 2, 0], [0, 0, 0]])
    assert (exc.value.i, exc.value.j) == (1, 2)
    with pytest.raises(BadIndex):
        ds.validate_system(["a"], [[1]])
    with pytest.raises(InputError):
        ds.validate_system(["a", "a"], [[0, 0]])
    with pytest.raises(InputError):
        ds.validate_system([], [[]])
    with pytest.raises(BadIndex):
        ds.orbit(fx.CYCLE3, "q")


def test_apply_and_orbits():
    assert ds.apply(fx.CYCLE3, (4,), "p0") == "p1"
    assert ds.apply(fx.SWAP2, (1, 5), "a") == "b"
    assert ds.orbit(fx.COLLAPSE, "b") == ("a", "b")
    assert ds.orbit(fx.TWO_CYCLES, "d") == ("c", "d")
    assert [c.representative for c in ds.quasi_orbits(fx.TWO_CYCLES).classes] == ["a", "c"]
    with pytest.raises(InputError):
        ds.apply(fx.CYCLE3, (-1,), "p0")


def test_eventual_data():
    ev = ds.eventual_data(fx.COLLAPSE, "a")
    assert (ev.preperiod, ev.period) == ((1,), (1,))
    assert ds.eventual_data(fx.CYCLE3, "p0").period == (3,)
    assert ds.eventual_data(fx.SWAP2, "a").period == (2, 1)


def test_restrict():
    sub = ds.restrict(fx.COLLAPSE, ["b"])
    assert sub.points == ("b",) and sub.maps == ((0,),)
    with pytest.raises(NotInvariant) as exc:
        ds.restrict(fx.COLLAPSE, ["a"])
    assert exc.value.i == 1


def test_invariant_subsets():
    subsets = set(ds.closed_invariant_subsets(fx.TWO_CYCLES))
    assert subsets == {frozenset(), frozenset("ab"), frozenset("cd"), frozenset("abcd")}
    irr = set(ds.irreducible_subsets(sorted(subsets, key=len)))
    assert irr == {frozenset("ab"), frozenset("cd")}
    assert ds.quasi_orbits(fx.CYCLE3, 2).closed_invariant_subsets is None


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_orbits_match_brute_force(seed):
    sys = random_system(seed)
    brute = brute_orbits(sys, len(sys))
    got = [frozenset(c.points) for c in ds.quasi_orbits(sys, 0).classes]
    assert sorted(got, key=sorted) == sorted(brute, key=sorted)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_eventual_data_is_least(seed):
    sys = random_system(seed)
    for x in sys.points:
        ev = ds.eventual_data(sys, x)
        R = [sys.index(p) for p in ds.reachable(sys, x)]
        for i, (a, c) in enumerate(zip(ev.preperiod, ev.period)):
            e = lambda t: tuple(t if j == i else 0 for j in range(sys.k))
            assert all(naive_apply(sys, e(a + c), y) == naive_apply(sys, e(a), y) for y in R)
            assert a <= len(R) and c <= len(R)
            if a > 0:
                assert any(naive_apply(sys, e(a - 1 + c), y) != naive_apply(sys, e(a - 1), y) for y in R)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_irreducible_sets_are_orbits(seed):
    sys = random_system(seed)
    part = ds.quasi_orbits(sys, 8)
    irr = set(ds.irreducible_subsets(part.closed_invariant_subsets))
    assert irr == {frozenset(c.points) for c in part.classes}
