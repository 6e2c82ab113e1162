import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetalattice.energy import difference_energy
from thetalattice.errors import DomainError
from thetalattice.modular import (
    GroupGenerator,
    GroupWord,
    apply,
    in_closed_domain,
    invert,
    is_on_gamma_c,
    reduce,
    reflect,
    translate,
)
from thetalattice.points import HEX_Y, HEXAGONAL, EnergyParams, UpperHalfPoint

points = st.builds(UpperHalfPoint, st.floats(-20, 20), st.floats(1e-3, 30))
generators = st.one_of(st.just(invert()), st.just(reflect()), st.integers(-5, 5).map(translate))
words = st.lists(generators, max_size=6).map(GroupWord)


@given(points)
@settings(max_examples=300, deadline=None)
def test_reduce_lands_in_closed_domain(z):
    r = reduce(z)
    assert in_closed_domain(r.point, tol=1e-9)


@given(points)
@settings(max_examples=200, deadline=None)
def test_recorded_word_reproduces_reduction(z):
    r = reduce(z)
    w = apply(r.word, z)
    assert w.x == pytest.approx(r.point.x, abs=1e-9 * (1 + abs(z.x)))
    assert w.y == pytest.approx(r.point.y, rel=1e-9)


@given(points, words)
@settings(max_examples=200, deadline=None)
def test_word_inverse_round_trip(z, word):
    w = apply(word.inverse(), apply(word, z))
    assert abs(w.z - z.z) <= 1e-8 * (1 + abs(z.z)) ** 3


@given(st.floats(0.0, 0.5), st.floats(1.0, 10.0), words)
@settings(max_examples=50, deadline=None)
def test_energy_is_group_invariant(x, y, word):
    if x * x + y * y < 1:
        return
    z = UpperHalfPoint(x, y)
    zw = apply(word, z)
    if zw.y < 1e-2:
        return
    p = EnergyParams(2.0, 2.0)
    a = difference_energy(p, z).value
    b = difference_energy(p, zw).value
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_known_reductions():
    assert reduce(complex(0.0, 0.5)).point == UpperHalfPoint(0.0, 2.0)
    r = reduce(complex(3.5, HEX_Y))
    assert r.point.x == pytest.approx(0.5) and r.point.y == pytest.approx(HEX_Y)
    assert str(reduce(HEXAGONAL).word) == "identity"


def test_gamma_c_membership():
    assert is_on_gamma_c(UpperHalfPoint(0.5, 3.0))
    assert not is_on_gamma_c(UpperHalfPoint(0.4, 3.0))


def test_generator_validation():
    with pytest.raises(DomainError):
        GroupGenerator("rotate")
    with pytest.raises(DomainError):
        GroupGenerator("invert", 2)


def test_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        reduce(complex(0.1, -1.0))
    with pytest.raises(DomainError):
        UpperHalfPoint(0.0, 0.0)


def test_reduction_is_idempotent():
    z = UpperHalfPoint(0.3, math.sqrt(1 - 0.09) + 1e-3)
    assert reduce(z).point == z
