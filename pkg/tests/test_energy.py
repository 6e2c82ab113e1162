import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from thetalattice.energy import (
    difference_energy,
    difference_energy_grad,
    gamma_c_energy,
    k_energy_direct,
    k_energy_expansion,
    theta_2d,
    theta_2d_direct,
    transversal_terms,
)
from thetalattice.errors import DomainError
from thetalattice.points import HEX_Y, HEXAGONAL, SQRT8, EnergyParams, UpperHalfPoint

# frozen from the mpmath oracle (40 digits)
THETA_1_I = 1.1803405990160962
K_2_HEX = 0.004894733476085491


def test_frozen_theta_at_i():
    assert theta_2d(1.0, UpperHalfPoint(0.0, 1.0)).value == pytest.approx(THETA_1_I, rel=1e-15)


def test_frozen_k_at_hexagonal():
    assert k_energy_expansion(2.0, HEXAGONAL).value == pytest.approx(K_2_HEX, rel=1e-14)
    assert k_energy_direct(2.0, HEXAGONAL).value == pytest.approx(K_2_HEX, rel=1e-14)


@pytest.mark.parametrize("alpha,x,y", [(0.7, 0.1, 1.2), (1.0, 0.0, 1.0), (2.0, 0.5, HEX_Y), (3.0, 0.3, 2.5),
                                       (5.0, 0.45, 4.0), (2.0, 0.2, 9.0)])
def test_k_matches_mpmath(alpha, x, y):
    z = UpperHalfPoint(x, y)
    ref = float(oracles.k_energy(alpha, x, y))
    assert k_energy_expansion(alpha, z).value == pytest.approx(ref, rel=1e-12)
    assert k_energy_direct(alpha, z).value == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha,x,y", [(1.0, 0.25, 1.1), (2.0, 0.5, 3.0), (0.5, 0.0, 1.5)])
def test_theta_2d_matches_mpmath(alpha, x, y):
    ref = float(oracles.theta2d(alpha, x, y))
    z = UpperHalfPoint(x, y)
    assert theta_2d(alpha, z).value == pytest.approx(ref, rel=1e-13)
    assert theta_2d_direct(alpha, z) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("alpha,b,y", [(2.0, 2.0, 1.0), (2.0, SQRT8, 7.0), (3.0, 3.0, 20.0), (2.0, 2.81, 15.0)])
def test_difference_energy_matches_mpmath(alpha, b, y):
    ref = float(oracles.difference_energy(alpha, b, 0.5, y))
    got = difference_energy(EnergyParams(alpha, b), UpperHalfPoint(0.5, y)).value
    assert got == pytest.approx(ref, rel=1e-11)


@given(st.floats(1.0, 5.0), st.floats(0.0, 0.5), st.floats(0.0, 1.0))
@settings(max_examples=60, deadline=None)
def test_expansion_equals_direct(alpha, x, t):
    y = math.sqrt(1 - x * x) + t * (6.0 - math.sqrt(1 - x * x))
    z = UpperHalfPoint(x, y)
    a = k_energy_expansion(alpha, z).value
    b = k_energy_direct(alpha, z).value
    assert abs(a - b) <= 1e-11


@given(st.floats(0.5, 5.0), st.floats(0.05, 0.45), st.floats(1.0, 3.0))
@settings(max_examples=40, deadline=None)
def test_k_is_minus_alpha_derivative_of_theta(alpha, x, y):
    z = UpperHalfPoint(x, y)
    h = 1e-5 * alpha
    d = (theta_2d(alpha + h, z).value - theta_2d(alpha - h, z).value) / (2 * h)
    k = k_energy_expansion(alpha, z).value
    assert -d / math.pi == pytest.approx(k, rel=1e-6)


def test_error_estimate_is_honest():
    z = UpperHalfPoint(0.3, 1.7)
    ev = difference_energy(EnergyParams(2.0, 1.5), z)
    ref = float(oracles.difference_energy(2.0, 1.5, 0.3, 1.7))
    assert abs(ev.value - ref) <= ev.est_error + 4e-16 * abs(ref)


def test_gamma_c_vectorized_matches_scalar():
    p = EnergyParams(2.0, 2.5)
    ys = np.array([HEX_Y, 1.0, 3.0, 12.0, 40.0])
    vec = gamma_c_energy(p, ys)
    for y, v in zip(ys, vec):
        assert v == pytest.approx(difference_energy(p, UpperHalfPoint(0.5, y)).value, rel=1e-12)


def test_gamma_c_rejects_points_below_hexagonal_height():
    with pytest.raises(DomainError):
        gamma_c_energy(EnergyParams(2.0, 1.0), [0.5])


def test_cancellation_at_critical_mixing_is_resolved():
    # K(a) and 2 sqrt2 K(2a) agree to about seven digits here; the
    # difference keeps full relative accuracy
    p = EnergyParams(2.0, SQRT8)
    y = 20.0
    ref = float(oracles.difference_energy(2.0, SQRT8, 0.5, y))
    assert gamma_c_energy(p, [y])[0] == pytest.approx(ref, rel=1e-9)
    assert ref > 0


@pytest.mark.parametrize("method", ["auto", "expansion", "direct"])
def test_methods_agree(method):
    z = UpperHalfPoint(0.2, 1.4)
    p = EnergyParams(2.5, 1.0)
    ref = float(oracles.difference_energy(2.5, 1.0, 0.2, 1.4))
    assert difference_energy(p, z, method=method).value == pytest.approx(ref, rel=1e-12)


def test_unknown_method():
    with pytest.raises(DomainError):
        difference_energy(EnergyParams(2.0, 0.0), HEXAGONAL, method="fast")


@given(st.floats(1.5, 4.0), st.floats(0.0, SQRT8), st.floats(0.05, 0.45), st.floats(1.1, 3.0))
@settings(max_examples=30, deadline=None)
def test_gradient_matches_finite_differences(alpha, b, x, y):
    p = EnergyParams(alpha, b)
    gx, gy = difference_energy_grad(p, UpperHalfPoint(x, y))
    h = 1e-5

    def e(xx, yy):
        return difference_energy(p, UpperHalfPoint(xx, yy)).value

    fx = (e(x + h, y) - e(x - h, y)) / (2 * h)
    fy = (e(x, y + h) - e(x, y - h)) / (2 * h)
    scale = abs(e(x, y)) + 1e-12
    assert abs(gx - fx) <= 1e-6 * scale + 1e-6 * abs(fx)
    assert abs(gy - fy) <= 1e-6 * scale + 1e-6 * abs(fy)


@given(st.floats(1.5, 4.0), st.floats(0.0, SQRT8), st.floats(0.05, 0.45), st.floats(1.1, 3.0))
@settings(max_examples=30, deadline=None)
def test_x_derivative_sign_follows_row_factorization(alpha, b, x, y):
    p = EnergyParams(alpha, b)
    gx, _ = difference_energy_grad(p, UpperHalfPoint(x, y))
    main, rem = transversal_terms(alpha, b, np.array([x]), np.array([y]))
    if abs(gx) > 1e-13:
        assert np.sign(gx) == -np.sign(main[0] + rem[0])


def test_energy_params_validation():
    with pytest.raises(DomainError):
        EnergyParams(0.0, 1.0)
    with pytest.raises(DomainError):
        EnergyParams(2.0, -1.0)
    assert EnergyParams(2.0, 1.0).theorem_covered
    assert not EnergyParams(1.0, 1.0).theorem_covered
