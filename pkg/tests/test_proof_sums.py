import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from thetalattice import proof_sums as ps
from thetalattice.energy import difference_energy, gamma_c_energy
from thetalattice.errors import DomainError
from thetalattice.points import HEX_Y, SQRT8, EnergyParams, UpperHalfPoint

# P + E_tilde at (alpha, y) = (2, 1), frozen from the mpmath oracle
P_PLUS_E_TILDE_2_1 = 0.5684081724053957


@pytest.mark.parametrize("which", ["S1", "S2", "S3", "S4"])
@pytest.mark.parametrize("alpha,y", [(2.0, HEX_Y), (2.0, 1.5), (3.5, 1.1), (0.5, 0.8)])
def test_s_sums_match_oracle(which, alpha, y):
    ref = float(oracles.s_sum(which, alpha, y))
    assert ps.s_sum(which, alpha, y) == pytest.approx(ref, rel=1e-12)


def test_s_sum_log_scale():
    a, y, sh = 20.0, 20.0, 1200.0
    v = ps.s_sum("S1", a, y, log_scale=sh)
    assert math.isfinite(v) and v > 0
    assert v == pytest.approx(float(oracles.s_sum("S1", a, y) * oracles.mp.exp(sh)), rel=1e-12)


@given(st.floats(2.0, 20.0), st.floats(HEX_Y, 2.0))
@settings(max_examples=40, deadline=None)
def test_s3_parity_split(alpha, y):
    parts = ps.s3_parts(alpha, y)
    assert sum(parts) == pytest.approx(ps.s_sum("S3", alpha, y), rel=1e-12)


@pytest.mark.parametrize("alpha,y", [(2.0, HEX_Y), (2.0, 1.4), (4.0, 2.0), (8.0, 1.0)])
def test_laplacian_identity_against_finite_differences(alpha, y):
    lap = ps.laplacian_from_sums(alpha, y)
    h = 1e-4
    p = EnergyParams(alpha, 2.0)
    e = [difference_energy(p, UpperHalfPoint(0.5, y + d)).value for d in (-h, 0.0, h)]
    fd = (e[2] - 2 * e[1] + e[0]) / h**2 + (2 / y) * (e[2] - e[0]) / (2 * h)
    assert lap == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("alpha,y", [(2.0, 1.0), (2.0, 3.0), (3.0, 2.0), (5.0, 12.0)])
def test_ray_pieces_match_definitions(alpha, y):
    ref = oracles.ray_pieces(alpha, y)
    e = ps.e_rows(alpha, y)
    got = {
        "M1": ps.m1(alpha, y), "M2": ps.m2(alpha, y), "M3": ps.m3(alpha, y), "M4": ps.m4(alpha, y),
        "P1": ps.p1(alpha, y), "P2": ps.p2(alpha, y), "P3": ps.p3(alpha, y), "E_tilde": ps.e_tilde(alpha, y),
        "E1": e[0], "E2": e[1], "E3": e[2], "E4": e[3],
    }
    for k, v in got.items():
        r = float(ref[k])
        assert float(v) == pytest.approx(r, rel=1e-9, abs=1e-300), k


def test_frozen_critical_mixing_sum():
    v = float(ps.p_total(2.0, 1.0) + ps.e_tilde(2.0, 1.0))
    assert v == pytest.approx(P_PLUS_E_TILDE_2_1, rel=1e-14)
    assert v == pytest.approx(gamma_c_energy(EnergyParams(2.0, SQRT8), [1.0])[0] / ps.ray_prefactor(2.0, 1.0), rel=1e-13)


@given(st.floats(2.0, 20.0), st.floats(HEX_Y, 40.0))
@settings(max_examples=60, deadline=None)
def test_row_split_reconstructs_energy(alpha, y):
    pre = ps.ray_prefactor(alpha, y)
    m = float(ps.m_total(alpha, y) + sum(ps.e_rows(alpha, y)))
    e2 = gamma_c_energy(EnergyParams(alpha, 2.0), [y])[0] / pre
    assert m == pytest.approx(e2, rel=1e-9)


@given(st.floats(2.0, 10.0), st.floats(1.0, 4.0))
@settings(max_examples=40, deadline=None)
def test_routes_agree_where_both_are_accurate(alpha, ratio):
    y = alpha * ratio / 2
    for fn in (ps.m1, ps.m2, ps.p1):
        a = float(fn(alpha, y, route="series"))
        b = float(fn(alpha, y, route="poisson"))
        assert a == pytest.approx(b, rel=1e-7)


def test_poisson_route_survives_cancellation():
    # at y / alpha << 1 the series route loses every digit of M1
    a, y = 20.0, 0.9
    ref = float(oracles.ray_pieces(a, y)["M1"])
    assert float(ps.m1(a, y)) == pytest.approx(ref, rel=1e-10)


def test_printed_remainder_values_at_hexagonal_corner():
    a, y = 2.0, HEX_Y
    assert ps.eps_a(a, y) < 4e-6
    assert ps.eps_b(a, y) < 6e-3
    assert ps.eps_c(a, y) < 0.4
    assert ps.eps_d(a, y) < 5e-7
    assert ps.eps_e(a, y) < 4e-2
    assert ps.b2_term(a, y) < 5e-3


def test_laplacian_is_positive_on_the_segment():
    A, Y = np.meshgrid(np.geomspace(2, 20, 12), np.linspace(HEX_Y, 2, 12))
    for a, y in zip(A.ravel(), Y.ravel()):
        assert ps.laplacian_from_sums(a, y) > 0


@pytest.mark.parametrize("which", list(ps.ProofSumKind))
def test_eval_proof_sum_dispatch(which):
    v = ps.eval_proof_sum(ps.ProofSums(which, 2.0, 1.5))
    assert math.isfinite(v)


def test_proof_sums_validation():
    with pytest.raises(DomainError):
        ps.ProofSums("S1", -1.0, 1.0)
    with pytest.raises(ValueError):
        ps.ProofSums("S9", 1.0, 1.0)
