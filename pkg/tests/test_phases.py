import mpmath as mp
import numpy as np
import pytest

import oracles
from thetalattice.errors import DomainError
from thetalattice.minimize import LineSearchConfig
from thetalattice.phases import (
    Phase,
    asymptotic_energy,
    check_nonexistence_asymptotics,
    classify_phase,
    find_bc1,
    trace_yb_curve,
)
from thetalattice.points import HEX_Y, SQRT8, EnergyParams

# frozen from this implementation at tol 1e-4, cross-checked below against
# the mpmath energy on both sides of the bracket
BC1_ALPHA_2 = 2.7642877321839014


def test_threshold_frozen_value():
    r = find_bc1(2.0)
    assert r.b_c1 == pytest.approx(BC1_ALPHA_2, abs=1e-9)
    assert r.bracket_width <= 1e-4
    assert r.lo < r.b_c1 < r.hi


def _oracle_gap(alpha, b, y):
    """E_b(1/2 + i y) - E_b(hexagonal) in high precision."""
    return oracles.difference_energy(alpha, b, 0.5, y) - oracles.difference_energy(alpha, b, 0.5, mp.sqrt(3) / 2)


def test_threshold_bracket_against_oracle():
    r = find_bc1(2.0)
    above = classify_phase(EnergyParams(2.0, r.hi + 1e-4))
    assert above.phase is Phase.SKINNY_RHOMBIC
    # above the bracket some point of the ray beats the hexagonal point
    assert _oracle_gap(2.0, r.hi + 1e-4, above.y_b) < 0
    # below it the candidate well is still higher than the hexagonal point
    assert _oracle_gap(2.0, r.lo - 1e-4, above.y_b) > 0


@pytest.mark.parametrize("alpha", [2.0, 3.0, 5.0])
@pytest.mark.parametrize("b", [0.0, 1.0, 2.0])
def test_hexagonal_phase_for_b_up_to_two(alpha, b):
    r = classify_phase(EnergyParams(alpha, b))
    assert r.phase is Phase.HEXAGONAL and r.y_b == HEX_Y


def test_yb_increases_with_b():
    rs = trace_yb_curve(2.0, [2.825, 2.81, 2.82, 2.815])
    assert [r.b for r in rs] == sorted(r.b for r in rs)
    ys = [r.y_b for r in rs]
    assert all(r.phase is Phase.SKINNY_RHOMBIC for r in rs)
    assert np.all(np.diff(ys) > 0)


def test_nonexistent_phase_beyond_critical_mixing():
    r = classify_phase(EnergyParams(2.0, 3.0))
    assert r.phase is Phase.NONEXISTENT and r.y_b is None and r.at_ceiling


def test_skinny_phase_at_ceiling_is_flagged():
    r = classify_phase(EnergyParams(2.0, 2.827), LineSearchConfig(y_max=10.0))
    assert r.phase is Phase.SKINNY_RHOMBIC and r.at_ceiling


def test_threshold_requires_positive_tolerance():
    with pytest.raises(DomainError):
        find_bc1(2.0, tol=0.0)


def test_asymptotics_beyond_critical_mixing():
    rep = check_nonexistence_asymptotics(EnergyParams(2.0, 3.0), [5, 10, 20, 40])
    assert rep.strictly_decreasing and rep.trend == "-inf" and rep.energy[-1] < 0
    assert rep.relative_deviation < 1e-12


def test_asymptotics_at_critical_mixing():
    rep = check_nonexistence_asymptotics(EnergyParams(2.0, SQRT8), [5, 10, 20, 40])
    assert rep.all_positive and rep.trend == "0+"


def test_asymptotic_form_matches_oracle():
    y = 30.0
    ref = float(oracles.difference_energy(2.0, 2.9, 0.5, y))
    assert asymptotic_energy(2.0, 2.9, y) == pytest.approx(ref, rel=1e-12)
