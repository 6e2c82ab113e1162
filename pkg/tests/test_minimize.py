import math

import numpy as np
import pytest

from thetalattice.errors import DomainError, EvaluationError
from thetalattice.minimize import (
    LineSearchConfig,
    MinimizeKind,
    certify_transversal_monotonicity,
    golden_section,
    minimize_2d,
    minimize_on_gamma_c,
    minimize_ray,
    polish_x,
    scan_grid,
)
from thetalattice.points import HEX_Y, SQRT8, EnergyParams, UpperHalfPoint


def test_golden_section_finds_parabola_minimum():
    y, v, it = golden_section(lambda t: (t - 1.234) ** 2, 0.0, 3.0, 1e-10)
    assert y == pytest.approx(1.234, abs=1e-9)
    assert it > 0


def test_scan_grid_covers_the_ray():
    cfg = LineSearchConfig(y_max=10.0)
    ys = scan_grid(cfg)
    assert ys[0] == HEX_Y and ys[-1] == 10.0
    assert np.all(np.diff(ys) > 0)


def test_minimize_ray_classifies_endpoints():
    cfg = LineSearchConfig(y_max=10.0)
    y, _, kind, _ = minimize_ray(lambda t: t, cfg)
    assert kind is MinimizeKind.LEFT_ENDPOINT_HEXAGONAL and y == HEX_Y
    y, _, kind, _ = minimize_ray(lambda t: -t, cfg)
    assert kind is MinimizeKind.CEILING_HIT
    y, _, kind, _ = minimize_ray(lambda t: (t - 3.0) ** 2, cfg)
    assert kind is MinimizeKind.INTERIOR and y == pytest.approx(3.0, abs=1e-6)


def test_minimize_ray_picks_global_of_two_wells():
    f = lambda t: np.minimum((t - 2.0) ** 2 + 0.1, (t - 7.0) ** 2)  # noqa: E731
    y, v, kind, _ = minimize_ray(f, LineSearchConfig(y_max=10.0))
    assert y == pytest.approx(7.0, abs=1e-6) and v == pytest.approx(0.0, abs=1e-12)


def test_minimize_ray_rejects_nan():
    with pytest.raises(EvaluationError):
        minimize_ray(lambda t: np.full_like(t, np.nan), LineSearchConfig(y_max=5.0))


def test_config_validation():
    with pytest.raises(DomainError):
        LineSearchConfig(y_max=0.5)
    with pytest.raises(DomainError):
        LineSearchConfig(y_min=1.0)
    with pytest.raises(DomainError):
        LineSearchConfig(grid_ratio=1.0)


@pytest.mark.parametrize("b", [0.0, 1.0, 2.0])
def test_hexagonal_on_the_ray_for_small_b(b):
    res = minimize_on_gamma_c(EnergyParams(2.0, b))
    assert res.kind is MinimizeKind.LEFT_ENDPOINT_HEXAGONAL
    assert res.argmin.y == HEX_Y


def test_skinny_rhombic_interior_minimum():
    res = minimize_on_gamma_c(EnergyParams(2.0, 2.815))
    assert res.kind is MinimizeKind.INTERIOR
    assert 5.0 < res.argmin.y < 50.0


def test_ceiling_hit_beyond_critical_mixing():
    res = minimize_on_gamma_c(EnergyParams(2.0, 3.0), LineSearchConfig(y_max=30.0))
    assert res.kind is MinimizeKind.CEILING_HIT


@pytest.mark.parametrize("b", [0.0, 2.0])
def test_2d_minimizer_is_hexagonal(b):
    res = minimize_2d(EnergyParams(2.0, b), LineSearchConfig(y_max=10.0))
    assert res.argmin.x == pytest.approx(0.5, abs=1e-6)
    assert res.argmin.y == pytest.approx(HEX_Y, abs=1e-6)


def test_2d_minimizer_agrees_with_ray_search():
    p = EnergyParams(2.0, 2.815)
    ray = minimize_on_gamma_c(p)
    res = minimize_2d(p)
    assert res.argmin.x == pytest.approx(0.5, abs=1e-9)
    assert res.value == pytest.approx(ray.value, rel=1e-9)


def test_polish_x_moves_to_the_right_edge():
    p = EnergyParams(2.0, 2.0)
    assert polish_x(p, UpperHalfPoint(0.2, 5.0)) == 0.5


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("b", [0.0, 2.0, SQRT8])
def test_transversal_certificate(alpha, b):
    rep = certify_transversal_monotonicity(alpha, b, n_x=20, n_y=20)
    assert rep.passed and rep.n_points == 400
    assert rep.min_margin > 0


def test_certificate_reports_violations_for_negative_b_energy():
    # with b far beyond the covered range the sign of dE/dx is no longer fixed
    rep = certify_transversal_monotonicity(1.5, 60.0, n_x=10, n_y=10, y_max=3.0)
    assert not rep.passed
    assert all(0 < x < 0.5 and y > math.sqrt(1 - x * x) for x, y in rep.violations)
