import math

import numpy as np
import pytest

from thetalattice import bounds
from thetalattice.errors import DomainError

SMALL = bounds.GridSpec(n=6)

# printed bounds that do not hold; see the checks' reports for both sides
KNOWN_GAPS = {"s_sum_upper_bounds", "laplacian_lower_bound"}


def test_item_comparisons():
    c = {"t": np.array([0.0, 1.0])}
    it = bounds._item("le", "le", [1.0, 2.0], [2.0, 2.0], c)
    assert not it.bad.any()
    it = bounds._item("le", "le", [1.0, 2.1], [2.0, 2.0], c)
    assert it.bad.tolist() == [False, True]
    it = bounds._item("gt", "gt", [1.0, 0.0], 0.0, c, scale=1.0)
    assert it.bad.tolist() == [False, True]
    it = bounds._item("eq", "eq", [1.0, 1.0 + 1e-8], 1.0, c, tol=1e-9)
    assert it.bad.tolist() == [False, True]
    with pytest.raises(DomainError):
        bounds._item("x", "approx", 1.0, 1.0, c)


def test_nan_counts_as_violation():
    it = bounds._item("nan", "le", [float("nan")], [1.0], {"t": np.array([0.0])})
    assert it.bad.all()


def test_assemble_reports_worst_point_and_caps_violations():
    n = 50
    it = bounds._item("x", "le", np.arange(n, dtype=float), np.ones(n), {"k": np.arange(n)})
    chk = bounds._assemble("demo", "h", "s", [it])
    assert not chk.passed
    assert chk.n_violations == n - 2
    assert len(chk.violations) == bounds.MAX_REPORTED
    assert chk.worst["k"] == n - 1 and chk.lhs_at_worst == n - 1
    d = chk.to_dict()
    assert d["passed"] is False and d["name"] == "demo"


def test_unknown_check():
    with pytest.raises(DomainError):
        bounds.check_lemma("no_such_check")


def test_grid_validation():
    with pytest.raises(DomainError):
        bounds.GridSpec(n=1)


@pytest.mark.parametrize("name", [n for n in bounds.check_names() if n not in KNOWN_GAPS])
def test_check_passes_on_small_grid(name):
    r = bounds.check_lemma(name, SMALL)
    assert r.passed, (r.worst, r.lhs_at_worst, r.rhs_at_worst)
    assert r.n_points > 0


@pytest.mark.parametrize("name", sorted(KNOWN_GAPS))
def test_known_gaps_are_reported_with_both_sides(name):
    r = bounds.check_lemma(name, SMALL)
    assert not r.passed
    assert r.violations and math.isfinite(r.lhs_at_worst) and math.isfinite(r.rhs_at_worst)


def test_s2_gap_comes_from_the_second_shell():
    # at the hexagonal height the n = +-1 terms tie with the n = 0 terms, so
    # S2 is 3/2 of its leading term while the printed bound allows 1 + eps_b
    from thetalattice import proof_sums as ps

    a, y = 6.0, bounds.HEX_Y
    lead = 2 / y**4 * math.exp(-math.pi * a / y)
    assert ps.s_sum("S2", a, y) / lead == pytest.approx(1.5, rel=1e-6)
    assert ps.eps_b(a, y) < 1e-3


def test_laplacian_stays_positive_despite_gap():
    r = bounds.check_lemma("laplacian_positive", SMALL)
    assert r.passed and r.margin > 0


def test_constants_match_printed_digits():
    for r in bounds.check_constants(SMALL):
        assert r.passed, (r.name, r.lhs_at_worst, r.rhs_at_worst)


def test_truncation_semantics():
    assert bounds._truncation_check("x", 0.035964, "0.0359").passed
    assert not bounds._truncation_check("x", 0.0360001, "0.0359").passed
    assert not bounds._truncation_check("x", 0.03589, "0.0359").passed
    assert bounds._truncation_check("x", -0.575902, "-0.5759").passed


def test_printed_tail_audit_flags_the_false_tail_bound():
    (r,) = bounds.audit_printed_tail_bounds()
    assert not r.passed
    assert 1e-26 < r.lhs_at_worst < 1e-24


def test_transversal_pieces_match_energy_module():
    r = bounds.check_lemma("transversal_main_identity", SMALL)
    assert r.passed


def test_default_grid_density():
    assert bounds.GridSpec().n >= 20
