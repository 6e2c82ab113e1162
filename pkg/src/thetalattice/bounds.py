"""Numerical re-derivation of the inequalities and constants behind the phase results.

Every check evaluates both sides of an inequality from true series values
on a sampled hypothesis grid and reports the smallest relative slack.  The
bound functions are written exactly as stated; a failing check therefore
points at a transcription error or a genuine gap and the report carries
both sides at the worst point.

Slack conventions (den = max(|lhs|, |rhs|) unless a scale is given):
  le:  (rhs - lhs) / den + RTOL      ge:  (lhs - rhs) / den + RTOL
  gt:  (lhs - rhs) / den (strict)    eq:  tol - |lhs - rhs| / den
A check passes when every slack is >= 0 (> 0 for strict items).
"""

import math
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal

import numpy as np

from . import proof_sums as ps
from .energy import difference_energy, gamma_c_energy, transversal_terms
from .errors import DomainError
from .points import HEX_Y, SQRT2, SQRT8, EnergyParams, UpperHalfPoint
from .theta import (
    DEFAULT_POLICY,
    AuxSeriesKind,
    aux_series,
    dy_envelope_large_x,
    dy_envelope_small_x,
    theta_1d,
    theta_1d_dX,
    theta_1d_dXdY,
    theta_1d_dY,
)

PI = math.pi
SQRT3 = math.sqrt(3.0)
RTOL = 1e-12
MAX_REPORTED = 20
FD_STEP = 1e-4


@dataclass(frozen=True)
class GridSpec:
    """Points per parameter dimension and the cap for unbounded directions."""

    n: int = 25
    cap: float = 20.0

    def __post_init__(self):
        if self.n < 2 or not self.cap > 1:
            raise DomainError("grid needs n >= 2 and cap > 1")


@dataclass
class BoundCheck:
    name: str
    hypothesis: str
    statement: str
    margin: float
    n_points: int
    violations: list = field(default_factory=list)
    n_violations: int = 0
    worst: dict = field(default_factory=dict)
    lhs_at_worst: float = float("nan")
    rhs_at_worst: float = float("nan")

    @property
    def passed(self):
        return self.n_violations == 0 and self.margin >= 0

    def to_dict(self):
        return {
            "name": self.name,
            "hypothesis": self.hypothesis,
            "statement": self.statement,
            "passed": self.passed,
            "margin": self.margin,
            "n_points": self.n_points,
            "n_violations": self.n_violations,
            "violations": self.violations,
            "worst": self.worst,
            "lhs_at_worst": self.lhs_at_worst,
            "rhs_at_worst": self.rhs_at_worst,
        }


# --------------------------------------------------------------------------
# comparison plumbing


@dataclass
class _Item:
    label: str
    slack: np.ndarray
    bad: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    coords: dict


def _item(label, kind, lhs, rhs, coords, scale=None, tol=0.0):
    lhs, rhs = np.broadcast_arrays(np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float))
    lhs, rhs = lhs.ravel(), rhs.ravel()
    if scale is None:
        den = np.maximum(np.abs(lhs), np.abs(rhs))
    else:
        den = np.broadcast_to(np.asarray(scale, dtype=float), lhs.shape).ravel()
    den = np.where(den > 0, den, 1.0)
    with np.errstate(invalid="ignore"):
        if kind == "le":
            slack = (rhs - lhs) / den + RTOL
        elif kind == "ge":
            slack = (lhs - rhs) / den + RTOL
        elif kind == "gt":
            slack = (lhs - rhs) / den
        elif kind == "eq":
            slack = tol - np.abs(lhs - rhs) / den
        else:
            raise DomainError(f"unknown comparison {kind!r}")
    slack = np.where(np.isfinite(slack), slack, -np.inf)
    bad = slack <= 0 if kind == "gt" else slack < 0
    coords = {k: np.broadcast_to(np.asarray(v, dtype=float), lhs.shape if np.ndim(v) == 0 else np.shape(v)).ravel()
              for k, v in coords.items()}
    return _Item(label, slack, bad, lhs, rhs, coords)


def _between(label, lo, val, hi, coords):
    """lo <= val <= hi as two items."""
    return [_item(label + " (lower)", "ge", val, lo, coords), _item(label + " (upper)", "le", val, hi, coords)]


def _assemble(name, hypothesis, statement, items):
    items = [it for group in items for it in (group if isinstance(group, list) else [group])]
    margin, worst, lw, rw = math.inf, {}, float("nan"), float("nan")
    viol, nviol, npts = [], 0, 0
    for it in items:
        npts += it.slack.size
        if it.slack.size == 0:
            continue
        k = int(np.argmin(it.slack))
        if it.slack[k] < margin:
            margin = float(it.slack[k])
            worst = {"item": it.label, **{c: float(v[k]) for c, v in it.coords.items()}}
            lw, rw = float(it.lhs[k]), float(it.rhs[k])
        idx = np.flatnonzero(it.bad)
        nviol += idx.size
        for i in idx[: max(0, MAX_REPORTED - len(viol))]:
            viol.append({"item": it.label, **{c: float(v[i]) for c, v in it.coords.items()},
                         "lhs": float(it.lhs[i]), "rhs": float(it.rhs[i])})
    return BoundCheck(name, hypothesis, statement, margin, npts, viol, nviol, worst, lw, rw)


# --------------------------------------------------------------------------
# grids


def _geo(lo, hi, n):
    if hi <= lo:
        return np.array([lo])
    return np.geomspace(lo, hi, n)


def _open(lo, hi, n):
    return np.linspace(lo, hi, n + 2)[1:-1]


def _hi(lo, cap):
    """Upper end of an unbounded direction: the cap, or 4 lo when lo is near it."""
    return max(cap, 4.0 * lo)


def _mesh(*axes):
    return [m.ravel() for m in np.meshgrid(*axes, indexing="ij")]


def _domain_points(alphas, n, cap, ylo_ratio=0.0, yhi_ratio=None):
    """(alpha, x, y) with x in (0, 1/2), |z| > 1 and ylo_ratio alpha <= y <= yhi_ratio alpha.

    y is geometric in each (alpha, x) column; empty columns are dropped.
    """
    A, X, Y = [], [], []
    for a in alphas:
        for x in _open(0.0, 0.5, n):
            lo = max(math.sqrt(1 - x * x) * (1 + 1e-9), ylo_ratio * a)
            hi = yhi_ratio * a if yhi_ratio is not None else _hi(lo, cap)
            if hi < lo:
                continue
            ys = _geo(lo, hi, n)
            A.append(np.full(ys.size, a))
            X.append(np.full(ys.size, x))
            Y.append(ys)
    return np.concatenate(A), np.concatenate(X), np.concatenate(Y)


# --------------------------------------------------------------------------
# constants of the transversal estimates


def _mu(x):
    return aux_series(AuxSeriesKind.MU, x)


def _nu(x):
    return aux_series(AuxSeriesKind.NU, x)


def _muh(x):
    return aux_series(AuxSeriesKind.MU_HAT, x)


def _nuh(x):
    return aux_series(AuxSeriesKind.NU_HAT, x)


def transversal_constants():
    """The tail constants used in the three transversal regions."""
    return {
        "mu(1/2)": _mu(0.5),
        "mu(1/4)": _mu(0.25),
        "(1+nu_hat(1/4))/(1+mu_hat(1/4))": (1 + _nuh(0.25)) / (1 + _muh(0.25)),
        "(1+nu(1/2))/(1+mu(1/2))": (1 + _nu(0.5)) / (1 + _mu(0.5)),
        "1-mu(1/4)": 1 - _mu(0.25),
        "(1+nu(1/4))/(1+mu(1/4))": (1 + _nu(0.25)) / (1 + _mu(0.25)),
        "sum e^{-pi n^2/2}(1 - sqrt2 e^{-pi n^2/2})": float(
            ps.nsum(lambda n: np.exp(-PI * n * n / 2) * (1 - SQRT2 * np.exp(-PI * n * n / 2)), 1)
        ),
    }


# --------------------------------------------------------------------------
# row pieces of the x-derivative, computed independently of the energy module


def _row_count(alpha, y):
    ay = float(np.min(PI * alpha * y))
    N = 1
    while ay * ((N + 1) ** 2 - 1) - 3 * math.log(N + 1) - math.log(1 + ay + 1 / ay) < 46:
        N += 1
    return N


def transversal_pieces(alpha, x, y, policy=None):
    """Rows of the x-derivative factor split by their dependence on b.

    Returns a dict with I0, I1 (main row: I = I0 + b I1), R0, R1 (rows
    n >= 2), the b = 2 sqrt2 majorant of |R| built from absolute row values
    and the theta pieces of the main row (t1y, t1xy, t2y, t2xy).
    """
    policy = policy or DEFAULT_POLICY
    alpha, x, y = np.broadcast_arrays(*[np.asarray(v, dtype=float) for v in (alpha, x, y)])
    N = _row_count(alpha, y)
    n = np.arange(1, N + 1, dtype=float)[:, None]
    a, xx, yy = alpha.ravel()[None, :], x.ravel()[None, :], y.ravel()[None, :]
    X1, X2 = yy / a, yy / (2 * a)
    shp = (N, a.size)
    nx = n * xx
    t1y = theta_1d_dY(np.broadcast_to(X1, shp), nx, policy)
    t1xy = theta_1d_dXdY(np.broadcast_to(X1, shp), nx, policy)
    t2y = theta_1d_dY(np.broadcast_to(X2, shp), nx, policy)
    t2xy = theta_1d_dXdY(np.broadcast_to(X2, shp), nx, policy)
    ay = PI * a * yy
    with np.errstate(under="ignore"):
        e1 = np.exp(-ay * (n * n - 1))
        e2 = np.exp(-ay * (2 * n * n - 1))
    r0 = -2 * SQRT2 * a * n * e1 * t1y - 4 * SQRT2 * PI * a**2 * yy * n**3 * e1 * t1y - 4 * SQRT2 * yy * n * e1 * t1xy
    r1 = a * n * e2 * t2y + 4 * PI * a**2 * yy * n**3 * e2 * t2y + yy * n * e2 * t2xy
    maj = 2 * SQRT2 * (
        a * n * e1 * np.abs(t1y) + 2 * PI * a**2 * yy * n**3 * e1 * np.abs(t1y) + 2 * yy * n * e1 * np.abs(t1xy)
    ) + 2 * SQRT2 * (
        a * n * e2 * np.abs(t2y) + 4 * PI * a**2 * yy * n**3 * e2 * np.abs(t2y) + yy * n * e2 * np.abs(t2xy)
    )

    def tail(r):
        return np.sum(r[1:][::-1], axis=0) if N > 1 else np.zeros(a.size)

    return {
        "I0": r0[0], "I1": r1[0], "R0": tail(r0), "R1": tail(r1), "majorant": tail(maj),
        "t1y": t1y[0], "t1xy": t1xy[0], "t2y": t2y[0], "t2xy": t2xy[0],
    }


def _b_values(n):
    return np.linspace(0.0, SQRT8, n)


def _expand_b(pieces, A, X, Y, n):
    """Broadcast the affine-in-b pieces over a b grid; returns flattened arrays."""
    bs = _b_values(n)
    B = bs[:, None]
    I = pieces["I0"][None, :] + B * pieces["I1"][None, :]
    R = pieces["R0"][None, :] + B * pieces["R1"][None, :]
    full = lambda v: np.broadcast_to(v[None, :], I.shape).ravel()  # noqa: E731
    coords = {"alpha": full(A), "x": full(X), "y": full(Y), "b": np.broadcast_to(B, I.shape).ravel()}
    return I.ravel(), R.ravel(), coords, full


# --------------------------------------------------------------------------
# registry

_REGISTRY = {}


def _register(name, hypothesis, statement):
    def deco(fn):
        _REGISTRY[name] = (fn, hypothesis, statement)
        return fn

    return deco


def check_names():
    return list(_REGISTRY)


def check_lemma(name, grid=None):
    """Run one registered check on its hypothesis grid."""
    if name not in _REGISTRY:
        raise DomainError(f"unknown check {name!r}")
    grid = grid or GridSpec()
    fn, hyp, stmt = _REGISTRY[name]
    items = fn(grid)
    return _assemble(name, hyp, stmt, items if isinstance(items, list) else [items])


def run_suite(names=None, grid=None):
    """Run the named checks (all registered ones by default)."""
    return [check_lemma(n, grid) for n in (names or check_names())]


# --------------------------------------------------------------------------
# one-dimensional theta quotients

_LARGE_X_MIN = 0.2 * (1 + 1e-9)
_SMALL_X_MAX = PI / (PI + 2) * (1 - 1e-9)
_X_MIN = 0.05


def _xy_grid(xlo, xhi, grid):
    return _mesh(_geo(xlo, xhi, grid.n), _open(0.0, 0.5, grid.n))


@_register("dy_envelope_large_x", "X > 1/5, Y in (0, 1/2)",
           "-4 pi e^{-pi X}(1 + mu(X)) s <= theta_Y(X;Y) <= -4 pi e^{-pi X}(1 - mu(X)) s, s = sin(2 pi Y)")
def _c_dy_large(grid):
    X, Y = _xy_grid(_LARGE_X_MIN, grid.cap, grid)
    lo, hi = dy_envelope_large_x(X)
    s = np.sin(2 * PI * Y)
    return _between("envelope", -hi * s, theta_1d_dY(X, Y), -lo * s, {"X": X, "Y": Y})


@_register("dy_envelope_small_x", "X < pi/(pi + 2), Y in (0, 1/2)",
           "-X^{-3/2} s <= theta_Y(X;Y) <= -pi e^{-pi/(4X)} X^{-3/2} s, s = sin(2 pi Y)")
def _c_dy_small(grid):
    X, Y = _xy_grid(_X_MIN, _SMALL_X_MAX, grid)
    lo, hi = dy_envelope_small_x(X)
    s = np.sin(2 * PI * Y)
    return _between("envelope", -hi * s, theta_1d_dY(X, Y), -lo * s, {"X": X, "Y": Y})


def _k_grid(xlo, xhi, grid, kmax=8):
    return _mesh(_geo(xlo, xhi, grid.n), _open(0.0, 0.5, grid.n), np.arange(1, kmax + 1, dtype=float))


@_register("dy_ratio_multiple_large_x", "X > 1/5, Y in (0, 1/2), k = 1..8",
           "|theta_Y(X;kY) / theta_Y(X;Y)| <= k (1 + mu(X)) / (1 - mu(X))")
def _c_dy_ratio_large(grid):
    X, Y, K = _k_grid(_LARGE_X_MIN, grid.cap, grid)
    ratio = np.abs(theta_1d_dY(X, K * Y) / theta_1d_dY(X, Y))
    mu = _mu(X)
    return _item("ratio", "le", ratio, K * (1 + mu) / (1 - mu), {"X": X, "Y": Y, "k": K})


@_register("dy_ratio_multiple_small_x", "X < pi/(pi + 2), Y in (0, 1/2), k = 1..8",
           "|theta_Y(X;kY) / theta_Y(X;Y)| <= (k/pi) e^{pi/(4X)}")
def _c_dy_ratio_small(grid):
    X, Y, K = _k_grid(_X_MIN, _SMALL_X_MAX, grid)
    ratio = np.abs(theta_1d_dY(X, K * Y) / theta_1d_dY(X, Y))
    return _item("ratio", "le", ratio, K / PI * np.exp(PI / (4 * X)), {"X": X, "Y": Y, "k": K})


@_register("dxdy_ratio_large_x", "X >= 1/5, Y in (0, 1/2)",
           "-pi (1 + nu)/(1 + mu) <= theta_XY/theta_Y <= -pi (1 + nu_hat)/(1 + mu_hat)")
def _c_dxdy_large(grid):
    X, Y = _xy_grid(0.2, grid.cap, grid)
    r = theta_1d_dXdY(X, Y) / theta_1d_dY(X, Y)
    lo = -PI * (1 + _nu(X)) / (1 + _mu(X))
    hi = -PI * (1 + _nuh(X)) / (1 + _muh(X))
    return _between("ratio", lo, r, hi, {"X": X, "Y": Y})


@_register("dxdy_ratio_small_x", "0 < X <= 1/2, Y in (0, 1/2)",
           "(3X^2/4 + 2 pi^2 e^{-pi/X}) / (-X^3/2 + 2 pi X^2 e^{-pi/X}) <= theta_XY/theta_Y <= pi/(4 X^2)")
def _c_dxdy_small(grid):
    X, Y = _xy_grid(_X_MIN, 0.5, grid)
    r = theta_1d_dXdY(X, Y) / theta_1d_dY(X, Y)
    e = np.exp(-PI / X)
    lo = (0.75 * X**2 + 2 * PI**2 * e) / (-0.5 * X**3 + 2 * PI * X**2 * e)
    return _between("ratio", lo, r, PI / (4 * X**2), {"X": X, "Y": Y})


@_register("dxdy_ratio_multiple_large_x", "X >= 1/5, Y in (0, 1/2), k = 1..8",
           "|theta_XY(X;kY) / theta_Y(X;Y)| <= k pi (1 + nu(X)) / (1 - mu(X))")
def _c_dxdy_mult_large(grid):
    X, Y, K = _k_grid(0.2, grid.cap, grid)
    ratio = np.abs(theta_1d_dXdY(X, K * Y) / theta_1d_dY(X, Y))
    return _item("ratio", "le", ratio, K * PI * (1 + _nu(X)) / (1 - _mu(X)), {"X": X, "Y": Y, "k": K})


@_register("dxdy_ratio_multiple_small_x", "0 < X <= 9/20, Y in (0, 1/2), k = 1..8",
           "|theta_XY(X;kY) / theta_Y(X;Y)| <= k/(4 X^2) e^{pi/(4X)}")
def _c_dxdy_mult_small(grid):
    X, Y, K = _k_grid(_X_MIN, 0.45, grid)
    ratio = np.abs(theta_1d_dXdY(X, K * Y) / theta_1d_dY(X, Y))
    return _item("ratio", "le", ratio, K / (4 * X**2) * np.exp(PI / (4 * X)), {"X": X, "Y": Y, "k": K})


# --------------------------------------------------------------------------
# transversal monotonicity: main part I and remainder R of the x-derivative


def _transversal_region(grid, alpha_lo, ylo_ratio=0.0, yhi_ratio=None):
    alphas = _geo(alpha_lo, grid.cap, grid.n)
    A, X, Y = _domain_points(alphas, grid.n, grid.cap, ylo_ratio, yhi_ratio)
    pieces = transversal_pieces(A, X, Y)
    I, R, coords, full = _expand_b(pieces, A, X, Y, grid.n)
    return I, R, coords, full


@_register("transversal_far", "alpha >= 5/4, y/alpha >= 1/2, z in D, 0 <= b <= 2 sqrt2",
           "(1) I >= lower bound with mu(1/2), mu(1/4) constants; (2) |R| <= 56 sqrt2 pi e^{-pi y/alpha} s 10^-3; "
           "(3) I + R >= (2 sqrt2/25) pi e^{-pi y/alpha} s")
def _c_transversal_far(grid):
    I, R, c, _ = _transversal_region(grid, 1.25, ylo_ratio=0.5)
    a, x, y = c["alpha"], c["x"], c["y"]
    s = np.sin(2 * PI * x)
    k = transversal_constants()
    m12, m14 = k["mu(1/2)"], k["mu(1/4)"]
    c1 = k["(1+nu(1/2))/(1+mu(1/2))"]
    c2 = k["(1+nu_hat(1/4))/(1+mu_hat(1/4))"]
    e = np.exp(-PI * y / a)
    lower = (
        8 * SQRT2 * PI * e * s * (1 - m12) * (a + 2 * PI * a**2 * y - 2 * PI * y * c1)
        - 8 * SQRT2 * PI * np.exp(-PI * y * (a + 1 / (2 * a))) * s * (1 + m14) * (a + 4 * PI * a**2 * y - PI * y * c2)
    )
    return [
        _item("(1) main part", "ge", I, lower, c),
        _item("(2) remainder", "le", np.abs(R), 56 * SQRT2 * PI * e * s * 1e-3, c),
        _item("(3) total", "ge", I + R, 2 * SQRT2 / 25 * PI * e * s, c),
    ]


@_register("transversal_near", "alpha >= 1, 0 < y/alpha <= 1/4, z in D, 0 <= b <= 2 sqrt2",
           "(1) I >= s (alpha/y)^{3/2}(2 sqrt2 pi e^{-pi alpha/(4y)}(...) - 8 e^{-pi alpha y}(...)); "
           "(2) |R| <= (sqrt2 pi/25) e^{-pi alpha/(4y)} s (alpha/y)^{3/2}; "
           "(3) I + R >= 2 sqrt2 pi e^{-pi alpha/(4y)} s (alpha/y)^{3/2}")
def _c_transversal_near(grid):
    I, R, c, _ = _transversal_region(grid, 4 * HEX_Y, yhi_ratio=0.25)
    a, x, y = c["alpha"], c["x"], c["y"]
    s = np.sin(2 * PI * x)
    t = y / a
    e4 = math.exp(-4 * PI)
    ratio = (3 * t**2 + 8 * PI**2 * e4) / (t**3 - PI / 4 * e4)
    w = s * (a / y) ** 1.5
    ea = np.exp(-PI * a / (4 * y))
    lower = w * (
        2 * SQRT2 * PI * ea * (a + 2 * PI * a**2 * y - y * ratio)
        - 8 * np.exp(-PI * a * y) * (a + 4 * PI * a**2 * y + PI * a**2 / y)
    )
    return [
        _item("(1) main part", "ge", I, lower, c),
        _item("(2) remainder", "le", np.abs(R), SQRT2 * PI / 25 * ea * w, c),
        _item("(3) total", "ge", I + R, 2 * SQRT2 * PI * ea * w, c),
    ]


@_register("transversal_middle", "alpha >= 3/2, 1/4 <= y/alpha <= 1/2, z in D, 0 <= b <= 2 sqrt2",
           "(1) I >= 8 e^{-pi y/alpha} s (sqrt2 pi (1 - mu(1/4))(...) - e^{pi/2} e^{-pi alpha y} alpha^{5/2} y^{-3/2}(...)); "
           "(2) |R| <= (6 sqrt2 pi/125) e^{-pi y/alpha} s; (3) I + R >= (2 sqrt2 pi/25) e^{-pi y/alpha} s")
def _c_transversal_middle(grid):
    I, R, c, _ = _transversal_region(grid, 1.5, ylo_ratio=0.25, yhi_ratio=0.5)
    a, x, y = c["alpha"], c["x"], c["y"]
    s = np.sin(2 * PI * x)
    k = transversal_constants()
    e = np.exp(-PI * y / a)
    lower = 8 * e * s * (
        SQRT2 * PI * k["1-mu(1/4)"] * (a + 2 * PI * a**2 * y - 2 * PI * y * k["(1+nu(1/4))/(1+mu(1/4))"])
        - math.exp(PI / 2) * np.exp(-PI * a * y) * a**2.5 * y**-1.5 * (1 + 4 * PI * a * y + PI * a / y)
    )
    return [
        _item("(1) main part", "ge", I, lower, c),
        _item("(2) remainder", "le", np.abs(R), 6 * SQRT2 * PI / 125 * e * s, c),
        _item("(3) total", "ge", I + R, 2 * SQRT2 * PI / 25 * e * s, c),
    ]


@_register("transversal_positivity", "alpha >= 3/2, z in D, 0 <= b <= 2 sqrt2",
           "I + R > 0, i.e. the x-derivative of the difference energy is negative inside D")
def _c_transversal_positive(grid):
    I, R, c, _ = _transversal_region(grid, 1.5)
    return _item("I + R > 0", "gt", I + R, 0.0, c, scale=np.abs(I))


@_register("transversal_remainder_majorant", "alpha > 0 (sampled alpha >= 1), z in D, |b| <= 2 sqrt2",
           "|R| <= 2 sqrt2 (-theta_Y(y/alpha;x))(sum of absolute quotient rows) + same for y/(2 alpha)")
def _c_transversal_majorant(grid):
    alphas = _geo(1.0, grid.cap, grid.n)
    A, X, Y = _domain_points(alphas, grid.n, grid.cap)
    p = transversal_pieces(A, X, Y)
    I, R, c, full = _expand_b(p, A, X, Y, grid.n)
    # rows deep in the subnormal range lose relative precision; measure
    # against the main row, which sets the size of the x-derivative
    maj = full(p["majorant"])
    return _item("majorant", "le", np.abs(R), maj, c, scale=np.abs(I) + maj)


@_register("transversal_main_identity", "alpha > 0 (sampled alpha >= 1), z in D, 0 <= b <= 2 sqrt2",
           "I equals its factored form 2 sqrt2(-theta_Y)(alpha + 2 pi alpha^2 y + 2y theta_XY/theta_Y) "
           "+ b e^{-pi alpha y} theta_Y(...)(...), and both match the energy module's rows")
def _c_transversal_identity(grid):
    alphas = _geo(1.0, grid.cap, grid.n)
    A, X, Y = _domain_points(alphas, grid.n, grid.cap)
    p = transversal_pieces(A, X, Y)
    I, R, c, full = _expand_b(p, A, X, Y, grid.n)
    a, y, b = c["alpha"], c["y"], c["b"]
    t1y, t1xy, t2y, t2xy = (full(p[k]) for k in ("t1y", "t1xy", "t2y", "t2xy"))
    factored = 2 * SQRT2 * (-t1y) * (a + 2 * PI * a**2 * y + 2 * y * t1xy / t1y) + b * np.exp(
        -PI * a * y
    ) * t2y * (a + 4 * PI * a**2 * y + y * t2xy / t2y)
    bs = _b_values(grid.n)
    lib_main, lib_rem = [], []
    for bv in bs:
        m, r = _lib_rows(A, bv, X, Y)
        lib_main.append(m)
        lib_rem.append(r)
    lib_main = np.concatenate(lib_main)
    lib_rem = np.concatenate(lib_rem)
    scale = np.abs(full(p["I0"])) + np.abs(b * full(p["I1"]))
    return [
        _item("factored form", "eq", factored, I, c, scale=scale, tol=1e-10),
        _item("energy module main row", "eq", lib_main, I, c, scale=scale, tol=1e-10),
        _item("energy module remainder", "eq", lib_rem, R, c, scale=scale, tol=1e-10),
    ]


def _lib_rows(A, b, X, Y):
    """transversal_terms takes a scalar alpha; evaluate per distinct alpha."""
    main = np.empty_like(X)
    rem = np.empty_like(X)
    for a in np.unique(A):
        k = A == a
        m, r = transversal_terms(float(a), float(b), X[k], Y[k])
        main[k], rem[k] = m, r
    return main, rem


# --------------------------------------------------------------------------
# the ray: S sums, remainders and the Laplacian estimate


def _ray_grid(grid, alpha_lo=2.0, y_lo=HEX_Y, y_hi=2.0):
    return _mesh(_geo(alpha_lo, grid.cap, grid.n), np.linspace(y_lo, y_hi, grid.n))


def _pointwise(fn, *arrs):
    return np.array([fn(*vals) for vals in zip(*arrs)])


def _s_shift(which, alpha, y):
    lead = y + 1 / (4 * y)
    if which in ("S2", "S4"):
        lead = min(lead, 1 / y)
    return PI * alpha * lead


def _scaled_s(which, alpha, y):
    """(S(alpha; y) e^{shift}, shift) with the shift of the leading term."""
    sh = _s_shift(which, alpha, y)
    return ps.s_sum(which, alpha, y, sh), sh


@_register("s_sum_lower_bounds", "alpha, y > 0 (sampled on [1/4, 20]^2)",
           "S1(a) >= 4 e^{-pi a(y + 1/(4y))}; S2(2a) >= (2/y^4) e^{-2 pi a/y} + 4(1 - 1/(4y^2))^2 e^{-2 pi a(y + 1/(4y))}; "
           "S3(2a) >= (4y + 1/y) e^{-2 pi a(y + 1/(4y))}; "
           "S4(a) >= (2/y^5) e^{-pi a/y} + 4(1 - 1/(4y^2))^2 (y + 1/(4y)) e^{-pi a(y + 1/(4y))}")
def _c_s_lower(grid):
    A, Y = _mesh(_geo(0.25, grid.cap, grid.n), _geo(0.25, grid.cap, grid.n))
    c = {"alpha": A, "y": Y}
    u = 1 / (4 * Y * Y)
    lead = Y + 1 / (4 * Y)
    out = []
    for label, which, scale_a, rhs_terms in (
        ("S1(alpha)", "S1", 1, lambda a, y: [(4.0, PI * a * (y + 1 / (4 * y)))]),
        ("S2(2 alpha)", "S2", 2, lambda a, y: [(2 / y**4, 2 * PI * a / y),
                                              (4 * (1 - 1 / (4 * y * y)) ** 2, 2 * PI * a * (y + 1 / (4 * y)))]),
        ("S3(2 alpha)", "S3", 2, lambda a, y: [(4 * y + 1 / y, 2 * PI * a * (y + 1 / (4 * y)))]),
        ("S4(alpha)", "S4", 1, lambda a, y: [(2 / y**5, PI * a / y),
                                            (4 * (1 - 1 / (4 * y * y)) ** 2 * (y + 1 / (4 * y)),
                                             PI * a * (y + 1 / (4 * y)))]),
    ):
        lhs, rhs = [], []
        for a, y in zip(A, Y):
            val, sh = _scaled_s(which, scale_a * a, y)
            lhs.append(val)
            rhs.append(sum(cf * math.exp(sh - ex) for cf, ex in rhs_terms(a, y)))
        out.append(_item(label, "ge", lhs, rhs, c))
    del u, lead
    return out


@_register("s_sum_upper_bounds", "alpha >= 2, y in [sqrt3/2, 2]",
           "S1(2a) <= 4 e^{-2 pi a(y + 1/(4y))}(1 + eps_a); S2(a) <= (2/y^4) e^{-pi a/y}(1 + eps_b); "
           "S3(a) <= 4y e^{-pi a(y + 1/(4y))}(1 + eps_c); "
           "S4(2a) <= (2/y^5) e^{-2 pi a/y}(1 + eps_d) + 4y e^{-2 pi a(y + 1/(4y))}(1 - 1/(4y^2) - 1/(16y^4) + eps_e)")
def _c_s_upper(grid):
    A, Y = _ray_grid(grid)
    c = {"alpha": A, "y": Y}
    s1 = _pointwise(lambda a, y: ps.s_sum("S1", 2 * a, y), A, Y)
    s2 = _pointwise(lambda a, y: ps.s_sum("S2", a, y), A, Y)
    s3 = _pointwise(lambda a, y: ps.s_sum("S3", a, y), A, Y)
    s4 = _pointwise(lambda a, y: ps.s_sum("S4", 2 * a, y), A, Y)
    L = Y + 1 / (4 * Y)
    return [
        _item("S1(2 alpha)", "le", s1, 4 * np.exp(-2 * PI * A * L) * (1 + ps.eps_a(A, Y)), c),
        _item("S2(alpha)", "le", s2, 2 / Y**4 * np.exp(-PI * A / Y) * (1 + ps.eps_b(A, Y)), c),
        _item("S3(alpha)", "le", s3, 4 * Y * np.exp(-PI * A * L) * (1 + ps.eps_c(A, Y)), c),
        _item("S4(2 alpha)", "le", s4,
              2 / Y**5 * np.exp(-2 * PI * A / Y) * (1 + ps.eps_d(A, Y))
              + 4 * Y * np.exp(-2 * PI * A * L) * (1 - 1 / (4 * Y**2) - 1 / (16 * Y**4) + ps.eps_e(A, Y)), c),
    ]


_EPS_BOUNDS = (("eps_a", ps.eps_a, 4e-6), ("eps_b", ps.eps_b, 6e-3), ("eps_c", ps.eps_c, 0.4),
               ("eps_d", ps.eps_d, 5e-7), ("eps_e", ps.eps_e, 4e-2))


@_register("s_remainder_bounds", "alpha >= 2, y in [sqrt3/2, 2]",
           "eps_a <= 4e-6, eps_b <= 6e-3, eps_c <= 2/5, eps_d <= 5e-7, eps_e <= 4e-2")
def _c_eps(grid):
    A, Y = _ray_grid(grid)
    c = {"alpha": A, "y": Y}
    return [_item(label, "le", fn(A, Y), bound, c) for label, fn, bound in _EPS_BOUNDS]


@_register("s3_parity_split", "alpha >= 2, y in [sqrt3/2, 2]",
           "S3 = S3a + S3b + S3c + S3d with S3a = 4y e^{-pi a(y+1/(4y))} eps_c5, "
           "S3b = ...(1 + eps_c1 + eps_c2 + eps_c3), S3c = ... eps_c6, S3d = ... eps_c4 (to 1e-12)")
def _c_s3_split(grid):
    A, Y = _ray_grid(grid)
    c = {"alpha": A, "y": Y}
    parts = np.array([ps.s3_parts(a, y) for a, y in zip(A, Y)])
    s3 = _pointwise(lambda a, y: ps.s_sum("S3", a, y), A, Y)
    c1, c2, c3, c4, c5, c6 = ps.eps_c_parts(A, Y)
    base = 4 * Y * np.exp(-PI * A * (Y + 1 / (4 * Y)))
    closed = [base * c5, base * (1 + c1 + c2 + c3), base * c6, base * c4]
    items = [_item("S3 = sum of parts", "eq", s3, parts.sum(axis=1), c, tol=1e-12),
             _item("S3 = sum of closed forms", "eq", s3, sum(closed), c, tol=1e-12)]
    for k, lab in enumerate("abcd"):
        items.append(_item(f"S3{lab} closed form", "eq", parts[:, k], closed[k], c, scale=s3, tol=1e-12))
    return items


@_register("laplacian_identity", "alpha >= 2, y in [sqrt3/2, 2]",
           "(d^2/dy^2 + (2/y) d/dy)(K(a) - 2K(2a)) from the S sums equals a central difference "
           "of the energy (step 1e-4) to relative error 1e-5")
def _c_laplacian_identity(grid):
    n = max(4, grid.n // 2)
    A, Y = _mesh(_geo(2.0, 10.0, n), np.linspace(HEX_Y, 2.0, n))
    lap = _pointwise(ps.laplacian_from_sums, A, Y)
    fd = []
    for a, y in zip(A, Y):
        p = EnergyParams(a, 2.0)
        e = [difference_energy(p, UpperHalfPoint(0.5, y + d)).value for d in (-FD_STEP, 0.0, FD_STEP)]
        fd.append((e[2] - 2 * e[1] + e[0]) / FD_STEP**2 + (2 / y) * (e[2] - e[0]) / (2 * FD_STEP))
    return _item("finite difference", "eq", lap, fd, {"alpha": A, "y": Y}, tol=1e-5)


@_register("laplacian_lower_bound", "alpha >= 2, y in [sqrt3/2, 2]",
           "Laplacian >= (4 pi a / y^4) e^{-pi a/y} (A + B1 - B2) with the true remainders")
def _c_laplacian_lower(grid):
    A, Y = _ray_grid(grid)
    lap = _pointwise(ps.laplacian_from_sums, A, Y)
    return _item("lower bound", "ge", lap, ps.laplacian_lower_bound(A, Y), {"alpha": A, "y": Y})


@_register("laplacian_positive", "alpha >= 2, y in [sqrt3/2, 2]",
           "(d^2/dy^2 + (2/y) d/dy)(K(a) - 2K(2a)) > 0 on the ray")
def _c_laplacian_positive(grid):
    A, Y = _ray_grid(grid)
    lap = _pointwise(ps.laplacian_from_sums, A, Y)
    return _item("positive", "gt", lap, 0.0, {"alpha": A, "y": Y})


@_register("elementary_inequality", "x >= 1 (sampled on [1, 20]), eps_b = 6e-3, eps_d = 5e-7",
           "(pi/2) x - (1 + eps_b) - 4 e^{-pi x}(pi x (1 + eps_d) - 1) >= 1/10")
def _c_elementary(grid):
    x = _geo(1.0, grid.cap, 4 * grid.n)
    lhs = PI / 2 * x - (1 + 6e-3) - 4 * np.exp(-PI * x) * (PI * x * (1 + 5e-7) - 1)
    return _item("elementary", "ge", lhs, 0.1, {"x": x})


@_register("laplacian_remainder_terms", "alpha >= 2, y in [sqrt3/2, 2]",
           "A(alpha; y) >= 1/10, B1(alpha; y) >= 0, B2(alpha; y) <= B2(2, sqrt3/2) <= 5e-3")
def _c_ab_terms(grid):
    A, Y = _ray_grid(grid)
    c = {"alpha": A, "y": Y}
    b2_ref = float(ps.b2_term(2.0, HEX_Y))
    return [
        _item("A >= 1/10", "ge", ps.a_term(A, Y), 0.1, c),
        _item("B1 >= 0", "ge", ps.b1_term(A, Y), 0.0, c, scale=1.0),
        _item("B2 <= B2(2, sqrt3/2)", "le", ps.b2_term(A, Y), b2_ref, c),
        _item("B2(2, sqrt3/2) <= 5e-3", "le", b2_ref, 5e-3, {"alpha": 2.0, "y": HEX_Y}),
    ]


# --------------------------------------------------------------------------
# the direct comparison for y >= 2


def _sqrt_hex():
    return math.sqrt(HEX_Y)


def _row_split_grid(grid):
    return _mesh(_geo(2.0, grid.cap, grid.n), _geo(HEX_Y, grid.cap, grid.n))


@_register("ray_row_split", "alpha >= 2, y >= sqrt3/2",
           "E_2 = prefactor (M + E1..E4) and E_{2 sqrt2} = prefactor (P1 + P2 + P3 + E_tilde), "
           "prefactor = pi^{-1} 2^{-5/2} alpha^{-5/2} y^{1/2}; M1, M2, P1 agree across series and Poisson routes")
def _c_row_split(grid):
    A, Y = _row_split_grid(grid)
    c = {"alpha": A, "y": Y}
    pre = ps.ray_prefactor(A, Y)
    m = ps.m_total(A, Y) + sum(ps.e_rows(A, Y))
    p = ps.p_total(A, Y) + ps.e_tilde(A, Y)
    e2 = np.array([gamma_c_energy(EnergyParams(a, 2.0), [y])[0] for a, y in zip(A, Y)]) / pre
    e8 = np.array([gamma_c_energy(EnergyParams(a, SQRT8), [y])[0] for a, y in zip(A, Y)]) / pre
    # routes are compared where both are accurate: 1/2 <= y/alpha <= 2
    k = (Y / A >= 0.5) & (Y / A <= 2.0)
    ck = {"alpha": A[k], "y": Y[k]}
    return [
        _item("b = 2", "eq", m, e2, c, tol=1e-9),
        _item("b = 2 sqrt2", "eq", p, e8, c, tol=1e-9),
        _item("M1 routes", "eq", ps.m1(A[k], Y[k], route="series"), ps.m1(A[k], Y[k], route="poisson"), ck, tol=1e-9),
        _item("M2 routes", "eq", ps.m2(A[k], Y[k], route="series"), ps.m2(A[k], Y[k], route="poisson"), ck, tol=1e-9),
        _item("P1 routes", "eq", ps.p1(A[k], Y[k], route="series"), ps.p1(A[k], Y[k], route="poisson"), ck, tol=1e-7),
    ]


def _far_grid(grid):
    """y >= alpha >= 2."""
    A, Y = [], []
    for a in _geo(2.0, grid.cap, grid.n):
        ys = _geo(a, _hi(a, grid.cap), grid.n)
        A.append(np.full(ys.size, a))
        Y.append(ys)
    return np.concatenate(A), np.concatenate(Y)


def _near_grid(grid, y_lo=2.0, strict=False):
    """alpha >= y >= y_lo (alpha > y when strict)."""
    A, Y = [], []
    for a in _geo(2.0, grid.cap, grid.n):
        hi = a * (1 - 1e-9) if strict else a
        if hi < y_lo:
            continue
        ys = _geo(y_lo, hi, grid.n)
        A.append(np.full(ys.size, a))
        Y.append(ys)
    return np.concatenate(A), np.concatenate(Y)


@_register("m_lower_far", "y >= alpha >= 2",
           "M1 >= alpha/5, M2 > 0, M3 > 0, M4 > 0, M >= alpha/5")
def _c_m_far(grid):
    A, Y = _far_grid(grid)
    c = {"alpha": A, "y": Y}
    sh = PI * A * Y
    return [
        _item("(1) M1 >= alpha/5", "ge", ps.m1(A, Y), A / 5, c),
        _item("(2) M2 > 0", "gt", ps.m2(A, Y), 0.0, c),
        _item("(3) M3 > 0", "gt", ps.m3(A, Y, log_scale=sh), 0.0, c),
        _item("(4) M4 > 0", "gt", ps.m4(A, Y, log_scale=sh), 0.0, c),
        _item("M >= alpha/5", "ge", ps.m_total(A, Y), A / 5, c),
    ]


@_register("m_hex_upper", "alpha >= 2, y = sqrt3/2",
           "upper bounds for M1..M4 at the hexagonal height in terms of eps_1..eps_4, "
           "M <= (792/25) alpha^{3/2} 3^{-1/4} e^{-sqrt3 pi alpha/2}(1 + sqrt3 pi alpha/11) and M <= 3 alpha/10")
def _c_m_hex(grid):
    a = _geo(2.0, grid.cap, grid.n)
    y = np.full_like(a, HEX_Y)
    c = {"alpha": a}
    e1, e2, e3, e4 = ps.hex_eps(a)
    E = lambda k: np.exp(-k * SQRT3 * PI * a / 3)  # noqa: E731
    a32 = a**1.5 * 3**-0.25
    a52 = a**2.5 * 3**-0.75
    M1, M2, M3, M4 = ps.m1(a, y), ps.m2(a, y), ps.m3(a, y), ps.m4(a, y)
    M = M1 + M2 + M3 + M4
    return [
        _item("(1) M1", "le", M1, 8 * a32 * (E(2) - E(4) + E(8) * (1 + e1)), c),
        _item("(2) M2", "le", M2, 8 * a32 * (E(4) - E(2)) + 32 * PI * a52 * (E(2) * (1 + e3) - 2 * E(4)), c),
        _item("(3) M3", "le", M3, 16 * a32 * np.exp(-SQRT3 / 2 * PI * a)
              * ((1 + SQRT3 * PI * a) * e2 - (1 + 2 * SQRT3 * PI * a) * np.exp(-5 * SQRT3 * PI * a / 6)), c),
        _item("(4) M4", "le", M4, 16 * PI * a52 * E(2) * (1 + e4), c),
        _item("(5) M", "le", M, 792 / 25 * a32 * np.exp(-SQRT3 / 2 * PI * a) * (1 + SQRT3 * PI * a / 11), c),
        _item("(5) M <= 3 alpha/10", "le", M, 0.3 * a, c),
    ]


@_register("theta_half_ratio", "X in [0.05, 5], n = 0..8",
           "|theta(X; n/2) / theta(X; 1)| <= 1 and |theta_X(X; n/2) / theta_X(X; 1)| <= 2")
def _c_theta_half(grid):
    X, N = _mesh(_geo(_X_MIN, 5.0, 4 * grid.n), np.arange(0, 9, dtype=float))
    c = {"X": X, "n": N}
    r1 = np.abs(theta_1d(X, N / 2) / theta_1d(X, 1.0))
    r2 = np.abs(theta_1d_dX(X, N / 2) / theta_1d_dX(X, 1.0))
    return [_item("theta ratio", "le", r1, 1.0, c), _item("theta_X ratio", "le", r2, 2.0, c)]


def _hex_terms(A):
    """M and the E rows at the hexagonal height, per alpha."""
    h = np.full_like(A, HEX_Y)
    return ps.m_total(A, h), sum(ps.e_rows(A, h))


@_register("comparison_far", "y >= alpha >= 2",
           "(1) sqrt(y) M(y) - (sqrt3/2)^{1/2} M(sqrt3/2) >= sqrt(y) alpha/500; "
           "(2) |E(y)/alpha| + (3^{1/4}/2)|E(sqrt3/2)/alpha| <= 1e-6; (3) error/main ratio <= 1e-3; "
           "(4) the full difference >= sqrt(y) alpha (1 - 1e-3)/500; "
           "row bounds |E1/alpha| <= (31/5)(1 + 8 pi a y) e^{-4 pi a y}, "
           "|E/alpha| <= 2 pi (1 + 8 pi a y + y/(2a)) e^{-4 pi a y}, "
           "|E(sqrt3/2)/alpha| <= 4 pi a^{1/2}(1 + 2 sqrt3 pi a) e^{-2 sqrt3 pi a}")
def _c_comparison_far(grid):
    A, Y = _far_grid(grid)
    c = {"alpha": A, "y": Y}
    rh = _sqrt_hex()
    M, Eh = _hex_terms(A)
    My = ps.m_total(A, Y)
    Ey = sum(ps.e_rows(A, Y))
    main = np.sqrt(Y) * My - rh * M
    err = np.sqrt(Y) * Ey - rh * Eh
    sh = 4 * PI * A * Y
    e_scaled = ps.e_rows(A, Y, log_scale=sh)
    hh = np.full_like(A, HEX_Y)
    sh_h = 2 * SQRT3 * PI * A
    eh_scaled = sum(ps.e_rows(A, hh, log_scale=sh_h))
    return [
        _item("(1) main", "ge", main, np.sqrt(Y) * A / 500, c),
        _item("(2) errors", "le", np.abs(Ey / A) + 3**0.25 / 2 * np.abs(Eh / A), 1e-6, c),
        _item("(3) ratio", "le", np.abs(err / main), 1e-3, c),
        _item("(4) total", "ge", main + err, np.sqrt(Y) * A * (1 - 1e-3) / 500, c),
        _item("row bound E1", "le", np.abs(e_scaled[0] / A), 31 / 5 * (1 + 8 * PI * A * Y), c),
        _item("row bound E", "le", np.abs(sum(e_scaled) / A), 2 * PI * (1 + 8 * PI * A * Y + Y / (2 * A)), c),
        _item("row bound E(sqrt3/2)", "le", np.abs(eh_scaled / A),
              4 * PI * np.sqrt(A) * (1 + 2 * SQRT3 * PI * A), c),
    ]


@_register("m_lower_near", "alpha >= y >= 2",
           "(1) M1 >= 4 sqrt2 a^{3/2} y^{-1/2}(e^{-pi a/y} - e^{-2 pi a/y}(1 + delta(2))); (2) M2 >= ...; "
           "(3) M3 > 0; (4) M4 > 0; (5) M >= 10 pi a^{5/2} y^{-3/2} e^{-pi a/y}")
def _c_m_near(grid):
    A, Y = _near_grid(grid)
    c = {"alpha": A, "y": Y}
    d1, d2 = float(ps.delta(1.0)), float(ps.delta(2.0))
    mu2 = float(_mu(2.0))
    r = A / Y
    e1, e2 = np.exp(-PI * r), np.exp(-2 * PI * r)
    w = 4 * SQRT2 * A**1.5 / np.sqrt(Y)
    M1, M2 = ps.m1(A, Y), ps.m2(A, Y)
    sh = PI * A * Y + PI * A / (4 * Y)
    return [
        _item("(1) M1", "ge", M1, w * (e1 - e2 * (1 + d2)), c),
        _item("(2) M2", "ge", M2, w * (e2 - e1 * (1 + d1)) + 8 * SQRT2 * PI * A**2.5 * Y**-1.5 * (e1 - 2 * e2 * (1 + mu2)), c),
        _item("(3) M3 > 0", "gt", ps.m3(A, Y, log_scale=sh), 0.0, c),
        _item("(4) M4 > 0", "gt", ps.m4(A, Y, log_scale=sh), 0.0, c),
        _item("(5) M", "ge", ps.m_total(A, Y), 10 * PI * A**2.5 * Y**-1.5 * e1, c),
    ]


@_register("comparison_near", "alpha >= y >= 2",
           "(1) main >= 8 pi a^{3/2} e^{-pi a/y}; (2) |sqrt(y) a^{-3/2} e^{pi a/y} E(y)| "
           "+ |(sqrt3/2)^{1/2} a^{-3/2} e^{pi a/2} E(sqrt3/2)| <= 1e-5; (3) ratio <= 1e-5; "
           "(4) total >= 25 a^{3/2} e^{-pi a/y}(1 - 1e-5)")
def _c_comparison_near(grid):
    A, Y = _near_grid(grid)
    c = {"alpha": A, "y": Y}
    rh = _sqrt_hex()
    M, Eh = _hex_terms(A)
    main = np.sqrt(Y) * ps.m_total(A, Y) - rh * M
    Ey = sum(ps.e_rows(A, Y))
    err = np.sqrt(Y) * Ey - rh * Eh
    ea = np.exp(-PI * A / Y)
    aux = np.abs(np.sqrt(Y) * A**-1.5 * sum(ps.e_rows(A, Y, log_scale=PI * A / Y))) + np.abs(
        rh * A**-1.5 * np.exp(PI * A / 2) * Eh
    )
    return [
        _item("(1) main", "ge", main, 8 * PI * A**1.5 * ea, c),
        _item("(2) errors", "le", aux, 1e-5, c),
        _item("(3) ratio", "le", np.abs(err / main), 1e-5, c),
        _item("(4) total", "ge", main + err, 25 * A**1.5 * ea * (1 - 1e-5), c),
    ]


# --------------------------------------------------------------------------
# the critical mixing b = 2 sqrt2


@_register("critical_mixing_far", "alpha >= 2, y >= alpha",
           "P >= 4 sqrt2 a e^{-pi y/(2a)}(pi y/a - 1 - (2 pi y/a - 1) e^{-pi y/(2a)}); "
           "|E_tilde| <= (2 pi a + 112 pi a^2 y + 8 sqrt2 y) e^{-4 pi a y}")
def _c_critical_far(grid):
    A, Y = _far_grid(grid)
    c = {"alpha": A, "y": Y}
    t = Y / A
    e = np.exp(-PI * t / 2)
    return [
        _item("(1) P lower", "ge", ps.p_total(A, Y), 4 * SQRT2 * A * e * (PI * t - 1 - (2 * PI * t - 1) * e), c),
        _item("(2) E_tilde upper", "le", np.abs(ps.e_tilde(A, Y, log_scale=4 * PI * A * Y)),
              2 * PI * A + 112 * PI * A**2 * Y + 8 * SQRT2 * Y, c),
    ]


def _critical_near_grid(grid):
    A, Y = [], []
    for a in _geo(2.0, grid.cap, grid.n):
        ys = _geo(HEX_Y, a * (1 - 1e-9), grid.n)
        A.append(np.full(ys.size, a))
        Y.append(ys)
    return np.concatenate(A), np.concatenate(Y)


@_register("critical_mixing_near", "alpha >= 2, sqrt3/2 <= y < alpha",
           "P >= 8 sqrt2 pi a^{5/2} y^{-3/2}(e^{-pi a/y} - 2 sqrt2 e^{-2 pi a/y}); "
           "|E_tilde| <= 4 pi a^{3/2} y^{-1/2}(1 + 16 a y) e^{-4 pi a y}")
def _c_critical_near(grid):
    A, Y = _critical_near_grid(grid)
    c = {"alpha": A, "y": Y}
    r = A / Y
    return [
        _item("(1) P lower", "ge", ps.p_total(A, Y),
              8 * SQRT2 * PI * A**2.5 * Y**-1.5 * (np.exp(-PI * r) - 2 * SQRT2 * np.exp(-2 * PI * r)), c),
        _item("(2) E_tilde upper", "le", np.abs(ps.e_tilde(A, Y, log_scale=4 * PI * A * Y)),
              4 * PI * A**1.5 / np.sqrt(Y) * (1 + 16 * A * Y), c),
    ]


@_register("critical_mixing_positive", "alpha >= 2, y >= sqrt3/2",
           "P + E_tilde > 0, i.e. E_{2 sqrt2} > 0 on the ray")
def _c_critical_positive(grid):
    A, Y = _row_split_grid(grid)
    return _item("P + E_tilde > 0", "gt", ps.p_total(A, Y) + ps.e_tilde(A, Y), 0.0, {"alpha": A, "y": Y})


# --------------------------------------------------------------------------
# printed constants


def _truncation_check(label, value, printed):
    """value truncated toward zero to the printed digits equals printed."""
    p = Decimal(printed)
    ulp = Decimal(1).scaleb(p.as_tuple().exponent)
    trunc = Decimal(repr(float(value))).quantize(ulp, rounding=ROUND_DOWN)
    v, pa, u = abs(float(value)), abs(float(p)), float(ulp)
    slack = min(v - pa, pa + u - v) / u
    ok = trunc == p
    return BoundCheck(
        f"constant:{label}", "printed truncation", f"{label} = {printed}...",
        slack if ok else min(slack, -abs(slack) - 1e-300), 1,
        [] if ok else [{"value": float(value), "printed": printed}], 0 if ok else 1,
        {}, float(value), float(p),
    )


def _upper_check(label, value, bound, hypothesis="", strict=False):
    value = float(value)
    slack = (bound - value) / abs(bound)
    bad = slack <= 0 if strict else slack < 0
    return BoundCheck(
        f"constant:{label}", hypothesis or "closed value", f"{label} {'<' if strict else '<='} {bound:g}",
        slack, 1, [{"value": value, "bound": bound}] if bad else [], int(bad), {}, value, bound,
    )


def check_constants(grid=None):
    """Recompute every printed constant and compare it with the printed digits."""
    grid = grid or GridSpec()
    k = transversal_constants()
    out = [
        _truncation_check("mu(1/2)", k["mu(1/2)"], "0.0359"),
        _truncation_check("mu(1/4)", k["mu(1/4)"], "0.3960"),
        _truncation_check("(1+nu_hat(1/4))/(1+mu_hat(1/4))", k["(1+nu_hat(1/4))/(1+mu_hat(1/4))"], "-0.5759"),
        _truncation_check("(1+nu(1/2))/(1+mu(1/2))", k["(1+nu(1/2))/(1+mu(1/2))"], "1.1042"),
        _truncation_check("1-mu(1/4)", k["1-mu(1/4)"], "0.6039"),
        _truncation_check("(1+nu(1/4))/(1+mu(1/4))", k["(1+nu(1/4))/(1+mu(1/4))"], "1.9123"),
        _truncation_check("sum e^{-pi n^2/2}(1 - sqrt2 e^{-pi n^2/2})",
                          k["sum e^{-pi n^2/2}(1 - sqrt2 e^{-pi n^2/2})"], "0.1486"),
    ]
    A, Y = _ray_grid(grid)
    for label, fn, bound in _EPS_BOUNDS:
        out.append(_upper_check(f"sup {label}", np.max(fn(A, Y)), bound, "alpha >= 2, y in [sqrt3/2, 2]"))
    out += [
        _upper_check("delta(1)", ps.delta(1.0), 9e-5),
        _upper_check("delta(2)", ps.delta(2.0), 7e-9),
        _upper_check("mu(2)", _mu(2.0), 3e-8),
        _upper_check("sum_{n>=1} e^{-pi n^2}", ps.nsum(lambda n: np.exp(-PI * n * n), 1), 4.33e-2),
        _upper_check("4 sum_{n>=2} (n-1/2)^2 e^{-pi (n-1) n}",
                     4 * ps.nsum(lambda n: (n - 0.5) ** 2 * np.exp(-PI * (n - 1) * n), 2), 1 / 50),
        _upper_check("sum_{n>=2} (4 pi (n-1)^2 - 2) e^{-pi (n-1)^2}",
                     ps.nsum(lambda n: (4 * PI * (n - 1) ** 2 - 2) * np.exp(-PI * (n - 1) ** 2), 2), 0.5),
        _upper_check("sum_{n>=2} e^{-2 pi (n-1) n}", ps.nsum(lambda n: np.exp(-2 * PI * (n - 1) * n), 2), 1e-5),
        _upper_check("B2(2, sqrt3/2)", ps.b2_term(2.0, HEX_Y), 5e-3),
        _upper_check("2 sum_{m>=1} e^{-pi (m-1/2)^2}", 2 * ps.nsum(lambda m: np.exp(-PI * (m - 0.5) ** 2), 1),
                     1.0, strict=True),
    ]
    return out


def audit_printed_tail_bounds():
    """Tail bounds printed inside proofs that are not needed by the checks above.

    sum_{n>=3} (1 + 8 pi n^2) e^{-4 pi (n^2 - 4)} is printed as <= 1e-40; its
    value is about 1.2e-25, so this audit fails.  The downstream row bound
    (comparison_far, 'row bound E1') is still checked directly.
    """
    v = float(ps.nsum(lambda n: (1 + 8 * PI * n * n) * np.exp(-4 * PI * (n * n - 4)), 3))
    return [_upper_check("sum_{n>=3} (1 + 8 pi n^2) e^{-4 pi (n^2 - 4)}", v, 1e-40)]


def suite(names=None, grid=None, include_constants=True):
    """Checks and constants together, in registry order."""
    out = run_suite(names, grid)
    if include_constants:
        out += check_constants(grid)
    return out
