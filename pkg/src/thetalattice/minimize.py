"""Minimization of the difference energy on the ray Re z = 1/2 and on the domain.

The one-dimensional search scans a geometric grid in y, refines every local
bracket by golden-section search and keeps the best candidate, preferring the
smaller y when two candidates agree to within f_tol.  The two-dimensional
search is a cross-check: L-BFGS-B with the analytic gradient, started from
the best points of a coarse grid over the closed fundamental domain.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .energy import difference_energy, difference_energy_grad, gamma_c_energy, transversal_terms
from .errors import DomainError, EvaluationError
from .modular import reduce
from .points import HEX_Y, UpperHalfPoint
from .theta import DEFAULT_POLICY

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LineSearchConfig:
    """Search settings on the ray y >= sqrt(3)/2.

    y_min is fixed at sqrt(3)/2; y_max is the search ceiling.
    """

    y_max: float = 50.0
    x_tol: float = 1e-6
    f_tol: float = 1e-12
    max_iter: int = 200
    grid_ratio: float = 1.05
    y_min: float = HEX_Y

    def __post_init__(self):
        if self.y_min != HEX_Y:
            raise DomainError("y_min is fixed at sqrt(3)/2")
        if not self.y_max > self.y_min:
            raise DomainError("y_max must exceed sqrt(3)/2")
        if not (self.x_tol > 0 and self.f_tol > 0 and self.max_iter > 0 and self.grid_ratio > 1):
            raise DomainError("tolerances, max_iter and grid_ratio must be positive (ratio > 1)")


class MinimizeKind(str, Enum):
    INTERIOR = "interior"
    LEFT_ENDPOINT_HEXAGONAL = "left_endpoint_hexagonal"
    CEILING_HIT = "ceiling_hit"


@dataclass(frozen=True)
class MinimizeResult:
    argmin: UpperHalfPoint
    value: float
    kind: MinimizeKind
    iterations: int


def golden_section(f, lo, hi, tol, max_iter=200):
    """Golden-section search for a minimum of f on [lo, hi].

    Returns (x, f(x), iterations) for the best point seen.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        it += 1
    return (c, fc, it) if fc <= fd else (d, fd, it)


def scan_grid(cfg):
    """Geometric grid from sqrt(3)/2 to y_max (both included)."""
    n = int(math.ceil(math.log(cfg.y_max / cfg.y_min) / math.log(cfg.grid_ratio)))
    ys = cfg.y_min * cfg.grid_ratio ** np.arange(n + 1, dtype=float)
    ys[0] = cfg.y_min
    ys[-1] = cfg.y_max
    return ys


def _pick(cands, f_tol):
    best = min(c[1] for c in cands)
    return min((c for c in cands if c[1] <= best + f_tol), key=lambda c: c[0])


def _classify_y(y, cfg):
    if abs(y - cfg.y_min) <= cfg.x_tol:
        return MinimizeKind.LEFT_ENDPOINT_HEXAGONAL
    if y >= cfg.y_max - cfg.x_tol:
        return MinimizeKind.CEILING_HIT
    return MinimizeKind.INTERIOR


def minimize_ray(f, cfg=None):
    """Global minimum of a vectorized f(y) over [sqrt(3)/2, y_max].

    Returns (y, f(y), kind, iterations).
    """
    cfg = cfg or LineSearchConfig()
    ys = scan_grid(cfg)
    vs = np.asarray(f(ys), dtype=float)
    if not np.all(np.isfinite(vs)):
        raise EvaluationError("non-finite energy on the scan grid")

    def f1(y):
        v = float(np.asarray(f(np.array([y])))[0])
        if not math.isfinite(v):
            raise EvaluationError(f"non-finite energy at y = {y}")
        return v

    last = len(ys) - 1
    cands = [(ys[0], vs[0]), (ys[-1], vs[-1])]
    iters = 0
    for i in range(len(ys)):
        left_ok = i == 0 or vs[i] <= vs[i - 1]
        right_ok = i == last or vs[i] <= vs[i + 1]
        if not (left_ok and right_ok):
            continue
        lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, last)]
        tol = max(0.1 * cfg.x_tol, 1e-12 * hi)
        y, v, it = golden_section(f1, lo, hi, tol, cfg.max_iter)
        iters += it
        cands.append((y, v))
    y, v = _pick(cands, cfg.f_tol)
    kind = _classify_y(y, cfg)
    if kind is MinimizeKind.LEFT_ENDPOINT_HEXAGONAL and y != cfg.y_min:
        y, v = cfg.y_min, float(vs[0])
    return y, v, kind, iters


def minimize_on_gamma_c(params, cfg=None, policy=None):
    """Global minimum of E_b(alpha; 1/2 + i y) over y in [sqrt(3)/2, y_max]."""
    cfg = cfg or LineSearchConfig()
    policy = policy or DEFAULT_POLICY
    y, v, kind, iters = minimize_ray(lambda ys: gamma_c_energy(params, ys, policy), cfg)
    return MinimizeResult(UpperHalfPoint(0.5, y), v, kind, iters)


def minimize_2d(params, cfg=None, policy=None, grid=(11, 30), starts=3):
    """Local descent from the best coarse-grid points of the closed domain.

    Uses L-BFGS-B on the box 0 <= x <= 1/2, 1/2 <= y <= y_max with the
    analytic gradient and reduces the winner to the fundamental domain.
    Far up the domain dE/dx carries a factor exp(-pi alpha y) and drops below
    the rounding of E, so x is then settled by the sign of the factored
    derivative (see polish_x).
    """
    cfg = cfg or LineSearchConfig()
    policy = policy or DEFAULT_POLICY
    nx, ny = grid
    xs = np.linspace(0.0, 0.5, nx)
    ys = np.geomspace(HEX_Y, cfg.y_max, ny)
    pts = [(x, y) for x in xs for y in ys if x * x + y * y >= 1.0 - 1e-12]

    def energy(p):
        return difference_energy(params, UpperHalfPoint(p[0], p[1]), policy).value

    vals = np.array([energy(p) for p in pts])
    order = np.argsort(vals)
    chosen, seen_y = [], []
    for k in order:
        y = pts[k][1]
        if all(abs(math.log(y / s)) > 0.2 for s in seen_y):
            chosen.append(pts[k])
            seen_y.append(y)
        if len(chosen) == starts:
            break

    def fun(p):
        z = UpperHalfPoint(p[0], p[1])
        v = difference_energy(params, z, policy).value
        g = difference_energy_grad(params, z, policy)
        return v, np.array(g)

    best = None
    iters = 0
    for p0 in chosen:
        res = _scipy_minimize(
            fun, np.array(p0), jac=True, method="L-BFGS-B",
            bounds=[(0.0, 0.5), (0.5, cfg.y_max)],
            options={"maxiter": cfg.max_iter, "ftol": 1e-15, "gtol": 1e-13},
        )
        iters += int(res.nit)
        zr = reduce(UpperHalfPoint(float(res.x[0]), float(res.x[1]))).point
        zr = UpperHalfPoint(polish_x(params, zr, policy), zr.y)
        cand = (zr, difference_energy(params, zr, policy).value)
        if best is None or cand[1] < best[1] - cfg.f_tol or (abs(cand[1] - best[1]) <= cfg.f_tol and zr.y < best[0].y):
            best = cand
    z, v = best
    if abs(z.x - 0.5) <= cfg.x_tol and abs(z.y - HEX_Y) <= cfg.x_tol:
        kind = MinimizeKind.LEFT_ENDPOINT_HEXAGONAL
    elif z.y >= cfg.y_max - cfg.x_tol:
        kind = MinimizeKind.CEILING_HIT
    else:
        kind = MinimizeKind.INTERIOR
    return MinimizeResult(z, v, kind, iters)


def polish_x(params, z, policy=None, n_grid=64, tol=1e-12):
    """Minimize over x at fixed y using only the sign of dE/dx.

    The sign is that of -(I + R) from the row factorization, so it stays
    reliable where dE/dx is far below the rounding of E.  Walks from z.x
    toward the descent side and bisects the first sign change; returns 1/2
    or 0 when the derivative keeps its sign up to the edge.  Points with
    |z| < 1 on the scanned segment are left to the caller (z.y >= 1 there).
    """
    policy = policy or DEFAULT_POLICY
    y = z.y
    if y < 1.0:
        return z.x

    def total(x):
        main, rem = transversal_terms(params.alpha, params.b, np.atleast_1d(x), np.full(np.size(x), y), policy)
        return main + rem

    x0 = min(max(z.x, tol), 0.5 - tol)
    t0 = float(total(x0)[0])
    if t0 == 0.0:
        return z.x
    # t > 0 means dE/dx < 0: move right, toward 1/2.
    edge = 0.5 - tol if t0 > 0 else tol
    xs = np.linspace(x0, edge, n_grid)
    ts = total(xs)
    flip = np.flatnonzero(np.sign(ts) != np.sign(t0))
    if flip.size == 0:
        return 0.5 if t0 > 0 else 0.0
    a, b = xs[flip[0] - 1], xs[flip[0]]
    while abs(b - a) > tol:
        m = 0.5 * (a + b)
        if np.sign(total(m)[0]) == np.sign(t0):
            a = m
        else:
            b = m
    return float(0.5 * (a + b))


@dataclass
class MonotonicityReport:
    """Sign audit of dE/dx on an interior grid of the fundamental domain.

    min_margin is the smallest (I + R) / |I| (1 means the remainder rows are
    negligible, <= 0 means dE/dx >= 0); violations lists (x, y) points where
    dE/dx is not negative.
    """

    alpha: float
    b: float
    n_points: int
    min_margin: float
    worst_point: tuple
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations


def certify_transversal_monotonicity(alpha, b, n_x=50, n_y=50, y_max=10.0, delta=1e-3, policy=None):
    """Check dE_b/dx < 0 on x in [delta, 1/2 - delta], y in [sqrt(1-x^2) + delta, y_max].

    The sign is read off the factor I + R of the row factorization, which
    does not underflow where dE/dx itself is below the double range.
    """
    policy = policy or DEFAULT_POLICY
    xs = np.linspace(delta, 0.5 - delta, n_x)
    X, T = np.meshgrid(xs, np.linspace(0.0, 1.0, n_y), indexing="ij")
    y0 = np.sqrt(1.0 - X * X) + delta
    Y = y0 + T * (y_max - y0)
    main, rem = transversal_terms(alpha, b, X, Y, policy)
    total = main + rem
    margin = total / np.abs(main)
    bad = ~(np.isfinite(total) & (total > 0))
    k = np.unravel_index(np.nanargmin(np.where(np.isfinite(margin), margin, -np.inf)), margin.shape)
    violations = [(float(X[i]), float(Y[i])) for i in zip(*np.nonzero(bad))]
    return MonotonicityReport(
        alpha, b, int(X.size), float(margin[k]), (float(X[k]), float(Y[k])), violations
    )
