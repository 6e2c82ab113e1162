"""Lattice theta function, the energy K(alpha; z) and the difference energy.

For z = x + i y in the upper half-plane put Q(m, n) = |m z + n|^2 / y.  Then

    theta(alpha; z) = sum exp(-pi alpha Q),
    K(alpha; z)     = sum Q exp(-pi alpha Q) = -(1/pi) d theta / d alpha,
    E_b(alpha; z)   = K(alpha; z) - b K(2 alpha; z).

Two independent evaluation routes are provided.  The direct route sums over
lattice points with Q below a cutoff chosen from a rigorous Gaussian tail
bound; every term of K is positive so the sum has full relative accuracy.
The expansion route sums over lattice rows and evaluates each row with the
one-dimensional theta function (arguments X = y / alpha and n x), which is the
fast route when y / alpha is not small.  In the expansion the contribution of
the origin is separated analytically, so E_b is accurate even when
K(alpha) and b K(2 alpha) nearly cancel at large y.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, DomainError
from .modular import reduce
from .points import HEX_Y, HEXAGONAL, SQRT2, SQRT8, EnergyParams, UpperHalfPoint
from .theta import DEFAULT_POLICY, theta_eval

PI = math.pi

__all__ = [
    "EnergyParams",
    "EnergyValue",
    "UpperHalfPoint",
    "HEXAGONAL",
    "theta_2d",
    "theta_2d_direct",
    "k_energy_direct",
    "k_energy_expansion",
    "difference_energy",
    "difference_energy_grad",
    "gamma_c_energy",
    "transversal_terms",
    "EXPANSION_RATIO",
]

# expansion route is used when y / alpha >= EXPANSION_RATIO (after reduction)
EXPANSION_RATIO = 0.5


@dataclass(frozen=True)
class EnergyValue:
    """Energy per particle with a bound on the truncation error.

    n_terms counts the outer terms (expansion) or lattice points (direct)
    that were summed.  theorem_covered is False when alpha < 2.
    """

    value: float
    est_error: float
    n_terms: int = 0
    theorem_covered: bool = True


def _as_point(z):
    if isinstance(z, UpperHalfPoint):
        return z
    if isinstance(z, complex):
        return UpperHalfPoint.from_complex(z)
    x, y = z
    return UpperHalfPoint(x, y)


def _check_alpha(alpha):
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha}")


# --------------------------------------------------------------------------
# direct lattice summation


def _lattice_points(x, y, T):
    """Integer pairs (m, n) with Q(m, n) <= T, as float arrays."""
    mmax = int(math.floor(math.sqrt(T / y)))
    ms, ns = [], []
    for m in range(-mmax, mmax + 1):
        r2 = y * T - (m * y) ** 2
        if r2 < 0:
            continue
        r = math.sqrt(r2)
        lo = math.ceil(-m * x - r)
        hi = math.floor(-m * x + r)
        if hi < lo:
            continue
        n = np.arange(lo, hi + 1, dtype=float)
        ns.append(n)
        ms.append(np.full(n.shape, float(m)))
    return np.concatenate(ms), np.concatenate(ns)


def _direct_cutoff(alpha, z, tol, policy):
    """Cutoff T and tail bound for sum_{Q > T} Q exp(-pi alpha Q).

    Uses Q e^{-pi a Q} <= (2 / (e pi a)) e^{-pi a T / 4} e^{-pi a Q / 4} for
    Q > T, so the tail is at most (2/(e pi a)) e^{-pi a T/4} theta(a/4; z).
    """
    th = theta_2d(alpha / 4.0, z, policy).value * (1 + 1e-9)
    c = 2.0 / (math.e * PI * alpha) * th
    T = 4.0 / (PI * alpha) * math.log(max(2.0 * c / tol, 1.0 + 1e-12))
    T = max(T, 1.0)
    tail = c * math.exp(-PI * alpha * T / 4.0)
    return T, tail


def theta_2d_direct(alpha, z, cutoff=None):
    """theta(alpha; z) by brute-force summation of exp(-pi alpha Q) over Q <= cutoff."""
    _check_alpha(alpha)
    z = _as_point(z)
    if cutoff is None:
        cutoff = 45.0 / (PI * alpha)
    m, n = _lattice_points(z.x, z.y, cutoff)
    q = ((m * z.x + n) ** 2 + (m * z.y) ** 2) / z.y
    return float(np.sum(np.sort(np.exp(-PI * alpha * q))))


def _k_direct_terms(alpha, z, T):
    m, n = _lattice_points(z.x, z.y, T)
    p = m * z.x + n
    q = (p * p + (m * z.y) ** 2) / z.y
    return m, p, q


def k_energy_direct(alpha, z, policy=None):
    """K(alpha; z) by direct summation over lattice points with Q <= T."""
    _check_alpha(alpha)
    policy = policy or DEFAULT_POLICY
    z = _as_point(z)
    T, tail = _direct_cutoff(alpha, z, policy.abs_tol, policy)
    _, _, q = _k_direct_terms(alpha, z, T)
    terms = np.sort(q * np.exp(-PI * alpha * q))
    value = float(np.sum(terms))
    rounding = 4 * np.finfo(float).eps * value
    return EnergyValue(value, tail + rounding, int(q.size), alpha >= 2.0)


def _direct_grad(alpha, z, policy):
    """(dK/dx, dK/dy) by term-wise differentiation of the direct sum."""
    T, _ = _direct_cutoff(alpha, z, policy.abs_tol * 1e-2, policy)
    T = 1.3 * T + 10.0 / (PI * alpha)
    m, p, q = _k_direct_terms(alpha, z, T)
    w = (1.0 - PI * alpha * q) * np.exp(-PI * alpha * q)
    dqdx = 2.0 * m * p / z.y
    dqdy = m * m - p * p / z.y**2
    return float(np.sum(w * dqdx)), float(np.sum(w * dqdy))


# --------------------------------------------------------------------------
# row expansion


def _outer_cutoff(alpha, y, X, th0, thx0, tol, max_terms, extra=0):
    """Number N of outer rows (|n| <= N) for the expansion of K(alpha).

    Row n is bounded by (1/pi) s e^{-pi alpha y n^2} (th0/(2 alpha) +
    pi y n^2 th0 + (y/alpha^2) |thx0|) with th0 = theta(X; 0) and
    thx0 = theta_X(X; 0), which dominate |theta(X; .)|, |theta_X(X; .)|.
    extra raises the polynomial degree for derivative sums.
    """
    s = np.sqrt(X)
    n = np.arange(1, max_terms + 3, dtype=float)[:, None]
    with np.errstate(under="ignore"):
        t = (
            2.0
            / PI
            * s
            * np.exp(-PI * alpha * y * n * n)
            * (th0 / (2 * alpha) + PI * y * n * n * th0 + y / alpha**2 * np.abs(thx0))
            * (1.0 + n) ** extra
            * (1.0 + PI * alpha * y) ** extra
        )
    t = t.max(axis=1)
    for N in range(0, max_terms + 1):
        t1, t2 = t[N], t[N + 1]
        if t1 == 0.0:
            return N, 0.0
        rho = t2 / t1
        if rho < 1.0:
            tail = t1 / (1.0 - rho)
            if tail <= tol:
                return N, float(tail)
    raise ConvergenceError(f"row expansion did not converge within {max_terms} rows")


def _k_rows(alpha, x, y, policy, grad=False):
    """Row-expansion pieces of K(alpha; x + i y) on flat arrays.

    Returns a dict with 'lead' (the origin row constant sqrt(y)/(2 pi
    alpha^{3/2})), 'rest' (everything else), 'err', 'N' and, with grad, the
    y-derivatives 'dlead' and 'drest'.
    """
    X = y / alpha
    s = np.sqrt(X)
    th0 = theta_eval(X, 0.0, 0, 0, policy)
    thx0 = theta_eval(X, 0.0, 1, 0, policy)
    N, outer_tail = _outer_cutoff(
        alpha, y, X, th0.value, thx0.value, policy.abs_tol * (1e-2 if grad else 1.0), policy.max_terms,
        extra=2 if grad else 0,
    )
    n = np.arange(0, N + 1, dtype=float)[:, None]
    Xb = np.broadcast_to(X, (N + 1, X.size))
    Yb = n * x[None, :]
    th = theta_eval(Xb, Yb, 0, 0, policy)
    thm1 = theta_eval(X, 0.0, 0, 0, policy, subtract_one=True)
    thx = theta_eval(Xb, Yb, 1, 0, policy)
    tht = np.array(th.value, copy=True)
    tht[0] = thm1.value  # origin row without the constant term
    weight = np.where(n == 0, 1.0, 2.0)
    with np.errstate(under="ignore"):
        E = np.exp(-PI * alpha * y[None, :] * n * n)
    yb = y[None, :]
    B = tht / (2 * alpha) + PI * yb * n * n * th.value + yb / alpha**2 * thx.value
    rest = s / PI * np.sum(weight * E * B, axis=0)
    lead = np.sqrt(y) / (2 * PI * alpha**1.5)
    inner = s / PI * np.sum(weight * E, axis=0) * (
        max(th.est_error, thm1.est_error) * (1 / (2 * alpha) + PI * y * N * N) + y / alpha**2 * thx.est_error
    )
    out = {"lead": lead, "rest": rest, "err": outer_tail + inner, "N": N}
    if grad:
        thxx = theta_eval(Xb, Yb, 2, 0, policy).value
        thx_v = thx.value
        Bp = (
            thx_v / (2 * alpha**2)
            + PI * n * n * th.value
            + PI * yb * n * n * thx_v / alpha
            + thx_v / alpha**2
            + yb / alpha**3 * thxx
        )
        drest = np.sum(weight * E * (s / (2 * yb) * B - s * PI * alpha * n * n * B + s * Bp), axis=0) / PI
        out["dlead"] = lead / (2 * y)
        out["drest"] = drest
    return out


def _difference_rows(alpha, b, x, y, policy, grad=False):
    """K(alpha) - b K(2 alpha) via the row expansion; returns (value, err, N[, dEdy])."""
    r1 = _k_rows(alpha, x, y, policy, grad)
    r2 = _k_rows(2 * alpha, x, y, policy, grad) if b != 0 else None
    # lead(alpha) - b lead(2 alpha) = lead(alpha) (2 sqrt2 - b) / (2 sqrt2), exactly
    lead = r1["lead"] * ((SQRT8 - b) / SQRT8)
    value = lead + r1["rest"]
    err = r1["err"]
    N = r1["N"]
    if r2 is not None:
        value = value - b * r2["rest"]
        err = err + b * r2["err"]
        N = max(N, r2["N"])
    if not grad:
        return value, err, N
    dy = r1["dlead"] * ((SQRT8 - b) / SQRT8) + r1["drest"]
    if r2 is not None:
        dy = dy - b * r2["drest"]
    return value, err, N, dy


def k_energy_expansion(alpha, z, policy=None):
    """K(alpha; z) via the one-dimensional theta row expansion, at z as given."""
    _check_alpha(alpha)
    policy = policy or DEFAULT_POLICY
    z = _as_point(z)
    v, e, N = _difference_rows(alpha, 0.0, np.array([z.x]), np.array([z.y]), policy)
    return EnergyValue(float(v[0]), float(e[0]), int(N), alpha >= 2.0)


def theta_2d(alpha, z, policy=None):
    """theta(alpha; z) = sqrt(y/alpha) sum_n exp(-pi alpha y n^2) theta(y/alpha; n x).

    The point is first reduced to the fundamental domain (theta is invariant)
    so the row sum always converges quickly.
    """
    _check_alpha(alpha)
    policy = policy or DEFAULT_POLICY
    z = reduce(_as_point(z)).point
    X = z.y / alpha
    s = math.sqrt(X)
    th0 = theta_eval(X, 0.0, 0, 0, policy).value
    n = np.arange(1, policy.max_terms + 3, dtype=float)
    with np.errstate(under="ignore"):
        t = 2 * s * th0 * np.exp(-PI * alpha * z.y * n * n)
    N = None
    for k in range(policy.max_terms + 1):
        t1, t2 = t[k], t[k + 1]
        if t1 == 0.0:
            N, tail = k, 0.0
            break
        rho = t2 / t1
        if rho < 1.0 and t1 / (1.0 - rho) <= policy.abs_tol:
            N, tail = k, t1 / (1.0 - rho)
            break
    if N is None:
        raise ConvergenceError("theta_2d row sum did not converge")
    nn = np.arange(0, N + 1, dtype=float)
    th = theta_eval(np.full(nn.shape, X), nn * z.x, 0, 0, policy)
    w = np.where(nn == 0, 1.0, 2.0)
    value = s * float(np.sum(w * np.exp(-PI * alpha * z.y * nn * nn) * th.value))
    err = tail + s * (1 + 2 * N) * th.est_error
    return EnergyValue(value, float(err), N + 1, alpha >= 2.0)


# --------------------------------------------------------------------------
# difference energy


def _use_expansion(params, z):
    return z.y / params.alpha >= EXPANSION_RATIO


def difference_energy(params, z, policy=None, method="auto"):
    """E_b(alpha; z) = K(alpha; z) - b K(2 alpha; z) with an error bound.

    method='auto' reduces z to the fundamental domain (the energy is
    invariant) and picks the row expansion when y/alpha >= 1/2 and the
    direct lattice sum otherwise.  'expansion' forces the expansion at the
    reduced point and 'direct' sums over the lattice at z as given.
    """
    policy = policy or DEFAULT_POLICY
    z = _as_point(z)
    if method not in ("auto", "expansion", "direct"):
        raise DomainError(f"unknown method {method!r}")
    a, b = params.alpha, params.b
    if method == "direct":
        k1 = k_energy_direct(a, z, policy)
        if b == 0:
            return k1
        k2 = k_energy_direct(2 * a, z, policy)
        return EnergyValue(k1.value - b * k2.value, k1.est_error + b * k2.est_error, k1.n_terms, a >= 2.0)
    zr = reduce(z).point
    if method == "auto" and not _use_expansion(params, zr):
        return difference_energy(params, zr, policy, "direct")
    v, e, N = _difference_rows(a, b, np.array([zr.x]), np.array([zr.y]), policy)
    return EnergyValue(float(v[0]), float(e[0]), int(N), a >= 2.0)


def gamma_c_energy(params, y, policy=None):
    """Vectorized E_b(alpha; 1/2 + i y) for y >= sqrt(3)/2."""
    policy = policy or DEFAULT_POLICY
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y < HEX_Y - 1e-12):
        raise DomainError("gamma_c_energy expects y >= sqrt(3)/2")
    out = np.empty_like(y)
    big = y / params.alpha >= EXPANSION_RATIO
    if np.any(big):
        v, _, _ = _difference_rows(params.alpha, params.b, np.full(int(big.sum()), 0.5), y[big], policy)
        out[big] = v
    for i in np.flatnonzero(~big):
        out[i] = difference_energy(params, UpperHalfPoint(0.5, y[i]), policy, "direct").value
    return out


def transversal_terms(alpha, b, x, y, policy=None):
    """Main part I and remainder of the x-derivative factorization.

    -dE_b/dx = (sqrt2 / (4 pi)) alpha^{-5/2} y^{1/2} e^{-pi alpha y} (I + R)
    where I collects the n = 1 rows and R the rows n >= 2 (weights n, n^3
    and exp(-pi alpha y (n^2 - 1)) or exp(-pi alpha y (2 n^2 - 1))).
    Works on arrays; returns (I, R).
    """
    policy = policy or DEFAULT_POLICY
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x = x.ravel()
    y = y.ravel()
    X1 = y / alpha
    X2 = y / (2 * alpha)
    ay = PI * alpha * y
    # rows until exp(-pi alpha y (n^2 - 1)) n^3 (1 + pi alpha y) is negligible
    aymin = float(ay.min())
    N = 1
    while aymin * ((N + 1) ** 2 - 1) - 3 * math.log(N + 1) - math.log(1 + aymin + 1 / aymin) < 46:
        N += 1
        if N > policy.max_terms:
            raise ConvergenceError("transversal row sum did not converge")
    n = np.arange(1, N + 1, dtype=float)[:, None]
    nx = n * x[None, :]
    shp = (N, x.size)
    t1y = theta_eval(np.broadcast_to(X1, shp), nx, 0, 1, policy).value
    t1xy = theta_eval(np.broadcast_to(X1, shp), nx, 1, 1, policy).value
    t2y = theta_eval(np.broadcast_to(X2, shp), nx, 0, 1, policy).value
    t2xy = theta_eval(np.broadcast_to(X2, shp), nx, 1, 1, policy).value
    yb = y[None, :]
    ayb = ay[None, :]
    with np.errstate(under="ignore"):
        e1 = np.exp(-ayb * (n * n - 1))
        e2 = np.exp(-ayb * (2 * n * n - 1))
    rows = (
        -2 * SQRT2 * alpha * n * e1 * t1y
        + b * alpha * n * e2 * t2y
        - 4 * SQRT2 * PI * alpha**2 * yb * n**3 * e1 * t1y
        + 4 * PI * b * alpha**2 * yb * n**3 * e2 * t2y
        - 4 * SQRT2 * yb * n * e1 * t1xy
        + b * yb * n * e2 * t2xy
    )
    main = rows[0].reshape(shape)
    rem = np.sum(rows[1:][::-1], axis=0).reshape(shape) if N > 1 else np.zeros(shape)
    return main, rem


def _x_prefactor(alpha, y):
    return SQRT2 / (4 * PI) * alpha**-2.5 * np.sqrt(y) * np.exp(-PI * alpha * y)


def difference_energy_grad(params, z, policy=None, method="auto"):
    """Analytic (dE/dx, dE/dy) of the difference energy at z as given.

    dE/dx comes from the row factorization (see transversal_terms) when
    pi alpha y >= 1 and from the direct lattice sum otherwise.  dE/dy comes
    from the row expansion when y/alpha >= 1/2 and from the direct sum
    otherwise.  method='direct' or 'expansion' forces one route for both.
    """
    policy = policy or DEFAULT_POLICY
    z = _as_point(z)
    a, b = params.alpha, params.b
    if method not in ("auto", "expansion", "direct"):
        raise DomainError(f"unknown method {method!r}")
    rows_x = method == "expansion" or (method == "auto" and PI * a * z.y >= 1.0)
    rows_y = method == "expansion" or (method == "auto" and _use_expansion(params, z))
    direct = None
    if not (rows_x and rows_y):
        g1 = _direct_grad(a, z, policy)
        g2 = _direct_grad(2 * a, z, policy) if b != 0 else (0.0, 0.0)
        direct = (g1[0] - b * g2[0], g1[1] - b * g2[1])
    if rows_x:
        main, rem = transversal_terms(a, b, z.x, z.y, policy)
        dx = -float(_x_prefactor(a, z.y) * (main + rem))
    else:
        dx = direct[0]
    if rows_y:
        _, _, _, dyv = _difference_rows(a, b, np.array([z.x]), np.array([z.y]), policy, grad=True)
        dy = float(dyv[0])
    else:
        dy = direct[1]
    return dx, dy


def with_policy(policy=None, **changes):
    """Convenience: a copy of policy (or the default) with fields replaced."""
    return replace(policy or DEFAULT_POLICY, **changes)
