"""Auxiliary lattice sums and small-remainder functions used by the bound checks.

Everything here is evaluated from its defining series.  Where two routes
exist (the cosine series and a Poisson form that cancels leading terms
exactly) both are available so callers can compare them.

Conventions: alpha and y broadcast as numpy arrays; log_scale adds a
constant to every exponent (the result is the true value times
exp(log_scale)) so far-out values stay inside the double range.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .points import HEX_Y, SQRT2
from .theta import (
    DEFAULT_POLICY,
    AuxSeriesKind,
    aux_series,
    poisson_sums,
    theta_1d,
    theta_1d_dX,
    theta_eval,
)

PI = math.pi
SQRT3 = math.sqrt(3.0)
TAIL_TERMS = 60
S_CUTOFF = 90.0


def _arr(*xs):
    out = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in xs])
    for a in out:
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise DomainError("alpha and y must be positive and finite")
    return out


def nsum(term, start, like=0.0, count=TAIL_TERMS):
    """sum_{n=start}^{start+count-1} term(n), with n on a leading axis shaped for like."""
    n = np.arange(start, start + count, dtype=float).reshape((-1,) + (1,) * np.ndim(like))
    with np.errstate(under="ignore", over="ignore"):
        vals = term(n)
    return np.sum(vals[::-1], axis=0)


# --------------------------------------------------------------------------
# the S sums over the lattice at x = 1/2


def _s_weights(which, P, D, n2):
    if which == "S1":
        return n2
    if which == "S2":
        return D
    if which == "S3":
        return n2 * P
    if which == "S4":
        return D * P
    raise DomainError(f"unknown sum {which!r}")


def s_sum(which, alpha, y, log_scale=0.0):
    """S1..S4 of (alpha; y) by direct double summation over (n, m).

    With q = m + n/2 and P = y n^2 + q^2 / y, D = (n^2 - q^2 / y^2)^2 the
    summands are n^2, D, n^2 P and D P times exp(-pi alpha P).  The value is
    multiplied by exp(log_scale).
    """
    alpha, y = float(alpha), float(y)
    if not (alpha > 0 and y > 0):
        raise DomainError("alpha and y must be positive")
    budget = log_scale + S_CUTOFF
    if budget <= 0:
        return 0.0
    nmax = int(math.sqrt(budget / (PI * alpha * y))) + 2
    jmax = int(2 * math.sqrt(budget * y / (PI * alpha))) + 2
    n = np.arange(-nmax, nmax + 1, dtype=float)[:, None]
    j = np.arange(-jmax, jmax + 1, dtype=float)[None, :]
    mask = (np.abs(n - j) % 2) == 0  # j = 2m + n has the parity of n
    q2 = (j / 2) ** 2
    P = y * n * n + q2 / y
    D = (n * n - q2 / (y * y)) ** 2
    weight = _s_weights(which, P, D, n * n)
    keep = mask & (weight != 0)
    with np.errstate(under="ignore"):
        w = np.exp(np.where(keep, -PI * alpha * P + log_scale, -np.inf))
    terms = np.where(keep, weight * w, 0.0)
    return float(np.sum(np.sort(terms.ravel())))


def s3_parts(alpha, y):
    """Parity split of S3 by (p, q) = (n, 2m + n): a and c have p, q even, b and d odd.

    Returns the four direct sums.
    """
    alpha, y = float(alpha), float(y)
    budget = S_CUTOFF
    pmax = int(math.sqrt(budget / (PI * alpha * y))) + 3
    qmax = int(2 * math.sqrt(budget * y / (PI * alpha))) + 3
    p = np.arange(-pmax, pmax + 1, dtype=float)[:, None]
    q = np.arange(-qmax, qmax + 1, dtype=float)[None, :]
    w = np.exp(-PI * alpha * (y * p * p + q * q / (4 * y)))
    even = (p % 2 == 0) & (q % 2 == 0)
    odd = (p % 2 == 1) & (q % 2 == 1)
    t1 = y * p**4 * w
    t2 = p * p * q * q / (4 * y) * w
    return (
        float(np.sum(np.where(even, t1, 0.0))),
        float(np.sum(np.where(odd, t1, 0.0))),
        float(np.sum(np.where(even, t2, 0.0))),
        float(np.sum(np.where(odd, t2, 0.0))),
    )


def laplacian_from_sums(alpha, y, log_scale=0.0):
    """(d^2/dy^2 + (2/y) d/dy)(K(alpha) - 2 K(2 alpha)) on the ray, from the S sums."""
    a = float(alpha)
    y = float(y)

    def S(k, al):
        return s_sum(k, al, y, log_scale)

    return (
        (2 / y) * S("S1", a)
        + 8 * PI * a * S("S2", 2 * a)
        + (8 * PI * a / y) * S("S3", 2 * a)
        + PI**2 * a**2 * S("S4", a)
        - (4 / y) * S("S1", 2 * a)
        - 2 * PI * a * S("S2", a)
        - (2 * PI * a / y) * S("S3", a)
        - 8 * PI**2 * a**2 * S("S4", 2 * a)
    )


# --------------------------------------------------------------------------
# small remainders of the S-sum estimates


def eps_a(alpha, y):
    a, y = _arr(alpha, y)
    t1 = 1 + nsum(lambda n: n**2 * np.exp(-8 * PI * a * y * (n**2 - 1)), 2, a)
    t2 = 1 + 2 * nsum(lambda n: np.exp(-PI * n**2 * 2 * a / y), 1, a)
    s_m = nsum(lambda n: np.exp(-2 * PI * a / y * n * (n - 1)), 2, a)
    s_n = nsum(lambda n: (2 * n - 1) ** 2 * np.exp(-8 * PI * a * y * (n - 1) * n), 2, a)
    return 2 * np.exp(-2 * PI * a * (3 * y - 1 / (4 * y))) * t1 * t2 + s_m + s_n + s_n * s_m


def eps_b_parts(alpha, y):
    a, y = _arr(alpha, y)
    b1 = (
        2 * y**4 * np.exp(-PI * a * y)
        * (1 + nsum(lambda n: np.exp(-4 * PI * a / y * n * (n - 1)), 2, a))
        * (1 + nsum(lambda n: (2 * n - 1) ** 4 * np.exp(-4 * PI * a * y * n * (n - 1)), 2, a))
    )
    b2 = (
        np.exp(-PI * a * y) / 8
        * (1 + nsum(lambda n: (2 * n - 1) ** 4 * np.exp(-4 * PI * a / y * n * (n - 1)), 2, a))
        * (1 + nsum(lambda n: np.exp(-4 * PI * a * y * n * (n - 1)), 2, a))
    )
    b3 = (
        16 * y**4 * np.exp(-PI * a * (4 * y - 1 / y))
        * (1 + nsum(lambda n: n**4 * np.exp(-4 * PI * a * y * (n**2 - 1)), 2, a))
        * (1 + 2 * nsum(lambda n: np.exp(-PI * a / y * n**2), 1, a))
    )
    b4 = (
        y**4 * np.exp(-PI * a * (4 * y - 1 / y))
        * (1 + nsum(lambda n: np.exp(-4 * PI * a * y * (n**2 - 1)), 2, a))
        * (1 + 2 * nsum(lambda n: n**4 / y**4 * np.exp(-PI * a / y * n**2), 1, a))
    )
    return b1, b2, b3, b4


def eps_b(alpha, y):
    return sum(eps_b_parts(alpha, y))


def eps_c_parts(alpha, y):
    a, y = _arr(alpha, y)
    c1 = nsum(lambda n: (2 * n - 1) ** 4 * np.exp(-4 * PI * a * y * (n - 1) * n), 2, a)
    c2 = nsum(lambda n: np.exp(-PI * a * (n - 1) * n / y), 2, a)
    c3 = c1 * c2
    c4 = (
        1 / (4 * y**2)
        * (1 + nsum(lambda n: (2 * n - 1) ** 2 * np.exp(-4 * PI * a * y * (n - 1) * n), 2, a))
        * (1 + nsum(lambda n: (2 * n - 1) ** 2 * np.exp(-PI * a * (n - 1) * n / y), 2, a))
    )
    c5 = (
        8 * np.exp(-PI * a * (3 * y - 1 / (4 * y)))
        * (1 + nsum(lambda n: n**4 * np.exp(-4 * PI * a * y * (n**2 - 1)), 2, a))
        * (1 + 2 * nsum(lambda m: np.exp(-PI * a * m**2 / y), 1, a))
    )
    c6 = (
        4 / y**2 * np.exp(-3 * PI * a * (y + 1 / (4 * y)))
        * (1 + nsum(lambda n: n**2 * np.exp(-4 * PI * a * y * (n**2 - 1)), 2, a))
        * (1 + nsum(lambda m: m**2 * np.exp(-PI * a * (m**2 - 1) / y), 2, a))
    )
    return c1, c2, c3, c4, c5, c6


def eps_c(alpha, y):
    return sum(eps_c_parts(alpha, y))


def eps_d(alpha, y):
    a, y = _arr(alpha, y)
    g = nsum(lambda n: np.exp(-8 * PI * a * y * n**2), 1, a)
    h = nsum(lambda n: n**6 * np.exp(-2 * PI * a * (n**2 - 1) / y), 2, a)
    last = (
        64 * y**6 * np.exp(-2 * PI * a * (4 * y - 1 / y))
        * (1 + nsum(lambda n: n**6 * np.exp(-8 * PI * a * y * (n**2 - 1)), 2, a))
        * (1 + 2 * nsum(lambda n: np.exp(-PI * n**2 * 2 * a / y), 1, a))
    )
    return 2 * g + h + 2 * g * h + last


def eps_e(alpha, y):
    a, y = _arr(alpha, y)
    s_m = nsum(lambda n: np.exp(-2 * PI * a * (n - 1) * n / y), 2, a)
    s_n = nsum(lambda n: (2 * n - 1) ** 6 * np.exp(-8 * PI * a * y * (n - 1) * n), 2, a)
    first = (
        1 / (64 * y**6)
        * (1 + nsum(lambda n: np.exp(-8 * PI * a * y * (n - 1) * n), 2, a))
        * (1 + nsum(lambda n: (2 * n - 1) ** 6 * np.exp(-2 * PI * a * (n - 1) * n / y), 2, a))
    )
    return first + s_m + s_n + s_n * s_m


def a_term(alpha, y, eb=None, ed=None):
    """pi alpha/(2y) - (1 + eps_b) - 4 e^{-pi alpha/y} (pi alpha/y (1 + eps_d) - 1)."""
    a, y = _arr(alpha, y)
    eb = eps_b(a, y) if eb is None else eb
    ed = eps_d(a, y) if ed is None else ed
    t = PI * a / y
    return t / 2 - (1 + eb) - 4 * np.exp(-t) * (t * (1 + ed) - 1)


def b1_term(alpha, y, ec=None):
    a, y = _arr(alpha, y)
    ec = eps_c(a, y) if ec is None else ec
    u = 1 / (4 * y**2)
    pay = PI * a * y
    return 2 * y**4 * np.exp(-PI * a * (y - 3 / (4 * y))) * (
        pay / 2 * (1 - u) ** 2 * (1 + u) + 1 / pay - 1 - ec
    )


def b2_term(alpha, y, ea=None, ee=None):
    a, y = _arr(alpha, y)
    ea = eps_a(a, y) if ea is None else ea
    ee = eps_e(a, y) if ee is None else ee
    u = 1 / (4 * y**2)
    pay = PI * a * y
    return 8 * y**4 * np.exp(-2 * PI * a * (y - 1 / (4 * y))) * (
        pay * (1 + ee - u - u * u) + (1 + ea) / (2 * pay) - (1 - u) ** 2 - 1 - u
    )


def laplacian_lower_bound(alpha, y):
    """(4 pi alpha / y^4) e^{-pi alpha/y} (A + B1 - B2) with the true remainders."""
    a, y = _arr(alpha, y)
    return 4 * PI * a / y**4 * np.exp(-PI * a / y) * (a_term(a, y) + b1_term(a, y) - b2_term(a, y))


# --------------------------------------------------------------------------
# row decomposition on the ray: M, E rows, P and the critical remainder


def _xs(alpha, y):
    return y / alpha, y / (2 * alpha)


def _c(alpha, y):
    return 2 * SQRT2 * alpha**1.5 / np.sqrt(y)


def m1(alpha, y, policy=None, route="auto"):
    """2 sqrt2 alpha theta(y/alpha; 0) - 2 alpha theta(y/(2 alpha); 0).

    route 'series' evaluates the definition; 'poisson' uses
    c (f1' - f2') with the k = 0 terms cancelled; 'auto' picks poisson
    when y/alpha < 1.
    """
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    series = 2 * SQRT2 * a * theta_1d(X1, 0.0, policy) - 2 * a * theta_1d(X2, 0.0, policy)
    if route == "series":
        return series
    f1, _ = poisson_sums(X1, 0.0, skip_zero=True)
    f2, _ = poisson_sums(X2, 0.0, skip_zero=True)
    pois = _c(a, y) * (f1 - f2)
    if route == "poisson":
        return pois
    return np.where(X1 < 1, pois, series)


def m2(alpha, y, policy=None, route="auto"):
    """4 sqrt2 y theta_X(y/alpha; 0) - 2 y theta_X(y/(2 alpha); 0)."""
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    series = 4 * SQRT2 * y * theta_1d_dX(X1, 0.0, policy) - 2 * y * theta_1d_dX(X2, 0.0, policy)
    if route == "series":
        return series
    f1, g1 = poisson_sums(X1, 0.0, skip_zero=True)
    f2, g2 = poisson_sums(X2, 0.0, skip_zero=True)
    pois = -_c(a, y) * (f1 - f2) + 4 * SQRT2 * PI * y * X1**-2.5 * g1 - 2 * PI * y * X2**-2.5 * g2
    if route == "poisson":
        return pois
    return np.where(X1 < 1, pois, series)


def m3(alpha, y, policy=None, log_scale=0.0):
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    pay = PI * a * y
    with np.errstate(under="ignore"):
        return (
            4 * SQRT2 * a * (1 + 2 * pay) * np.exp(-pay + log_scale) * theta_1d(X1, 0.5, policy)
            - 4 * a * (1 + 4 * pay) * np.exp(-2 * pay + log_scale) * theta_1d(X2, 0.5, policy)
        )


def m4(alpha, y, policy=None, log_scale=0.0):
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    pay = PI * a * y
    with np.errstate(under="ignore"):
        return (
            8 * SQRT2 * y * np.exp(-pay + log_scale) * theta_1d_dX(X1, 0.5, policy)
            - 4 * y * np.exp(-2 * pay + log_scale) * theta_1d_dX(X2, 0.5, policy)
        )


def m_total(alpha, y, policy=None):
    return m1(alpha, y, policy) + m2(alpha, y, policy) + m3(alpha, y, policy) + m4(alpha, y, policy)


def _parity_thetas(X, policy):
    """theta and theta_X at Y = 0 and Y = 1/2 (theta(X; n/2) only depends on n mod 2)."""
    return (
        theta_1d(X, 0.0, policy),
        theta_1d(X, 0.5, policy),
        theta_1d_dX(X, 0.0, policy),
        theta_1d_dX(X, 0.5, policy),
    )


def _rows(alpha, y, log_scale, body):
    """sum_{n >= 2} body(n, e1n, e2n, th(X1; n/2), thX(X1; n/2), th(X2; n/2), thX(X2; n/2))."""
    a, y, ls = np.broadcast_arrays(*[np.asarray(v, dtype=float) for v in (alpha, y, log_scale)])
    X1, X2 = _xs(a, y)
    t10, t1h, t1x0, t1xh = _parity_thetas(X1, None)
    t20, t2h, t2x0, t2xh = _parity_thetas(X2, None)
    pay = PI * a * y
    total = np.zeros(a.shape)
    for n in range(TAIL_TERMS + 1, 1, -1):
        if np.all(pay * n * n - ls > 800):
            continue
        even = n % 2 == 0
        with np.errstate(under="ignore"):
            e1 = np.exp(-pay * n * n + ls)
            e2 = np.exp(-2 * pay * n * n + ls)
        total = total + body(
            n, e1, e2,
            t10 if even else t1h, t1x0 if even else t1xh,
            t20 if even else t2h, t2x0 if even else t2xh,
        )
    return total


def e_rows(alpha, y, log_scale=0.0):
    """The four row remainders E1..E4 (rows n >= 2 of the b = 2 expansion)."""
    a, y = _arr(alpha, y)

    def part(k):
        def body(n, e1, e2, t1, t1x, t2, t2x):
            pay = PI * a * y
            if k == 1:
                return 4 * SQRT2 * a * (1 + 2 * pay * n * n) * e1 * t1
            if k == 2:
                return 8 * SQRT2 * y * e1 * t1x
            if k == 3:
                return -4 * a * (1 + 4 * pay * n * n) * e2 * t2
            return -4 * y * e2 * t2x

        return _rows(a, y, log_scale, body)

    return part(1), part(2), part(3), part(4)


def p1(alpha, y, policy=None, route="auto"):
    """Row n = 0 of the b = 2 sqrt2 expansion.

    The Poisson route keeps only 4 sqrt2 pi alpha^{5/2} y^{-3/2}
    (g1 - 2 sqrt2 g2), since all f-terms cancel identically.
    """
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    d1 = theta_eval(X1, 0.0, policy=policy, form="direct", subtract_one=True).value
    d2 = theta_eval(X2, 0.0, policy=policy, form="direct", subtract_one=True).value
    series = (
        2 * SQRT2 * a * (d1 - d2)
        + 4 * SQRT2 * y * theta_1d_dX(X1, 0.0, policy)
        - 2 * SQRT2 * y * theta_1d_dX(X2, 0.0, policy)
    )
    if route == "series":
        return series
    _, g1 = poisson_sums(X1, 0.0, skip_zero=True)
    _, g2 = poisson_sums(X2, 0.0, skip_zero=True)
    pois = 4 * SQRT2 * PI * a**2.5 * y**-1.5 * (g1 - 2 * SQRT2 * g2)
    if route == "poisson":
        return pois
    return np.where(X1 < 1, pois, series)


def p2(alpha, y, policy=None, log_scale=0.0):
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    pay = PI * a * y
    with np.errstate(under="ignore"):
        return (
            4 * SQRT2 * a * (1 + 2 * pay) * np.exp(-pay + log_scale) * theta_1d(X1, 0.5, policy)
            - 4 * SQRT2 * a * (1 + 4 * pay) * np.exp(-2 * pay + log_scale) * theta_1d(X2, 0.5, policy)
        )


def p3(alpha, y, policy=None, log_scale=0.0):
    a, y = _arr(alpha, y)
    X1, X2 = _xs(a, y)
    pay = PI * a * y
    with np.errstate(under="ignore"):
        return (
            8 * SQRT2 * y * np.exp(-pay + log_scale) * theta_1d_dX(X1, 0.5, policy)
            - 4 * SQRT2 * y * np.exp(-2 * pay + log_scale) * theta_1d_dX(X2, 0.5, policy)
        )


def p_total(alpha, y, policy=None):
    return p1(alpha, y, policy) + p2(alpha, y, policy) + p3(alpha, y, policy)


def e_tilde(alpha, y, log_scale=0.0):
    """Rows |n| >= 2 of the b = 2 sqrt2 expansion."""
    a, y = _arr(alpha, y)

    def body(n, e1, e2, t1, t1x, t2, t2x):
        pay = PI * a * y
        return 2 * (
            e1 * (2 * SQRT2 * a + 4 * SQRT2 * a * pay * n * n) * t1
            - e2 * (2 * SQRT2 * a + 8 * SQRT2 * a * pay * n * n) * t2
            + 4 * SQRT2 * y * e1 * t1x
            - 2 * SQRT2 * y * e2 * t2x
        )

    return _rows(a, y, log_scale, body)


def ray_prefactor(alpha, y):
    """E_b(alpha; 1/2 + i y) = prefactor * (row sum), prefactor = pi^{-1} 2^{-5/2} alpha^{-5/2} y^{1/2}."""
    return 2**-2.5 / PI * np.asarray(alpha, dtype=float) ** -2.5 * np.sqrt(y)


# --------------------------------------------------------------------------
# remainders at the hexagonal height


def hex_eps(alpha):
    """eps_1..eps_4 at y = sqrt(3)/2 as functions of alpha."""
    a = np.asarray(alpha, dtype=float)
    k = 2 * SQRT3 * PI * a / 3
    e1 = nsum(lambda n: np.exp(-k * (n * n - 4)), 3, a)
    e2 = nsum(lambda n: np.exp(-k * (n - 0.5) ** 2), 1, a)
    e3 = nsum(lambda n: n * n * np.exp(-k * (n * n - 1)), 2, a)
    e4 = nsum(lambda n: 4 * (n - 0.5) ** 2 * np.exp(-k * (n - 1) * n), 2, a)
    return e1, e2, e3, e4


def delta(y):
    return aux_series(AuxSeriesKind.DELTA, y)


# --------------------------------------------------------------------------
# named access


class ProofSumKind(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    E_TILDE = "E_tilde"


@dataclass(frozen=True)
class ProofSums:
    which: ProofSumKind
    alpha: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "which", ProofSumKind(self.which))
        if not (self.alpha > 0 and self.y > 0 and math.isfinite(self.alpha) and math.isfinite(self.y)):
            raise DomainError("alpha and y must be positive")


def eval_proof_sum(spec, policy=None, route="auto"):
    """Value of one named sum at (alpha, y).

    route applies to M1, M2 and P1 ('auto', 'series' or 'poisson').
    """
    policy = policy or DEFAULT_POLICY
    k, a, y = spec.which, spec.alpha, spec.y
    if k.value.startswith("S"):
        return s_sum(k.value, a, y)
    table = {
        ProofSumKind.M1: lambda: m1(a, y, policy, route),
        ProofSumKind.M2: lambda: m2(a, y, policy, route),
        ProofSumKind.M3: lambda: m3(a, y, policy),
        ProofSumKind.M4: lambda: m4(a, y, policy),
        ProofSumKind.P1: lambda: p1(a, y, policy, route),
        ProofSumKind.P2: lambda: p2(a, y, policy),
        ProofSumKind.P3: lambda: p3(a, y, policy),
        ProofSumKind.E_TILDE: lambda: e_tilde(a, y),
    }
    if k in table:
        return float(table[k]())
    idx = int(k.value[1]) - 1
    return float(e_rows(a, y)[idx])

