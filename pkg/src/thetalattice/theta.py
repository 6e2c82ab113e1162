"""One-dimensional Jacobi theta function on the imaginary axis.

The function evaluated here is

    theta(X; Y) = sum_n exp(-pi n^2 X) cos(2 pi n Y),   X > 0,

together with its partial derivatives in X and Y.  Two representations are
available: the direct cosine series, which converges like exp(-pi X), and the
Poisson dual

    theta(X; Y) = X^(-1/2) sum_k exp(-pi (k - Y)^2 / X),

which converges like exp(-pi / X).  Derivatives are always obtained by
term-wise differentiation of whichever representation is active.

All public functions accept scalars or numpy arrays (broadcast against each
other) and return a float for scalar input.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceError, DomainError

PI = np.pi

__all__ = [
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "ThetaValue",
    "AuxSeriesKind",
    "theta_eval",
    "theta_1d",
    "theta_1d_dX",
    "theta_1d_dY",
    "theta_1d_dXdY",
    "theta_1d_dXdX",
    "aux_series",
    "poisson_sums",
    "dy_envelope_large_x",
    "dy_envelope_small_x",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Tolerance and cutoff rules for every infinite-series evaluation.

    abs_tol is the target absolute truncation error of a single series,
    max_terms caps the number of retained terms on each side of the sum and
    switch_threshold is the value of X below which the Poisson dual form is
    used in automatic mode.
    """

    abs_tol: float = 1e-14
    max_terms: int = 64
    switch_threshold: float = 1.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and np.isfinite(self.abs_tol)):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 4:
            raise DomainError(f"max_terms must be an integer >= 4, got {self.max_terms}")
        if not (self.switch_threshold > 0 and np.isfinite(self.switch_threshold)):
            raise DomainError("switch_threshold must be positive")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ThetaValue:
    """A series value with a rigorous bound on the dropped tail."""

    value: object
    est_error: float


class AuxSeriesKind(str, Enum):
    """Tail series that appear in the quotient estimates.

    mu, nu, mu_hat and nu_hat take the decay parameter X; delta takes y.
    """

    MU = "mu"
    NU = "nu"
    MU_HAT = "mu_hat"
    NU_HAT = "nu_hat"
    DELTA = "delta"


# --------------------------------------------------------------------------
# helpers


def _as_arrays(X, Y):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    scalar = X.ndim == 0 and Y.ndim == 0
    X, Y = np.broadcast_arrays(X, Y)
    if not np.all(np.isfinite(X)) or np.any(X <= 0):
        raise DomainError("theta requires X > 0")
    if not np.all(np.isfinite(Y)):
        raise DomainError("theta requires finite Y")
    return X, Y, scalar


def _out(value, scalar):
    return float(value) if scalar else value


def _fold(Y):
    """Map Y to [0, 1/2] using periodicity and parity.

    Returns the folded phase and the sign picked up by odd-in-Y quantities.
    """
    r = Y - np.floor(Y)
    flip = r > 0.5
    r = np.where(flip, 1.0 - r, r)
    return r, np.where(flip, -1.0, 1.0)


def _choose_cutoff(majorant, tol, max_terms, what):
    """Smallest N with a geometric tail bound below tol.

    majorant(n) bounds the magnitude of the n-th omitted term (n >= 1) and
    must have decreasing successive ratios from some point on.  Returns
    (N, tail_bound) where tail_bound bounds the sum of all terms n > N.
    """
    n = np.arange(1, max_terms + 3, dtype=float)
    t = majorant(n)
    for N in range(0, max_terms + 1):
        t1 = t[N]  # term N + 1
        t2 = t[N + 1]
        if t1 == 0.0:
            return N, 0.0
        rho = t2 / t1
        if rho < 1.0 and t1 < tol / 10.0:
            tail = t1 / (1.0 - rho)
            if tail <= tol:
                return N, float(tail)
    raise ConvergenceError(f"{what}: tolerance {tol:g} not reached within {max_terms} terms")


def _direct_majorant(dx, dy, X):
    def maj(n):
        with np.errstate(under="ignore"):
            return 2.0 * (PI * n * n) ** dx * (2 * PI * n) ** dy * np.exp(-PI * n * n * X)

    return maj


def _dual_poly_bound(dx, p, a, X):
    if dx == 0:
        return 1.0
    first = p / X + a / X**2
    if dx == 1:
        return first
    return first**2 + p / X**2 + 2 * a / X**3


def _dual_majorant(dx, dy, X):
    p = 0.5 + dy

    def maj(n):
        # smallest omitted |u| after keeping k in [-N, N + 1] is N + 1
        r = n
        a = PI * r * r
        with np.errstate(under="ignore"):
            t = (2 * PI * r) ** dy * X ** (-p) * np.exp(-a / X) * _dual_poly_bound(dx, p, a, X)
        return 2.0 * t

    return maj


def _direct_sum(X, Y0, dx, dy, N, subtract_one):
    n = np.arange(1, N + 1, dtype=float)[:, None]
    with np.errstate(under="ignore"):
        e = np.exp(-PI * n * n * X[None, :])
    c = (-PI * n * n) ** dx
    if dy == 0:
        s = 2.0 * np.sum(c * e * np.cos(2 * PI * n * Y0[None, :]), axis=0)
        if dx == 0 and not subtract_one:
            s = s + 1.0
        return s
    return -4.0 * PI * np.sum(n * c * e * np.sin(2 * PI * n * Y0[None, :]), axis=0)


def _dual_sum(X, Y0, dx, dy, N, subtract_one):
    k = np.arange(-N, N + 2, dtype=float)[:, None]
    u = k - Y0[None, :]
    Xb = X[None, :]
    a = PI * u * u
    p = 0.5 + dy
    with np.errstate(under="ignore"):
        g = Xb ** (-p) * np.exp(-a / Xb)
    if dx == 1:
        L = -p / Xb + a / Xb**2
        g = g * L
    elif dx == 2:
        L = -p / Xb + a / Xb**2
        g = g * (L * L + p / Xb**2 - 2 * a / Xb**3)
    if dy == 1:
        g = g * (2 * PI * u)
    # sum from the smallest terms upward for a little extra accuracy
    order = np.argsort(-np.abs(k[:, 0] - 0.25))
    s = np.sum(g[order], axis=0)
    if subtract_one:
        s = s - 1.0
    return s


def _series(X, Y, dx, dy, policy, form, subtract_one=False):
    """Evaluate d^dx/dX^dx d^dy/dY^dy theta on flat arrays.

    Returns (values, est_error).
    """
    Y0, sign = _fold(Y)
    out = np.empty_like(X)
    err = 0.0
    if form == "auto":
        use_dual = X < policy.switch_threshold
    elif form == "direct":
        use_dual = np.zeros(X.shape, dtype=bool)
    elif form == "dual":
        use_dual = np.ones(X.shape, dtype=bool)
    else:
        raise DomainError(f"unknown representation {form!r}")

    direct = ~use_dual
    if np.any(direct):
        Xd = X[direct]
        tol = policy.abs_tol
        if dx or dy or subtract_one:
            # no constant term: the value is of the size of the n = 1 term,
            # so the tolerance is taken relative to it
            lead = float(_direct_majorant(dx, dy, float(Xd.max()))(np.array([1.0]))[0])
            tol = max(tol * min(1.0, lead), 1e-300)
        N, tail = _choose_cutoff(
            _direct_majorant(dx, dy, float(Xd.min())), tol, policy.max_terms, "direct theta series"
        )
        out[direct] = _direct_sum(Xd, Y0[direct], dx, dy, N, subtract_one)
        err = max(err, tail)
    if np.any(use_dual):
        Xq = X[use_dual]
        tails = []
        Ns = []
        for xw in {float(Xq.min()), float(Xq.max())}:
            N, tail = _choose_cutoff(_dual_majorant(dx, dy, xw), policy.abs_tol, policy.max_terms, "dual theta series")
            Ns.append(N)
            tails.append(tail)
        out[use_dual] = _dual_sum(Xq, Y0[use_dual], dx, dy, max(Ns), subtract_one)
        err = max(err, max(tails))
    if dy % 2 == 1:
        out = out * sign
    return out, err


# --------------------------------------------------------------------------
# public evaluation API


def theta_eval(X, Y, dx=0, dy=0, policy=None, *, form="auto", subtract_one=False):
    """Evaluate a partial derivative of theta(X; Y) with its error bound.

    dx in {0, 1, 2} and dy in {0, 1} select the derivative order.  form is
    'auto' (dual below policy.switch_threshold), 'direct' or 'dual'.  With
    subtract_one=True the constant 1 is removed from the value exactly when
    the direct series is active, which avoids cancellation for large X.
    """
    if dx not in (0, 1, 2) or dy not in (0, 1):
        raise DomainError(f"unsupported derivative order ({dx}, {dy})")
    policy = policy or DEFAULT_POLICY
    X, Y, scalar = _as_arrays(X, Y)
    shape = X.shape
    vals, err = _series(X.ravel(), Y.ravel(), dx, dy, policy, form, subtract_one and dx == 0 and dy == 0)
    vals = vals.reshape(shape)
    return ThetaValue(_out(vals, scalar), err)


def theta_1d(X, Y, policy=None, *, form="auto"):
    """theta(X; Y) = sum_n exp(-pi n^2 X) cos(2 pi n Y)."""
    return theta_eval(X, Y, 0, 0, policy, form=form).value


def theta_1d_dY(X, Y, policy=None, *, form="auto"):
    """Partial derivative of theta in Y."""
    return theta_eval(X, Y, 0, 1, policy, form=form).value


def theta_1d_dX(X, Y, policy=None, *, form="auto"):
    """Partial derivative of theta in X."""
    return theta_eval(X, Y, 1, 0, policy, form=form).value


def theta_1d_dXdY(X, Y, policy=None, *, form="auto"):
    """Mixed second derivative of theta."""
    return theta_eval(X, Y, 1, 1, policy, form=form).value


def theta_1d_dXdX(X, Y, policy=None, *, form="auto"):
    """Second derivative of theta in X."""
    return theta_eval(X, Y, 2, 0, policy, form=form).value


# --------------------------------------------------------------------------
# auxiliary series

_AUX_POWER = {
    AuxSeriesKind.MU: 2,
    AuxSeriesKind.NU: 4,
    AuxSeriesKind.MU_HAT: 2,
    AuxSeriesKind.NU_HAT: 4,
    AuxSeriesKind.DELTA: 0,
}


def aux_series(kind, x, policy=None):
    """Tail series sum_{n>=2} s_n n^k exp(-pi (n^2 - 1) x).

    k = 2 for mu, 4 for nu, 0 for delta; s_n = (-1)^(n+1) for the hatted
    variants and 1 otherwise.
    """
    kind = AuxSeriesKind(kind)
    policy = policy or DEFAULT_POLICY
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    if not np.all(np.isfinite(xa)) or np.any(xa <= 0):
        raise DomainError(f"{kind.value} requires a positive argument")
    k = _AUX_POWER[kind]
    xmin = float(xa.min())

    def maj(j):
        n = j + 1.0  # omitted index j counts from the first term n = 2
        with np.errstate(under="ignore"):
            return n**k * np.exp(-PI * (n * n - 1) * xmin)

    N, _ = _choose_cutoff(maj, policy.abs_tol, policy.max_terms, f"{kind.value} series")
    n = np.arange(2, N + 2, dtype=float).reshape((-1,) + (1,) * xa.ndim)
    with np.errstate(under="ignore"):
        terms = n**k * np.exp(-PI * (n * n - 1) * xa[None, ...])
    if kind in (AuxSeriesKind.MU_HAT, AuxSeriesKind.NU_HAT):
        terms = terms * np.where(n % 2 == 0, -1.0, 1.0)
    return _out(np.sum(terms[::-1], axis=0), scalar)


def poisson_sums(X, Y, skip_zero=False, n_terms=None):
    """Row sums f = sum_k exp(-pi (k - Y)^2 / X) and g = sum_k (k - Y)^2 exp(...).

    theta = X^(-1/2) f and theta_X = -X^(-3/2) f / 2 + pi X^(-5/2) g.  With
    skip_zero the k = 0 term is left out, which lets callers cancel leading
    terms exactly.  Y is used as given (no folding).
    """
    X, Y, scalar = _as_arrays(X, Y)
    if n_terms is None:
        n_terms = int(np.ceil(np.sqrt(45.0 * float(X.max()) / PI) + np.abs(Y).max())) + 2
    k = np.arange(-n_terms, n_terms + 1, dtype=float).reshape((-1,) + (1,) * X.ndim)
    if skip_zero:
        k = k[k.ravel() != 0]
    u = k - Y[None, ...]
    with np.errstate(under="ignore"):
        e = np.exp(-PI * u * u / X[None, ...])
    f = np.sum(e, axis=0)
    g = np.sum(u * u * e, axis=0)
    return _out(f, scalar), _out(g, scalar)


# --------------------------------------------------------------------------
# envelopes for the Y-derivative


def dy_envelope_large_x(X, policy=None):
    """Envelope coefficients (lower, upper) valid for X > 1/5.

    For sin(2 pi Y) > 0: -upper sin(2 pi Y) <= theta_Y <= -lower sin(2 pi Y).
    """
    mu = aux_series(AuxSeriesKind.MU, X, policy)
    base = 4 * PI * np.exp(-PI * np.asarray(X, dtype=float))
    return base * (1 - mu), base * (1 + mu)


def dy_envelope_small_x(X):
    """Envelope coefficients (lower, upper) valid for X < pi / (pi + 2)."""
    X = np.asarray(X, dtype=float)
    return PI * np.exp(-PI / (4 * X)) * X**-1.5, X**-1.5
