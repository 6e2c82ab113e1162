"""High-precision reference values computed with mpmath, independent of the package."""

import mpmath as mp

mp.mp.dps = 40


def theta1d(X, Y):
    """sum_n exp(-pi n^2 X) cos(2 pi n Y) via the Jacobi theta_3."""
    return mp.jtheta(3, mp.pi * mp.mpf(Y), mp.exp(-mp.pi * mp.mpf(X)))


def theta1d_deriv(X, Y, dx=0, dy=0):
    return mp.diff(lambda a, b: theta1d(a, b), (mp.mpf(X), mp.mpf(Y)), (dx, dy))


def _lattice(alpha, x, y, weight):
    """sum over (m, n) != (0, 0) of weight(Q) exp(-pi alpha Q), Q = |m z + n|^2 / y."""
    alpha, x, y = mp.mpf(alpha), mp.mpf(x), mp.mpf(y)
    budget = 120 / (mp.pi * alpha)
    total = mp.mpf(0)
    M = int(mp.sqrt(budget / y)) + 2
    for m in range(-M, M + 1):
        r = mp.sqrt(budget * y) + 2
        lo, hi = int(mp.floor(-m * x - r)), int(mp.ceil(-m * x + r))
        for n in range(lo, hi + 1):
            if m == 0 and n == 0:
                continue
            q = ((m * x + n) ** 2 + (m * y) ** 2) / y
            total += weight(q) * mp.exp(-mp.pi * alpha * q)
    return total


def theta2d(alpha, x, y):
    return 1 + _lattice(alpha, x, y, lambda q: 1)


def k_energy(alpha, x, y):
    return _lattice(alpha, x, y, lambda q: q)


def difference_energy(alpha, b, x, y):
    return k_energy(alpha, x, y) - b * k_energy(2 * alpha, x, y)


def s_sum(which, alpha, y):
    """The four weighted sums on the ray x = 1/2 (weights n^2, D, n^2 P, D P)."""
    alpha, y = mp.mpf(alpha), mp.mpf(y)
    budget = 120 / (mp.pi * alpha)
    N = int(mp.sqrt(budget / y)) + 2
    total = mp.mpf(0)
    for n in range(-N, N + 1):
        r = mp.sqrt(budget * y) + 2
        for m in range(int(mp.floor(-n / mp.mpf(2) - r)), int(mp.ceil(-n / mp.mpf(2) + r)) + 1):
            q = m + mp.mpf(n) / 2
            P = y * n * n + q * q / y
            if P == 0:
                continue
            D = (n * n - q * q / (y * y)) ** 2
            w = {"S1": n * n, "S2": D, "S3": n * n * P, "S4": D * P}[which]
            total += w * mp.exp(-mp.pi * alpha * P)
    return total


def _th(X, Y):
    return theta1d(X, Y)


def _thx(X, Y):
    return mp.diff(lambda t: theta1d(t, Y), mp.mpf(X))


def ray_pieces(alpha, y, nmax=8):
    """M1..M4, E1..E4, P1..P3 and E_tilde from their defining theta expressions."""
    a, y = mp.mpf(alpha), mp.mpf(y)
    X1, X2 = y / a, y / (2 * a)
    r2 = mp.sqrt(2)
    half = mp.mpf(1) / 2
    e1 = lambda n: mp.exp(-mp.pi * a * y * n * n)  # noqa: E731
    e2 = lambda n: mp.exp(-2 * mp.pi * a * y * n * n)  # noqa: E731
    out = {
        "M1": 2 * r2 * a * _th(X1, 0) - 2 * a * _th(X2, 0),
        "M2": 4 * r2 * y * _thx(X1, 0) - 2 * y * _thx(X2, 0),
        "M3": 4 * r2 * a * (1 + 2 * mp.pi * a * y) * e1(1) * _th(X1, half)
        - 4 * a * (1 + 4 * mp.pi * a * y) * e2(1) * _th(X2, half),
        "M4": 8 * r2 * y * e1(1) * _thx(X1, half) - 4 * y * e2(1) * _thx(X2, half),
        "P1": 2 * r2 * a * _th(X1, 0) - 2 * r2 * a * _th(X2, 0) + 4 * r2 * y * _thx(X1, 0) - 2 * r2 * y * _thx(X2, 0),
        "P2": 4 * r2 * a * (1 + 2 * mp.pi * a * y) * e1(1) * _th(X1, half)
        - 4 * r2 * a * e2(1) * (1 + 4 * mp.pi * a * y) * _th(X2, half),
        "P3": 8 * r2 * y * e1(1) * _thx(X1, half) - 4 * r2 * y * e2(1) * _thx(X2, half),
    }
    ns = range(2, nmax + 1)
    out["E1"] = 4 * r2 * a * mp.fsum((1 + 2 * mp.pi * a * y * n * n) * e1(n) * _th(X1, mp.mpf(n) / 2) for n in ns)
    out["E2"] = 8 * r2 * y * mp.fsum(e1(n) * _thx(X1, mp.mpf(n) / 2) for n in ns)
    out["E3"] = -4 * a * mp.fsum((1 + 4 * mp.pi * a * y * n * n) * e2(n) * _th(X2, mp.mpf(n) / 2) for n in ns)
    out["E4"] = -4 * y * mp.fsum(e2(n) * _thx(X2, mp.mpf(n) / 2) for n in ns)
    out["E_tilde"] = 2 * mp.fsum(
        2 * r2 * a * e1(n) * _th(X1, mp.mpf(n) / 2) - 2 * r2 * a * e2(n) * _th(X2, mp.mpf(n) / 2)
        + 4 * r2 * mp.pi * a * a * y * n * n * e1(n) * _th(X1, mp.mpf(n) / 2)
        - 8 * r2 * mp.pi * a * a * y * n * n * e2(n) * _th(X2, mp.mpf(n) / 2)
        + 4 * r2 * y * e1(n) * _thx(X1, mp.mpf(n) / 2) - 2 * r2 * y * e2(n) * _thx(X2, mp.mpf(n) / 2)
        for n in ns
    )
    return out
