"""Phase classification along the ray Re z = 1/2 and the threshold b_c1(alpha).

For fixed alpha the minimizer of E_b on the ray is the hexagonal point for
small b, a skinny-rhombic point 1/2 + i y_b for intermediate b and does not
exist for b >= 2 sqrt 2 (the energy decreases toward its infimum as y grows).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .energy import gamma_c_energy
from .errors import DomainError, ThresholdAmbiguityError
from .minimize import LineSearchConfig, MinimizeKind, minimize_on_gamma_c
from .points import HEX_Y, SQRT8, EnergyParams
from .theta import DEFAULT_POLICY

NONEXISTENCE_SLACK = 1e-9


class Phase(str, Enum):
    HEXAGONAL = "hexagonal"
    SKINNY_RHOMBIC = "skinny_rhombic"
    NONEXISTENT = "nonexistent"


@dataclass(frozen=True)
class PhaseResult:
    """Phase of one (alpha, b).

    y_b is sqrt(3)/2 for the hexagonal phase, the minimizing height for the
    skinny-rhombic phase (the search ceiling when at_ceiling is set) and None
    when no minimizer exists.
    """

    alpha: float
    b: float
    phase: Phase
    y_b: Optional[float]
    energy_at_min: Optional[float]
    at_ceiling: bool = False
    theorem_covered: bool = True


@dataclass(frozen=True)
class ThresholdResult:
    alpha: float
    b_c1: float
    bracket_width: float
    lo: float
    hi: float
    evaluations: int


def classify_phase(params, cfg=None, policy=None):
    """Classify the minimizer of E_b on the ray for one (alpha, b)."""
    cfg = cfg or LineSearchConfig()
    res = minimize_on_gamma_c(params, cfg, policy)
    covered = params.theorem_covered
    if res.kind is MinimizeKind.LEFT_ENDPOINT_HEXAGONAL:
        return PhaseResult(params.alpha, params.b, Phase.HEXAGONAL, HEX_Y, res.value, False, covered)
    if res.kind is MinimizeKind.CEILING_HIT:
        if params.b >= SQRT8 - NONEXISTENCE_SLACK:
            return PhaseResult(params.alpha, params.b, Phase.NONEXISTENT, None, None, True, covered)
        return PhaseResult(params.alpha, params.b, Phase.SKINNY_RHOMBIC, res.argmin.y, res.value, True, covered)
    return PhaseResult(params.alpha, params.b, Phase.SKINNY_RHOMBIC, res.argmin.y, res.value, False, covered)


def _is_hex(alpha, b, cfg, policy):
    return classify_phase(EnergyParams(alpha, b), cfg, policy).phase is Phase.HEXAGONAL


def find_bc1(alpha, tol=1e-4, cfg=None, policy=None, audit_points=4):
    """Largest b in [2, 2 sqrt 2] whose minimizer on the ray is hexagonal.

    Bisection on the predicate "phase is hexagonal".  Afterwards the
    predicate is re-sampled at audit_points values on each side of the final
    bracket; any disagreement raises ThresholdAmbiguityError.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    cfg = cfg or LineSearchConfig()
    lo, hi = 2.0, SQRT8
    evals = 2
    if not _is_hex(alpha, lo, cfg, policy):
        raise ThresholdAmbiguityError(f"b = 2 is not hexagonal at alpha = {alpha}", lo, hi)
    if _is_hex(alpha, hi, cfg, policy):
        raise ThresholdAmbiguityError(f"b = 2 sqrt 2 is hexagonal at alpha = {alpha}", lo, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        evals += 1
        if _is_hex(alpha, mid, cfg, policy):
            lo = mid
        else:
            hi = mid
    for b in np.linspace(2.0, lo, audit_points + 1)[1:-1]:
        evals += 1
        if not _is_hex(alpha, b, cfg, policy):
            raise ThresholdAmbiguityError(f"non-hexagonal phase at b = {b} below the bracket", lo, hi)
    for b in np.linspace(hi, SQRT8, audit_points + 1)[1:-1]:
        evals += 1
        if _is_hex(alpha, b, cfg, policy):
            raise ThresholdAmbiguityError(f"hexagonal phase at b = {b} above the bracket", lo, hi)
    return ThresholdResult(alpha, 0.5 * (lo + hi), hi - lo, lo, hi, evals)


def trace_yb_curve(alpha, b_grid, cfg=None, policy=None):
    """Phase results for each b, in increasing b."""
    return [classify_phase(EnergyParams(alpha, b), cfg, policy) for b in sorted(b_grid)]


def asymptotic_energy(alpha, b, y):
    """Leading large-y form of E_b(alpha; 1/2 + i y).

    (1/pi) 2^{-5/2} alpha^{-5/2} y^{1/2} ((2 sqrt2 - b) alpha
    + 2 b e^{-pi y/(2 alpha)} (pi y - alpha) + 4 sqrt2 e^{-pi y/alpha} (alpha - 2 pi y)).
    """
    y = np.asarray(y, dtype=float)
    pref = 2**-2.5 / math.pi * alpha**-2.5 * np.sqrt(y)
    body = (
        (SQRT8 - b) * alpha
        + 2 * b * np.exp(-math.pi * y / (2 * alpha)) * (math.pi * y - alpha)
        + 4 * math.sqrt(2) * np.exp(-math.pi * y / alpha) * (alpha - 2 * math.pi * y)
    )
    return pref * body


@dataclass
class AsymptoticsReport:
    alpha: float
    b: float
    y: list
    energy: list
    predicted: list
    strictly_decreasing: bool
    all_positive: bool
    first_negative_y: Optional[float]
    trend: str
    relative_deviation: float
    leading_share: float = field(default=float("nan"))


def check_nonexistence_asymptotics(params, y_samples, policy=None):
    """Compare E_b on the ray with its leading large-y form.

    trend is '-inf' when the samples decrease and end negative, '0+' when
    they decrease and stay positive, 'other' otherwise.  relative_deviation
    is |E - prediction| / |E| at the largest sample and leading_share is the
    fraction of E carried by the constant (2 sqrt2 - b) alpha term there.
    """
    policy = policy or DEFAULT_POLICY
    y = np.asarray(sorted(y_samples), dtype=float)
    e = gamma_c_energy(params, y, policy)
    pred = asymptotic_energy(params.alpha, params.b, y)
    dec = bool(np.all(np.diff(e) < 0))
    pos = bool(np.all(e > 0))
    neg = np.flatnonzero(e < 0)
    if dec and not pos and e[-1] < 0:
        trend = "-inf"
    elif dec and pos:
        trend = "0+"
    else:
        trend = "other"
    lead = 2**-2.5 / math.pi * params.alpha**-2.5 * math.sqrt(y[-1]) * (SQRT8 - params.b) * params.alpha
    return AsymptoticsReport(
        params.alpha,
        params.b,
        y.tolist(),
        e.tolist(),
        pred.tolist(),
        dec,
        pos,
        float(y[neg[0]]) if neg.size else None,
        trend,
        float(abs(e[-1] - pred[-1]) / abs(e[-1])),
        float(lead / e[-1]) if e[-1] != 0 else float("nan"),
    )
