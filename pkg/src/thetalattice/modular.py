"""The group generated by z -> -1/z, z -> z + 1 and z -> -conj(z).

Points are reduced to the closed fundamental domain
{|z| >= 1, 0 <= Re z <= 1/2}.  The reduction records the word of generators
it applied so callers can map results back.
"""

import math
from dataclasses import dataclass, field

from .errors import DomainError, ReductionError
from .points import HEX_Y, UpperHalfPoint

BOUNDARY_SLACK = 1e-12
MAX_REDUCTION_STEPS = 1000

INVERT = "invert"
TRANSLATE = "translate"
REFLECT = "reflect"


@dataclass(frozen=True)
class GroupGenerator:
    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in (INVERT, TRANSLATE, REFLECT):
            raise DomainError(f"unknown generator {self.kind!r}")
        if self.kind != TRANSLATE and self.k != 0:
            raise DomainError("only translations carry a shift")
        object.__setattr__(self, "k", int(self.k))

    def act(self, z):
        if self.kind == INVERT:
            return -1.0 / z
        if self.kind == TRANSLATE:
            return z + self.k
        return -z.conjugate()

    def inverse(self):
        if self.kind == TRANSLATE:
            return GroupGenerator(TRANSLATE, -self.k)
        return self

    def __str__(self):
        return f"translate({self.k})" if self.kind == TRANSLATE else self.kind


def invert():
    return GroupGenerator(INVERT)


def translate(k):
    return GroupGenerator(TRANSLATE, k)


def reflect():
    return GroupGenerator(REFLECT)


@dataclass(frozen=True)
class GroupWord:
    """Generators applied left to right."""

    generators: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def __len__(self):
        return len(self.generators)

    def __add__(self, other):
        return GroupWord(self.generators + tuple(other.generators))

    def inverse(self):
        return GroupWord(tuple(g.inverse() for g in reversed(self.generators)))

    def __str__(self):
        return " ".join(str(g) for g in self.generators) or "identity"


@dataclass(frozen=True)
class FundamentalDomainPoint:
    point: UpperHalfPoint
    word: GroupWord


def _check(z):
    if isinstance(z, UpperHalfPoint):
        return z.z
    z = complex(z)
    if not (z.imag > 0 and math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"point must lie in the upper half-plane, got {z}")
    return z


def apply(word, z):
    """Apply a word (or a single generator) to z, left to right."""
    w = _check(z)
    gens = (word,) if isinstance(word, GroupGenerator) else word.generators
    for g in gens:
        w = g.act(w)
    return UpperHalfPoint(w.real, w.imag)


def reduce(z):
    """Map z into the closed fundamental domain and record the word used."""
    w = _check(z)
    gens = []
    for _ in range(MAX_REDUCTION_STEPS):
        k = -math.ceil(w.real - 0.5)  # real part into (-1/2, 1/2]
        if k != 0:
            gens.append(translate(k))
            w = w + k
        if w.real < 0:
            gens.append(reflect())
            w = -w.conjugate()
        if abs(w) ** 2 < 1.0 - BOUNDARY_SLACK:
            gens.append(invert())
            w = -1.0 / w
            continue
        break
    else:
        raise ReductionError(f"reduction of {z} did not stabilise in {MAX_REDUCTION_STEPS} steps")
    return FundamentalDomainPoint(UpperHalfPoint(w.real, w.imag), GroupWord(tuple(gens)))


def is_on_gamma_c(z, tol=1e-12):
    """True on the ray Re z = 1/2, Im z >= sqrt(3)/2 (within tol)."""
    w = _check(z)
    return abs(w.real - 0.5) <= tol and w.imag >= HEX_Y - tol


def in_closed_domain(z, tol=BOUNDARY_SLACK):
    w = _check(z)
    return abs(w) >= 1.0 - tol and -tol <= w.real <= 0.5 + tol
