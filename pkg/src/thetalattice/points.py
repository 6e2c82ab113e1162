"""Points of the upper half-plane and the energy parameters."""

import math
from dataclasses import dataclass

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
SQRT8 = 2.0 * math.sqrt(2.0)
HEX_Y = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class UpperHalfPoint:
    """z = x + i y with y > 0, parameterizing the lattice (Z + zZ)/sqrt(y)."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DomainError(f"non-finite point ({x}, {y})")
        if y <= 0:
            raise DomainError(f"point must lie in the upper half-plane, got y = {y}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def z(self):
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, z.imag)

    def __iter__(self):
        yield self.x
        yield self.y


HEXAGONAL = UpperHalfPoint(0.5, HEX_Y)


@dataclass(frozen=True)
class EnergyParams:
    """Scale alpha > 0 and mixing coefficient b >= 0 of K(alpha) - b K(2 alpha)."""

    alpha: float
    b: float = 0.0

    def __post_init__(self):
        a, b = float(self.alpha), float(self.b)
        if not (math.isfinite(a) and a > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(b) and b >= 0):
            raise DomainError(f"b must be nonnegative, got {self.b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "b", b)

    @property
    def theorem_covered(self):
        """The phase theorem assumes alpha >= 2."""
        return self.alpha >= 2.0

    @property
    def nonexistence_regime(self):
        return self.b >= SQRT8
