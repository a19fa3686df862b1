"""Products of hyperbolic factors in the spectral parameter.

Every scalar of the functional relations (xi, delta, h, h-tilde, the rescale
factors) is a constant times a product of terms ``sh(a*u + b) + c`` or
``ch(a*u + b) + c`` raised to integer powers. Keeping that structure lets us
evaluate values, log-values and exact derivatives, and build mirrored
versions ``F(a*u + b)`` without closures.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

# Above this |Re(argument)| values are assembled from logarithms.
LOG_SWITCH = 5.0

# Factors whose parameters agree to this many decimals are treated as equal.
KEY_DIGITS = 10

_LN2 = math.log(2.0)


def _log_sh(z: complex) -> complex:
    if z.real >= 0:
        return z - _LN2 + np.log1p(-np.exp(-2 * z))
    return -z - _LN2 + np.log1p(-np.exp(2 * z)) + 1j * math.pi


def _log_ch(z: complex) -> complex:
    if z.real >= 0:
        return z - _LN2 + np.log1p(np.exp(-2 * z))
    return -z - _LN2 + np.log1p(np.exp(2 * z))


@dataclass(frozen=True, slots=True)
class Factor:
    """One term ``base(slope*u + offset) + const`` raised to ``power``."""

    kind: Literal["sh", "ch"]
    slope: complex
    offset: complex
    power: int = 1
    const: complex = 0j

    def argument(self, u: complex) -> complex:
        return self.slope * u + self.offset

    def base(self, u: complex) -> complex:
        z = self.argument(u)
        value = np.sinh(z) if self.kind == "sh" else np.cosh(z)
        return complex(value + self.const)

    def base_derivative(self, u: complex) -> complex:
        z = self.argument(u)
        value = np.cosh(z) if self.kind == "sh" else np.sinh(z)
        return complex(self.slope * value)

    def log_base(self, u: complex) -> complex:
        z = self.argument(u)
        if self.const != 0 or abs(z.real) <= LOG_SWITCH:
            return complex(np.log(self.base(u)))
        return complex(_log_sh(z) if self.kind == "sh" else _log_ch(z))

    def substitute(self, slope: complex, shift: complex) -> Factor:
        """Return the factor evaluated at ``slope*u + shift``."""
        return replace(self, slope=self.slope * slope, offset=self.slope * shift + self.offset)

    @property
    def key(self) -> tuple[object, ...]:
        """Identity up to rounding, so shifted copies of one factor merge."""
        return (self.kind, *_rounded(self.slope), *_rounded(self.offset), *_rounded(self.const))


def _rounded(value: complex) -> tuple[float, float]:
    return (round(value.real, KEY_DIGITS) + 0.0, round(value.imag, KEY_DIGITS) + 0.0)


def _merge(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    powers: dict[tuple[object, ...], int] = {}
    first: dict[tuple[object, ...], Factor] = {}
    for factor in factors:
        powers[factor.key] = powers.get(factor.key, 0) + factor.power
        first.setdefault(factor.key, factor)
    return tuple(replace(first[key], power=power) for key, power in powers.items() if power != 0)


@dataclass(frozen=True, slots=True)
class HyperbolicProduct:
    """``prefactor * prod(factor ** power)`` as a function of u.

    Examples:
        >>> xi = HyperbolicProduct.of(1.0, sh(1, 0.5j), sh(1, -0.5j))
        >>> xi.value(0.3), xi.derivative(0.3), xi.shifted(0.5j).value(0.3)
    """

    prefactor: complex
    factors: tuple[Factor, ...] = ()

    @classmethod
    def of(cls, prefactor: complex, *factors: Factor) -> HyperbolicProduct:
        return cls(complex(prefactor), _merge(factors))

    def __mul__(self, other: HyperbolicProduct) -> HyperbolicProduct:
        return HyperbolicProduct(self.prefactor * other.prefactor, _merge(self.factors + other.factors))

    def __pow__(self, n: int) -> HyperbolicProduct:
        if n == 0:
            return HyperbolicProduct(1.0 + 0j)
        return HyperbolicProduct(self.prefactor**n, tuple(replace(f, power=f.power * n) for f in self.factors))

    def scaled(self, c: complex) -> HyperbolicProduct:
        return HyperbolicProduct(self.prefactor * c, self.factors)

    def substitute(self, slope: complex, shift: complex) -> HyperbolicProduct:
        """Return ``u -> F(slope*u + shift)`` as a new product."""
        return HyperbolicProduct(self.prefactor, _merge(f.substitute(slope, shift) for f in self.factors))

    def shifted(self, shift: complex) -> HyperbolicProduct:
        return self.substitute(1.0, shift)

    def mirrored(self, shift: complex) -> HyperbolicProduct:
        """Return ``u -> F(-u + shift)``."""
        return self.substitute(-1.0, shift)

    def _needs_logs(self, u: complex) -> bool:
        return any(abs(f.argument(u).real) > LOG_SWITCH for f in self.factors)

    def value(self, u: complex) -> complex:
        if self.prefactor == 0:
            return 0j
        if self._needs_logs(u):
            return complex(np.exp(self.log_value(u)))
        out = np.complex128(self.prefactor)
        for f in self.factors:
            out *= np.complex128(f.base(u)) ** f.power
        return complex(out)

    def log_value(self, u: complex) -> complex:
        """Complex logarithm of the value; only ``exp`` of it is meaningful."""
        total = complex(np.log(np.complex128(self.prefactor)))
        for f in self.factors:
            total += f.power * f.log_base(u)
        return total

    def derivative(self, u: complex) -> complex:
        """Exact d/du by the product rule; well defined at zeros of single factors."""
        bases = [np.complex128(f.base(u)) for f in self.factors]
        total = np.complex128(0)
        for i, f in enumerate(self.factors):
            term = f.power * bases[i] ** (f.power - 1) * f.base_derivative(u)
            for k, g in enumerate(self.factors):
                if k != i:
                    term *= bases[k] ** g.power
            total += term
        return complex(self.prefactor * total)

    def log_derivative(self, u: complex) -> complex:
        return complex(sum(f.power * f.base_derivative(u) / f.base(u) for f in self.factors))

    def pole_distance(self, u: complex) -> float:
        """Smallest |base| among factors with negative power (inf if none)."""
        distances = [abs(f.base(u)) for f in self.factors if f.power < 0]
        return min(distances, default=math.inf)


def sh(slope: complex, offset: complex, power: int = 1, const: complex = 0j) -> Factor:
    return Factor("sh", complex(slope), complex(offset), power, complex(const))


def ch(slope: complex, offset: complex, power: int = 1, const: complex = 0j) -> Factor:
    return Factor("ch", complex(slope), complex(offset), power, complex(const))
