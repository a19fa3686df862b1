"""Pydantic models for chain parameters and Bethe states."""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from ._internal.numerics import reduce_to_strip

FIXED_TOLERANCE = 1e-12


class BoundaryCase(str, Enum):
    """Which pair of boundary parameters is left arbitrary."""

    CASE1_ALPHA_BETA = "Case1AlphaBeta"
    CASE2_ALPHA_ALPHA = "Case2AlphaAlpha"
    CASE3_BETA_BETA = "Case3BetaBeta"


class Side(str, Enum):
    MINUS = "Minus"
    PLUS = "Plus"


class SpinTag(str, Enum):
    HALF = "Half"
    ONE = "One"


class LambdaSource(str, Enum):
    FROM_TQ = "FromTQ"
    FROM_DIAGONALIZATION = "FromDiagonalization"


class EnergyMethod(str, Enum):
    CLOSED_FORM_HALF_ODD_R = "ClosedFormHalfOddR"
    CLOSED_FORM_ONE_EVEN_R = "ClosedFormOneEvenR"
    GENERIC_DERIVATIVE = "GenericDerivative"


_CASE_ALIASES = {
    "1": BoundaryCase.CASE1_ALPHA_BETA,
    "case1": BoundaryCase.CASE1_ALPHA_BETA,
    "2": BoundaryCase.CASE2_ALPHA_ALPHA,
    "case2": BoundaryCase.CASE2_ALPHA_ALPHA,
    "3": BoundaryCase.CASE3_BETA_BETA,
    "case3": BoundaryCase.CASE3_BETA_BETA,
}

_BOUNDARY_FIELDS = ("alpha_minus", "alpha_plus", "beta_minus", "beta_plus")


def coerce_complex(value: Any) -> complex:
    """Accept numbers, ``[re, im]`` pairs, ``{"re", "im"}`` mappings or strings."""
    if isinstance(value, complex):
        return value
    if isinstance(value, bool):
        raise ValueError("Booleans are not complex numbers")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"Complex pairs need exactly two entries, got {len(value)}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    if hasattr(value, "item"):
        return complex(value.item())
    raise ValueError(f"Cannot interpret {value!r} as a complex number")


def eta_from(r: int, q: int) -> complex:
    """Anisotropy i*pi*r/q built from the integers."""
    return complex(0.0, math.pi * r / q)


class ModelParams(BaseModel):
    """Open spin-s XXZ chain with nondiagonal boundaries at eta = i*pi*r/q.

    Case-fixed boundary parameters may be omitted and are filled in:
    Case 1 sets the non-free alpha to i*pi/2 and the non-free beta to eta,
    Case 2 sets both betas to eta, Case 3 sets both alphas to eta. A single
    ``theta`` key sets both theta values.

    Examples:
        >>> params = ModelParams(n=4, two_s=1, r=7, q=5, case="Case2AlphaAlpha",
        ...                      alpha_minus=[0, 0.45], alpha_plus=[0, 0.87], theta=0.54)
        >>> params.eta, params.m_roots
    """

    model_config = {"frozen": True}

    n: int = Field(ge=1, description="Number of sites N")
    two_s: int = Field(ge=1, description="Twice the site spin (2s)")
    r: int = Field(ge=1, description="Numerator of eta/(i*pi)")
    q: int = Field(ge=3, description="Odd denominator of eta/(i*pi)")
    case: BoundaryCase = Field(description="Which boundary parameters are arbitrary")
    alpha_minus: complex = Field(description="Boundary parameter alpha_-")
    alpha_plus: complex = Field(description="Boundary parameter alpha_+")
    beta_minus: complex = Field(description="Boundary parameter beta_-")
    beta_plus: complex = Field(description="Boundary parameter beta_+")
    theta_minus: complex = Field(0j, description="Boundary parameter theta_-")
    theta_plus: complex = Field(0j, description="Boundary parameter theta_+ (equal to theta_-)")
    free_alpha_side: Side = Field(Side.MINUS, description="Case 1: which alpha is arbitrary")
    free_beta_side: Side = Field(Side.MINUS, description="Case 1: which beta is arbitrary")

    @field_validator("case", mode="before")
    @classmethod
    def coerce_case_alias(cls, value: Any) -> Any:
        """Allow short spellings such as ``2`` or ``"case2"``."""
        if isinstance(value, (int, str)) and not isinstance(value, bool):
            alias = _CASE_ALIASES.get(str(value).strip().lower())
            if alias is not None:
                return alias
        return value

    @model_validator(mode="before")
    @classmethod
    def fill_fixed_parameters(cls, data: Any) -> Any:
        """Coerce complex inputs and fill the case-fixed boundary values."""
        if not isinstance(data, dict):
            return data
        data = dict(data)
        theta = data.pop("theta", None)
        if theta is not None:
            data.setdefault("theta_minus", theta)
            data.setdefault("theta_plus", theta)
        if "theta_minus" in data and "theta_plus" not in data:
            data["theta_plus"] = data["theta_minus"]
        for key in (*_BOUNDARY_FIELDS, "theta_minus", "theta_plus"):
            if data.get(key) is not None:
                data[key] = coerce_complex(data[key])

        try:
            case = cls.coerce_case_alias(data.get("case"))
            case = BoundaryCase(case)
            eta = eta_from(int(data["r"]), int(data["q"]))
        except (KeyError, TypeError, ValueError):
            return data

        for key, value in _fixed_values(case, eta, data.get("free_alpha_side"), data.get("free_beta_side")).items():
            if data.get(key) is None:
                data[key] = value
        return data

    @model_validator(mode="after")
    def validate_invariants(self) -> ModelParams:
        """Check q parity, coprimality, theta equality and case-fixed values."""
        if self.q % 2 == 0:
            raise ValueError(f"q must be odd, got {self.q}")
        if math.gcd(self.r, self.q) != 1:
            raise ValueError(f"r/q must be irreducible, got r={self.r}, q={self.q}")
        if abs(self.theta_minus - self.theta_plus) > FIXED_TOLERANCE:
            raise ValueError("theta_minus and theta_plus must be equal")
        fixed = _fixed_values(self.case, self.eta, self.free_alpha_side, self.free_beta_side)
        for key, expected in fixed.items():
            actual = getattr(self, key)
            if abs(actual - expected) > FIXED_TOLERANCE * max(1.0, abs(expected)):
                raise ValueError(f"{self.case.value} requires {key}={expected}, got {actual}")
        return self

    @property
    def eta(self) -> complex:
        return eta_from(self.r, self.q)

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def p(self) -> int:
        return self.q - 1

    @property
    def r_odd(self) -> bool:
        return self.r % 2 == 1

    @property
    def sign(self) -> int:
        """(-1)^(2sN)."""
        return -1 if (self.two_s * self.n) % 2 else 1

    @property
    def theta(self) -> complex:
        return self.theta_minus

    @property
    def m_roots(self) -> int:
        """Number of Bethe roots M for this case."""
        extra = 1 if self.case == BoundaryCase.CASE2_ALPHA_ALPHA else -1
        return self.two_s * self.n + self.q + extra

    @property
    def shift(self) -> complex:
        """Crossing shift sigma of Q(u)."""
        if self.case == BoundaryCase.CASE3_BETA_BETA:
            return self.eta
        return -self.p * self.eta

    def mirror(self, u: complex) -> complex:
        """Crossing image of u: -u + (q-1)eta, or -u - eta in Case 3."""
        if self.case == BoundaryCase.CASE3_BETA_BETA:
            return -u - self.eta
        return -u + self.p * self.eta

    @property
    def free_alpha(self) -> complex:
        return self.alpha_minus if self.free_alpha_side == Side.MINUS else self.alpha_plus

    @property
    def free_beta(self) -> complex:
        return self.beta_minus if self.free_beta_side == Side.MINUS else self.beta_plus

    @property
    def dimension(self) -> int:
        return (self.two_s + 1) ** self.n

    def with_changes(self, **changes: Any) -> ModelParams:
        """Return a validated copy; case-fixed values are recomputed unless given."""
        data = self.model_dump()
        for key in _fixed_values(self.case, self.eta, self.free_alpha_side, self.free_beta_side):
            data.pop(key)
        if "theta" in changes:
            data.pop("theta_minus")
            data.pop("theta_plus")
        data.update(changes)
        return ModelParams.model_validate(data)

    def describe(self) -> str:
        return (
            f"{self.case.value} N={self.n} 2s={self.two_s} eta=i*pi*{self.r}/{self.q} "
            f"a-={self.alpha_minus} a+={self.alpha_plus} b-={self.beta_minus} b+={self.beta_plus} th={self.theta}"
        )


def _fixed_values(case: BoundaryCase, eta: complex, alpha_side: Any, beta_side: Any) -> dict[str, complex]:
    if case == BoundaryCase.CASE2_ALPHA_ALPHA:
        return {"beta_minus": eta, "beta_plus": eta}
    if case == BoundaryCase.CASE3_BETA_BETA:
        return {"alpha_minus": eta, "alpha_plus": eta}
    alpha_side = Side(alpha_side or Side.MINUS)
    beta_side = Side(beta_side or Side.MINUS)
    fixed_alpha = "alpha_plus" if alpha_side == Side.MINUS else "alpha_minus"
    fixed_beta = "beta_plus" if beta_side == Side.MINUS else "beta_minus"
    return {fixed_alpha: complex(0.0, math.pi / 2), fixed_beta: eta}


class RefinementInfo(BaseModel):
    """Trace of a damped Newton refinement.

    Attributes:
        iterations: Newton steps accepted.
        halvings: Total step halvings across all iterations.
        merit_history: Max normalized residual before the first step and after each one.
        step_merits: (before, after) merit pair of every accepted step, measured
            with the weights frozen at the start of that step.
    """

    model_config = {"frozen": True}

    iterations: int = Field(0, ge=0, description="Accepted Newton steps")
    halvings: int = Field(0, ge=0, description="Step halvings performed")
    merit_history: tuple[float, ...] = Field(default=(), description="Merit value per iterate")
    step_merits: tuple[tuple[float, float], ...] = Field(default=(), description="Weighted merit around each step")
    converged: bool = Field(True, description="Whether the tolerance was reached")


class BetheState(BaseModel):
    """Bethe roots of one level, reduced into the strip -pi < Im u <= pi.

    Examples:
        >>> state = BetheState(params=params, roots=[[0.475167, 0.000593], ...])
        >>> state.shift
    """

    model_config = {"frozen": True}

    params: ModelParams = Field(description="Chain the roots belong to")
    roots: tuple[complex, ...] = Field(description="Bethe roots u_j")
    refinement: RefinementInfo | None = Field(None, description="Newton trace, if refined")

    @field_validator("roots", mode="before")
    @classmethod
    def reduce_roots(cls, value: Any) -> Any:
        """Coerce pairs to complex and reduce modulo 2*i*pi."""
        if isinstance(value, (str, bytes)) or not hasattr(value, "__iter__"):
            return value
        return tuple(reduce_to_strip(coerce_complex(v)) for v in value)

    @model_validator(mode="after")
    def validate_root_count(self) -> BetheState:
        expected = self.params.m_roots
        if len(self.roots) != expected:
            params = self.params
            raise ValueError(
                f"{params.case.value} with N={params.n}, 2s={params.two_s}, q={params.q} "
                f"needs M={expected} roots, got {len(self.roots)}"
            )
        return self

    @property
    def shift(self) -> complex:
        return self.params.shift

    @property
    def m(self) -> int:
        return len(self.roots)

    def with_roots(self, roots: Any, refinement: RefinementInfo | None = None) -> BetheState:
        return BetheState(params=self.params, roots=roots, refinement=refinement)


class DetMConfig(BaseModel):
    """Inputs of the q x q determinant form of the functional relation."""

    model_config = {"frozen": True}

    params: ModelParams = Field(description="Chain parameters")
    p: int = Field(description="Shift step p = q - 1")
    lambda_source: LambdaSource = Field(LambdaSource.FROM_TQ, description="Where the eigenvalues come from")

    @model_validator(mode="before")
    @classmethod
    def default_p(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("p") is None:
            params = data.get("params")
            q = params.q if isinstance(params, ModelParams) else (params or {}).get("q")
            if q is not None:
                data = {**data, "p": int(q) - 1}
        return data

    @model_validator(mode="after")
    def validate_p(self) -> DetMConfig:
        if self.p + 1 != self.params.q:
            raise ValueError(f"p + 1 must equal q={self.params.q}, got p={self.p}")
        return self


class EnergyConstants(BaseModel):
    """Constants of E = c1 * dLambda/du(0) + c2."""

    model_config = {"frozen": True}

    c1: complex = Field(description="Derivative coefficient")
    c2: complex = Field(description="Constant shift")
    spin_tag: SpinTag = Field(description="Site spin the constants belong to")

    @field_validator("c1", "c2", mode="before")
    @classmethod
    def coerce_constant(cls, value: Any) -> complex:
        return coerce_complex(value)
