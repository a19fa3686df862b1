"""Domain exception hierarchy for xxzbethe."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any


def _safe_context_value(value: Any) -> Any:
    """Return a JSON-friendly representation for context values."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, complex):
        return {"re": _safe_context_value(value.real), "im": _safe_context_value(value.imag)}
    if hasattr(value, "item") and callable(value.item) and getattr(value, "shape", None) == ():
        return _safe_context_value(value.item())
    if isinstance(value, dict):
        return {str(key): _safe_context_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [_safe_context_value(item) for item in value]
    if hasattr(value, "tolist"):
        return _safe_context_value(value.tolist())
    return repr(value)


def _params_summary(params: Any) -> Any:
    """Structural fields plus a one-line description of a ModelParams-like object."""
    describe = getattr(params, "describe", None)
    if not callable(describe):
        return _safe_context_value(params)
    return {
        "case": getattr(params.case, "value", str(params.case)),
        "n": params.n,
        "two_s": params.two_s,
        "r": params.r,
        "q": params.q,
        "description": describe(),
    }


class XXZError(Exception):
    """Base exception for all xxzbethe errors.

    Attributes:
        code: Stable machine-readable identifier.
        params: Chain parameters in force when the error was raised, if known.
        root_index: Bethe root the failure is attributed to, if any.
        residual: Residual or ratio that triggered the failure, if any.
        context: Further JSON-friendly details.
    """

    default_code = "XXZ_ERROR"

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        params: Any | None = None,
        root_index: int | None = None,
        residual: float | None = None,
        context: dict[str, Any] | None = None,
        cause: Any | None = None,
    ) -> None:
        super().__init__(message)
        self.code = code or self.default_code
        self.params = params
        self.root_index = root_index
        self.residual = residual
        self.context = context
        self.cause = cause

    def to_dict(self) -> dict[str, Any]:
        """Serialize this error into a stable machine-readable dictionary."""
        payload: dict[str, Any] = {
            "type": self.__class__.__name__,
            "message": str(self.args[0]) if self.args else "",
            "code": self.code,
        }
        if self.params is not None:
            payload["params"] = _params_summary(self.params)
        if self.root_index is not None:
            payload["root_index"] = self.root_index
        if self.residual is not None:
            payload["residual"] = _safe_context_value(self.residual)
        if self.context:
            payload["context"] = _safe_context_value(self.context)
        if self.cause is not None:
            payload["cause"] = {
                "type": self.cause.__class__.__name__,
                "message": str(self.cause),
            }
        return payload

    def __str__(self) -> str:
        message = str(self.args[0]) if self.args else self.__class__.__name__
        details = []
        if self.params is not None:
            describe = getattr(self.params, "describe", None)
            details.append(f"params={describe() if callable(describe) else self.params}")
        if self.root_index is not None:
            details.append(f"root={self.root_index}")
        if self.residual is not None:
            details.append(f"residual={self.residual:.3e}")
        if self.context:
            details.append(f"context={_safe_context_value(self.context)}")
        if self.cause is not None:
            details.append(f"cause={self.cause.__class__.__name__}: {self.cause}")
        if not details:
            return message
        return f"{message} | {'; '.join(details)}"

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.to_dict()!r})"


class InputError(XXZError):
    """Base error for invalid or unsupported inputs (CLI exit code 1)."""

    default_code = "INPUT_ERROR"


class ConfigError(InputError):
    """Raised when a run configuration cannot be parsed or validated.

    Attributes:
        path: Configuration file associated with the failure, if known.
    """

    default_code = "CONFIG_INVALID"

    def __init__(
        self,
        message: str,
        path: str | None = None,
        cause: Any | None = None,
        *,
        context: dict[str, Any] | None = None,
    ) -> None:
        merged_context = {"path": path} if path is not None else {}
        if context:
            merged_context.update(context)
        super().__init__(message, context=merged_context or None, cause=cause)
        self.path = path


class LengthMismatch(InputError):
    """Raised when two spectra of different lengths are paired."""

    default_code = "LENGTH_MISMATCH"

    def __init__(self, left: int, right: int) -> None:
        super().__init__(
            f"Cannot pair spectra of lengths {left} and {right}",
            context={"left": left, "right": right},
        )
        self.left = left
        self.right = right


class UnsupportedError(InputError):
    """Base error for parameter regimes with no available solution."""

    default_code = "UNSUPPORTED"


class UnsupportedCase(UnsupportedError):
    """Raised for boundary case / parity combinations without an h function."""

    default_code = "UNSUPPORTED_CASE"


class UnsupportedQ(UnsupportedError):
    """Raised when the operator-level functional relation is requested for q not in {3, 5}."""

    default_code = "UNSUPPORTED_Q"

    def __init__(self, q: int) -> None:
        super().__init__(
            f"Operator-level functional relation is only expanded for q in (3, 5), got q={q}",
            context={"q": q},
        )
        self.q = q


class NumericalError(XXZError):
    """Base error for numerical failures (CLI exit code 2)."""

    default_code = "NUMERICAL_ERROR"


class PoleAtDenominator(NumericalError):
    """Raised when a scalar function is evaluated on a denominator zero.

    Attributes:
        u: Spectral parameter at which the pole was hit.
    """

    default_code = "POLE_AT_DENOMINATOR"

    def __init__(self, function: str, u: complex, *, distance: float | None = None) -> None:
        super().__init__(
            f"{function} has a vanishing denominator at u={u}",
            context={"function": function, "u": u, "distance": distance},
        )
        self.function = function
        self.u = u


class PoleAtRoot(NumericalError):
    """Raised when u sits on a zero of Q(u) that the Bethe equations do not cancel."""

    default_code = "POLE_AT_ROOT"

    def __init__(
        self,
        u: complex,
        root: complex | None = None,
        *,
        params: Any | None = None,
        root_index: int | None = None,
        context: dict[str, Any] | None = None,
    ) -> None:
        merged = {"u": u, "root": root}
        if context:
            merged.update(context)
        super().__init__(f"u={u} is a zero of Q(u)", params=params, root_index=root_index, context=merged)
        self.u = u
        self.root = root


class DimensionTooLarge(NumericalError):
    """Raised when a dense operator would exceed the resource guard."""

    default_code = "DIMENSION_TOO_LARGE"

    def __init__(self, dim: int, limit: int) -> None:
        super().__init__(
            f"Dense dimension {dim} exceeds the limit {limit}",
            context={"dim": dim, "limit": limit},
        )
        self.dim = dim
        self.limit = limit


class DerivativeUnstable(NumericalError):
    """Raised when two finite-difference step sizes disagree."""

    default_code = "DERIVATIVE_UNSTABLE"


class BoundarySingularity(NumericalError):
    """Raised when a boundary coupling has a csch/sech-type pole."""

    default_code = "BOUNDARY_SINGULARITY"


class ConvergenceFailure(NumericalError):
    """Raised when a dense eigensolver fails or returns inaccurate pairs."""

    default_code = "CONVERGENCE_FAILURE"


class NoConvergence(NumericalError):
    """Raised when Newton refinement stops above tolerance.

    Attributes:
        best_state: Best iterate reached, as a BetheState.
        residuals: Normalized residuals of the best iterate.
    """

    default_code = "NO_CONVERGENCE"

    def __init__(
        self,
        message: str,
        *,
        best_state: Any,
        residuals: Sequence[complex],
        iterations: int,
    ) -> None:
        magnitudes = [abs(r) for r in residuals]
        worst = max(magnitudes, default=0.0)
        super().__init__(
            message,
            params=getattr(best_state, "params", None),
            root_index=magnitudes.index(worst) if magnitudes else None,
            residual=worst,
            context={"iterations": iterations, "max_residual": worst},
        )
        self.best_state = best_state
        self.residuals = list(residuals)
        self.iterations = iterations


class RankDeficiency(NumericalError):
    """Raised when the T-Q null direction is not isolated."""

    default_code = "RANK_DEFICIENCY"

    def __init__(self, ratio: float, *, params: Any | None = None) -> None:
        super().__init__(
            f"Null direction not isolated (smallest/second singular value ratio {ratio:.3g})",
            params=params,
            residual=ratio,
            context={"ratio": ratio},
        )
        self.ratio = ratio


class MethodDisagreement(NumericalError):
    """Raised when closed-form and generic energies differ."""

    default_code = "METHOD_DISAGREEMENT"

    def __init__(
        self, closed_form: complex, generic: complex, tolerance: float, *, params: Any | None = None
    ) -> None:
        super().__init__(
            "Closed-form and generic energies disagree",
            params=params,
            residual=abs(complex(closed_form) - complex(generic)),
            context={"closed_form": closed_form, "generic": generic, "tolerance": tolerance},
        )
        self.closed_form = closed_form
        self.generic = generic


class IncompleteMatch(NumericalError):
    """Raised when not every Hamiltonian level is paired with a Bethe level.

    Attributes:
        unmatched: Indices (into the Hamiltonian spectrum) left unmatched.
        record: Partial run record, when one was assembled.
    """

    default_code = "INCOMPLETE_MATCH"

    def __init__(
        self, unmatched: Sequence[int], *, total: int, record: Any | None = None, params: Any | None = None
    ) -> None:
        super().__init__(
            f"{len(unmatched)} of {total} levels unmatched",
            params=params,
            context={"unmatched": list(unmatched), "total": total},
        )
        self.unmatched = list(unmatched)
        self.record = record


class ResidualThresholdExceeded(NumericalError):
    """Raised when a verification suite residual is above its threshold."""

    default_code = "RESIDUAL_THRESHOLD"

    def __init__(self, suite: str, worst: float, threshold: float, *, record: Any | None = None) -> None:
        super().__init__(
            f"{suite}: worst residual {worst:.3e} exceeds {threshold:.1e}",
            residual=worst,
            context={"suite": suite, "worst": worst, "threshold": threshold},
        )
        self.suite = suite
        self.worst = worst
        self.threshold = threshold
        self.record = record
