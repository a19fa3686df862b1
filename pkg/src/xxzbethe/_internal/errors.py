"""Translation of linear-algebra failures into xxzbethe exceptions."""

from __future__ import annotations

import functools
from collections.abc import Callable
from typing import Any, ParamSpec, TypeVar

import numpy as np
import scipy.linalg

from xxzbethe.exceptions import ConvergenceFailure

LINALG_ERRORS: tuple[type[Exception], ...] = (np.linalg.LinAlgError, scipy.linalg.LinAlgError)


def translate_linalg_error(error: Exception, context: str = "") -> ConvergenceFailure:
    """Translate a numpy/scipy LinAlgError into ConvergenceFailure."""

    base_message = str(error) or error.__class__.__name__
    message = f"{context}: {base_message}" if context else base_message
    context_payload: dict[str, Any] = {}
    if context:
        context_payload["operation"] = context
    return ConvergenceFailure(message, context=context_payload or None, cause=error)


P = ParamSpec("P")
R = TypeVar("R")


def handle_linalg_errors(func: Callable[P, R]) -> Callable[P, R]:
    """Decorator that translates LinAlgError raised by LAPACK wrappers."""

    @functools.wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return func(*args, **kwargs)
        except LINALG_ERRORS as e:
            raise translate_linalg_error(e, func.__name__) from e

    return wrapper
