"""Small numerical helpers shared by the spectral-parameter modules."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np

from xxzbethe.exceptions import DerivativeUnstable

TWO_PI = 2.0 * math.pi

DERIVATIVE_STEP = 1e-3
DERIVATIVE_CHECK_STEP = 5e-4
DERIVATIVE_RTOL = 1e-7


def reduce_to_strip(u: complex) -> complex:
    """Map ``u`` modulo 2*i*pi into the strip -pi < Im u <= pi."""
    u = complex(u)
    imag = math.pi - (math.pi - u.imag) % TWO_PI
    if imag <= -math.pi:
        imag += TWO_PI
    return complex(u.real, imag)


def strip_distance(a: complex, b: complex) -> float:
    """Distance between two points modulo 2*i*pi."""
    return abs(reduce_to_strip(complex(a) - complex(b)))


def _central_difference(f: Callable[[complex], complex], x: complex, h: float) -> complex:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def richardson_derivative(f: Callable[[complex], complex], x: complex = 0j, h: float = DERIVATIVE_STEP) -> complex:
    """Fourth-order central difference refined by one Richardson step."""
    coarse = _central_difference(f, x, h)
    fine = _central_difference(f, x, h / 2)
    return (16 * fine - coarse) / 15


def checked_derivative(
    f: Callable[[complex], np.ndarray | complex],
    x: complex = 0j,
    *,
    step: float = DERIVATIVE_STEP,
    check_step: float = DERIVATIVE_CHECK_STEP,
    rtol: float = DERIVATIVE_RTOL,
    what: str = "derivative",
):
    """Richardson derivative at two step sizes; raise if they disagree.

    Works for scalar and array valued ``f`` (norms are Frobenius).
    """
    first = richardson_derivative(f, x, step)
    second = richardson_derivative(f, x, check_step)
    scale = max(float(np.linalg.norm(second)), 1.0)
    gap = float(np.linalg.norm(np.asarray(first) - np.asarray(second)))
    if gap > rtol * scale:
        raise DerivativeUnstable(
            f"{what}: step {step:g} and {check_step:g} estimates differ",
            context={"gap": gap, "scale": scale, "rtol": rtol},
        )
    return second


def circle_average(f: Callable[[complex], complex], center: complex, radius: float = 1e-3, points: int = 8) -> complex:
    """Mean of ``f`` on a small circle; equals f(center) for f analytic inside."""
    angles = np.arange(points) * (TWO_PI / points)
    return complex(np.mean([f(center + radius * np.exp(1j * t)) for t in angles]))


def hadamard_normalized_det(matrix: np.ndarray) -> complex:
    """det(A) divided by the product of the row 2-norms (|result| <= 1)."""
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms == 0):
        return 0j
    return complex(np.linalg.det(matrix / norms[:, None]))


def relative_gap(left: Sequence[complex] | np.ndarray, right: Sequence[complex] | np.ndarray) -> float:
    """||left - right|| / max(||left||, ||right||, 1e-300)."""
    left_arr = np.asarray(left)
    right_arr = np.asarray(right)
    scale = max(float(np.linalg.norm(left_arr)), float(np.linalg.norm(right_arr)), 1e-300)
    return float(np.linalg.norm(left_arr - right_arr)) / scale
