"""T-Q layer: Q(u), the h functions, eigenvalues and Bethe equations.

Roots enter Q(u) through pairs sh((u - u_j)/2) sh((u + u_j + sigma)/2), which
equal (ch(u + sigma/2) - ch(u_j + sigma/2)) / 2. That identity gives cheap
exact derivatives with respect to both u and the roots.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from functools import lru_cache

import numpy as np

from ._internal.factors import HyperbolicProduct, ch, sh
from ._internal.numerics import checked_derivative, circle_average, hadamard_normalized_det
from .exceptions import PoleAtRoot, UnsupportedCase
from .models import BetheState, BoundaryCase, DetMConfig, ModelParams
from .scalars import delta_product, delta_s, f_total, g_product, gamma_product

logger = logging.getLogger(__name__)

# Distance to a Q zero or h pole below which lambda_tq switches to circle averaging.
POLE_GUARD = 1e-8
# Bethe residual below which a state counts as converged.
CONVERGED_RESIDUAL = 1e-8
# Generic points where the eigenvalue scale of a state is sampled.
SCALE_POINTS = tuple(complex(0.6137, 2 * np.pi * k / 7 + 0.29) for k in range(7))
SCALE_FLOOR = 1e-300


# --- h functions -----------------------------------------------------------


@lru_cache(maxsize=256)
def h_tilde_product(params: ModelParams) -> HyperbolicProduct:
    """h-tilde(u) of the rescaled T-Q equation for the params' case and parity."""
    eta = params.eta
    if params.case == BoundaryCase.CASE3_BETA_BETA and not params.r_odd:
        raise UnsupportedCase(
            "Case3BetaBeta has no h(u) for even r",
            context={"case": params.case.value, "r": params.r, "q": params.q},
            params=params,
        )
    # Odd r carries (-1)^(2sN); the even-r expressions are the same with that sign set to -1.
    eps = params.sign if params.r_odd else -1
    common = [sh(1, (params.two_s + 1) / 2 * eta, 2 * params.n), sh(2, 2 * eta), sh(2, eta, -1)]

    if params.case == BoundaryCase.CASE1_ALPHA_BETA:
        alpha, beta = params.free_alpha, params.free_beta
        specific = [
            ch(1, 0),
            ch(1, -eta),
            sh(1, 0, const=eps * 1j * np.cosh(beta)),
            sh(1, -alpha),
            ch(0.5, 0.5 * (alpha + eta)),
            ch(0.5, -0.5 * (alpha + eta), -1),
        ]
    elif params.case == BoundaryCase.CASE2_ALPHA_ALPHA:
        a_m, a_p = params.alpha_minus, params.alpha_plus
        specific = [
            ch(1, eta),
            ch(1, -eta),
            sh(1, eps * a_p),
            sh(1, -a_m),
            ch(0.5, 0.5 * (a_m + eta)),
            ch(0.5, -0.5 * (a_m + eta), -1),
            ch(0.5, 0.5 * (eta - eps * a_p)),
            ch(0.5, 0.5 * (eps * a_p - eta), -1),
        ]
    else:
        specific = [
            sh(1, -eta),
            sh(1, eta),
            ch(1, 0, const=-1j * np.sinh(params.beta_minus)),
            ch(1, 0, const=eps * 1j * np.sinh(params.beta_plus)),
        ]
    return HyperbolicProduct.of(4.0 * eps, *common, *specific)


@lru_cache(maxsize=256)
def h_product(params: ModelParams) -> HyperbolicProduct:
    """Unrescaled h(u) = h-tilde(u) * g(u)^(2N)."""
    return h_tilde_product(params) * g_product(params)


def _mirror_shift(params: ModelParams) -> complex:
    return -params.eta if params.case == BoundaryCase.CASE3_BETA_BETA else params.p * params.eta


@lru_cache(maxsize=256)
def h_tilde_mirror_product(params: ModelParams) -> HyperbolicProduct:
    """u -> h-tilde(mirror(u))."""
    return h_tilde_product(params).mirrored(_mirror_shift(params))


@lru_cache(maxsize=256)
def h_double_tilde_product(params: ModelParams) -> HyperbolicProduct:
    """sh(2u + eta) h-tilde(u); the sh(2u + eta) pole cancels."""
    return HyperbolicProduct.of(1.0, sh(2, params.eta)) * h_tilde_product(params)


def h_fn(u: complex, params: ModelParams) -> complex:
    return h_product(params).value(u)


def h_tilde(u: complex, params: ModelParams) -> complex:
    return h_tilde_product(params).value(u)


# --- Q(u) ------------------------------------------------------------------


def _roots(state: BetheState) -> np.ndarray:
    return np.asarray(state.roots, dtype=complex)


def _pair_factors(x: complex, roots: np.ndarray, sigma: complex) -> np.ndarray:
    return np.sinh(0.5 * (x - roots)) * np.sinh(0.5 * (x + roots + sigma))


def _products_without_one(values: np.ndarray) -> np.ndarray:
    return np.array([np.prod(np.delete(values, k)) for k in range(len(values))], dtype=complex)


def q_eval(u: complex, state: BetheState) -> complex:
    """Q(u) = prod_j sh((u - u_j)/2) sh((u + u_j + sigma)/2)."""
    return complex(np.prod(_pair_factors(u, _roots(state), state.shift)))


def q_derivative(u: complex, state: BetheState) -> complex:
    """dQ/du, finite at the zeros of Q."""
    sigma = state.shift
    factors = _pair_factors(u, _roots(state), sigma)
    return complex(0.5 * np.sinh(u + sigma / 2) * np.sum(_products_without_one(factors)))


def q_root_gradient(u: complex, state: BetheState) -> np.ndarray:
    """dQ(u)/du_k for every root u_k at fixed u."""
    roots = _roots(state)
    sigma = state.shift
    factors = _pair_factors(u, roots, sigma)
    return -0.5 * np.sinh(roots + sigma / 2) * _products_without_one(factors)


def q_log_derivative(u: complex, state: BetheState) -> complex:
    """Q'(u)/Q(u) = 1/2 sum_j [coth((u - u_j)/2) + coth((u + u_j + sigma)/2)]."""
    roots = _roots(state)
    sigma = state.shift
    left = np.sinh(0.5 * (u - roots))
    right = np.sinh(0.5 * (u + roots + sigma))
    closest = int(np.argmin(np.minimum(np.abs(left), np.abs(right))))
    if min(abs(left[closest]), abs(right[closest])) < POLE_GUARD:
        raise PoleAtRoot(u, complex(roots[closest]), params=state.params, root_index=closest)
    total = np.cosh(0.5 * (u - roots)) / left + np.cosh(0.5 * (u + roots + sigma)) / right
    return complex(0.5 * np.sum(total))


def root_invariants(state: BetheState) -> np.ndarray:
    """ch(u_j + sigma/2): equal for the two crossing images of a root and 2*i*pi periodic."""
    return np.cosh(_roots(state) + state.shift / 2)


# --- eigenvalues -------------------------------------------------------------


def _lambda_raw(u: complex, state: BetheState) -> complex:
    params = state.params
    shift = params.p * params.eta
    q_u = q_eval(u, state)
    forward = h_tilde_product(params).value(u) * q_eval(u + shift, state)
    backward = h_tilde_mirror_product(params).value(u) * q_eval(u - shift, state)
    return (forward + backward) / q_u


def lambda_tq(u: complex, state: BetheState) -> complex:
    """Rescaled eigenvalue h~(u) Q(u+p eta)/Q(u) + h~(mirror u) Q(u-p eta)/Q(u).

    On a zero of Q the value is the limit (circle average) provided the state
    satisfies its Bethe equations; otherwise PoleAtRoot is raised.
    """
    params = state.params
    factors = np.abs(_pair_factors(u, _roots(state), state.shift))
    if factors.size and factors.min() < POLE_GUARD:
        worst = max(abs(r) for r in bethe_residuals(state))
        if worst > CONVERGED_RESIDUAL:
            index = int(np.argmin(factors))
            raise PoleAtRoot(
                u, state.roots[index], params=params, root_index=index, context={"max_bethe_residual": worst}
            )
        return circle_average(lambda x: _lambda_raw(x, state), u)
    near_pole = min(
        h_tilde_product(params).pole_distance(u),
        h_tilde_mirror_product(params).pole_distance(u),
    )
    if near_pole < POLE_GUARD:
        return circle_average(lambda x: _lambda_raw(x, state), u)
    return _lambda_raw(u, state)


def lambda_unrescaled(u: complex, state: BetheState) -> complex:
    """Lambda^(1/2,s)(u) = g(u)^(2N) * lambda_tq(u)."""
    return g_product(state.params).value(u) * lambda_tq(u, state)


def lambda_tq_derivative(u: complex, state: BetheState) -> complex:
    """d lambda_tq / du from the product rule on h~ and exact Q derivatives.

    Falls back to a checked finite difference when u is within POLE_GUARD
    of a Q zero or an h~ pole.
    """
    params = state.params
    shift = params.p * params.eta
    forward_h = h_tilde_product(params)
    backward_h = h_tilde_mirror_product(params)
    q_u = q_eval(u, state)
    near_pole = min(forward_h.pole_distance(u), backward_h.pole_distance(u))
    if abs(q_u) < POLE_GUARD or near_pole < POLE_GUARD:
        return complex(checked_derivative(lambda x: lambda_tq(x, state), u, what="lambda_tq"))

    q_plus, q_minus = q_eval(u + shift, state), q_eval(u - shift, state)
    numerator = forward_h.value(u) * q_plus + backward_h.value(u) * q_minus
    numerator_derivative = (
        forward_h.derivative(u) * q_plus
        + forward_h.value(u) * q_derivative(u + shift, state)
        + backward_h.derivative(u) * q_minus
        + backward_h.value(u) * q_derivative(u - shift, state)
    )
    return (numerator_derivative - numerator * q_derivative(u, state) / q_u) / q_u


def fused_eigenvalue(two_j: int, u: complex, lam_half: Callable[[complex], complex], params: ModelParams) -> complex:
    """Eigenvalue of t^(j,s)(u) from the fusion hierarchy.

    Lambda^(j)(x) = Lambda^(j-1/2)(x - eta/2) Lambda^(1/2)(x + (j-1/2)eta)
                    - delta(x + (j-3/2)eta) Lambda^(j-1)(x - eta),  Lambda^(0) = 1.
    """
    eta = params.eta
    cache: dict[tuple[int, complex], complex] = {}

    def level(k: int, x: complex) -> complex:
        if k == 0:
            return 1.0 + 0j
        if k == 1:
            return complex(lam_half(x))
        key = (k, x)
        if key not in cache:
            head = level(k - 1, x - eta / 2) * lam_half(x + (k - 1) / 2 * eta)
            cache[key] = head - delta_s(x + (k - 3) / 2 * eta, params) * level(k - 2, x - eta)
        return cache[key]

    if two_j < 0:
        raise ValueError(f"two_j must be non-negative, got {two_j}")
    return level(two_j, complex(u))


def _q_ratio(x: complex, step: complex, state: BetheState) -> complex:
    return q_eval(x + step, state) / q_eval(x, state)


@lru_cache(maxsize=256)
def spin_one_boundary_product(params: ModelParams) -> HyperbolicProduct:
    """gamma(u) * delta(u - eta/2), with the sh(u) and sh(2u) poles cancelled."""
    return gamma_product(params) * delta_product(params).shifted(-params.eta / 2)


def lambda_one_rescaled(u: complex, state: BetheState) -> complex:
    """gamma(u) * Lambda^(1,1)(u) for a spin-1 state, regular at u = 0.

    Uses sh(2u) Lambda~(u - eta/2) = hh(v)Q(v+p eta)/Q(v) - hh(mirror v)Q(v-p eta)/Q(v)
    with hh = sh(2x + eta) h~(x), and the same at u + eta/2 with sh(2u + 2 eta).
    """
    params = state.params
    if params.two_s != 2:
        raise ValueError(f"lambda_one_rescaled needs two_s=2, got {params.two_s}")
    eta = params.eta
    step = params.p * eta
    hh = h_double_tilde_product(params)
    hh_mirror = hh.mirrored(_mirror_shift(params))

    def regular_part(x: complex) -> complex:
        return hh.value(x) * _q_ratio(x, step, state) - hh_mirror.value(x) * _q_ratio(x, -step, state)

    bulk = regular_part(u - eta / 2) * regular_part(u + eta / 2)
    return bulk - spin_one_boundary_product(params).value(u)


# --- Bethe equations ---------------------------------------------------------


def bethe_terms(state: BetheState) -> tuple[np.ndarray, np.ndarray]:
    """The two terms h~(u_j)Q(u_j+p eta) and h~(mirror u_j)Q(u_j-p eta) per root."""
    params = state.params
    shift = params.p * params.eta
    forward_h = h_tilde_product(params)
    backward_h = h_tilde_mirror_product(params)
    forward = np.array([forward_h.value(u) * q_eval(u + shift, state) for u in state.roots], dtype=complex)
    backward = np.array([backward_h.value(u) * q_eval(u - shift, state) for u in state.roots], dtype=complex)
    return forward, backward


def eigenvalue_scale(state: BetheState) -> float:
    """Median over SCALE_POINTS of |h~(x)Q(x+p eta)/Q(x)| + |h~(mirror x)Q(x-p eta)/Q(x)|.

    Points that land on a Q zero or an h~ pole are skipped.
    """
    params = state.params
    shift = params.p * params.eta
    forward_h = h_tilde_product(params)
    backward_h = h_tilde_mirror_product(params)
    sizes = []
    with np.errstate(all="ignore"):
        for x in SCALE_POINTS:
            q_x = q_eval(x, state)
            if abs(q_x) < POLE_GUARD or min(forward_h.pole_distance(x), backward_h.pole_distance(x)) < POLE_GUARD:
                continue
            size = abs(forward_h.value(x) * q_eval(x + shift, state) / q_x) + abs(
                backward_h.value(x) * q_eval(x - shift, state) / q_x
            )
            if np.isfinite(size):
                sizes.append(size)
    if not sizes:
        return 1.0
    return max(float(np.median(sizes)), SCALE_FLOOR)


def bethe_scales(state: BetheState) -> np.ndarray:
    """|Q'(u_j)| times the eigenvalue scale, per root.

    (a_j + b_j) / Q'(u_j) is the residue of the eigenvalue at u_j, so dividing
    by these scales measures the pole the T-Q form would carry there.
    """
    level = eigenvalue_scale(state)
    slopes = np.array([abs(q_derivative(u, state)) for u in state.roots], dtype=float)
    return np.maximum(slopes * level, SCALE_FLOOR)


def bethe_residuals(state: BetheState) -> list[complex]:
    """(a_j + b_j) / (|Q'(u_j)| L) per root; zero iff the Bethe equation holds.

    The two terms may both vanish when u_j sits on a zero of h~; the residue
    form stays meaningful there, unlike a ratio of the terms.
    """
    forward, backward = bethe_terms(state)
    return [complex(v) for v in (forward + backward) / bethe_scales(state)]


def max_bethe_residual(state: BetheState) -> float:
    return max((abs(r) for r in bethe_residuals(state)), default=0.0)


# --- functional relation checks ---------------------------------------------


def z_product(u: complex, params: ModelParams) -> complex:
    """z(u) = prod_{j<q} h(u + 2j eta)."""
    h = h_product(params)
    return complex(np.prod([h.value(u + 2 * j * params.eta) for j in range(params.q)]))


def quadratic_residual(u: complex, params: ModelParams) -> complex:
    """z^2 - z f + prod_j delta(u + (2j-1)eta), relative to its largest term."""
    z = z_product(u, params)
    f = f_total(u, params)
    det_product = complex(np.prod([delta_s(u + (2 * j - 1) * params.eta, params) for j in range(params.q)]))
    scale = max(abs(z * z), abs(z * f), abs(det_product))
    value = z * z - z * f + det_product
    return value / scale if scale else value


def _relative(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def h_condition_residuals(u: complex, params: ModelParams) -> dict[str, float]:
    """Relative residuals of the periodicity, crossing and product conditions on h."""
    eta = params.eta
    h = h_product(params)
    h_u = h.value(u)
    if params.case == BoundaryCase.CASE3_BETA_BETA:
        crossing = h.value(u + (params.q + 1) * eta) * h.value(-u - eta)
        mirrored = [h.value(-u - (2 * j + 1) * eta) for j in range(params.q)]
    else:
        crossing = h.value(u + (params.q + 1) * eta) * h.value(-u - (params.q + 1) * eta)
        mirrored = [h.value(-u - 2 * j * eta) for j in range(params.q)]
    product_sum = z_product(u, params) + complex(np.prod(mirrored))
    return {
        "periodicity_2pi": _relative(h.value(u + 2j * np.pi), h_u),
        "periodicity_2q_eta": _relative(h.value(u + 2 * params.q * eta), h_u),
        "crossing": _relative(crossing, delta_s(u, params)),
        "product": _relative(product_sum, f_total(u, params)),
        "quadratic": abs(quadratic_residual(u, params)),
    }


def det_m_matrix(u: complex, cfg: DetMConfig, lambdas: Callable[[complex], complex]) -> np.ndarray:
    """The q x q matrix whose determinant vanishes by the functional relation.

    Row k sits at u_k = u + k p eta: Lambda(u_k) on the diagonal, -h(u_k) one
    column to the right and -h(mirror u_k) one column to the left (cyclically).
    """
    params = cfg.params
    q = params.q
    h = h_product(params)
    matrix = np.zeros((q, q), dtype=complex)
    for k in range(q):
        u_k = u + k * cfg.p * params.eta
        matrix[k, k] = lambdas(u_k)
        matrix[k, (k + 1) % q] -= h.value(u_k)
        matrix[k, (k - 1) % q] -= h.value(params.mirror(u_k))
    return matrix


def det_m_residual(u: complex, cfg: DetMConfig, lambdas: Callable[[complex], complex]) -> complex:
    """det M divided by the product of its row norms."""
    return hadamard_normalized_det(det_m_matrix(u, cfg, lambdas))
