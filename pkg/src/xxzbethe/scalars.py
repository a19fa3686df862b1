"""Scalar functions of the spectral parameter entering the functional relations.

Each product-shaped scalar has a ``*_product(params)`` builder returning a
:class:`HyperbolicProduct`, so other modules can shift, mirror, multiply and
differentiate it exactly. The plain functions evaluate at a point.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from ._internal.factors import HyperbolicProduct, ch, sh
from .exceptions import PoleAtDenominator
from .models import ModelParams

logger = logging.getLogger(__name__)

# |denominator| below this counts as a pole.
POLE_TOLERANCE = 1e-12


def _spin_offsets(params: ModelParams, start: int) -> list[complex]:
    """(s - k + 1/2) * eta for k = start .. 2s - 1."""
    return [(params.two_s - 2 * k + 1) / 2 * params.eta for k in range(start, params.two_s)]


@lru_cache(maxsize=256)
def xi_product(params: ModelParams) -> HyperbolicProduct:
    eta = params.eta
    return HyperbolicProduct.of(1.0, sh(1, eta), sh(1, -eta))


@lru_cache(maxsize=256)
def boundary_product(params: ModelParams) -> HyperbolicProduct:
    """2^4 times the eight boundary factors of delta^(s)."""
    eta = params.eta
    factors = []
    for alpha, beta in ((params.alpha_minus, params.beta_minus), (params.alpha_plus, params.beta_plus)):
        factors += [sh(1, alpha + eta), sh(1, -alpha + eta), ch(1, beta + eta), ch(1, -beta + eta)]
    return HyperbolicProduct.of(16.0, *factors)


@lru_cache(maxsize=256)
def delta_product(params: ModelParams) -> HyperbolicProduct:
    """delta^(s)(u) as a product of hyperbolic factors."""
    eta = params.eta
    xi = xi_product(params)
    bulk = HyperbolicProduct(1.0 + 0j)
    for offset in _spin_offsets(params, 0):
        bulk = bulk * xi.shifted(offset)
    ratio = HyperbolicProduct.of(1.0, sh(2, 0), sh(2, 4 * eta), sh(2, eta, -1), sh(2, 3 * eta, -1))
    return bulk ** (2 * params.n) * ratio * boundary_product(params)


@lru_cache(maxsize=256)
def g_product(params: ModelParams) -> HyperbolicProduct:
    """g^(1/2,s)(u)^(2N); the empty product (s = 1/2) is 1."""
    return HyperbolicProduct.of(1.0, *(sh(1, offset, 2 * params.n) for offset in _spin_offsets(params, 1)))


@lru_cache(maxsize=256)
def gamma_product(params: ModelParams) -> HyperbolicProduct:
    eta = params.eta
    two_n = 2 * params.n
    return HyperbolicProduct.of(1.0, sh(2, 0), sh(2, 2 * eta), sh(1, 0, -two_n), sh(1, eta, -two_n))


@lru_cache(maxsize=256)
def f0_product(params: ModelParams) -> HyperbolicProduct:
    power = 2 * params.two_s * params.n
    scale = 2.0 ** (-params.two_s * 2 * (params.q - 1) * params.n)
    if not params.r_odd:
        return HyperbolicProduct.of((-1) ** params.n * scale, sh(params.q, 0, power))
    sign = (-1) ** (params.n + 1)
    if params.two_s % 2:
        return HyperbolicProduct.of(sign * scale, sh(params.q, 0, power))
    return HyperbolicProduct.of(sign * scale, ch(params.q, 0, power))


def _guard(product: HyperbolicProduct, u: complex, name: str) -> None:
    distance = product.pole_distance(u)
    if distance < POLE_TOLERANCE:
        raise PoleAtDenominator(name, u, distance=distance)


def xi(u: complex, params: ModelParams) -> complex:
    """sh(u + eta) sh(u - eta)."""
    return xi_product(params).value(u)


def delta_s(u: complex, params: ModelParams) -> complex:
    """Quantum-determinant scalar delta^(s)(u) of the fusion hierarchy."""
    product = delta_product(params)
    _guard(product, u, "delta_s")
    return product.value(u)


def f0(u: complex, params: ModelParams) -> complex:
    return f0_product(params).value(u)


def _theta_sign(params: ModelParams) -> int:
    if not params.r_odd:
        return -1
    if params.two_s % 2:
        return (-1) ** params.n
    return 1


def f1(u: complex, params: ModelParams) -> complex:
    """Boundary part of f(u); the theta-term sign depends on r and s parity."""
    q = params.q
    a_m, a_p, b_m, b_p = params.alpha_minus, params.alpha_plus, params.beta_minus, params.beta_plus
    even_part = np.sinh(q * a_m) * np.cosh(q * b_m) * np.sinh(q * a_p) * np.cosh(q * b_p)
    odd_part = np.cosh(q * a_m) * np.sinh(q * b_m) * np.cosh(q * a_p) * np.sinh(q * b_p)
    theta_part = np.cosh(q * (params.theta_minus - params.theta_plus))
    ch2 = np.cosh(q * u) ** 2
    sh2 = np.sinh(q * u) ** 2
    bracket = even_part * ch2 - odd_part * sh2 - _theta_sign(params) * theta_part * sh2 * ch2
    return complex((-1) ** (params.n + 1) * 2.0 ** (5 - 2 * q) * bracket)


def f_total(u: complex, params: ModelParams) -> complex:
    """f(u) = f0(u) * f1(u)."""
    return f0(u, params) * f1(u, params)


def g_rescale(u: complex, params: ModelParams) -> complex:
    """g^(1/2,s)(u)^(2N), the factor divided out of the spin-s eigenvalue."""
    return g_product(params).value(u)


def gamma_rescale(u: complex, params: ModelParams) -> complex:
    """sh(2u) sh(2u + 2 eta) / [sh u sh(u + eta)]^(2N)."""
    product = gamma_product(params)
    _guard(product, u, "gamma_rescale")
    return product.value(u)
