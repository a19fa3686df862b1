"""Dense spin-1/2 and spin-1 Hamiltonians and their energy constants."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import BoundarySingularity, InputError, UnsupportedError
from .models import EnergyConstants, ModelParams, SpinTag
from .operators import site_operator, transfer_derivative0

logger = logging.getLogger(__name__)

SINGULAR_TOLERANCE = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

SPIN1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)
SPIN1_PLUS = np.array([[0, np.sqrt(2), 0], [0, 0, np.sqrt(2)], [0, 0, 0]], dtype=complex)
SPIN1_MINUS = SPIN1_PLUS.T.copy()
SPIN1_X = (SPIN1_PLUS + SPIN1_MINUS) / 2
SPIN1_Y = (SPIN1_PLUS - SPIN1_MINUS) / 2j


@dataclass(frozen=True)
class BoundaryCoefficients:
    """Spin-1 boundary couplings.

    Attributes:
        a: a_1 .. a_8 at site 1.
        b: b_1 .. b_8 at site N.
        a0: Normalisation of the site-1 coefficients.
        b0: Normalisation of the site-N coefficients.
    """

    a: tuple[complex, ...]
    b: tuple[complex, ...]
    a0: complex
    b0: complex


def _nonzero(value: complex, what: str) -> complex:
    if abs(value) < SINGULAR_TOLERANCE:
        raise BoundarySingularity(f"{what} vanishes", context={"term": what, "value": value})
    return value


def _require_spin(params: ModelParams, two_s: int) -> None:
    if params.two_s != two_s:
        raise UnsupportedError(
            f"Hamiltonian needs two_s={two_s}, got {params.two_s}",
            context={"two_s": params.two_s},
        )


def hamiltonian_half(params: ModelParams, *, boundary: bool = True) -> np.ndarray:
    """Open spin-1/2 XXZ Hamiltonian with nondiagonal boundary fields."""
    _require_spin(params, 1)
    n = params.n
    eta = params.eta
    dim = 2**n
    ops = {
        (name, site): site_operator(matrix, site, n)
        for site in range(1, n + 1)
        for name, matrix in (("x", SIGMA_X), ("y", SIGMA_Y), ("z", SIGMA_Z))
    }
    h = np.zeros((dim, dim), dtype=complex)
    for site in range(1, n):
        h += 0.5 * (
            ops["x", site] @ ops["x", site + 1]
            + ops["y", site] @ ops["y", site + 1]
            + np.cosh(eta) * ops["z", site] @ ops["z", site + 1]
        )
    if not boundary:
        return h

    for site, alpha, beta, theta, sign in (
        (1, params.alpha_minus, params.beta_minus, params.theta_minus, 1),
        (n, params.alpha_plus, params.beta_plus, params.theta_plus, -1),
    ):
        sh_alpha = _nonzero(np.sinh(alpha), "sh(alpha)")
        ch_beta = _nonzero(np.cosh(beta), "ch(beta)")
        transverse = (np.cosh(theta) * ops["x", site] + 1j * np.sinh(theta) * ops["y", site]) / (sh_alpha * ch_beta)
        longitudinal = sign * np.cosh(alpha) / sh_alpha * np.tanh(beta) * ops["z", site]
        h += 0.5 * np.sinh(eta) * (longitudinal + transverse)
    return h


def _site_coefficients(alpha: complex, beta: complex, theta: complex, eta: complex) -> tuple[list[complex], complex]:
    a0 = 1.0 / _nonzero(
        np.sinh(alpha - eta / 2) * np.sinh(alpha + eta / 2) * np.cosh(beta - eta / 2) * np.cosh(beta + eta / 2),
        "a0 denominator",
    )
    sh_eta, sh_2eta = np.sinh(eta), np.sinh(2 * eta)
    ch_pow = np.power(np.cosh(eta) + 0j, 1.5)
    plus = np.cosh(beta) * np.sinh(alpha) * np.cosh(eta / 2) + np.cosh(alpha) * np.sinh(beta) * np.sinh(eta / 2)
    minus = np.cosh(beta) * np.sinh(alpha) * np.cosh(eta / 2) - np.cosh(alpha) * np.sinh(beta) * np.sinh(eta / 2)
    coefficients = [
        0.25 * a0 * (np.cosh(2 * alpha) - np.cosh(2 * beta) + np.cosh(eta)) * sh_2eta * sh_eta,
        0.25 * a0 * np.sinh(2 * alpha) * np.sinh(2 * beta) * sh_2eta,
        -0.125 * a0 * np.exp(2 * theta) * sh_2eta * sh_eta,
        -0.125 * a0 * np.exp(-2 * theta) * sh_2eta * sh_eta,
        a0 * np.exp(theta) * plus * sh_eta * ch_pow,
        a0 * np.exp(-theta) * plus * sh_eta * ch_pow,
        -a0 * np.exp(theta) * minus * sh_eta * ch_pow,
        -a0 * np.exp(-theta) * minus * sh_eta * ch_pow,
    ]
    return [complex(c) for c in coefficients], complex(a0)


def boundary_coefficients(params: ModelParams) -> BoundaryCoefficients:
    """a_i from (alpha_-, beta_-, theta_-); b_i from (alpha_+, -beta_+, theta_+)."""
    eta = params.eta
    a, a0 = _site_coefficients(params.alpha_minus, params.beta_minus, params.theta_minus, eta)
    b, b0 = _site_coefficients(params.alpha_plus, -params.beta_plus, params.theta_plus, eta)
    return BoundaryCoefficients(a=tuple(a), b=tuple(b), a0=a0, b0=b0)


def _boundary_term(coefficients: tuple[complex, ...], site: int, n: int) -> np.ndarray:
    sz = site_operator(SPIN1_Z, site, n)
    sp = site_operator(SPIN1_PLUS, site, n)
    sm = site_operator(SPIN1_MINUS, site, n)
    terms = (sz @ sz, sz, sp @ sp, sm @ sm, sp @ sz, sz @ sm, sz @ sp, sm @ sz)
    return sum(c * term for c, term in zip(coefficients, terms, strict=True))


def hamiltonian_one(params: ModelParams) -> np.ndarray:
    """Open spin-1 XXZ (Fateev-Zamolodchikov bulk) Hamiltonian with boundary terms."""
    _require_spin(params, 2)
    n = params.n
    if n < 2:
        raise InputError("The spin-1 Hamiltonian needs at least two sites", context={"n": n})
    eta = params.eta
    spin = {
        (name, site): site_operator(matrix, site, n)
        for site in range(1, n + 1)
        for name, matrix in (("x", SPIN1_X), ("y", SPIN1_Y), ("z", SPIN1_Z))
    }
    h = np.zeros((3**n, 3**n), dtype=complex)
    sh2 = np.sinh(eta) ** 2
    sh2_half = np.sinh(eta / 2) ** 2
    for site in range(1, n):
        perp = spin["x", site] @ spin["x", site + 1] + spin["y", site] @ spin["y", site + 1]
        zz = spin["z", site] @ spin["z", site + 1]
        dot = perp + zz
        sz_left = spin["z", site] @ spin["z", site]
        sz_right = spin["z", site + 1] @ spin["z", site + 1]
        h += dot - dot @ dot
        h += 2 * sh2 * (zz + sz_left + sz_right - zz @ zz)
        h -= 4 * sh2_half * (perp @ zz + zz @ perp)

    coefficients = boundary_coefficients(params)
    h += _boundary_term(coefficients.a, 1, n)
    h += _boundary_term(coefficients.b, n, n)
    return h


def energy_constants(params: ModelParams, spin_tag: SpinTag) -> EnergyConstants:
    """c1 and c2 in E = c1 dLambda~/du(0) + c2 for spin 1/2 or spin 1."""
    eta = params.eta
    n = params.n
    ch = np.cosh
    sh = np.sinh
    if spin_tag == SpinTag.HALF:
        denominator = (
            16
            * sh(params.alpha_minus)
            * ch(params.beta_minus)
            * sh(params.alpha_plus)
            * ch(params.beta_plus)
            * sh(eta) ** (2 * n - 1)
            * ch(eta)
        )
        c1 = -1.0 / _nonzero(denominator, "c1 denominator")
        c2 = -(sh(eta) ** 2 + n * ch(eta) ** 2) / (2 * _nonzero(ch(eta), "ch(eta)"))
        return EnergyConstants(c1=c1, c2=c2, spin_tag=spin_tag)

    a_m, b_m, a_p, b_p = params.alpha_minus, params.beta_minus, params.alpha_plus, params.beta_plus
    half = eta / 2
    boundary = (
        sh(a_m - half) * sh(a_m + half) * ch(b_m - half) * ch(b_m + half)
        * sh(a_p - half) * sh(a_p + half) * ch(b_p - half) * ch(b_p + half)
    )
    denominator = 16 * (sh(2 * eta) * sh(eta)) ** (2 * n) * sh(3 * eta) * boundary
    c1 = ch(eta) / _nonzero(denominator, "c1 denominator")

    a0 = boundary_coefficients(params).a0
    b = 2 * (-ch(2 * b_m) - ch(eta) ** 3 + ch(2 * a_m) * (1 + ch(2 * b_m) * ch(eta)))
    d = _nonzero(-4 * sh(3 * eta) * sh(a_p + half) * sh(a_p - half) * ch(b_p + half) * ch(b_p - half), "d")
    c2e, c4e = ch(2 * eta), ch(4 * eta)
    first = -2 * ch(2 * a_p) * (ch(eta) * (3 + 7 * c2e + c4e) + ch(2 * b_p) * (4 + 5 * c2e + 2 * c4e)) + 2 * ch(
        eta
    ) * (ch(2 * b_p) * (3 + 7 * c2e + c4e) + ch(eta) * (5 + 3 * c2e + 3 * c4e))
    second = (
        ch(2 * b_p) * (2 + 4 * ch(eta) * ch(3 * eta))
        + ch(eta) * (5 * c2e + c4e)
        - 2 * ch(2 * a_p) * (1 + c2e + ch(2 * b_p) * (ch(eta) + 2 * ch(3 * eta)) + c4e)
    )
    c2 = (
        -a0 / 4 * b * ch(eta)
        - (n - 1) * (4 + c2e)
        + 2 * n * ch(eta) ** 2
        - sh(eta) / (2 * d) * first
        - sh(2 * eta) / (2 * d) * second
    )
    return EnergyConstants(c1=complex(c1), c2=complex(c2), spin_tag=spin_tag)


def derivative_identity_residual(
    params: ModelParams,
    spin_tag: SpinTag = SpinTag.HALF,
    *,
    constants: EnergyConstants | None = None,
) -> float:
    """||H - c1 t'(0) - c2 I||_F / ||H||_F for the spin-1/2 chain."""
    if spin_tag != SpinTag.HALF:
        raise UnsupportedError("The operator derivative identity is checked for spin-1/2 only")
    constants = constants or energy_constants(params, spin_tag)
    h = hamiltonian_half(params)
    derivative = transfer_derivative0(params)
    gap = h - constants.c1 * derivative - constants.c2 * np.eye(h.shape[0])
    return float(np.linalg.norm(gap) / np.linalg.norm(h))
