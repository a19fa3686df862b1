"""Dense R, K and transfer matrices of the open spin-1/2 chain and its spin-1 fusion.

Quantum legs are little-endian: site 1 is the fastest-varying tensor index,
so ``site_operator(op, 1, n)`` is ``kron(identity, op)``. Monodromies are
stored as operator-valued 2x2 arrays of shape (2, 2, D, D) indexed by the
auxiliary row and column.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from functools import lru_cache

import numpy as np

from ._internal.numerics import checked_derivative
from .exceptions import DimensionTooLarge, UnsupportedError, UnsupportedQ
from .models import ModelParams
from .scalars import delta_s, f_total

logger = logging.getLogger(__name__)

MAX_SITES = 12

# Terms of the q = 3 and q = 5 functional relations: (sign, delta shifts, t shifts) in units of eta.
_RELATION_TERMS: dict[int, list[tuple[int, tuple[int, ...], tuple[int, ...]]]] = {
    3: [
        (1, (), (0, 1, 2)),
        (-1, (-1,), (1,)),
        (-1, (0,), (2,)),
        (-1, (1,), (0,)),
    ],
    5: [
        (1, (), (0, 1, 2, 3, 4)),
        (1, (1, -2), (0,)),
        (1, (0, 2), (4,)),
        (1, (1, -1), (3,)),
        (-1, (1,), (0, 3, 4)),
        (1, (0, -2), (2,)),
        (-1, (0,), (2, 3, 4)),
        (1, (-1, 2), (1,)),
        (-1, (2,), (0, 1, 4)),
        (-1, (-2,), (0, 1, 2)),
        (-1, (-1,), (1, 2, 3)),
    ],
}


def site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-site operator at ``site`` (1-based) of an n-site chain."""
    d = op.shape[0]
    if not 1 <= site <= n:
        raise ValueError(f"site must be in 1..{n}, got {site}")
    return np.kron(np.eye(d ** (n - site)), np.kron(op, np.eye(d ** (site - 1))))


def r_matrix(u: complex, params: ModelParams) -> np.ndarray:
    """Bulk R(u) on C^2 x C^2."""
    eta = params.eta
    a = np.sinh(u + eta)
    b = np.sinh(u)
    c = np.sinh(eta)
    return np.array(
        [[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]],
        dtype=complex,
    )


def _k_matrix(u: complex, alpha: complex, beta: complex, theta: complex) -> np.ndarray:
    diag = np.sinh(alpha) * np.cosh(beta) * np.cosh(u)
    anti = np.cosh(alpha) * np.sinh(beta) * np.sinh(u)
    return np.array(
        [
            [2 * (diag + anti), np.exp(theta) * np.sinh(2 * u)],
            [np.exp(-theta) * np.sinh(2 * u), 2 * (diag - anti)],
        ],
        dtype=complex,
    )


def k_minus(u: complex, params: ModelParams) -> np.ndarray:
    return _k_matrix(u, params.alpha_minus, params.beta_minus, params.theta_minus)


def k_plus(u: complex, params: ModelParams) -> np.ndarray:
    """K-(-u - eta) with (alpha, beta, theta) -> (-alpha_+, -beta_+, theta_+)."""
    return _k_matrix(-u - params.eta, -params.alpha_plus, -params.beta_plus, params.theta_plus)


def _check_dimension(params: ModelParams) -> int:
    if params.two_s != 1:
        raise UnsupportedError(
            "The homogeneous transfer matrix is built for spin-1/2 sites only",
            context={"two_s": params.two_s},
        )
    return _check_sites(params.n)


def _check_sites(sites: int) -> int:
    if sites > MAX_SITES:
        raise DimensionTooLarge(2**sites, 2**MAX_SITES)
    return 2**sites


def _r_blocks(u: complex, site: int, sites: int, params: ModelParams) -> np.ndarray:
    """R_0n(u) as a (2, 2, D, D) array of auxiliary blocks."""
    r = r_matrix(u, params)
    blocks = np.empty((2, 2, 2**sites, 2**sites), dtype=complex)
    for a in range(2):
        for c in range(2):
            blocks[a, c] = site_operator(r[2 * a : 2 * a + 2, 2 * c : 2 * c + 2], site, sites)
    return blocks


def _aux_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.einsum("abij,bcjk->acik", left, right)


def monodromies(
    u: complex,
    params: ModelParams,
    inhomogeneities: Sequence[complex] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """T(u) = R_0L(u - th_L) ... R_01(u - th_1) and T^(u) = R_01(u + th_1) ... R_0L(u + th_L).

    Without ``inhomogeneities`` this is the homogeneous spin-1/2 chain of ``params``.
    """
    if inhomogeneities is None:
        _check_dimension(params)
        inhomogeneities = [0j] * params.n
    sites = len(inhomogeneities)
    dim = _check_sites(sites)
    identity = np.zeros((2, 2, dim, dim), dtype=complex)
    identity[0, 0] = identity[1, 1] = np.eye(dim)
    forward = identity
    backward = identity
    for site, theta in enumerate(inhomogeneities, start=1):
        left = _r_blocks(u - theta, site, sites, params)
        right = left if theta == 0 else _r_blocks(u + theta, site, sites, params)
        forward = _aux_product(left, forward)
        backward = _aux_product(backward, right)
    return forward, backward


def _open_transfer(u: complex, params: ModelParams, forward: np.ndarray, backward: np.ndarray) -> np.ndarray:
    left = np.einsum("ab,bcij->acij", k_plus(u, params), forward)
    right = np.einsum("cd,daij->caij", k_minus(u, params), backward)
    return np.einsum("acij,cajk->ik", left, right)


def transfer_half(u: complex, params: ModelParams) -> np.ndarray:
    """t(u) = tr_0 K+_0(u) T_0(u) K-_0(u) T^_0(u)."""
    return _open_transfer(u, params, *monodromies(u, params))


def fusion_inhomogeneities(params: ModelParams) -> list[complex]:
    """-eta/2, +eta/2 on each pair of spin-1/2 sites standing for one spin-1 site."""
    half = params.eta / 2
    return [-half, half] * params.n


@lru_cache(maxsize=16)
def fused_isometry(n: int) -> np.ndarray:
    """(4^n, 3^n) isometry onto the symmetric subspace of every site pair.

    Pair k covers spin-1/2 sites 2k-1 and 2k; its columns are |m=+1>, |m=0>
    and |m=-1> in the order of the spin-1 site basis.
    """
    pair = np.zeros((4, 3))
    pair[0, 0] = 1.0
    pair[1, 1] = pair[2, 1] = 1 / np.sqrt(2)
    pair[3, 2] = 1.0
    isometry = np.ones((1, 1))
    for _ in range(n):
        isometry = np.kron(pair, isometry)
    return isometry


def transfer_fused(u: complex, params: ModelParams) -> np.ndarray:
    """Spin-1 transfer matrix with spin-1/2 auxiliary space.

    The 2N-site spin-1/2 transfer matrix with :func:`fusion_inhomogeneities`
    leaves the symmetric subspace of every site pair invariant; this is its
    restriction there, a 3^N x 3^N matrix.
    """
    if params.two_s != 2:
        raise UnsupportedError("The fused transfer matrix is built for spin-1 sites", context={"two_s": params.two_s})
    forward, backward = monodromies(u, params, fusion_inhomogeneities(params))
    isometry = fused_isometry(params.n)
    return isometry.T @ _open_transfer(u, params, forward, backward) @ isometry


def transfer_matrix(u: complex, params: ModelParams) -> np.ndarray:
    """Transfer matrix of the params' spin: homogeneous spin-1/2 or fused spin-1."""
    if params.two_s == 1:
        return transfer_half(u, params)
    if params.two_s == 2:
        return transfer_fused(u, params)
    raise UnsupportedError("Transfer matrices are built for spin-1/2 and spin-1", context={"two_s": params.two_s})


def transfer_derivative0(params: ModelParams) -> np.ndarray:
    """dt/du at u = 0 by Richardson-extrapolated central differences."""
    return checked_derivative(lambda u: transfer_half(u, params), 0j, what="transfer_derivative0")


def commutator_residual(u: complex, v: complex, params: ModelParams) -> float:
    """||[t(u), t(v)]|| / (||t(u)|| ||t(v)||)."""
    tu = transfer_matrix(u, params)
    tv = transfer_matrix(v, params)
    scale = np.linalg.norm(tu) * np.linalg.norm(tv)
    return float(np.linalg.norm(tu @ tv - tv @ tu) / scale)


def yang_baxter_residual(u: complex, v: complex, params: ModelParams) -> float:
    """||R12(u-v) R13(u) R23(v) - R23(v) R13(u) R12(u-v)|| on C^2 x C^2 x C^2."""
    swap = np.eye(4)[[0, 2, 1, 3]]
    p23 = np.kron(np.eye(2), swap)
    r12 = np.kron(r_matrix(u - v, params), np.eye(2))
    r23 = np.kron(np.eye(2), r_matrix(v, params))
    r13 = p23 @ np.kron(r_matrix(u, params), np.eye(2)) @ p23
    return float(np.linalg.norm(r12 @ r13 @ r23 - r23 @ r13 @ r12))


def functional_relation_operator_residual(
    u: complex,
    params: ModelParams,
    f: Callable[[complex, ModelParams], complex] = f_total,
) -> float:
    """Frobenius norm of (q = 3 or 5 relation - f(u) I), relative to the leading product."""
    terms = _RELATION_TERMS.get(params.q)
    if terms is None:
        raise UnsupportedQ(params.q)
    dim = _check_dimension(params)
    eta = params.eta
    transfers = {k: transfer_half(u + k * eta, params) for k in range(params.q)}

    leading = np.eye(dim, dtype=complex)
    for k in range(params.q):
        leading = leading @ transfers[k]

    total = leading.copy()
    for sign, delta_shifts, t_shifts in terms[1:]:
        coefficient = sign * np.prod([delta_s(u + k * eta, params) for k in delta_shifts])
        product = np.eye(dim, dtype=complex)
        for k in t_shifts:
            product = product @ transfers[k]
        total += coefficient * product
    total -= f(u, params) * np.eye(dim)
    return float(np.linalg.norm(total) / np.linalg.norm(leading))
