"""Dense spectra, Bethe-root refinement, Q extraction and energies.

The numerical pipeline behind completeness checks:

* :func:`full_spectrum` diagonalizes a dense complex matrix and reports
  per-pair residuals.
* :class:`TransferEigenbranches` follows every eigenvalue branch of the
  commuting spin-1/2 or fused spin-1 transfer family.
* :func:`q_polynomial_from_lambda` turns one branch into Bethe roots by
  solving the (linear in Q) T-Q relation for the coefficients of Q.
* :func:`newton_refine` polishes roots with damped complex Newton steps and
  :func:`continue_roots` walks them through boundary-parameter space.
* :func:`energy_from_roots` evaluates the energy, cross-checking closed
  forms against the generic derivative route.
* :func:`match_spectra` and :func:`completeness_report` pair Bethe energies
  with the Hamiltonian spectrum.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from ._internal.errors import handle_linalg_errors
from ._internal.numerics import checked_derivative, reduce_to_strip
from .exceptions import (
    ConvergenceFailure,
    DimensionTooLarge,
    IncompleteMatch,
    InputError,
    LengthMismatch,
    MethodDisagreement,
    NoConvergence,
    NumericalError,
    PoleAtRoot,
    RankDeficiency,
    UnsupportedError,
)
from .golden import find_table
from .hamiltonians import energy_constants, hamiltonian_half, hamiltonian_one
from .models import BetheState, BoundaryCase, EnergyMethod, ModelParams, RefinementInfo, SpinTag
from .operators import transfer_matrix
from .qfunction import (
    CONVERGED_RESIDUAL,
    bethe_residuals,
    bethe_scales,
    bethe_terms,
    h_double_tilde_product,
    h_product,
    h_tilde_mirror_product,
    h_tilde_product,
    lambda_one_rescaled,
    lambda_tq_derivative,
    max_bethe_residual,
    q_derivative,
    q_eval,
    q_root_gradient,
    spin_one_boundary_product,
)
from .records import RunRecord

logger = logging.getLogger(__name__)

SPECTRUM_LIMIT = 1024
EIGEN_RESIDUAL = 1e-8

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
MAX_HALVINGS = 30

HOMOTOPY_STEPS = 8
HOMOTOPY_MIN_STEP = 1.0 / 256

STEP_RCOND = 1e-12

RANK_RATIO = 0.1
METHOD_AGREEMENT = 1e-7
# |sh((u+3 eta/2)/2) sh((u-eta/2)/2)| below which the spin-1 root sum is abandoned.
ROOT_SUM_GUARD = 1e-8
MATCH_TOLERANCE = 1e-6

# Generic base point for branch tracking; away from the special points of t(u).
BRANCH_BASE_POINT = 0.2137 + 0.4129j
DEGENERACY_TOLERANCE = 1e-8
FALLBACK_STEPS = 16

BOUNDARY_FIELDS = ("alpha_minus", "alpha_plus", "beta_minus", "beta_plus", "theta_minus", "theta_plus")


@dataclass
class SpectrumReport:
    """Eigenvalues or a pairing of two spectra.

    Attributes:
        eigenvalues: Eigenvalues (``full_spectrum``) or the left list (``match_spectra``).
        residual_norms: ||(A - lambda I) v|| / ||A|| per eigenpair; empty for pairings.
        pairing: Index into the right list matched to each left entry.
        max_pair_deviation: Largest |left - right| over the pairing.
        deviations: |left_i - right_pairing[i]| per entry.
    """

    eigenvalues: list[complex]
    residual_norms: list[float] = field(default_factory=list)
    pairing: list[int] = field(default_factory=list)
    max_pair_deviation: float = 0.0
    deviations: list[float] = field(default_factory=list)


@dataclass
class EnergyBreakdown:
    """Energy of one Bethe state split into its parts.

    Attributes:
        sum_term: Root-dependent part.
        boundary_term: Part depending only on boundary parameters.
        constant_term: c2-type constant.
        total: sum_term + boundary_term + constant_term.
        method: Closed form used, or the generic derivative route.
        generic: Generic-route total, when a closed form was cross-checked.
    """

    sum_term: complex
    boundary_term: complex
    constant_term: complex
    total: complex
    method: EnergyMethod
    generic: complex | None = None


# --- spectra -----------------------------------------------------------------


@handle_linalg_errors
def full_spectrum(m: Any) -> SpectrumReport:
    """All eigenvalues of a dense complex matrix with per-pair residuals."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("full_spectrum needs a square matrix", context={"shape": list(a.shape)})
    dim = a.shape[0]
    if dim > SPECTRUM_LIMIT:
        raise DimensionTooLarge(dim, SPECTRUM_LIMIT)
    if not np.all(np.isfinite(a)):
        raise ConvergenceFailure("Matrix has non-finite entries", context={"dim": dim})
    if dim == 0:
        return SpectrumReport(eigenvalues=[])

    values, vectors = scipy.linalg.eig(a)
    scale = float(np.linalg.norm(a)) or 1.0
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0) / scale
    worst = float(np.max(residuals))
    if not np.isfinite(worst) or worst > EIGEN_RESIDUAL:
        raise ConvergenceFailure(
            "Eigenpair residual above threshold",
            context={"dim": dim, "worst": worst, "threshold": EIGEN_RESIDUAL},
        )
    logger.debug("Diagonalized %dx%d matrix, worst residual %.2e", dim, dim, worst)
    return SpectrumReport(
        eigenvalues=[complex(v) for v in values],
        residual_norms=[float(r) for r in residuals],
        pairing=list(range(dim)),
    )


def _assign(left: Sequence[complex], right: Sequence[complex]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimal-total-distance assignment; rectangular inputs pair min(len) entries."""
    a = np.asarray(left, dtype=complex)
    b = np.asarray(right, dtype=complex)
    if a.size == 0 or b.size == 0:
        empty = np.zeros(0, dtype=int)
        return empty, empty, np.zeros(0)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return rows, cols, cost[rows, cols]


def match_spectra(a: Sequence[complex], b: Sequence[complex]) -> SpectrumReport:
    """Bijection between two equal-length spectra minimizing the summed distance.

    Examples:
        >>> match_spectra([1, 2j], [2j, 1]).pairing
        [1, 0]
    """
    if len(a) != len(b):
        raise LengthMismatch(len(a), len(b))
    _, cols, deviations = _assign(a, b)
    return SpectrumReport(
        eigenvalues=[complex(x) for x in a],
        pairing=[int(c) for c in cols],
        max_pair_deviation=float(deviations.max(initial=0.0)),
        deviations=[float(d) for d in deviations],
    )


# --- Newton refinement -------------------------------------------------------


def _weighted_merit(state: BetheState, weights: np.ndarray) -> tuple[np.ndarray, float]:
    with np.errstate(all="ignore"):
        forward, backward = bethe_terms(state)
        residual = (forward + backward) / weights
        merit = float(np.max(np.abs(residual), initial=0.0))
    return residual, merit if np.isfinite(merit) else np.inf


def _jacobian(state: BetheState, weights: np.ndarray) -> np.ndarray:
    """d/du_k of the weighted residuals, exact through the pair-factor form of Q."""
    params = state.params
    step = params.p * params.eta
    forward_h = h_tilde_product(params)
    backward_h = h_tilde_mirror_product(params)
    jac = np.zeros((state.m, state.m), dtype=complex)
    for j, u in enumerate(state.roots):
        up, um = u + step, u - step
        hp, hm = forward_h.value(u), backward_h.value(u)
        row = hp * q_root_gradient(up, state) + hm * q_root_gradient(um, state)
        row[j] += (
            forward_h.derivative(u) * q_eval(up, state)
            + hp * q_derivative(up, state)
            + backward_h.derivative(u) * q_eval(um, state)
            + hm * q_derivative(um, state)
        )
        jac[j] = row / weights[j]
    return jac


def _newton_step(jac: np.ndarray, residual: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares step; rows of roots pinned on h~ zeros are near zero."""
    if not (np.all(np.isfinite(jac)) and np.all(np.isfinite(residual))):
        logger.debug("Non-finite Jacobian, no step taken")
        return np.zeros_like(residual)
    step, _, rank, _ = np.linalg.lstsq(jac, -residual, rcond=STEP_RCOND)
    if rank < len(residual):
        logger.debug("Rank-deficient Jacobian (%d of %d)", rank, len(residual))
    return step


def newton_refine(seed: BetheState, max_iter: int = NEWTON_MAX_ITER, tol: float = NEWTON_TOL) -> BetheState:
    """Damped complex Newton on the Bethe equations.

    The residual of root j is (a_j + b_j) / w_j with a_j, b_j the two T-Q
    terms and w_j = |Q'(u_j)| L from :func:`bethe_scales`, frozen for the
    duration of a step. A step is halved until the largest weighted residual
    decreases. Convergence is judged on :func:`max_bethe_residual`.

    Raises:
        NoConvergence: With the best iterate when ``tol`` is not reached.
    """
    state = seed
    merit_history = [max_bethe_residual(state)]
    step_merits: list[tuple[float, float]] = []
    halvings = 0
    best = (merit_history[0], state)

    def info(iterations: int, converged: bool) -> RefinementInfo:
        return RefinementInfo(
            iterations=iterations,
            halvings=halvings,
            merit_history=tuple(merit_history),
            step_merits=tuple(step_merits),
            converged=converged,
        )

    iteration = 0
    while merit_history[-1] >= tol and iteration < max_iter:
        with np.errstate(all="ignore"):
            weights = bethe_scales(state)
        residual, merit = _weighted_merit(state, weights)
        step = _newton_step(_jacobian(state, weights), residual)
        roots = np.asarray(state.roots, dtype=complex)

        scale = 1.0
        accepted = None
        for _ in range(MAX_HALVINGS + 1):
            trial = state.with_roots(roots + scale * step)
            _, trial_merit = _weighted_merit(trial, weights)
            if trial_merit < merit:
                accepted = (trial, trial_merit)
                break
            scale /= 2
            halvings += 1
        if accepted is None:
            logger.debug("Newton stalled at iteration %d (merit %.3e)", iteration, merit)
            break

        state, trial_merit = accepted
        iteration += 1
        step_merits.append((merit, trial_merit))
        merit_history.append(max_bethe_residual(state))
        logger.debug("Newton iteration %d: step %.3g, residual %.3e", iteration, scale, merit_history[-1])
        if merit_history[-1] < best[0]:
            best = (merit_history[-1], state)

    if merit_history[-1] < tol:
        return state.with_roots(state.roots, info(iteration, True))

    best_state = best[1].with_roots(best[1].roots, info(iteration, False))
    raise NoConvergence(
        f"Newton refinement stopped at residual {best[0]:.3e} (tol {tol:.1e})",
        best_state=best_state,
        residuals=bethe_residuals(best_state),
        iterations=iteration,
    )


# --- homotopy ------------------------------------------------------------------


def _interpolate(start: ModelParams, target: ModelParams, t: float) -> ModelParams:
    changes = {}
    for name in BOUNDARY_FIELDS:
        a, b = getattr(start, name), getattr(target, name)
        changes[name] = a + (b - a) * t
    return start.with_changes(**changes)


def continue_roots(
    state: BetheState,
    target: ModelParams,
    *,
    steps: int = HOMOTOPY_STEPS,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> BetheState:
    """Carry a solved state to ``target`` by linear homotopy in the boundary parameters.

    Each stage is Newton-refined; a failed stage halves the step, down to
    ``HOMOTOPY_MIN_STEP`` of the full path.
    """
    start = state.params
    structure = ("n", "two_s", "r", "q", "case", "free_alpha_side", "free_beta_side")
    if any(getattr(start, key) != getattr(target, key) for key in structure):
        raise InputError(
            "Homotopy only moves boundary parameters",
            context={key: [str(getattr(start, key)), str(getattr(target, key))] for key in structure},
        )
    current = state
    t = 0.0
    dt = 1.0 / steps
    while t < 1.0:
        t_next = min(1.0, t + dt)
        params = target if t_next == 1.0 else _interpolate(start, target, t_next)
        try:
            current = newton_refine(BetheState(params=params, roots=current.roots), max_iter, tol)
        except NumericalError as exc:
            dt /= 2
            logger.warning("Homotopy stage t=%.4f failed (%s); step reduced to %.4f", t_next, exc.code, dt)
            if dt < HOMOTOPY_MIN_STEP:
                raise
            continue
        t = t_next
        logger.debug("Homotopy reached t=%.4f", t)
    return current


# --- transfer-matrix branches ------------------------------------------------


class TransferEigenbranches:
    """Eigenvalue branches u -> Lambda_k(u) of the commuting transfer family.

    The eigenvectors of t(u0) are shared by the whole family, so
    Lambda_k(u) = (l_k^H t(u) r_k) / (l_k^H r_k). When t(u0) is degenerate or
    its eigenvectors are ill-conditioned, branches are followed instead by
    nearest-neighbour continuation along the segment from u0.
    """

    def __init__(self, params: ModelParams, u0: complex = BRANCH_BASE_POINT) -> None:
        self.params = params
        self.u0 = complex(u0)
        base = transfer_matrix(self.u0, params)
        values, left, right = scipy.linalg.eig(base, left=True, right=True)
        self.base_values = values
        self._left = left
        self._right = right
        self._overlaps = np.einsum("ij,ij->j", left.conj(), right)
        scale = max(float(np.max(np.abs(values))), 1.0)
        gaps = np.abs(values[:, None] - values[None, :])
        np.fill_diagonal(gaps, np.inf)
        self.degenerate = bool(
            np.min(np.abs(self._overlaps)) < DEGENERACY_TOLERANCE
            or (len(values) > 1 and np.min(gaps) < DEGENERACY_TOLERANCE * scale)
        )
        if self.degenerate:
            logger.warning("t(u0) is degenerate at u0=%s; using nearest-neighbour continuation", self.u0)

    def __len__(self) -> int:
        return len(self.base_values)

    def at(self, u: complex) -> np.ndarray:
        """All branch values at u, in the order of the eigenvalues of t(u0)."""
        if not self.degenerate:
            t = transfer_matrix(u, self.params)
            return np.einsum("ik,ij,jk->k", self._left.conj(), t, self._right) / self._overlaps
        return self._continue_to(complex(u))

    def _continue_to(self, u: complex) -> np.ndarray:
        current = self.base_values.copy()
        for k in range(1, FALLBACK_STEPS + 1):
            x = self.u0 + (u - self.u0) * k / FALLBACK_STEPS
            values = scipy.linalg.eigvals(transfer_matrix(x, self.params))
            _, cols, _ = _assign(current, values)
            current = values[cols]
        return current


def sample_points(params: ModelParams, count: int, seed: int = 0) -> list[complex]:
    """Deterministic generic spectral parameters away from the poles of h."""
    rng = np.random.default_rng(seed)
    h = h_tilde_product(params)
    h_mirror = h_tilde_mirror_product(params)
    points: list[complex] = []
    while len(points) < count:
        u = complex(rng.uniform(-0.4, 0.4), rng.uniform(-np.pi, np.pi))
        if min(h.pole_distance(u), h_mirror.pole_distance(u)) > 1e-3:
            points.append(u)
    return points


# --- Q extraction ------------------------------------------------------------


def canonical_root(u: complex, params: ModelParams) -> complex:
    """Strip representative of {u, mirror(u)} with smaller |Im|, ties to larger Re."""
    first = reduce_to_strip(u)
    second = reduce_to_strip(params.mirror(u))
    if abs(abs(first.imag) - abs(second.imag)) > 1e-12:
        return first if abs(first.imag) < abs(second.imag) else second
    return first if first.real >= second.real else second


@handle_linalg_errors
def q_polynomial_from_lambda(
    params: ModelParams,
    lambda_samples: Callable[[complex], complex],
    *,
    rescaled: bool = True,
    points: Sequence[complex] | None = None,
    seed: int = 0,
) -> BetheState:
    """Bethe roots whose Q reproduces one eigenvalue branch through the T-Q relation.

    With x = ch(u + sigma/2), Q(u) = 2^-M prod_j (x - x_j) is a monic degree-M
    polynomial P in x. The relation Lambda Q(u) - h(u) Q(u + p eta)
    - h(mirror u) Q(u - p eta) = 0 at every sample point is linear in the
    coefficients of P; they span the null direction of the sampled system.

    Raises:
        RankDeficiency: When the null direction is not isolated.
    """
    m = params.m_roots
    sigma = params.shift
    step = params.p * params.eta
    if points is None:
        points = sample_points(params, 3 * (m + 1), seed)
    if len(points) < 2 * (m + 2):
        raise InputError(f"Need at least {2 * (m + 2)} sample points, got {len(points)}")
    forward = h_tilde_product(params) if rescaled else h_product(params)
    backward = forward.mirrored(params.mirror(0j))

    powers = np.arange(m + 1)
    rows = []
    for u in points:
        lam = complex(lambda_samples(u))
        x0, xp, xm = np.cosh(u + sigma / 2), np.cosh(u + step + sigma / 2), np.cosh(u - step + sigma / 2)
        rows.append(lam * x0**powers - forward.value(u) * xp**powers - backward.value(u) * xm**powers)
    system = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(system)):
        raise RankDeficiency(np.inf, params=params)

    system /= np.linalg.norm(system, axis=1, keepdims=True)
    column_scale = np.linalg.norm(system, axis=0)
    column_scale[column_scale == 0.0] = 1.0
    _, singular, vh = np.linalg.svd(system / column_scale, full_matrices=False)
    ratio = float(singular[-1] / singular[-2]) if singular[-2] > 0 else np.inf
    if ratio > RANK_RATIO:
        raise RankDeficiency(ratio, params=params)

    coefficients = vh[-1].conj() / column_scale
    if abs(coefficients[-1]) == 0.0:
        raise RankDeficiency(ratio, params=params)
    coefficients = coefficients / coefficients[-1]
    x_roots = np.roots(coefficients[::-1])
    roots = [canonical_root(complex(np.arccosh(x)) - sigma / 2, params) for x in x_roots]
    logger.debug("Extracted %d roots (singular ratio %.2e)", len(roots), ratio)
    return BetheState(params=params, roots=roots)


# --- energies ------------------------------------------------------------------


def _spin_half_closed_form(state: BetheState) -> EnergyBreakdown:
    """Root-sum energy of the spin-1/2 chain, Case 2 with odd r."""
    params = state.params
    eta = params.eta
    roots = np.asarray(state.roots, dtype=complex)
    eps = -1 if params.n % 2 else 1
    a_m, a_p = params.alpha_minus, params.alpha_plus
    sum_term = (
        0.5 * np.sinh(eta) * np.cosh(eta / 2) * np.sum(1.0 / (np.sinh(roots / 2) * np.cosh((roots + eta) / 2)))
    )
    boundary_term = 0.5 * np.sinh(eta) * (
        -1 / np.tanh(a_m)
        + eps / np.tanh(a_p)
        - eps * np.tanh((a_p - eps * eta) / 2)
        + np.tanh((a_m + eta) / 2)
    )
    constant_term = 0.5 * (params.n - 1) * np.cosh(eta)
    total = sum_term + boundary_term + constant_term
    return EnergyBreakdown(
        sum_term=complex(sum_term),
        boundary_term=complex(boundary_term),
        constant_term=complex(constant_term),
        total=complex(total),
        method=EnergyMethod.CLOSED_FORM_HALF_ODD_R,
    )


def _spin_one_closed_form(state: BetheState) -> EnergyBreakdown:
    """Root-sum energy of the spin-1 chain, Case 1 with even r.

    E = 1/2 sh(2 eta) sh(eta) sum_k 1 / [sh((u_k + 3 eta/2)/2) sh((u_k - eta/2)/2)]
        + c1 [A'(0) - B'(0) + C'(0)] + c2

    with A = hh(u + eta/2) hh(u - eta/2), B = hh(mirror(u - eta/2)) hh(u + eta/2),
    hh = sh(2x + eta) h~ and C = -gamma(u) delta(u - eta/2). B and C enter with
    the signs of the fused eigenvalue gamma Lambda^(1) = A rho - B rho' + C.
    The root sum does not involve c1: c1 A(0) = sh(2 eta)/2 in this case.
    """
    params = state.params
    eta = params.eta
    half = eta / 2
    constants = energy_constants(params, SpinTag.ONE)
    hh = h_double_tilde_product(params)
    hh_mirror = hh.mirrored(params.mirror(0j))
    a = hh.shifted(half) * hh.shifted(-half)
    b = hh_mirror.shifted(-half) * hh.shifted(half)
    c = spin_one_boundary_product(params).scaled(-1.0)

    roots = np.asarray(state.roots, dtype=complex)
    denominators = np.sinh((roots + 3 * half) / 2) * np.sinh((roots - half) / 2)
    closest = int(np.argmin(np.abs(denominators)))
    if abs(denominators[closest]) < ROOT_SUM_GUARD:
        raise PoleAtRoot(
            half, complex(roots[closest]), params=params, root_index=closest, context={"term": "spin-1 root sum"}
        )
    sum_term = 0.5 * np.sinh(2 * eta) * np.sinh(eta) * np.sum(1.0 / denominators)
    boundary_term = constants.c1 * (a.derivative(0j) - b.derivative(0j) + c.derivative(0j))
    total = sum_term + boundary_term + constants.c2
    return EnergyBreakdown(
        sum_term=complex(sum_term),
        boundary_term=complex(boundary_term),
        constant_term=complex(constants.c2),
        total=complex(total),
        method=EnergyMethod.CLOSED_FORM_ONE_EVEN_R,
    )


def _generic_energy(state: BetheState) -> EnergyBreakdown:
    params = state.params
    if params.two_s == 1:
        constants = energy_constants(params, SpinTag.HALF)
        derivative = lambda_tq_derivative(0j, state)
    else:
        constants = energy_constants(params, SpinTag.ONE)
        derivative = complex(
            checked_derivative(lambda u: lambda_one_rescaled(u, state), 0j, what="spin-1 eigenvalue")
        )
    sum_term = constants.c1 * derivative
    return EnergyBreakdown(
        sum_term=complex(sum_term),
        boundary_term=0j,
        constant_term=complex(constants.c2),
        total=complex(sum_term + constants.c2),
        method=EnergyMethod.GENERIC_DERIVATIVE,
    )


def _closed_form(state: BetheState) -> Callable[[BetheState], EnergyBreakdown] | None:
    params = state.params
    if params.two_s == 1 and params.case == BoundaryCase.CASE2_ALPHA_ALPHA and params.r_odd:
        return _spin_half_closed_form
    if params.two_s == 2 and params.case == BoundaryCase.CASE1_ALPHA_BETA and not params.r_odd:
        return _spin_one_closed_form
    return None


def energy_from_roots(state: BetheState) -> EnergyBreakdown:
    """Energy of the level described by ``state``.

    Closed forms are used where they exist (spin-1/2 Case 2 odd r, spin-1
    Case 1 even r) and always checked against the generic derivative route.

    Raises:
        UnsupportedError: For site spins above 1.
        MethodDisagreement: When the two routes differ by more than 1e-7 relative.
    """
    params = state.params
    if params.two_s not in (1, 2):
        raise UnsupportedError("Energies are available for spin-1/2 and spin-1 only", context={"two_s": params.two_s})
    worst = max_bethe_residual(state)
    if worst > CONVERGED_RESIDUAL:
        logger.warning("Energy requested for an unconverged state (residual %.3e)", worst)

    generic = _generic_energy(state)
    closed_form = _closed_form(state)
    if closed_form is None:
        return generic
    try:
        closed = closed_form(state)
    except PoleAtRoot as exc:
        logger.warning("Closed form unavailable (%s); using the generic route", exc)
        return generic

    tolerance = METHOD_AGREEMENT * max(1.0, abs(closed.total))
    if abs(closed.total - generic.total) > tolerance:
        raise MethodDisagreement(closed.total, generic.total, tolerance, params=state.params)
    closed.generic = generic.total
    return closed


# --- completeness ------------------------------------------------------------


def _polish(seed: BetheState, tol: float, max_iter: int) -> BetheState:
    """Refined state, or the best iterate when Newton stops short; see :func:`_usable`."""
    try:
        return newton_refine(seed, max_iter, tol)
    except NoConvergence as exc:
        logger.warning("Refinement did not converge: %s", exc)
        return exc.best_state


def _usable(state: BetheState, tol: float) -> bool:
    """Only states solving their Bethe equations take part in matching."""
    return bool(max_bethe_residual(state) < max(tol, CONVERGED_RESIDUAL))


def _extracted_states(params: ModelParams, tol: float, max_iter: int) -> list[BetheState]:
    """One refined state per eigenvalue branch of the spin-1/2 or fused spin-1 transfer matrix."""
    branches = TransferEigenbranches(params)
    points = sample_points(params, 3 * (params.m_roots + 1))
    samples = np.array([branches.at(u) for u in points])
    states = []
    for k in range(len(branches)):
        values = dict(zip(points, samples[:, k], strict=True))
        try:
            seed = q_polynomial_from_lambda(params, values.__getitem__, rescaled=False, points=points)
        except NumericalError as exc:
            logger.warning("Branch %d: Q extraction failed (%s)", k, exc.code)
            continue
        states.append(_polish(seed, tol, max_iter))
    return states


def _table_states(params: ModelParams, tol: float, max_iter: int) -> list[BetheState]:
    table = find_table(params, exact=False)
    if table is None:
        return []
    states = []
    for roots in table.roots:
        seed = _polish(BetheState(params=table.params, roots=roots), tol, max_iter)
        if table.params != params:
            try:
                seed = continue_roots(seed, params, tol=tol, max_iter=max_iter)
            except NoConvergence as exc:
                logger.warning("Homotopy from %s failed: %s", table.name, exc)
                seed = exc.best_state
            except NumericalError as exc:
                logger.warning("Homotopy from %s failed: %s", table.name, exc)
                continue
        states.append(seed)
    return states


def _bethe_states(
    params: ModelParams,
    seeds: Sequence[Sequence[Any]] | None,
    tol: float,
    max_iter: int,
) -> list[BetheState]:
    if seeds:
        return [_polish(BetheState(params=params, roots=roots), tol, max_iter) for roots in seeds]
    states = _extracted_states(params, tol, max_iter) if params.two_s in (1, 2) else []
    if len(states) < params.dimension:
        states += _table_states(params, tol, max_iter)
    if not states:
        raise UnsupportedError(
            "No Bethe seeds available: supply seeds or use a configuration adjacent to a built-in table",
            context={"two_s": params.two_s, "case": params.case.value},
        )
    return states


def _sort_key(value: complex) -> tuple[float, float]:
    return (round(value.real, 9), round(value.imag, 9))


def completeness_report(
    params: ModelParams,
    *,
    seeds: Sequence[Sequence[Any]] | None = None,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    match_tol: float = MATCH_TOLERANCE,
) -> RunRecord:
    """Pair every Hamiltonian level with a Bethe-ansatz energy.

    Without ``seeds``, states come from Q extraction per transfer-matrix
    branch, topped up from the built-in tables or homotopy from a table.
    States whose refinement did not converge are left out of the matching and
    counted in ``checks["unconverged_states"]``; their levels stay unmatched.

    Raises:
        IncompleteMatch: Carrying the partial record when levels stay unmatched.
    """
    if params.dimension > SPECTRUM_LIMIT:
        raise DimensionTooLarge(params.dimension, SPECTRUM_LIMIT)
    if params.two_s == 1:
        hamiltonian = hamiltonian_half(params)
    elif params.two_s == 2:
        hamiltonian = hamiltonian_one(params)
    else:
        raise UnsupportedError("Completeness is checked for spin-1/2 and spin-1 only", context={"two_s": params.two_s})

    spectrum = full_spectrum(hamiltonian)
    reference = sorted(spectrum.eigenvalues, key=_sort_key)
    logger.info("Diagonalized %s (dimension %d)", params.describe(), len(reference))

    levels: list[tuple[complex, BetheState]] = []
    unconverged = 0
    for state in _bethe_states(params, seeds, tol, max_iter):
        if not _usable(state, tol):
            unconverged += 1
            logger.warning("Excluding an unconverged Bethe state (residual %.3e)", max_bethe_residual(state))
            continue
        try:
            levels.append((energy_from_roots(state).total, state))
        except NumericalError as exc:
            logger.warning("Skipping a Bethe state: %s", exc)

    energies = [energy for energy, _ in levels]
    rows, cols, deviations = _assign(energies, reference)
    pairs = sorted(
        (
            (int(col), float(dev), levels[int(row)])
            for row, col, dev in zip(rows, cols, deviations, strict=True)
            if dev <= match_tol
        ),
        key=lambda item: item[0],
    )
    matched = {col for col, _, _ in pairs}
    unmatched = [k for k in range(len(reference)) if k not in matched]

    record = RunRecord(
        command="completeness",
        config_echo=params.model_dump(),
        energies=[energy for _, _, (energy, _) in pairs],
        reference_energies=reference,
        bethe_roots=[list(state.roots) for _, _, (_, state) in pairs],
        residuals=[max_bethe_residual(state) for _, _, (_, state) in pairs],
        pairing=[col for col, _, _ in pairs],
        deviations=[dev for _, dev, _ in pairs],
        max_deviation=max((dev for _, dev, _ in pairs), default=None),
        unmatched=unmatched,
        checks={
            "max_eigen_residual": max(spectrum.residual_norms, default=0.0),
            "unconverged_states": float(unconverged),
        },
    )
    if unmatched:
        error = IncompleteMatch(unmatched, total=len(reference), params=params)
        record = record.model_copy(update={"status": "error", "error": error.to_dict()})
        error.record = record
        raise error
    logger.info("All %d levels matched (max deviation %.2e)", len(reference), record.max_deviation or 0.0)
    return record
