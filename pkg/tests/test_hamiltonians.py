"""Tests for the dense Hamiltonians and the energy constants."""

import math

import numpy as np
import pytest

from xxzbethe import (
    BetheState,
    BoundaryCase,
    BoundarySingularity,
    InputError,
    Side,
    SpinTag,
    UnsupportedError,
    derivative_identity_residual,
    energy_constants,
    energy_from_roots,
    full_spectrum,
    hamiltonian_half,
    hamiltonian_one,
)
from xxzbethe.golden import table2
from xxzbethe.hamiltonians import SPIN1_X, SPIN1_Y, SPIN1_Z, boundary_coefficients
from xxzbethe.qfunction import h_double_tilde_product

from .conftest import make_params


def test_spin_one_matrices_satisfy_su2_algebra():
    commutator = SPIN1_X @ SPIN1_Y - SPIN1_Y @ SPIN1_X
    assert np.allclose(commutator, 1j * SPIN1_Z)
    casimir = SPIN1_X @ SPIN1_X + SPIN1_Y @ SPIN1_Y + SPIN1_Z @ SPIN1_Z
    assert np.allclose(casimir, 2 * np.eye(3))


class TestSpinHalf:
    """Spin-1/2 Hamiltonian."""

    def test_bulk_is_hermitian(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=3, r=2, q=5)
        bulk = hamiltonian_half(params, boundary=False)
        assert np.allclose(bulk, bulk.conj().T)

    def test_two_site_bulk_spectrum(self):
        """Two sites: eigenvalues cosh(eta)/2 (triplet-like, twice), 1 - cosh(eta)/2 and -1 - cosh(eta)/2."""
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=2, r=1, q=3)
        ch = np.cosh(params.eta).real
        eigenvalues = np.sort(np.linalg.eigvalsh(hamiltonian_half(params, boundary=False)))
        expected = np.sort([ch / 2, ch / 2, 1 - ch / 2, -1 - ch / 2])
        assert np.allclose(eigenvalues, expected)

    def test_singular_boundary(self):
        params = make_params(BoundaryCase.CASE1_ALPHA_BETA, beta_minus=1j * math.pi / 2)
        with pytest.raises(BoundarySingularity):
            hamiltonian_half(params)

    def test_wrong_spin(self):
        with pytest.raises(UnsupportedError):
            hamiltonian_half(make_params(BoundaryCase.CASE2_ALPHA_ALPHA, two_s=2))

    def test_derivative_identity(self, supported_params):
        assert derivative_identity_residual(supported_params) < 1e-8

    def test_derivative_identity_three_sites(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=3, r=2, q=5)
        assert derivative_identity_residual(params) < 1e-8

    def test_identity_only_for_spin_half(self, supported_params):
        with pytest.raises(UnsupportedError):
            derivative_identity_residual(supported_params, SpinTag.ONE)


class TestSpinOne:
    """Spin-1 Hamiltonian and its boundary couplings."""

    @pytest.fixture
    def params(self):
        """Spin-1 Case 1 chain at an even-r anisotropy with sh(3 eta) != 0."""
        return make_params(
            BoundaryCase.CASE1_ALPHA_BETA,
            n=2,
            two_s=2,
            r=2,
            q=5,
            free_alpha_side=Side.PLUS,
            free_beta_side=Side.MINUS,
        )

    def test_dimension(self, params):
        assert hamiltonian_one(params).shape == (9, 9)
        assert hamiltonian_one(params.with_changes(n=3)).shape == (27, 27)

    def test_needs_two_sites(self, params):
        with pytest.raises(InputError):
            hamiltonian_one(params.with_changes(n=1))

    def test_boundary_coefficients_pair(self, params):
        coefficients = boundary_coefficients(params)
        assert len(coefficients.a) == len(coefficients.b) == 8
        assert coefficients.a[2] == pytest.approx(coefficients.a[3] * np.exp(4 * params.theta_minus), rel=1e-12)

    def test_energy_constants_are_finite(self, params):
        constants = energy_constants(params, SpinTag.ONE)
        assert constants.spin_tag == SpinTag.ONE
        assert np.isfinite(constants.c1) and np.isfinite(constants.c2)

    def test_sh3eta_singularity_is_reported(self, params):
        with pytest.raises(BoundarySingularity):
            energy_constants(params.with_changes(q=3), SpinTag.ONE)

    @pytest.mark.parametrize("source", ["fixture", "table2"])
    def test_leading_coefficient_normalizes_boundary_product(self, params, table2_params, source):
        """c1 h~~(eta/2) h~~(-eta/2) = sh(2 eta)/2, so the root sum enters with unit weight."""
        chain = params if source == "fixture" else table2_params
        eta = chain.eta
        hh = h_double_tilde_product(chain)
        product = hh.shifted(eta / 2) * hh.shifted(-eta / 2)
        c1 = energy_constants(chain, SpinTag.ONE).c1
        assert c1 * product.value(0j) == pytest.approx(0.5 * np.sinh(2 * eta), rel=1e-9)

    def test_printed_roots_give_hamiltonian_levels(self, table2_params):
        reference = table2()
        spectrum = np.asarray(full_spectrum(hamiltonian_one(table2_params)).eigenvalues)
        energies = [energy_from_roots(BetheState(params=table2_params, roots=roots)).total for roots in reference.roots]
        for energy, printed in zip(energies, reference.energies, strict=True):
            assert energy == pytest.approx(printed, abs=1e-3)
        assert min(abs(spectrum - energies[0])) < 1e-3
