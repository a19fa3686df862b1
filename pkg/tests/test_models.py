"""Tests for ModelParams, BetheState and DetMConfig validation."""

import math

import pytest
from pydantic import ValidationError

from xxzbethe import BetheState, BoundaryCase, DetMConfig, EnergyConstants, ModelParams, Side, SpinTag
from xxzbethe.models import coerce_complex

from .conftest import make_params


class TestModelParams:
    """Validation and derived quantities of the chain parameters."""

    def test_case2_fills_betas_with_eta(self):
        params = ModelParams(n=4, two_s=1, r=7, q=5, case="Case2AlphaAlpha", alpha_minus=0.45j, alpha_plus=0.87j)
        assert params.beta_minus == params.eta
        assert params.beta_plus == params.eta
        assert params.eta == pytest.approx(1j * math.pi * 7 / 5)

    def test_case3_fills_alphas_with_eta(self):
        params = make_params(BoundaryCase.CASE3_BETA_BETA)
        assert params.alpha_minus == params.eta
        assert params.alpha_plus == params.eta

    @pytest.mark.parametrize(
        ("alpha_side", "beta_side", "fixed_alpha", "fixed_beta"),
        [
            (Side.MINUS, Side.MINUS, "alpha_plus", "beta_plus"),
            (Side.PLUS, Side.MINUS, "alpha_minus", "beta_plus"),
            (Side.MINUS, Side.PLUS, "alpha_plus", "beta_minus"),
        ],
    )
    def test_case1_fixed_sides(self, alpha_side, beta_side, fixed_alpha, fixed_beta):
        params = make_params(BoundaryCase.CASE1_ALPHA_BETA, free_alpha_side=alpha_side, free_beta_side=beta_side)
        assert getattr(params, fixed_alpha) == pytest.approx(1j * math.pi / 2)
        assert getattr(params, fixed_beta) == pytest.approx(params.eta)

    def test_case_aliases(self):
        for alias in (2, "2", "case2", "CASE2"):
            params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA).model_dump()
            params.pop("beta_minus")
            params.pop("beta_plus")
            params["case"] = alias
            assert ModelParams.model_validate(params).case == BoundaryCase.CASE2_ALPHA_ALPHA

    @pytest.mark.parametrize("raw", [[0.1, 0.2], {"re": 0.1, "im": 0.2}, "0.1+0.2i", 0.1 + 0.2j])
    def test_complex_spellings(self, raw):
        assert coerce_complex(raw) == pytest.approx(0.1 + 0.2j)

    def test_rejects_booleans_as_complex(self):
        with pytest.raises(ValueError):
            coerce_complex(True)

    def test_theta_sets_both_sides(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, theta=0.54)
        assert params.theta_minus == params.theta_plus == 0.54

    def test_unequal_thetas_rejected(self):
        with pytest.raises(ValidationError, match="theta"):
            make_params(BoundaryCase.CASE2_ALPHA_ALPHA, theta_minus=0.1, theta_plus=0.2)

    @pytest.mark.parametrize(("r", "q"), [(1, 4), (3, 9), (2, 6)])
    def test_rejects_even_or_reducible_q(self, r, q):
        with pytest.raises(ValidationError):
            make_params(BoundaryCase.CASE2_ALPHA_ALPHA, r=r, q=q)

    def test_rejects_wrong_fixed_value(self):
        with pytest.raises(ValidationError, match="requires"):
            make_params(BoundaryCase.CASE2_ALPHA_ALPHA, beta_minus=0.3)

    @pytest.mark.parametrize(
        ("case", "n", "two_s", "q", "expected"),
        [
            (BoundaryCase.CASE2_ALPHA_ALPHA, 4, 1, 5, 10),
            (BoundaryCase.CASE1_ALPHA_BETA, 2, 2, 7, 10),
            (BoundaryCase.CASE3_BETA_BETA, 3, 1, 3, 5),
        ],
    )
    def test_root_count(self, case, n, two_s, q, expected):
        assert make_params(case, n=n, two_s=two_s, q=q).m_roots == expected

    def test_mirror_is_involution(self, supported_params):
        u = 0.3 - 0.8j
        assert supported_params.mirror(supported_params.mirror(u)) == pytest.approx(u)
        assert supported_params.mirror(u) == pytest.approx(-u - supported_params.shift)

    def test_sign_and_dimension(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=3, two_s=1)
        assert params.sign == -1
        assert params.dimension == 8
        spin_one = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=3, two_s=2)
        assert spin_one.sign == 1
        assert spin_one.dimension == 27

    def test_frozen(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA)
        with pytest.raises(ValidationError):
            params.n = 5

    def test_with_changes_recomputes_fixed_values(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, r=1, q=3)
        changed = params.with_changes(q=5, r=2)
        assert changed.beta_minus == pytest.approx(changed.eta)
        assert changed.alpha_minus == params.alpha_minus


class TestBetheState:
    """Root reduction and count validation."""

    def test_roots_are_reduced_into_strip(self, params_factory):
        params = params_factory(BoundaryCase.CASE3_BETA_BETA, n=1, q=3)
        roots = [[0.1, 7.0], 0.2 - 4.0j, 0.3j]
        state = BetheState(params=params, roots=roots)
        assert all(-math.pi < u.imag <= math.pi for u in state.roots)
        assert state.roots[0] == pytest.approx(0.1 + (7.0 - 2 * math.pi) * 1j)
        assert state.m == 3

    def test_wrong_root_count(self, params_factory):
        params = params_factory(BoundaryCase.CASE2_ALPHA_ALPHA)
        with pytest.raises(ValidationError, match="needs M=6"):
            BetheState(params=params, roots=[0.1, 0.2])

    def test_with_roots_keeps_params(self, random_state):
        moved = random_state.with_roots([u + 0.01 for u in random_state.roots])
        assert moved.params == random_state.params
        assert moved.refinement is None


def test_detm_config_defaults_p():
    params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, q=5, r=2)
    assert DetMConfig(params=params).p == 4
    with pytest.raises(ValidationError, match="p \\+ 1"):
        DetMConfig(params=params, p=3)


def test_energy_constants_accept_pairs():
    constants = EnergyConstants(c1=[0.0, 1.0], c2=2.0, spin_tag="One")
    assert constants.c1 == 1j
    assert constants.spin_tag == SpinTag.ONE
