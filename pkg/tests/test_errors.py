"""Tests for the exception hierarchy and linear-algebra error translation."""

import json

import numpy as np
import pytest
import scipy.linalg

from xxzbethe import (
    BoundaryCase,
    ConfigError,
    ConvergenceFailure,
    IncompleteMatch,
    InputError,
    LengthMismatch,
    MethodDisagreement,
    NoConvergence,
    NumericalError,
    PoleAtDenominator,
    PoleAtRoot,
    RankDeficiency,
    ResidualThresholdExceeded,
    UnsupportedCase,
    UnsupportedQ,
    XXZError,
)
from xxzbethe._internal.errors import handle_linalg_errors, translate_linalg_error
from xxzbethe.qfunction import h_tilde_product

from .conftest import make_params


class TestHierarchy:
    """Input errors and numerical errors split on the exit-code boundary."""

    @pytest.mark.parametrize(
        "error",
        [
            ConfigError("bad", path="x.toml"),
            LengthMismatch(3, 4),
            UnsupportedCase("no h"),
            UnsupportedQ(7),
        ],
    )
    def test_input_errors(self, error):
        assert isinstance(error, InputError)
        assert not isinstance(error, NumericalError)

    @pytest.mark.parametrize(
        "error",
        [
            PoleAtDenominator("h", 0.1j),
            NoConvergence("stuck", best_state=None, residuals=[1e-3], iterations=5),
            IncompleteMatch([1, 2], total=4),
            ResidualThresholdExceeded("funcrel", 1e-6, 1e-9),
        ],
    )
    def test_numerical_errors(self, error):
        assert isinstance(error, NumericalError)
        assert isinstance(error, XXZError)


def test_to_dict_is_json_serializable():
    error = PoleAtDenominator("h_tilde", 0.5 + 1j, distance=float("nan"))
    payload = error.to_dict()
    assert payload["type"] == "PoleAtDenominator"
    assert payload["code"] == "POLE_AT_DENOMINATOR"
    assert payload["context"]["u"] == {"re": 0.5, "im": 1.0}
    assert payload["context"]["distance"] == "nan"
    json.dumps(payload)


def test_to_dict_converts_numpy_values():
    error = XXZError("x", context={"scalar": np.float64(2.5), "array": np.arange(3)})
    assert error.to_dict()["context"] == {"scalar": 2.5, "array": [0, 1, 2]}


def test_str_includes_context_and_cause():
    cause = ValueError("boom")
    error = ConfigError("cannot load", path="run.toml", cause=cause)
    text = str(error)
    assert text.startswith("cannot load | ")
    assert "run.toml" in text
    assert "cause=ValueError: boom" in text
    assert str(XXZError("plain")) == "plain"


def test_no_convergence_records_worst_residual():
    error = NoConvergence("stuck", best_state="state", residuals=[1e-3, -2e-2j], iterations=7)
    assert error.context["max_residual"] == pytest.approx(2e-2)
    assert error.best_state == "state"
    assert error.iterations == 7


def test_no_convergence_names_the_worst_root(random_state):
    error = NoConvergence("stuck", best_state=random_state, residuals=[1e-3, -2e-2j, 5e-3], iterations=7)
    assert error.params is random_state.params
    assert error.root_index == 1
    assert error.residual == pytest.approx(2e-2)
    payload = error.to_dict()
    assert payload["root_index"] == 1
    assert payload["params"]["case"] == random_state.params.case.value
    assert payload["params"]["n"] == random_state.params.n
    assert payload["params"]["q"] == random_state.params.q
    json.dumps(payload)
    text = str(error)
    assert "root=1" in text
    assert random_state.params.describe() in text


class TestDomainFields:
    """Chain parameters, root index and residual ride on every error."""

    def test_absent_by_default(self):
        payload = XXZError("plain").to_dict()
        assert "params" not in payload
        assert "root_index" not in payload
        assert "residual" not in payload

    def test_pole_at_root(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA)
        error = PoleAtRoot(0.3j, 0.3j, params=params, root_index=2)
        assert error.root_index == 2
        assert error.to_dict()["params"]["description"] == params.describe()

    def test_rank_deficiency_reports_ratio(self):
        error = RankDeficiency(0.25)
        assert error.residual == 0.25
        assert "residual=2.500e-01" in str(error)

    def test_method_disagreement_reports_gap(self):
        error = MethodDisagreement(1.0 + 0j, 1.5 + 0j, 1e-8)
        assert error.residual == pytest.approx(0.5)

    def test_unsupported_case_from_h_function(self):
        params = make_params(BoundaryCase.CASE3_BETA_BETA, r=2, q=5)
        with pytest.raises(UnsupportedCase) as excinfo:
            h_tilde_product(params)
        assert excinfo.value.params is params


def test_incomplete_match_carries_record():
    error = IncompleteMatch([0, 5], total=9, record={"status": "error"})
    assert error.unmatched == [0, 5]
    assert error.record == {"status": "error"}
    assert "2 of 9" in str(error)


class TestLinalgTranslation:
    """LAPACK failures surface as ConvergenceFailure."""

    def test_translate_keeps_cause(self):
        original = np.linalg.LinAlgError("singular")
        translated = translate_linalg_error(original, "solve")
        assert isinstance(translated, ConvergenceFailure)
        assert translated.cause is original
        assert translated.context == {"operation": "solve"}
        assert str(translated).startswith("solve: singular")

    @pytest.mark.parametrize("error_type", [np.linalg.LinAlgError, scipy.linalg.LinAlgError])
    def test_decorator_translates(self, error_type):
        @handle_linalg_errors
        def failing():
            raise error_type("no convergence")

        with pytest.raises(ConvergenceFailure) as excinfo:
            failing()
        assert isinstance(excinfo.value.__cause__, error_type)

    def test_decorator_passes_other_errors(self):
        @handle_linalg_errors
        def failing():
            raise KeyError("x")

        with pytest.raises(KeyError):
            failing()

    def test_decorator_preserves_result_and_name(self):
        @handle_linalg_errors
        def inverse(matrix):
            return np.linalg.inv(matrix)

        assert inverse.__name__ == "inverse"
        assert np.allclose(inverse(np.eye(2) * 2), np.eye(2) / 2)
        with pytest.raises(ConvergenceFailure):
            inverse(np.zeros((2, 2)))
