"""Performance and scalability checks.

This module splits:
1. Correctness checks on the paths the benchmarks exercise (always run)
2. Environment-dependent timing benchmarks (opt-in via markers)
"""

import json
import os
import statistics
import time
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from xxzbethe import (
    BoundaryCase,
    DimensionTooLarge,
    NoConvergence,
    completeness_report,
    full_spectrum,
    hamiltonian_half,
    lambda_tq,
    newton_refine,
    transfer_half,
)
from xxzbethe.golden import table1, table2
from xxzbethe.operators import MAX_SITES

from .conftest import make_params

STRICT_BENCHMARKS = os.getenv("XXZBETHE_STRICT_BENCHMARKS", "0") == "1"
BENCHMARK_OUTPUT_PATH = os.getenv("XXZBETHE_BENCHMARK_OUTPUT")


@pytest.fixture
def eight_sites():
    """Spin-1/2 Case 2 chain with a 256-dimensional Hilbert space."""
    return make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=8, r=2, q=5)


def _target(default_ms: float, strict_ms: float) -> float:
    """Return timing target based on strict benchmark mode."""
    return strict_ms if STRICT_BENCHMARKS else default_ms


def _median_ms(iterations: int, op: Callable[[int], object]) -> float:
    """Median execution time (ms) of ``op`` over ``iterations`` calls."""
    samples: list[float] = []
    for i in range(iterations):
        start = time.perf_counter()
        op(i)
        samples.append((time.perf_counter() - start) * 1000)
    return statistics.median(samples)


def _record_benchmark_metric(scenario: str, median_ms: float) -> None:
    """Persist benchmark metric so external gate tooling can parse it."""
    if not BENCHMARK_OUTPUT_PATH:
        return

    output_path = Path(BENCHMARK_OUTPUT_PATH)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    payload: dict[str, object]
    if output_path.exists():
        payload = json.loads(output_path.read_text(encoding="utf-8"))
    else:
        payload = {"schema_version": 1, "unit": "ms", "scenarios": {}}

    scenarios = payload.setdefault("scenarios", {})
    if not isinstance(scenarios, dict):
        raise ValueError("Invalid benchmark artifact format: scenarios must be an object")

    scenarios[scenario] = {"median_ms": round(median_ms, 4)}
    output_path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


class TestPerformanceCorrectness:
    """Correctness checks for performance-sensitive code paths."""

    def test_transfer_matrix_at_size_limit_is_guarded(self):
        params = make_params(BoundaryCase.CASE2_ALPHA_ALPHA, n=MAX_SITES + 1)
        with pytest.raises(DimensionTooLarge):
            transfer_half(0.1, params)

    def test_hamiltonian_spectrum_is_real_for_hermitian_boundaries(self, eight_sites):
        """Real boundary-free part gives a real spectrum."""
        report = full_spectrum(hamiltonian_half(eight_sites, boundary=False))
        assert len(report.eigenvalues) == 256
        assert max(abs(e.imag) for e in report.eigenvalues) < 1e-9

    def test_transfer_matrices_commute_at_eight_sites(self, eight_sites):
        a = transfer_half(0.21 + 0.3j, eight_sites)
        b = transfer_half(-0.1 + 1.7j, eight_sites)
        assert np.linalg.norm(a @ b - b @ a) / (np.linalg.norm(a) * np.linalg.norm(b)) < 1e-11


@pytest.mark.benchmark
@pytest.mark.slow
class TestMicrobenchmarks:
    """Environment-sensitive microbenchmarks.

    These tests are marked benchmark/slow so they can be excluded by default:
      pytest -m "not benchmark"
    """

    def test_transfer_matrix_latency(self, eight_sites):
        transfer_half(0.1, eight_sites)
        median_ms = _median_ms(10, lambda i: transfer_half(0.1 + 0.01j * i, eight_sites))
        _record_benchmark_metric("transfer_matrix_eight_sites", median_ms)

        target_ms = _target(default_ms=500.0, strict_ms=120.0)
        assert median_ms < target_ms, (
            f"Transfer matrix latency {median_ms:.2f}ms exceeded target {target_ms:.2f}ms "
            f"(strict={STRICT_BENCHMARKS})"
        )

    def test_full_spectrum_latency(self, eight_sites):
        hamiltonian = hamiltonian_half(eight_sites)
        median_ms = _median_ms(5, lambda i: full_spectrum(hamiltonian))
        _record_benchmark_metric("full_spectrum_256", median_ms)

        target_ms = _target(default_ms=1500.0, strict_ms=400.0)
        assert median_ms < target_ms, (
            f"Full spectrum latency {median_ms:.2f}ms exceeded target {target_ms:.2f}ms "
            f"(strict={STRICT_BENCHMARKS})"
        )

    def test_eigenvalue_evaluation_latency(self, random_state):
        median_ms = _median_ms(200, lambda i: lambda_tq(0.3 + 0.001j * i, random_state))
        _record_benchmark_metric("lambda_tq_evaluation", median_ms)

        target_ms = _target(default_ms=5.0, strict_ms=1.0)
        assert median_ms < target_ms, (
            f"Eigenvalue evaluation latency {median_ms:.2f}ms exceeded target {target_ms:.2f}ms "
            f"(strict={STRICT_BENCHMARKS})"
        )

    def test_newton_step_latency(self, random_state):
        def one_step(_):
            try:
                newton_refine(random_state, max_iter=1, tol=1e-40)
            except NoConvergence:
                pass

        median_ms = _median_ms(5, one_step)
        _record_benchmark_metric("newton_single_step", median_ms)

        target_ms = _target(default_ms=200.0, strict_ms=50.0)
        assert median_ms < target_ms, (
            f"Newton step latency {median_ms:.2f}ms exceeded target {target_ms:.2f}ms "
            f"(strict={STRICT_BENCHMARKS})"
        )

    @pytest.mark.parametrize("table", [table1, table2], ids=["table1", "table2"])
    def test_table_reproduction_latency(self, table):
        reference = table()
        seeds = reference.roots if reference.params.two_s != 1 else None
        median_ms = _median_ms(1, lambda i: completeness_report(reference.params, seeds=seeds))
        _record_benchmark_metric(f"reproduce_{reference.name}", median_ms)

        target_ms = _target(default_ms=10000.0, strict_ms=4000.0)
        assert median_ms < target_ms, (
            f"Reproduction of {reference.name} took {median_ms:.2f}ms, target {target_ms:.2f}ms "
            f"(strict={STRICT_BENCHMARKS})"
        )
