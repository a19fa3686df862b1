"""Command-line entry point.

Every command produces a :class:`RunRecord`, persisted under
``<results root>/<config hash>/`` and echoed to stdout. Exit codes: 0 on
success, 1 for invalid input, 2 for numerical failures (a partial record is
still written when one exists).
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
import time
from collections.abc import Callable, Sequence
from multiprocessing import Pool
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import RunConfig, load_config, results_root
from .exceptions import ConfigError, InputError, NumericalError, ResidualThresholdExceeded, XXZError
from .golden import GoldenTable, tables
from .hamiltonians import derivative_identity_residual, hamiltonian_half, hamiltonian_one
from .models import BetheState, DetMConfig, LambdaSource, ModelParams, SpinTag, coerce_complex
from .operators import commutator_residual, functional_relation_operator_residual, yang_baxter_residual
from .qfunction import det_m_residual, h_condition_residuals, lambda_unrescaled, max_bethe_residual
from .records import OutputFormat, RunRecord, config_hash, persist_record, serialize
from .solver import (
    TransferEigenbranches,
    completeness_report,
    continue_roots,
    energy_from_roots,
    full_spectrum,
    match_spectra,
    newton_refine,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

THRESHOLDS = {
    "funcrel": 1e-9,
    "conds": 1e-8,
    "commute": 1e-9,
    "derivative": 1e-8,
    "detm": 1e-7,
}
SAMPLES = {"funcrel": 10, "conds": 50, "commute": 5, "derivative": 1, "detm": 5}


def _random_points(count: int, seed: int) -> list[complex]:
    rng = np.random.default_rng(seed)
    return [complex(rng.uniform(-0.5, 0.5), rng.uniform(-np.pi, np.pi)) for _ in range(count)]


def _require_config(args: argparse.Namespace) -> RunConfig:
    if not args.config:
        raise InputError(f"'{args.command}' needs --config")
    config = load_config(args.config)
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if overrides:
        config = config.model_copy(update={"solver": config.solver.model_copy(update=overrides)})
    return config


def _sort_key(value: complex) -> tuple[float, float]:
    return (round(value.real, 9), round(value.imag, 9))


# --- commands ------------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> RunRecord:
    config = _require_config(args)
    params = config.model
    hamiltonian = hamiltonian_half(params) if params.two_s == 1 else hamiltonian_one(params)
    report = full_spectrum(hamiltonian)
    return RunRecord(
        command="spectrum",
        config_echo=config.echo(),
        reference_energies=sorted(report.eigenvalues, key=_sort_key),
        checks={"max_eigen_residual": max(report.residual_norms, default=0.0)},
    )


def _seed_states(config: RunConfig) -> list[BetheState]:
    params = config.model
    if config.seeds:
        return [BetheState(params=params, roots=roots) for roots in config.seed_roots()]
    for table in tables().values():
        structure = ("n", "two_s", "r", "q", "case", "free_alpha_side", "free_beta_side")
        if all(getattr(table.params, key) == getattr(params, key) for key in structure):
            solved = [newton_refine(BetheState(params=table.params, roots=r)) for r in table.roots]
            if table.params == params:
                return solved
            logger.info("Continuing %d levels from %s", len(solved), table.name)
            tol, max_iter = config.solver.tol, config.solver.max_iter
            return [continue_roots(state, params, tol=tol, max_iter=max_iter) for state in solved]
    raise InputError("No [[seeds]] given and no built-in table shares this chain structure")


def _bethe_record(command: str, config: RunConfig, states: Sequence[BetheState]) -> RunRecord:
    energies = [energy_from_roots(state).total for state in states]
    order = sorted(range(len(states)), key=lambda k: _sort_key(energies[k]))
    return RunRecord(
        command=command,
        config_echo=config.echo(),
        energies=[energies[k] for k in order],
        bethe_roots=[list(states[k].roots) for k in order],
        residuals=[max_bethe_residual(states[k]) for k in order],
    )


def cmd_bethe(args: argparse.Namespace) -> RunRecord:
    config = _require_config(args)
    tol, max_iter = config.solver.tol, config.solver.max_iter
    if args.action == "refine":
        if not config.seeds:
            raise InputError("'bethe refine' needs [[seeds]] in the configuration")
        seeds = [BetheState(params=config.model, roots=roots) for roots in config.seed_roots()]
    else:
        seeds = _seed_states(config)
    states = [newton_refine(seed, max_iter, tol) for seed in seeds]
    return _bethe_record(f"bethe {args.action}", config, states)


def _suite_funcrel(params: ModelParams, points: list[complex]) -> dict[str, float]:
    return {f"funcrel[{k}]": functional_relation_operator_residual(u, params) for k, u in enumerate(points)}


def _suite_conds(params: ModelParams, points: list[complex]) -> dict[str, float]:
    checks = {}
    for k, u in enumerate(points):
        for name, value in h_condition_residuals(u, params).items():
            checks[f"{name}[{k}]"] = value
    return checks


def _suite_commute(params: ModelParams, points: list[complex]) -> dict[str, float]:
    checks = {}
    for k, (u, v) in enumerate(zip(points, reversed(points), strict=True)):
        checks[f"commute[{k}]"] = commutator_residual(u, v, params)
        checks[f"yang_baxter[{k}]"] = yang_baxter_residual(u, v, params)
    return checks


def _suite_derivative(params: ModelParams, points: list[complex]) -> dict[str, float]:
    return {"derivative": derivative_identity_residual(params, SpinTag.HALF)}


def _detm_lambdas(params: ModelParams, source: LambdaSource, config: RunConfig) -> list[Callable[[complex], complex]]:
    if source == LambdaSource.FROM_DIAGONALIZATION:
        branches = TransferEigenbranches(params)
        values = functools.lru_cache(maxsize=None)(branches.at)
        return [lambda u, k=k: complex(values(u)[k]) for k in range(len(branches))]
    states = [newton_refine(seed, config.solver.max_iter, config.solver.tol) for seed in _seed_states(config)]
    return [functools.partial(lambda_unrescaled, state=state) for state in states]


def _make_detm_suite(source: LambdaSource, config: RunConfig):
    def suite(params: ModelParams, points: list[complex]) -> dict[str, float]:
        cfg = DetMConfig(params=params, lambda_source=source)
        checks = {}
        for level, lam in enumerate(_detm_lambdas(params, source, config)):
            for k, u in enumerate(points):
                checks[f"detm[{level}][{k}]"] = abs(det_m_residual(u, cfg, lam))
        return checks

    return suite


def cmd_verify(args: argparse.Namespace) -> RunRecord:
    config = _require_config(args)
    params = config.model
    suites: dict[str, Callable[[ModelParams, list[complex]], dict[str, float]]] = {
        "funcrel": _suite_funcrel,
        "conds": _suite_conds,
        "commute": _suite_commute,
        "derivative": _suite_derivative,
        "detm": _make_detm_suite(LambdaSource(args.source), config),
    }
    points = _random_points(SAMPLES[args.suite], config.solver.seed)
    checks = suites[args.suite](params, points)
    record = RunRecord(command=f"verify {args.suite}", config_echo=config.echo(), checks=checks)
    worst = max(checks.values(), default=0.0)
    threshold = THRESHOLDS[args.suite]
    if not worst <= threshold:
        error = ResidualThresholdExceeded(args.suite, worst, threshold)
        error.record = record.model_copy(update={"status": "error", "error": error.to_dict()})
        raise error
    return record


def _read_spectrum(path: str) -> list[complex]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"Cannot read spectrum from {path}: {e}", cause=e) from e
    if isinstance(data, dict):
        payload = data.get("payload", data)
        data = payload.get("energies") or payload.get("reference_energies") or []
    try:
        return [coerce_complex(value) for value in data]
    except (TypeError, ValueError) as e:
        raise InputError(f"Spectrum in {path} is not a list of complex numbers", cause=e) from e


def cmd_match(args: argparse.Namespace) -> RunRecord:
    left = _read_spectrum(args.left)
    right = _read_spectrum(args.right)
    report = match_spectra(left, right)
    return RunRecord(
        command="match",
        config_echo={"left": str(args.left), "right": str(args.right)},
        energies=left,
        reference_energies=right,
        pairing=report.pairing,
        deviations=report.deviations,
        max_deviation=report.max_pair_deviation,
    )


def _reproduce(table: GoldenTable, tol: float, max_iter: int) -> RunRecord:
    seeds = table.roots if table.params.two_s != 1 else None
    record = completeness_report(table.params, seeds=seeds, tol=tol, max_iter=max_iter)
    printed = None
    if len(record.energies) == len(table.energies):
        printed = match_spectra(list(table.energies), record.energies)
    checks = dict(record.checks)
    checks["max_hamiltonian_deviation"] = record.max_deviation or 0.0
    checks["max_table_deviation"] = printed.max_pair_deviation if printed else float("inf")
    return record.model_copy(
        update={
            "command": f"reproduce {table.name}",
            "config_echo": {
                "table": table.name,
                "model": table.params.model_dump(),
                "tol": tol,
                "max_iter": max_iter,
            },
            "checks": checks,
        }
    )


def cmd_reproduce(args: argparse.Namespace) -> RunRecord:
    table = tables()[args.table]
    record = _reproduce(table, args.tol or 1e-10, args.max_iter or 50)
    worst = record.checks["max_table_deviation"]
    if not worst <= table.tolerance:
        error = ResidualThresholdExceeded(f"reproduce {table.name}", worst, table.tolerance)
        error.record = record.model_copy(update={"status": "error", "error": error.to_dict()})
        raise error
    return record


def _sweep_point(task: tuple[ModelParams, list[tuple[complex, ...]], float, int, str]) -> tuple[str, dict[str, Any]]:
    """Run one grid point in a worker; returns (config hash, summary)."""
    params, seeds, tol, max_iter, out_root = task
    key = config_hash(params.model_dump())
    try:
        record = completeness_report(params, seeds=seeds or None, tol=tol, max_iter=max_iter)
    except XXZError as exc:
        partial = getattr(exc, "record", None)
        if partial is not None:
            persist_record(partial, Path(out_root))
        return key, {"status": "error", "error": exc.to_dict()}
    persist_record(record, Path(out_root))
    return key, {"status": "ok", "max_deviation": record.max_deviation}


def cmd_sweep(args: argparse.Namespace) -> RunRecord:
    config = _require_config(args)
    grid = config.grid()
    out_root = str(results_root(args.out))
    tasks = [
        (params, config.seed_roots(), config.solver.tol, config.solver.max_iter, out_root) for params in grid
    ]
    jobs = min(config.solver.jobs, len(tasks))
    logger.info("Sweeping %d configurations with %d worker(s)", len(tasks), jobs)
    if jobs > 1:
        with Pool(jobs) as pool:
            results = list(pool.imap_unordered(_sweep_point, tasks))
    else:
        results = [_sweep_point(task) for task in tasks]

    checks: dict[str, float] = {}
    failures = []
    for key, summary in sorted(results, key=lambda item: item[0]):
        if summary["status"] == "ok":
            checks[f"{key}.max_deviation"] = summary["max_deviation"] or 0.0
        else:
            failures.append({"config": key, **summary["error"]})
    record = RunRecord(command="sweep", config_echo=config.echo(), checks=checks)
    if failures:
        error = NumericalError(f"{len(failures)} of {len(tasks)} sweep points failed", context={"failures": failures})
        error.record = record.model_copy(update={"status": "error", "error": error.to_dict()})
        raise error
    return record


COMMANDS: dict[str, Callable[[argparse.Namespace], RunRecord]] = {
    "spectrum": cmd_spectrum,
    "bethe": cmd_bethe,
    "verify": cmd_verify,
    "match": cmd_match,
    "reproduce": cmd_reproduce,
    "sweep": cmd_sweep,
}


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--out", type=Path, help="Results root (default: $XXZ_RESULTS_DIR or ./runs)")
    common.add_argument("--tol", type=float, help="Bethe residual tolerance (default: 1e-10)")
    common.add_argument("--max-iter", type=int, help="Newton iteration cap (default: 50)")
    common.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default="json", help="Stdout format (default: json)"
    )
    common.add_argument("--jobs", type=int, help="Worker processes for sweep (default: 1)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Increase log verbosity")

    parser = argparse.ArgumentParser(
        prog="xxzbethe",
        description="Bethe ansatz solutions and complete spectra of the open XXZ chain at roots of unity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="Diagonalize the Hamiltonian")

    bethe = sub.add_parser("bethe", parents=[common], help="Solve or refine Bethe roots")
    bethe.add_argument("action", choices=["solve", "refine"])

    verify = sub.add_parser("verify", parents=[common], help="Run a residual suite")
    verify.add_argument("suite", choices=list(THRESHOLDS))
    verify.add_argument(
        "--source",
        choices=[s.value for s in LambdaSource],
        default=LambdaSource.FROM_DIAGONALIZATION.value,
        help="Eigenvalue source for detm (default: FromDiagonalization)",
    )

    match = sub.add_parser("match", parents=[common], help="Pair two spectra (JSON lists or record files)")
    match.add_argument("left")
    match.add_argument("right")

    reproduce = sub.add_parser("reproduce", parents=[common], help="Reproduce a built-in reference table")
    reproduce.add_argument("table", choices=sorted(tables()))

    sub.add_parser("sweep", parents=[common], help="Completeness over the [sweep] grid")
    return parser


def _emit_error(error: dict[str, Any]) -> None:
    print(json.dumps({"error": error}, sort_keys=True), file=sys.stderr)


def _finish(record: RunRecord, args: argparse.Namespace, started: float) -> None:
    record = record.stamped(wall_time=time.perf_counter() - started, tool_version=__version__)
    persist_record(record, results_root(args.out))
    sys.stdout.write(serialize(record, args.format).decode())


def run(args: argparse.Namespace) -> int:
    """Execute a parsed command and return its exit code."""
    started = time.perf_counter()
    try:
        record = COMMANDS[args.command](args)
    except InputError as exc:
        _emit_error(exc.to_dict())
        return EXIT_INPUT
    except ValidationError as exc:
        _emit_error(ConfigError(f"Invalid input: {exc.error_count()} error(s)", cause=exc).to_dict())
        return EXIT_INPUT
    except XXZError as exc:
        partial = getattr(exc, "record", None)
        if partial is not None:
            _finish(partial, args, started)
        _emit_error(exc.to_dict())
        return EXIT_NUMERICAL
    except Exception as exc:
        logger.exception("Unexpected failure in %s", args.command)
        _emit_error({"type": exc.__class__.__name__, "message": str(exc), "code": "UNEXPECTED"})
        return EXIT_NUMERICAL
    _finish(record, args, started)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
