"""Self-check suites wiring the exact channel, the sampler, and the file format.

Each suite runs a batch of seeded invariant checks and reports one result per
check. These back the `verify` CLI subcommand; the test suite runs the same
identities at larger sample sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import channel, densesim, observables
from .errors import ParseError, QsatwalkError
from .instance import (
    ClauseForm,
    deserialize,
    generate_planted_extended,
    generate_planted_restricted,
)
from .trajectory import run_ensemble

SUITE_NAMES = ("fixtures", "lemma1", "dual", "trajectory", "bound")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _result(suite, name, passed, detail=""):
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


def bundled_fixture_paths():
    base = resources.files("qsatwalk").joinpath("fixtures")
    return sorted(str(p) for p in base.iterdir() if p.name.endswith(".json"))


def check_instance_file(path) -> list[CheckResult]:
    """Schema, normalization, and promise checks for one instance file."""
    try:
        with open(path) as fh:
            deserialize(fh.read())
    except ParseError as exc:
        name = "instance-schema"
        if "normalization" in str(exc):
            name = "instance-normalization"
        return [_result("fixtures", name, False, f"{path}: {exc}")]
    except OSError as exc:
        return [_result("fixtures", "instance-read", False, f"{path}: {exc}")]
    return [_result("fixtures", "instance-valid", True, str(path))]


def suite_fixtures(instance_paths=()) -> list[CheckResult]:
    results = []
    paths = list(instance_paths) or bundled_fixture_paths()
    for path in paths:
        results.extend(check_instance_file(path))
    return results


def suite_lemma1(pairs: int = 40, seed: int = 20250101) -> list[CheckResult]:
    """Spin invariance and the S^2 increment identity on restricted instances."""
    rng = np.random.default_rng(seed)
    worst_s = 0.0
    worst_s2 = 0.0
    for _ in range(pairs):
        n = int(rng.integers(2, 6))
        L = int(rng.integers(1, 7))
        inst = generate_planted_restricted(n, L, int(rng.integers(2**31)))
        rho = densesim.random_density_matrix(n, rng)
        s, s2 = observables.instance_spin_operators(inst)
        h = observables.build_hamiltonian(inst)
        out = channel.apply_step_channel(rho, inst)
        ds = abs(densesim.expectation(s, out) - densesim.expectation(s, rho))
        ds2 = abs(
            densesim.expectation(s2, out)
            - densesim.expectation(s2, rho)
            - (2.0 / L) * densesim.expectation(h, rho)
        )
        worst_s = max(worst_s, ds)
        worst_s2 = max(worst_s2, ds2)
    return [
        _result("lemma1", "spin-invariance", worst_s <= 1e-9, f"max residual {worst_s:.3e}"),
        _result("lemma1", "spin-squared-increment", worst_s2 <= 1e-9, f"max residual {worst_s2:.3e}"),
    ]


def suite_dual(instances: int = 10, states_per: int = 3, seed: int = 20250202) -> list[CheckResult]:
    """Dual-map residuals for restricted and |11><11| clauses."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for _ in range(instances):
        n = int(rng.integers(2, 5))
        L = int(rng.integers(1, 6))
        inst = generate_planted_extended(n, L, 0.5, int(rng.integers(2**31)))
        states = [densesim.random_density_matrix(n, rng) for _ in range(states_per)]
        for item in channel.dual_residuals(inst, states):
            if item.form in (ClauseForm.RESTRICTED_TYPE_I, ClauseForm.TYPE_II):
                worst = max(worst, item.max_residual)
                checked += 1
    return [
        _result(
            "dual",
            "clause-drift-identities",
            worst <= 1e-9,
            f"{checked} clauses, max residual {worst:.3e}",
        )
    ]


def suite_trajectory(M: int = 2000, T: int = 30, seed: int = 20250303) -> list[CheckResult]:
    """Ensemble averages against the exact channel, within 5 standard errors."""
    instances = [
        ("restricted", generate_planted_restricted(3, 3, 11)),
        ("extended", generate_planted_extended(3, 4, 0.5, 12)),
    ]
    results = []
    for label, inst in instances:
        h = observables.build_hamiltonian(inst)
        s, s2 = observables.instance_spin_operators(inst)
        series = channel.evolve(densesim.maximally_mixed(inst.n), inst, T)
        stats = run_ensemble(
            inst, T, M, master_seed=seed, operators={"H": h, "S": s, "S2": s2}
        )
        ok = True
        detail = ""
        p_zero = 1.0 - series.trH[:T] / inst.L
        sigma = np.sqrt(np.maximum(p_zero * (1.0 - p_zero), 0.0) / M)
        gap = np.abs(stats.zero_frequency - p_zero) - (5.0 * sigma + 1e-9)
        if np.any(gap > 0):
            ok = False
            detail = f"zero-frequency off at t={int(np.argmax(gap))}"
        for name, exact in (("H", series.trH), ("S", series.trS), ("S2", series.trS2)):
            tol = 5.0 * stats.operator_stderr[name] + 1e-9
            gap = np.abs(stats.operator_means[name] - exact) - tol
            if np.any(gap > 0):
                ok = False
                detail = f"{name} mean off at t={int(np.argmax(gap))}"
        results.append(_result("trajectory", f"channel-match-{label}", ok, detail))
    return results


def suite_cumulative_bound(instances: int = 5, T: int = 800, seed: int = 20250404) -> list[CheckResult]:
    """Cumulative unsatisfied weight stays below 5 n^2 for mixed-form instances."""
    rng = np.random.default_rng(seed)
    worst_margin = -np.inf
    for _ in range(instances):
        n = int(rng.integers(2, 6))
        L = int(rng.integers(1, 7))
        inst = generate_planted_extended(n, L, 0.5, int(rng.integers(2**31)))
        series = channel.evolve(densesim.maximally_mixed(n), inst, T)
        running = (2.0 / inst.L) * np.cumsum(series.trH[:T])
        worst_margin = max(worst_margin, float(np.max(running) - 5.0 * n * n))
    return [
        _result(
            "bound",
            "cumulative-energy-bound",
            worst_margin <= 1e-6,
            f"max excess over 5n^2: {worst_margin:.3e}",
        )
    ]


def run_suites(selected=("all",), instance_paths=()) -> list[CheckResult]:
    names = set(selected)
    if "all" in names:
        names = set(SUITE_NAMES)
    unknown = names - set(SUITE_NAMES)
    if unknown:
        raise QsatwalkError(f"unknown verify suite(s): {sorted(unknown)}")
    results = []
    if "fixtures" in names:
        results.extend(suite_fixtures(instance_paths))
    if "lemma1" in names:
        results.extend(suite_lemma1())
    if "dual" in names:
        results.extend(suite_dual())
    if "bound" in names:
        results.extend(suite_cumulative_bound())
    if "trajectory" in names:
        results.extend(suite_trajectory())
    return results
