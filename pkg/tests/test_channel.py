import numpy as np
import pytest

from qsatwalk import densesim
from qsatwalk.channel import (
    apply_clause_channel,
    apply_step_channel,
    dual_residuals,
    evolve,
    twirl,
    write_series_csv,
)
from qsatwalk.errors import IndexOutOfRange
from qsatwalk.instance import (
    ClauseForm,
    Instance,
    Promise,
    conjugate_instance,
    generate_planted_extended,
    generate_planted_restricted,
    make_clause,
)
from qsatwalk.observables import (
    build_hamiltonian,
    clause_projector,
    ground_space_projector,
    instance_spin_operators,
)

from helpers import random_product_basis

SINGLET = (0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0)


def singlet_instance():
    return Instance(n=2, clauses=(make_clause(0, 1, SINGLET),))


def test_twirl_product_state():
    rho = densesim.pure_density(densesim.basis_state(2, 0b01))
    out = twirl(rho, 0)
    want = np.kron(np.eye(2) / 2, np.diag([0.0, 1.0]))
    assert np.max(np.abs(out - want)) < 1e-12


def test_twirl_fixes_maximally_mixed():
    rho = densesim.maximally_mixed(3)
    for q in range(3):
        assert np.max(np.abs(twirl(rho, q) - rho)) < 1e-12


def test_twirl_idempotent_and_trace_preserving():
    rng = np.random.default_rng(8)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        q = int(rng.integers(n))
        rho = densesim.random_density_matrix(n, rng)
        once = twirl(rho, q)
        assert abs(np.trace(once) - 1.0) < 1e-12
        assert np.max(np.abs(twirl(once, q) - once)) < 1e-12
    with pytest.raises(IndexOutOfRange):
        twirl(rho, n)


def test_clause_channel_quarters_singlet_weight():
    inst = singlet_instance()
    rho = densesim.maximally_mixed(2)
    proj = clause_projector(inst.clauses[0], 2)
    out = apply_clause_channel(rho, inst.clauses[0])
    weight = densesim.expectation(proj, out)
    assert abs(weight - 1.0 / 16.0) < 1e-12
    assert abs(np.trace(out) - 1.0) < 1e-12


def test_clause_channel_fixes_planted_state():
    inst = generate_planted_restricted(3, 4, seed=31)
    rho = densesim.pure_density(inst.planted_state())
    for c in inst.clauses:
        out = apply_clause_channel(rho, c)
        assert np.max(np.abs(out - rho)) < 1e-12


def test_clause_channel_type_ii_mixture():
    clause = make_clause(0, 1, (0, 0, 0, 1))
    rho = densesim.pure_density(densesim.basis_state(2, 0b11))
    out = apply_clause_channel(rho, clause)
    want = np.diag([0.0, 0.25, 0.25, 0.5]).astype(complex)
    assert np.max(np.abs(out - want)) < 1e-12


def test_step_channel_single_clause_degenerate_average():
    inst = singlet_instance()
    rng = np.random.default_rng(9)
    rho = densesim.random_density_matrix(2, rng)
    assert np.max(
        np.abs(apply_step_channel(rho, inst) - apply_clause_channel(rho, inst.clauses[0]))
    ) < 1e-14


def test_step_channel_fixes_planted_state():
    inst = generate_planted_extended(3, 5, 0.5, seed=32)
    rho = densesim.pure_density(inst.planted_state())
    out = apply_step_channel(rho, inst)
    assert np.max(np.abs(out - rho)) < 1e-12


def test_step_channel_is_trace_preserving_and_positive():
    rng = np.random.default_rng(10)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        L = int(rng.integers(1, 7))
        inst = generate_planted_extended(n, L, float(rng.random()), int(rng.integers(2**31)))
        rho = densesim.random_density_matrix(n, rng)
        out = apply_step_channel(rho, inst)
        assert abs(np.trace(out).real - 1.0) <= 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-11
        assert np.linalg.eigvalsh(out)[0] >= -1e-9


def test_step_channel_spin_identities_on_restricted():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        L = int(rng.integers(1, 7))
        inst = generate_planted_restricted(n, L, int(rng.integers(2**31)))
        rho = densesim.random_density_matrix(n, rng)
        s, s2 = instance_spin_operators(inst)
        h = build_hamiltonian(inst)
        out = apply_step_channel(rho, inst)
        assert abs(densesim.expectation(s, out) - densesim.expectation(s, rho)) <= 1e-10
        ds2 = densesim.expectation(s2, out) - densesim.expectation(s2, rho)
        assert abs(ds2 - (2.0 / L) * densesim.expectation(h, rho)) <= 1e-9


def test_evolve_singlet_closed_form():
    inst = singlet_instance()
    series = evolve(densesim.maximally_mixed(2), inst, 10)
    for t in range(11):
        assert abs(series.trPi0[t] - (1.0 - 0.25 ** (t + 1))) < 1e-12


def test_evolve_zero_steps():
    inst = singlet_instance()
    series = evolve(densesim.maximally_mixed(2), inst, 0)
    assert series.steps == 0 and len(series.trH) == 1
    assert abs(series.trH[0] - 0.25) < 1e-12


def test_evolve_monotone_diagnostics():
    rng = np.random.default_rng(12)
    for _ in range(5):
        n = int(rng.integers(2, 5))
        inst = generate_planted_restricted(n, int(rng.integers(1, 5)), int(rng.integers(2**31)))
        series = evolve(densesim.random_density_matrix(n, rng), inst, 30)
        assert np.all(np.diff(series.trS2) >= -1e-9)
        assert np.all(np.diff(series.trPi0) >= -1e-9)
        assert np.all(series.trPi0 >= -1e-9) and np.all(series.trPi0 <= 1 + 1e-9)


def test_evolve_ground_weight_monotone_for_any_instance():
    rng = np.random.default_rng(13)
    for seed in range(5):
        inst = generate_planted_extended(3, 4, 0.6, seed)
        rho = densesim.random_density_matrix(3, rng)
        series = evolve(rho, inst, 20)
        assert np.all(np.diff(series.trPi0) >= -1e-9)


def test_evolve_snapshots_and_long_run_stability():
    inst = generate_planted_restricted(3, 3, seed=33)
    series = evolve(densesim.maximally_mixed(3), inst, 250, snapshot_schedule=(0, 100, 250))
    assert set(series.snapshots) == {0, 100, 250}
    final = series.snapshots[250]
    assert abs(np.trace(final).real - 1.0) < 1e-9
    assert np.max(np.abs(final - final.conj().T)) < 1e-9


def test_evolve_basis_covariance():
    inst = generate_planted_restricted(3, 3, seed=34)
    basis = random_product_basis(3, 35)
    rotated = conjugate_instance(inst, basis)
    v = densesim.product_unitary(basis)
    rng = np.random.default_rng(36)
    rho = densesim.random_density_matrix(3, rng)
    lhs = apply_step_channel(v @ rho @ v.conj().T, rotated)
    rhs = v @ apply_step_channel(rho, inst) @ v.conj().T
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_dual_residuals_type_ii_exact_values():
    inst = Instance(n=2, clauses=(make_clause(0, 1, (0, 0, 0, 1)),))
    rho = densesim.pure_density(densesim.basis_state(2, 0b11))
    s, s2 = instance_spin_operators(inst)
    out = apply_clause_channel(rho, inst.clauses[0])
    assert abs(densesim.expectation(s, rho) - (-2.0)) < 1e-12
    assert abs(densesim.expectation(s, out) - (-1.0)) < 1e-12
    assert abs(densesim.expectation(s2, rho) - 4.0) < 1e-12
    assert abs(densesim.expectation(s2, out) - 2.0) < 1e-12
    report = dual_residuals(inst, [rho])
    assert report[0].form is ClauseForm.TYPE_II
    assert report[0].max_residual <= 1e-12


def test_dual_residuals_mixed_instances_within_tolerance():
    rng = np.random.default_rng(14)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        inst = generate_planted_extended(n, int(rng.integers(1, 6)), 0.5, int(rng.integers(2**31)))
        states = [densesim.random_density_matrix(n, rng) for _ in range(3)]
        for item in dual_residuals(inst, states):
            assert item.form in (ClauseForm.RESTRICTED_TYPE_I, ClauseForm.TYPE_II)
            assert item.max_residual <= 1e-9


def test_dual_residuals_general_clause_reports_raw_deviation():
    plus_one = make_clause(0, 1, (0, 1, 0, 1))
    inst = Instance(n=3, clauses=(plus_one,))
    rho = densesim.pure_density(densesim.basis_state(3, 0b111))
    report = dual_residuals(inst, [rho])
    assert report[0].form is ClauseForm.GENERAL_NO_ZERO_ZERO
    # S^2 drops 9 -> 4.5 while the restricted law predicts an increase
    assert report[0].residual_S2[0] > 1.0


def test_mixed_form_cumulative_bound_smoke():
    rng = np.random.default_rng(15)
    for _ in range(5):
        n = int(rng.integers(2, 5))
        inst = generate_planted_extended(n, int(rng.integers(1, 7)), 0.5, int(rng.integers(2**31)))
        series = evolve(densesim.maximally_mixed(n), inst, 300)
        running = (2.0 / inst.L) * np.cumsum(series.trH[:300])
        assert np.max(running) <= 5 * n * n + 1e-6


def test_series_csv_format(tmp_path):
    inst = singlet_instance()
    series = evolve(densesim.maximally_mixed(2), inst, 3)
    path = tmp_path / "series.csv"
    write_series_csv(series, path, meta={"seed": None})
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# seed:")
    assert lines[1] == "t,trH,trS,trS2,trPi0"
    assert len(lines) == 2 + 4
    first = lines[2].split(",")
    assert first[0] == "0"
    assert abs(float(first[1]) - 0.25) < 1e-16
