import json

import numpy as np
import pytest

from qsatwalk import densesim
from qsatwalk.errors import (
    CertificationFailed,
    NotUnitary,
    ParseError,
    QubitPairInvalid,
    ZeroVector,
)
from qsatwalk.instance import (
    ClauseForm,
    Promise,
    classify_clause,
    clause_census,
    conjugate_instance,
    deserialize,
    generate_no_instance,
    generate_planted_extended,
    generate_planted_restricted,
    make_clause,
    serialize,
)
from qsatwalk.observables import build_hamiltonian, clause_projector

from helpers import random_product_basis

SINGLET = (0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0)


def test_make_clause_keeps_unit_norm():
    c = make_clause(0, 1, SINGLET)
    assert abs(np.linalg.norm(c.amps) - 1.0) < 1e-14
    assert np.allclose(c.amps, SINGLET)


def test_make_clause_normalizes():
    c = make_clause(0, 1, (0, 2.0, 0, 0))
    assert np.allclose(c.amps, (0, 1, 0, 0))


def test_make_clause_type_ii():
    c = make_clause(0, 1, (0, 0, 0, 1))
    assert classify_clause(c) is ClauseForm.TYPE_II


def test_make_clause_rejects_equal_pair():
    with pytest.raises(QubitPairInvalid):
        make_clause(2, 2, (1, 0, 0, 0))
    with pytest.raises(QubitPairInvalid):
        make_clause(-1, 0, (1, 0, 0, 0))


def test_make_clause_rejects_zero_vector():
    with pytest.raises(ZeroVector):
        make_clause(0, 1, (0, 1e-15, 0, 0))


def test_classify_forms():
    assert classify_clause(make_clause(0, 1, (0, 0.6, 0.8, 0))) is ClauseForm.RESTRICTED_TYPE_I
    assert classify_clause(make_clause(0, 1, (0, 0, 0, 1))) is ClauseForm.TYPE_II
    assert (
        classify_clause(make_clause(0, 1, (0, 1 / np.sqrt(2), 0, 1 / np.sqrt(2))))
        is ClauseForm.GENERAL_NO_ZERO_ZERO
    )
    assert classify_clause(make_clause(0, 1, (0.5, 0.5, 0.5, 0.5))) is ClauseForm.ARBITRARY


def test_classify_invariant_under_global_phase():
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        c = make_clause(0, 1, v)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        assert classify_clause(make_clause(0, 1, phase * c.amps)) is classify_clause(c)


def test_generate_restricted_small():
    inst = generate_planted_restricted(2, 1, seed=7)
    c = inst.clauses[0]
    assert (c.i, c.j) == (0, 1)
    assert classify_clause(c) is ClauseForm.RESTRICTED_TYPE_I
    psi = inst.planted_state()
    assert np.allclose(psi, densesim.basis_state(2, 0))
    assert densesim.expectation(clause_projector(c, 2), densesim.pure_density(psi)) < 1e-10


def test_generate_restricted_all_type_i():
    inst = generate_planted_restricted(4, 6, seed=1)
    assert clause_census(inst) == {"restricted-type-i": 6}


def test_generate_restricted_rejects_single_qubit():
    with pytest.raises(QubitPairInvalid):
        generate_planted_restricted(1, 1, seed=0)


def test_generate_extended_forms():
    inst = generate_planted_extended(5, 10, 0.5, seed=3)
    forms = {classify_clause(c) for c in inst.clauses}
    assert forms <= {ClauseForm.RESTRICTED_TYPE_I, ClauseForm.TYPE_II}


def test_generate_extended_degenerate_fractions():
    zero = generate_planted_extended(4, 8, 0.0, seed=5)
    assert clause_census(zero) == {"restricted-type-i": 8}
    forced = generate_planted_extended(2, 1, 1.0, seed=5)
    assert np.allclose(forced.clauses[0].amps, (0, 0, 0, 1))


def test_planted_state_annihilated_across_generators():
    for seed in range(5):
        for inst in (
            generate_planted_restricted(4, 5, seed),
            generate_planted_extended(4, 5, 0.5, seed),
        ):
            rho = densesim.pure_density(inst.planted_state())
            for c in inst.clauses:
                assert densesim.expectation(clause_projector(c, inst.n), rho) <= 1e-10


def test_no_complete_pair_certifies_unit_gap():
    inst = generate_no_instance(2, "complete_pair")
    assert inst.L == 4
    assert inst.promise.kind == "no" and inst.promise.c == 1.0
    vals, _ = densesim.hermitian_eig(build_hamiltonian(inst))
    assert abs(vals[0] - 1.0) < 1e-9


def test_no_random_certified_reaches_target():
    inst = generate_no_instance(3, "random_certified", c_target=0.05, seed=5)
    assert inst.promise.c >= 0.05
    vals, _ = densesim.hermitian_eig(build_hamiltonian(inst))
    assert abs(vals[0] - inst.promise.c) < 1e-9


def test_no_random_certified_impossible_target():
    with pytest.raises(CertificationFailed):
        generate_no_instance(2, "random_certified", c_target=10.0, seed=0, max_attempts=50)


def test_conjugate_identity_is_noop():
    inst = generate_planted_restricted(3, 4, seed=9)
    same = conjugate_instance(inst, [np.eye(2)] * 3)
    for a, b in zip(inst.clauses, same.clauses):
        assert np.allclose(a.amps, b.amps)


def test_conjugate_singlet_invariance():
    # (u (x) u) leaves the singlet fixed up to phase; oracle is plain 4x4 algebra
    from qsatwalk.instance import Instance

    singlet = np.array(SINGLET, dtype=complex)
    inst = Instance(n=2, clauses=(make_clause(0, 1, singlet),), promise=Promise(kind="yes"))
    u = random_product_basis(1, 42)[0]
    rotated = conjugate_instance(inst, [u, u])
    expected = np.kron(u, u) @ singlet
    assert np.allclose(rotated.clauses[0].amps, expected)
    overlap = abs(np.vdot(rotated.clauses[0].amps, singlet))
    assert abs(overlap - 1.0) < 1e-10


def test_conjugate_rejects_non_unitary():
    inst = generate_planted_restricted(2, 1, seed=0)
    with pytest.raises(NotUnitary):
        conjugate_instance(inst, [np.eye(2), np.array([[1, 0], [0, 2.0]])])


def test_conjugate_preserves_planted_energy():
    inst = generate_planted_extended(3, 4, 0.3, seed=8)
    basis = random_product_basis(3, 77)
    rotated = conjugate_instance(inst, basis)
    rho = densesim.pure_density(rotated.planted_state())
    for c in rotated.clauses:
        assert densesim.expectation(clause_projector(c, 3), rho) <= 1e-10


def test_conjugate_transports_expectations():
    inst = generate_planted_restricted(3, 3, seed=15)
    basis = random_product_basis(3, 16)
    rotated = conjugate_instance(inst, basis)
    rng = np.random.default_rng(17)
    psi = densesim.random_state_vector(3, rng)
    v = densesim.product_unitary(basis)
    for c, cr in zip(inst.clauses, rotated.clauses):
        before = densesim.expectation(clause_projector(c, 3), psi)
        after = densesim.expectation(clause_projector(cr, 3), v @ psi)
        assert abs(before - after) < 1e-10


def test_serialize_round_trip_random_instances():
    rng = np.random.default_rng(100)
    for k in range(100):
        kind = k % 3
        if kind == 0:
            inst = generate_planted_restricted(int(rng.integers(2, 6)), int(rng.integers(1, 7)), k)
        elif kind == 1:
            inst = generate_planted_extended(
                int(rng.integers(2, 6)), int(rng.integers(1, 7)), 0.5, k
            )
        else:
            base = generate_planted_restricted(int(rng.integers(2, 5)), int(rng.integers(1, 5)), k)
            inst = conjugate_instance(base, random_product_basis(base.n, k))
        text = serialize(inst)
        back = deserialize(text)
        assert back.n == inst.n and back.L == inst.L
        for a, b in zip(inst.clauses, back.clauses):
            assert (a.i, a.j) == (b.i, b.j)
            assert np.max(np.abs(a.amps - b.amps)) <= 1e-15
        if inst.planted_basis is not None:
            for a, b in zip(inst.planted_basis, back.planted_basis):
                assert np.array_equal(a, b)
        assert serialize(back) == text  # re-serialization is bit-exact


def test_deserialize_missing_n():
    with pytest.raises(ParseError) as err:
        deserialize('{"clauses": []}')
    assert "n" in str(err.value)


def test_deserialize_rejects_denormalized_amps():
    doc = {
        "n": 2,
        "clauses": [{"i": 0, "j": 1, "amps": [[2.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}],
    }
    with pytest.raises(ParseError) as err:
        deserialize(json.dumps(doc))
    assert "normalization" in str(err.value)


def test_deserialize_reports_json_line():
    with pytest.raises(ParseError) as err:
        deserialize('{"n": 2,\n "clauses": oops}')
    assert "line" in str(err.value)


def test_instance_rejects_out_of_range_clause():
    with pytest.raises(QubitPairInvalid):
        from qsatwalk.instance import Instance

        Instance(n=2, clauses=(make_clause(0, 3, (0, 1, 0, 0)),))
