import numpy as np
import pytest

from qsatwalk.classical import (
    CnfInstance,
    assignment_string,
    check_cnf,
    papadimitriou,
    parse_dimacs,
)
from qsatwalk.errors import DimensionMismatch, ParseError

from helpers import planted_cnf

UNSAT_4 = CnfInstance(
    n=2,
    clauses=(
        ((0, False), (1, False)),
        ((0, False), (1, True)),
        ((0, True), (1, False)),
        ((0, True), (1, True)),
    ),
)


def test_check_cnf_basics():
    inst = CnfInstance(n=3, clauses=(((0, False), (1, False)), ((1, False), (2, False))))
    assert check_cnf([True, True, True], inst)
    assert not check_cnf([False, False, True], inst)
    assert check_cnf([False, False, False], CnfInstance(n=3, clauses=()))


def test_check_cnf_dimension_mismatch():
    inst = CnfInstance(n=3, clauses=(((0, False), (1, False)),))
    with pytest.raises(DimensionMismatch):
        check_cnf([True, True], inst)


def test_empty_clause_list_returns_initial_string():
    inst = CnfInstance(n=5, clauses=())
    got = papadimitriou(inst, 1.0, seed=3)
    want = np.random.default_rng(3).integers(0, 2, size=5).astype(bool)
    assert np.array_equal(got, want)


def test_unsatisfiable_always_returns_none():
    for seed in range(100):
        assert papadimitriou(UNSAT_4, 10.0, seed) is None


def test_satisfiable_instances_verified_solutions():
    for seed in range(30):
        inst, _ = planted_cnf(12, 30, seed)
        got = papadimitriou(inst, 10.0, seed)
        assert got is not None
        assert check_cnf(got, inst)


def test_success_rate_scaling_n50():
    inst, _ = planted_cnf(50, 150, 424242)
    hits = sum(papadimitriou(inst, 10.0, s) is not None for s in range(50))
    assert hits / 50 >= 0.9


def test_initial_satisfying_assignment_short_circuits():
    inst = CnfInstance(n=2, clauses=(((0, False), (1, False)),))
    for seed in range(20):
        got = papadimitriou(inst, 0.25, seed)
        if got is not None:
            assert check_cnf(got, inst)


def test_parse_dimacs_round_trip():
    text = """c tiny example
p cnf 3 2
1 -2 0
-1 3 0
"""
    inst = parse_dimacs(text)
    assert inst.n == 3 and inst.L == 2
    assert inst.clauses[0] == ((0, False), (1, True))
    assert inst.clauses[1] == ((0, True), (2, False))


def test_parse_dimacs_errors():
    with pytest.raises(ParseError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 3 1\n1 2 3 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 3 1\n1 2\n")


def test_assignment_string():
    assert assignment_string([True, False, True]) == "101"
