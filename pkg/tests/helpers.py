"""Shared test utilities: independent oracles and small generators."""

import numpy as np

from qsatwalk.classical import CnfInstance
from qsatwalk.trajectory import haar_unitary


def embed_oracle(op4, i, j, n):
    """Index-arithmetic embedding of a two-qubit operator (independent of kron_embed)."""
    op4 = np.asarray(op4, dtype=complex)
    d = 2**n
    out = np.zeros((d, d), dtype=complex)
    mask = sum(1 << (n - 1 - q) for q in (i, j))
    for x in range(d):
        for y in range(d):
            if (x & ~mask) != (y & ~mask):
                continue
            rx = 2 * ((x >> (n - 1 - i)) & 1) + ((x >> (n - 1 - j)) & 1)
            ry = 2 * ((y >> (n - 1 - i)) & 1) + ((y >> (n - 1 - j)) & 1)
            out[x, y] = op4[rx, ry]
    return out


def random_product_basis(n, seed):
    rng = np.random.default_rng(seed)
    return [haar_unitary(rng) for _ in range(n)]


def planted_cnf(n, L, seed):
    """Satisfiable random 2-CNF: every clause is satisfied by a hidden assignment."""
    rng = np.random.default_rng(seed)
    hidden = rng.integers(0, 2, size=n).astype(bool)
    clauses = []
    while len(clauses) < L:
        v, w = rng.choice(n, size=2, replace=False)
        neg_v = bool(rng.integers(2))
        neg_w = bool(rng.integers(2))
        if (hidden[v] != neg_v) or (hidden[w] != neg_w):
            clauses.append(((int(v), neg_v), (int(w), neg_w)))
    return CnfInstance(n=n, clauses=tuple(clauses)), hidden
