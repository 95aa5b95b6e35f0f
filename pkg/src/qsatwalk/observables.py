"""Analysis operators: total-spin diagnostics, clause Hamiltonian, spectral data.

The spin operators are diagnostics defined in the frame where a planted
solution (if any) is the all-|0> product state. For instances carrying a
planted basis they are therefore conjugated by the product unitary of that
basis; the satisfying-subspace projector and the Hamiltonian need no such
treatment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densesim
from .errors import DegenerateSpectrum, InvalidTarget
from .instance import Instance, Clause

ZERO_TOL = 1e-10


def _spin_diagonal(n: int) -> np.ndarray:
    weights = np.array([bin(x).count("1") for x in range(2**n)])
    return (n - 2 * weights).astype(float)


def build_total_spin(n: int) -> np.ndarray:
    """Sum of sigma_z over all qubits; diagonal value n - 2*hamming(x)."""
    if n < 1:
        raise InvalidTarget(f"need n >= 1, got {n}")
    return np.diag(_spin_diagonal(n)).astype(complex)


def build_total_spin_squared(n: int) -> np.ndarray:
    """Square of the total-spin operator; maximum eigenvalue n^2."""
    if n < 1:
        raise InvalidTarget(f"need n >= 1, got {n}")
    return np.diag(_spin_diagonal(n) ** 2).astype(complex)


def spectator_spin(n: int, i: int, j: int) -> np.ndarray:
    """Sum of sigma_z over every qubit except i and j (diagonal operator)."""
    diag = _spin_diagonal(n).copy()
    for x in range(2**n):
        zi = 1 - 2 * ((x >> (n - 1 - i)) & 1)
        zj = 1 - 2 * ((x >> (n - 1 - j)) & 1)
        diag[x] -= zi + zj
    return np.diag(diag).astype(complex)


def frame_unitary(inst: Instance) -> np.ndarray | None:
    """Product unitary of the planted basis, or None when absent/identity."""
    if inst.planted_basis is None:
        return None
    if all(np.array_equal(b, np.eye(2)) for b in inst.planted_basis):
        return None
    return densesim.product_unitary(inst.planted_basis)


def instance_spin_operators(inst: Instance):
    """(S, S^2) in the frame of the instance's planted basis, if any."""
    s = build_total_spin(inst.n)
    s2 = build_total_spin_squared(inst.n)
    v = frame_unitary(inst)
    if v is None:
        return s, s2
    vd = v.conj().T
    return v @ s @ vd, v @ s2 @ vd


def clause_projector(clause: Clause, n: int) -> np.ndarray:
    """Embedded 2^n x 2^n projector of a clause."""
    return densesim.kron_embed(np.outer(clause.amps, clause.amps.conj()), clause.i, clause.j, n)


def build_hamiltonian(inst: Instance) -> np.ndarray:
    """Sum of all embedded clause projectors; PSD with eigenvalues in [0, L]."""
    h = np.zeros((2**inst.n, 2**inst.n), dtype=complex)
    for c in inst.clauses:
        h += clause_projector(c, inst.n)
    return h


@dataclass(frozen=True)
class SpectralData:
    min_eigenvalue: float
    epsilon: float
    ground_degeneracy: int
    ground_projector: np.ndarray
    eigenvalues: np.ndarray


def spectral_data(h: np.ndarray, zero_tol: float = ZERO_TOL) -> SpectralData:
    """Ground degeneracy, ground projector, and smallest nonzero eigenvalue.

    Eigenvalues below zero_tol count as ground space; epsilon is the smallest
    eigenvalue at or above it. Raises DegenerateSpectrum when no eigenvalue
    clears the threshold (an all-zero operator).
    """
    vals, vecs = densesim.hermitian_eig(h)
    ground = vals < zero_tol
    nonzero = vals[~ground]
    if nonzero.size == 0:
        raise DegenerateSpectrum(
            f"no eigenvalue reaches {zero_tol}; spectral gap undefined"
        )
    g = vecs[:, ground]
    return SpectralData(
        min_eigenvalue=float(vals[0]),
        epsilon=float(nonzero[0]),
        ground_degeneracy=int(np.sum(ground)),
        ground_projector=g @ g.conj().T,
        eigenvalues=vals,
    )


def ground_space_projector(h: np.ndarray, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Projector onto eigenvalues below zero_tol (zero matrix if none)."""
    vals, vecs = densesim.hermitian_eig(h)
    g = vecs[:, vals < zero_tol]
    return g @ g.conj().T


def low_energy_weight(rho: np.ndarray, h: np.ndarray, threshold: float) -> float:
    """Weight of rho on eigenstates of h with eigenvalue strictly below threshold."""
    if threshold <= 0:
        raise InvalidTarget(f"threshold must be positive, got {threshold}")
    vals, vecs = densesim.hermitian_eig(h)
    sel = vecs[:, vals < threshold]
    proj = sel @ sel.conj().T
    return densesim.expectation(proj, rho)
