"""Dense complex linear algebra over the 2^n-dimensional Hilbert space of n qubits.

Conventions used throughout the package:

* qubit 0 is the most significant bit of a basis-state index, so the basis
  state |q0 q1 ... q_{n-1}> has index sum_k q_k * 2^(n-1-k);
* sigma_z |0> = +|0>, i.e. sigma_z = diag(1, -1).

Everything is stored dense, which keeps the code simple and exact; the
practical ceiling is about 12 qubits for density matrices and 20 for state
vectors.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonRealExpectation,
    NotHermitian,
    NotUnitary,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
STATE_NORM_TOL = 1e-9
EIG_RESIDUAL_TOL = 1e-8

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def num_qubits(obj) -> int:
    """Number of qubits of a state vector, density matrix, or square operator."""
    arr = np.asarray(obj)
    dim = arr.shape[0]
    if arr.ndim == 2 and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if arr.ndim not in (1, 2):
        raise DimensionMismatch(f"expected a vector or matrix, got ndim={arr.ndim}")
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def basis_state(n: int, index: int) -> np.ndarray:
    """Computational basis state |index> on n qubits."""
    if not 0 <= index < 2**n:
        raise IndexOutOfRange(f"basis index {index} outside [0, 2^{n})")
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1.0
    return psi


def maximally_mixed(n: int) -> np.ndarray:
    d = 2**n
    return np.eye(d, dtype=complex) / d


def pure_density(psi: np.ndarray) -> np.ndarray:
    psi = as_state_vector(psi)
    return np.outer(psi, psi.conj())


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def as_state_vector(psi) -> np.ndarray:
    """Validate norm and dtype of a pure state; returns a complex array."""
    psi = np.asarray(psi, dtype=complex)
    num_qubits(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise DimensionMismatch(f"state vector norm {norm} is not 1 within {STATE_NORM_TOL}")
    return psi


def as_density_matrix(rho, check_psd: bool = True) -> np.ndarray:
    """Validate Hermiticity, trace and (optionally) positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    num_qubits(rho)
    if rho.ndim != 2:
        raise DimensionMismatch("density matrix must be 2-D")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise NotHermitian(f"density matrix deviates from Hermitian by {herm}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise DimensionMismatch(f"density matrix trace {tr} is not 1 within {TRACE_TOL}")
    if check_psd:
        lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
        if lo < -PSD_TOL:
            raise DimensionMismatch(f"density matrix has eigenvalue {lo} < -{PSD_TOL}")
    return rho


def random_state_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def random_density_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix from a Ginibre square."""
    d = 2**n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    d = 2**n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def kron_embed(op4: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Embed a two-qubit operator onto qubits (i, j) of an n-qubit register.

    Qubit i is the left tensor factor of `op4`; the identity acts everywhere
    else. Works for any i != j, adjacent or not, in either order.
    """
    op4 = np.asarray(op4, dtype=complex)
    if op4.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 operator, got shape {op4.shape}")
    if i == j or not (0 <= i < n) or not (0 <= j < n):
        raise IndexOutOfRange(f"qubit pair ({i}, {j}) invalid for n={n}")
    if n == 2 and (i, j) == (0, 1):
        return op4.copy()
    rest = [q for q in range(n) if q != i and q != j]
    full = np.kron(op4, np.eye(2 ** (n - 2), dtype=complex))
    order = [i, j] + rest
    # axis k of the reshaped tensor carries qubit order[k]; permute to natural order
    perm = list(np.argsort(order))
    tensor = full.reshape([2] * (2 * n))
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(tensor.reshape(2**n, 2**n))


def embed_single(op2: np.ndarray, q: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at position q."""
    op2 = np.asarray(op2, dtype=complex)
    if op2.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 operator, got shape {op2.shape}")
    if not 0 <= q < n:
        raise IndexOutOfRange(f"qubit {q} outside register of size {n}")
    left = np.eye(2**q, dtype=complex)
    right = np.eye(2 ** (n - 1 - q), dtype=complex)
    return np.kron(np.kron(left, op2), right)


def product_unitary(blocks) -> np.ndarray:
    """Tensor product of single-qubit blocks, qubit 0 leftmost."""
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    for k, b in enumerate(blocks):
        if b.shape != (2, 2):
            raise DimensionMismatch(f"block {k} has shape {b.shape}, expected 2x2")
    return reduce(np.kron, blocks)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol


def require_unitary(u: np.ndarray, tol: float = 1e-10, what: str = "matrix") -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise NotUnitary(f"{what} is not unitary within {tol}")
    return u


def partial_trace(rho: np.ndarray, q: int) -> np.ndarray:
    """Trace out qubit q, returning the (n-1)-qubit reduced matrix."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    if not 0 <= q < n:
        raise IndexOutOfRange(f"qubit {q} outside register of size {n}")
    dl, dr = 2**q, 2 ** (n - 1 - q)
    r = rho.reshape(dl, 2, dr, dl, 2, dr)
    out = r[:, 0, :, :, 0, :] + r[:, 1, :, :, 1, :]
    return np.ascontiguousarray(out.reshape(dl * dr, dl * dr))


def hermitian_eig(a: np.ndarray, tol: float = HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). Raises NotHermitian
    when the input deviates from Hermitian by more than `tol`.
    """
    a = np.asarray(a, dtype=complex)
    num_qubits(a)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev}")
    vals, vecs = np.linalg.eigh(a)
    return vals, vecs


def expectation(a: np.ndarray, state: np.ndarray) -> float:
    """tr[A rho] for a density matrix, or <psi|A|psi> for a state vector.

    The imaginary residue is checked against 1e-8 and then discarded.
    """
    a = np.asarray(a, dtype=complex)
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if a.shape != (state.shape[0], state.shape[0]):
            raise DimensionMismatch(f"operator {a.shape} vs state dim {state.shape[0]}")
        val = np.vdot(state, a @ state)
    elif state.ndim == 2:
        if a.shape != state.shape:
            raise DimensionMismatch(f"operator {a.shape} vs density matrix {state.shape}")
        val = np.einsum("ij,ji->", a, state)
    else:
        raise DimensionMismatch("state must be a vector or a square matrix")
    if abs(val.imag) > 1e-8:
        raise NonRealExpectation(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) * trace norm of (a - b) for Hermitian a, b."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    vals = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    return 0.5 * float(np.sum(np.abs(vals)))
