"""Exact one-step update map of the measurement walk and its long-time evolution.

One clause update measures the clause projector and, on an unsatisfied
outcome, replaces a random one of its two qubits by the maximally mixed
state:

    T_a(rho) = (1-P) rho (1-P) + 1/2 Twirl_i(P rho P) + 1/2 Twirl_j(P rho P)

The full step averages T_a uniformly over clauses. Everything here is exact
dense matrix arithmetic; stochastic pure-state sampling of the same process
lives in `trajectory`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import densesim, observables
from .errors import IndexOutOfRange, NumericalDrift
from .instance import ClauseForm, Instance, Clause, classify_clause

RESYMMETRIZE_EVERY = 100
DRIFT_TOL = 1e-6


def twirl(rho: np.ndarray, q: int) -> np.ndarray:
    """Replace qubit q by the maximally mixed state: (I_q/2) (x) tr_q[rho]."""
    rho = np.asarray(rho, dtype=complex)
    n = densesim.num_qubits(rho)
    if not 0 <= q < n:
        raise IndexOutOfRange(f"qubit {q} outside register of size {n}")
    dl, dr = 2**q, 2 ** (n - 1 - q)
    r = rho.reshape(dl, 2, dr, dl, 2, dr)
    traced = r[:, 0, :, :, 0, :] + r[:, 1, :, :, 1, :]
    out = np.zeros_like(r)
    out[:, 0, :, :, 0, :] = 0.5 * traced
    out[:, 1, :, :, 1, :] = 0.5 * traced
    return out.reshape(2**n, 2**n)


def _apply_projected_update(rho: np.ndarray, proj: np.ndarray, i: int, j: int) -> np.ndarray:
    pr = proj @ rho
    prp = pr @ proj
    survived = rho - pr - rho @ proj + prp
    return survived + 0.5 * (twirl(prp, i) + twirl(prp, j))


def apply_clause_channel(rho: np.ndarray, clause: Clause) -> np.ndarray:
    """One clause update T_a applied to a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    n = densesim.num_qubits(rho)
    if clause.i >= n or clause.j >= n:
        raise IndexOutOfRange(f"clause acts on ({clause.i}, {clause.j}) but state has n={n}")
    proj = observables.clause_projector(clause, n)
    return _apply_projected_update(rho, proj, clause.i, clause.j)


def apply_step_channel(rho: np.ndarray, inst: Instance) -> np.ndarray:
    """Uniform average of the clause updates over all L clauses."""
    rho = np.asarray(rho, dtype=complex)
    n = densesim.num_qubits(rho)
    if n != inst.n:
        raise IndexOutOfRange(f"state has {n} qubits but instance has {inst.n}")
    out = np.zeros_like(rho)
    for c in inst.clauses:
        out += apply_clause_channel(rho, c)
    return out / inst.L


@dataclass
class EvolutionSeries:
    """Scalar observables of rho_t for t = 0..steps, plus optional snapshots."""

    steps: int
    trH: np.ndarray
    trS: np.ndarray
    trS2: np.ndarray
    trPi0: np.ndarray
    snapshots: dict = field(default_factory=dict)

    def rows(self):
        for t in range(self.steps + 1):
            yield t, self.trH[t], self.trS[t], self.trS2[t], self.trPi0[t]


def evolve(rho0: np.ndarray, inst: Instance, steps: int, snapshot_schedule=()) -> EvolutionSeries:
    """Apply the step channel `steps` times, recording observables at every step.

    Hermiticity and trace are re-symmetrized every 100 steps; drift beyond
    1e-6 before a correction raises NumericalDrift. Snapshots of the full
    density matrix are kept only at the requested step indices.
    """
    rho = densesim.as_density_matrix(rho0).copy()
    if steps < 0:
        raise IndexOutOfRange(f"steps must be >= 0, got {steps}")
    n = inst.n
    if densesim.num_qubits(rho) != n:
        raise IndexOutOfRange("initial state dimension does not match instance")
    projs = [observables.clause_projector(c, n) for c in inst.clauses]
    pairs = [(c.i, c.j) for c in inst.clauses]
    h = sum(projs)
    s, s2 = observables.instance_spin_operators(inst)
    pi0 = observables.ground_space_projector(h)
    wanted = set(int(t) for t in snapshot_schedule)

    trH = np.empty(steps + 1)
    trS = np.empty(steps + 1)
    trS2 = np.empty(steps + 1)
    trPi0 = np.empty(steps + 1)
    snapshots: dict[int, np.ndarray] = {}
    for t in range(steps + 1):
        trH[t] = np.einsum("ij,ji->", h, rho).real
        trS[t] = np.einsum("ij,ji->", s, rho).real
        trS2[t] = np.einsum("ij,ji->", s2, rho).real
        trPi0[t] = np.einsum("ij,ji->", pi0, rho).real
        if t in wanted:
            snapshots[t] = rho.copy()
        if t == steps:
            break
        nxt = np.zeros_like(rho)
        for proj, (i, j) in zip(projs, pairs):
            nxt += _apply_projected_update(rho, proj, i, j)
        rho = nxt / inst.L
        if (t + 1) % RESYMMETRIZE_EVERY == 0:
            herm = np.max(np.abs(rho - rho.conj().T))
            tr_err = abs(np.trace(rho).real - 1.0)
            if herm > DRIFT_TOL or tr_err > DRIFT_TOL:
                raise NumericalDrift(
                    f"drift at step {t + 1}: hermiticity {herm}, trace error {tr_err}"
                )
            rho = (rho + rho.conj().T) / 2
            rho /= np.trace(rho).real
    return EvolutionSeries(steps=steps, trH=trH, trS=trS, trS2=trS2, trPi0=trPi0, snapshots=snapshots)


@dataclass(frozen=True)
class ClauseResiduals:
    index: int
    form: ClauseForm
    residual_S: np.ndarray    # one entry per sample state
    residual_S2: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(max(np.max(self.residual_S), np.max(self.residual_S2)))


def dual_residuals(inst: Instance, sample_states) -> list[ClauseResiduals]:
    """Per-clause deviation from the known drift of the spin diagnostics.

    For each clause and sample state, compares tr[S T_a(rho)] against
    tr[(S + dS) rho] (and the S^2 analogue), where the increments depend on
    the clause form: restricted clauses leave S alone and raise S^2 by 2P;
    |11><11| clauses raise S by P and shift S^2 by -2P + 2*Z_rest*P. Clauses
    of any other form are scored against the restricted increments, so their
    residuals simply report how far they stray from that law.
    """
    n = inst.n
    s, s2 = observables.instance_spin_operators(inst)
    v = observables.frame_unitary(inst)
    states = [densesim.as_density_matrix(r) for r in sample_states]
    report = []
    for idx, clause in enumerate(inst.clauses):
        proj = observables.clause_projector(clause, n)
        form = classify_clause(clause)
        if form is ClauseForm.TYPE_II:
            delta_s = proj
            z_rest = observables.spectator_spin(n, clause.i, clause.j)
            if v is not None:
                z_rest = v @ z_rest @ v.conj().T
            delta_s2 = -2.0 * proj + 2.0 * (z_rest @ proj)
        else:
            delta_s = np.zeros_like(proj)
            delta_s2 = 2.0 * proj
        res_s = np.empty(len(states))
        res_s2 = np.empty(len(states))
        for k, rho in enumerate(states):
            out = _apply_projected_update(rho, proj, clause.i, clause.j)
            res_s[k] = abs(
                np.einsum("ij,ji->", s, out).real
                - np.einsum("ij,ji->", s + delta_s, rho).real
            )
            res_s2[k] = abs(
                np.einsum("ij,ji->", s2, out).real
                - np.einsum("ij,ji->", s2 + delta_s2, rho).real
            )
        report.append(ClauseResiduals(index=idx, form=form, residual_S=res_s, residual_S2=res_s2))
    return report


def write_series_csv(series: EvolutionSeries, path, meta: dict | None = None) -> None:
    """CSV export: header t,trH,trS,trS2,trPi0, 17 significant digits per value."""
    with open(path, "w") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}: {value}\n")
        fh.write("t,trH,trS,trS2,trPi0\n")
        for t, a, b, c, d in series.rows():
            fh.write(f"{t},{a:.17g},{b:.17g},{c:.17g},{d:.17g}\n")
