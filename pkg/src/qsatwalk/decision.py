"""Decision procedure: step budget, acceptance threshold, and the verdict.

For promise gap c, L clauses and n qubits the restricted variant runs

    f = max(7/c, 1),  T = ceil(f^2 L^2 n^2 / 2),
    N = T ((fL-1)/(fL))^3 - f L n,

accepting when the zero-outcome count reaches ceil(N). The extended variant
(restricted plus |11><11| clauses) uses f = max(22/(5c), 1), five times the
step budget, and a 2fLn threshold slack. A YES instance passes with
probability >= 2/3 and a NO instance with probability <= 1/3; both margins
are loose in practice.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import channel, densesim
from .errors import InvalidPromise, InvalidTarget
from .instance import Instance
from .trajectory import run_trajectory


class Variant(enum.Enum):
    RESTRICTED = "restricted"
    EXTENDED = "extended"


def _ceil(x: float) -> int:
    # tolerate float fuzz just above an integer (e.g. 4/(2*0.1) = 20.000000000000004)
    return int(math.ceil(x - 1e-9))


@dataclass(frozen=True)
class DecisionParams:
    variant: Variant
    c: float
    f: float
    T: int
    N: float
    N_int: int
    p_worst: float
    q_worst: float


@dataclass(frozen=True)
class Verdict:
    decision: str  # "YES" or "NO"
    N0: int
    params: DecisionParams
    seed: object


def decision_params(c: float, L: int, n: int, variant: Variant = Variant.RESTRICTED) -> DecisionParams:
    """Evaluate the step budget and acceptance threshold for a promise gap.

    Warns (and clamps the integer threshold to 0) when N comes out
    nonpositive, which happens at tiny scales where the bound is vacuous.
    """
    if c <= 0:
        raise InvalidPromise(f"promise gap must be positive, got c={c}")
    if L < 1 or n < 2:
        raise InvalidPromise(f"need L >= 1 and n >= 2, got L={L}, n={n}")
    if variant is Variant.RESTRICTED:
        f = max(7.0 / c, 1.0)
        t_real = f * f * L * L * n * n / 2.0
        slack = f * L * n
    elif variant is Variant.EXTENDED:
        f = max(22.0 / (5.0 * c), 1.0)
        t_real = 5.0 * f * f * L * L * n * n / 2.0
        slack = 2.0 * f * L * n
    else:
        raise InvalidPromise(f"unknown variant {variant!r}")
    t_steps = _ceil(t_real)
    ratio = (f * L - 1.0) / (f * L)
    n_real = t_steps * ratio**3 - slack
    if n_real <= 0:
        warnings.warn(
            f"acceptance threshold N={n_real:.6g} is nonpositive; the bound is "
            f"vacuous at this scale (c={c}, L={L}, n={n})",
            RuntimeWarning,
            stacklevel=2,
        )
    n_int = max(0, _ceil(n_real))
    return DecisionParams(
        variant=variant,
        c=float(c),
        f=f,
        T=t_steps,
        N=n_real,
        N_int=n_int,
        p_worst=ratio**2,
        q_worst=max(0.0, 1.0 - c / L),
    )


def decide(inst: Instance, params: DecisionParams, master_seed) -> Verdict:
    """Run one trajectory of params.T steps and threshold its zero count."""
    record = run_trajectory(inst, params.T, master_seed)
    decision = "YES" if record.N0 >= params.N_int else "NO"
    return Verdict(decision=decision, N0=record.N0, params=params, seed=master_seed)


def convergence_steps(n: int, L: int, epsilon: float, p: float, variant: Variant = Variant.RESTRICTED) -> int:
    """Steps after which the channel's ground-space weight is at least p.

    Requires the spectral gap epsilon of the instance Hamiltonian; the
    extended variant needs five times as many steps.
    """
    if not 0.0 < p < 1.0:
        raise InvalidTarget(f"target overlap p must lie in (0, 1), got {p}")
    if epsilon <= 0:
        raise InvalidTarget(f"spectral gap must be positive, got {epsilon}")
    base = n * n * L / (2.0 * (1.0 - p) * epsilon)
    if variant is Variant.EXTENDED:
        base *= 5.0
    return _ceil(base)


def expected_zero_count(inst: Instance, T: int) -> float:
    """Mean zero-outcome count of a length-T run, from exact channel evolution.

    Starts at the maximally mixed state and sums the per-step satisfied
    probability 1 - tr[H rho_t]/L over t < T.
    """
    series = channel.evolve(densesim.maximally_mixed(inst.n), inst, T)
    return float(np.sum(1.0 - series.trH[:T] / inst.L))


def verdict_to_json(verdict: Verdict) -> str:
    doc = {
        "decision": verdict.decision,
        "N0": verdict.N0,
        "T": verdict.params.T,
        "N_int": verdict.params.N_int,
        "f": verdict.params.f,
        "variant": verdict.params.variant.value,
        "seed": verdict.seed,
    }
    return json.dumps(doc, indent=1)
