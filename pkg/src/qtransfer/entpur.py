"""Channel-purification transfer strategy.

A supply of N identical noisy pairs is repeatedly distilled: pairs are
combined two at a time, a parity test keeps or discards each combination,
and one pair is set aside whenever the count is odd so a failure late in
the run can still fall back on it. The run ends when a single pair is left
(teleport with it), when every pair is lost but one was stored (teleport
with the stored one), or when everything is gone (completely mixed output,
fidelity 1/2).

This module provides the one-step closed forms, a 16x16 matrix oracle for
the step, the exact expected fidelity of the whole run by exhaustive path
enumeration, and a seeded vectorized Monte Carlo cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .channel import single_shot_fidelity
from .qmath import BellDiagonal

_SQRT_HALF = 1.0 / math.sqrt(2.0)
# One side rotates by +pi/2 about x, the other by -pi/2, before the CNOTs.
_ROT_FORWARD = _SQRT_HALF * (qmath.ID2 - 1j * qmath.SIGMA_X)
_ROT_BACKWARD = _SQRT_HALF * (qmath.ID2 + 1j * qmath.SIGMA_X)

_KET_PROJ = (np.array([[1, 0], [0, 0]], dtype=complex), np.array([[0, 0], [0, 1]], dtype=complex))


def _require_unit_interval(lam: float) -> None:
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")


def pass_probability(lam: float) -> float:
    """Probability (8*lam**2 - 4*lam + 5)/9 that one purification step keeps the pair."""
    _require_unit_interval(lam)
    return (8.0 * lam * lam - 4.0 * lam + 5.0) / 9.0


def purify_lambda(lam: float) -> float:
    """Werner parameter (10*lam**2 - 2*lam + 1)/(8*lam**2 - 4*lam + 5) after one kept step.

    Fixed points at 1/2 and 1; strictly improving in between, strictly
    degrading below 1/2.
    """
    _require_unit_interval(lam)
    return (10.0 * lam * lam - 2.0 * lam + 1.0) / (8.0 * lam * lam - 4.0 * lam + 5.0)


def purified_bell_diagonal(lam: float) -> tuple[BellDiagonal, float]:
    """Closed-form Bell weights of the surviving pair and the pass probability."""
    p_pass = pass_probability(lam)
    w_phi_plus = (10.0 * lam * lam - 2.0 * lam + 1.0) / (9.0 * p_pass)
    w_phi_minus = 2.0 * (lam - lam * lam) / (3.0 * p_pass)
    w_psi = 2.0 * (1.0 - lam) ** 2 / (9.0 * p_pass)
    bd = BellDiagonal(w_phi_plus=w_phi_plus, w_psi_plus=w_psi,
                      w_phi_minus=w_phi_minus, w_psi_minus=w_psi)
    return bd, p_pass


def outcome_probability(pairs: int, j: int, lam: float) -> float:
    """Binomial chance that j of `pairs` simultaneous purification attempts survive."""
    if pairs < 1:
        raise ValueError("pairs must be at least 1")
    if not 0 <= j <= pairs:
        raise ValueError(f"j must lie in 0..{pairs}")
    p = pass_probability(lam)
    return math.comb(pairs, j) * p ** j * (1.0 - p) ** (pairs - j)


def step_oracle(lam: float) -> tuple[BellDiagonal, float]:
    """Matrix simulation of one purification step on two identical Werner pairs.

    Qubit order is sender1, receiver1, sender2, receiver2. Applies the
    single-qubit x-rotations (sender +pi/2, receiver -pi/2), the two CNOTs
    with pair 1 controlling pair 2, measures pair 2 in the computational
    basis, and keeps the coinciding outcomes. Returns the Bell weights of
    the surviving pair and the total coincidence probability.
    """
    _require_unit_interval(lam)
    werner = qmath.werner_density(lam)
    rho = qmath.tensor(werner, werner)
    for q in (0, 2):
        rho = qmath.apply_unitary(rho, _ROT_FORWARD, [q])
    for q in (1, 3):
        rho = qmath.apply_unitary(rho, _ROT_BACKWARD, [q])
    rho = qmath.apply_unitary(rho, qmath.CNOT, [0, 2])
    rho = qmath.apply_unitary(rho, qmath.CNOT, [1, 3])
    bit_pairs = ((0, 0), (0, 1), (1, 0), (1, 1))
    projectors = [qmath.tensor(np.eye(4, dtype=complex), np.kron(_KET_PROJ[a], _KET_PROJ[b]))
                  for a, b in bit_pairs]
    outcomes = qmath.measure_projective(rho, projectors)
    kept = np.zeros_like(rho)
    p_pass = 0.0
    for (a, b), (prob, post) in zip(bit_pairs, outcomes):
        if a == b and post is not None:
            kept += prob * post
            p_pass += prob
    pair = qmath.partial_trace(kept, keep=[0, 1]) / p_pass
    return qmath.bell_diagonal_weights(pair), p_pass


@dataclass(frozen=True)
class EntPurResult:
    """Expected output fidelity of a full purification run, with optional Monte Carlo companion."""

    expected_fidelity: float
    path_count: int
    mc_estimate: float | None = None
    mc_stderr: float | None = None
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not 0.5 - 1e-12 <= self.expected_fidelity <= 1.0 + 1e-12:
            raise ValueError("expected fidelity must lie in [1/2, 1]")
        if self.mc_stderr is not None and self.mc_stderr < 0.0:
            raise ValueError("standard error must be nonnegative")


def _max_rounds(n_ebits: int) -> int:
    return max(1, math.ceil(math.log2(max(n_ebits, 2)))) + 1


def _lambda_sequence(lam0: float, rounds: int) -> list[float]:
    seq = [lam0]
    for _ in range(rounds):
        seq.append(purify_lambda(seq[-1]))
    return seq


def _validate_run_args(n_ebits: int, lam0: float) -> None:
    if n_ebits < 1:
        raise ValueError("the run needs at least one pair")
    if not 0.25 <= lam0 <= 1.0:
        raise ValueError("channel parameter must lie in [1/4, 1]")


def enumerate_paths(n_ebits: int, lam0: float) -> list[tuple[float, float]]:
    """Every (probability, terminal fidelity) pair of the repeated-purification run.

    The walk state is (pair count, completed rounds, round of the lastly
    stored pair). An odd count stores one pair at the current round and
    continues with the rest; a count of zero falls back on the stored pair
    (or on fidelity 1/2 if none was ever stored); j surviving pairs out of
    count/2 attempts branch binomially, with j = 1 teleporting immediately.
    """
    _validate_run_args(n_ebits, lam0)
    lam_seq = _lambda_sequence(lam0, _max_rounds(n_ebits))
    paths: list[tuple[float, float]] = []

    def fallback(stored: int | None) -> float:
        return single_shot_fidelity(lam_seq[stored]) if stored is not None else 0.5

    def walk(count: int, rnd: int, stored: int | None, prob: float) -> None:
        if count % 2 == 1:
            stored = rnd
            count -= 1
        if count == 0:
            paths.append((prob, fallback(stored)))
            return
        pairs = count // 2
        for j in range(pairs + 1):
            p_branch = prob * outcome_probability(pairs, j, lam_seq[rnd])
            if j == 0:
                paths.append((p_branch, fallback(stored)))
            elif j == 1:
                paths.append((p_branch, single_shot_fidelity(lam_seq[rnd + 1])))
            else:
                walk(j, rnd + 1, stored, p_branch)

    walk(n_ebits, 0, None, 1.0)
    return paths


def expected_fidelity_dp(n_ebits: int, lam0: float) -> EntPurResult:
    """Exact expectation of the run's terminal fidelity over all outcome paths."""
    paths = enumerate_paths(n_ebits, lam0)
    expected = math.fsum(prob * fid for prob, fid in paths)
    return EntPurResult(expected_fidelity=expected, path_count=len(paths))


def mc_simulate(n_ebits: int, lam0: float, samples: int, seed: int) -> EntPurResult:
    """Monte Carlo estimate of the run's expected fidelity.

    Each sample plays the full store-and-purify run with independent
    binomial draws for the surviving pair counts. Returns the exact
    expectation alongside the sample mean, its standard error, and the
    seed; results are deterministic for a fixed (seed, samples).
    """
    _validate_run_args(n_ebits, lam0)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    exact = expected_fidelity_dp(n_ebits, lam0)
    rng = np.random.default_rng(seed)
    lam_seq = np.array(_lambda_sequence(lam0, _max_rounds(n_ebits)))
    fid_by_round = (2.0 * lam_seq + 1.0) / 3.0

    count = np.full(samples, n_ebits, dtype=np.int64)
    stored = np.full(samples, -1, dtype=np.int64)
    result = np.empty(samples, dtype=float)
    active = np.ones(samples, dtype=bool)
    rnd = 0
    while active.any():
        odd = active & (count % 2 == 1)
        stored[odd] = rnd
        count[odd] -= 1

        exhausted = active & (count == 0)
        if exhausted.any():
            has_store = exhausted & (stored >= 0)
            result[has_store] = fid_by_round[stored[has_store]]
            result[exhausted & (stored < 0)] = 0.5
            active &= ~exhausted
        if not active.any():
            break

        idx = np.flatnonzero(active)
        j = rng.binomial(count[idx] // 2, pass_probability(float(lam_seq[rnd])))

        done_one = idx[j == 1]
        result[done_one] = fid_by_round[rnd + 1]
        done_zero = idx[j == 0]
        zero_store = stored[done_zero] >= 0
        result[done_zero[zero_store]] = fid_by_round[stored[done_zero[zero_store]]]
        result[done_zero[~zero_store]] = 0.5

        count[idx] = j
        active[done_one] = False
        active[done_zero] = False
        rnd += 1

    if samples == 1 or np.all(result == result[0]):
        # A constant sample has mean exactly that constant and no spread;
        # summation noise must not leak into the "no randomness" cases.
        mean, stderr = float(result[0]), 0.0
    else:
        mean = float(result.mean())
        stderr = float(result.std(ddof=1) / math.sqrt(samples))
    return EntPurResult(expected_fidelity=exact.expected_fidelity, path_count=exact.path_count,
                        mc_estimate=mean, mc_stderr=stderr, samples=samples, seed=seed)
