"""Head-to-head comparison of the three transfer strategies.

Includes the discard-to-odd rule for the purification strategy (an even
supply keeps a strictly weaker guarantee than the next odd one down, so
one pair is dropped), grid sweeps of all strategies, and bisection for the
channel quality at which each purification strategy breaks even with the
classical estimation baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import entpur, estimate, qubitpur

METHOD_NAMES = ("ent_pur", "estimation", "qubit_pur")

_PRESCAN_POINTS = 64


class AmbiguousCrossingError(RuntimeError):
    """The prescan found more than one sign change, so bisection would be arbitrary."""

    def __init__(self, n: int, method: str, brackets):
        self.n = n
        self.method = method
        self.brackets = tuple(brackets)
        super().__init__(
            f"{method} fidelity crosses the estimation baseline more than once for N={n}; "
            f"brackets: {self.brackets}")


@dataclass(frozen=True)
class SweepRow:
    """One (method, n, lambda0) evaluation of a strategy's average fidelity."""

    method: str
    n: int
    lambda0: float
    fidelity: float

    def __post_init__(self):
        if not 0.5 - 1e-12 <= self.fidelity <= 1.0 + 1e-12:
            raise ValueError("fidelity must lie in [1/2, 1]")


@dataclass(frozen=True)
class CrossingResult:
    """Break-even channel qualities of both purification strategies against estimation."""

    n: int
    lambda_1: float | None
    lambda_2: float | None
    tolerance: float

    def __post_init__(self):
        for value in (self.lambda_1, self.lambda_2):
            if value is not None and not 0.25 < value < 1.0:
                raise ValueError("crossing values must lie in (1/4, 1)")
        if (self.n > 2 and self.lambda_1 is not None and self.lambda_2 is not None
                and self.lambda_2 > self.lambda_1 + 2.0 * self.tolerance):
            raise ValueError("the teleport-then-purify crossing cannot exceed the "
                             "channel-purification crossing")


def effective_entpur_fidelity(n: int, lam0: float) -> float:
    """Purification-strategy fidelity with the discard-to-odd rule applied.

    Odd n runs as is; even n runs on n-1 pairs, which is better on average
    because an odd run can never lose every pair.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    effective_n = n if n % 2 == 1 else n - 1
    return entpur.expected_fidelity_dp(effective_n, lam0).expected_fidelity


def _evaluate(method: str, n: int, lam0: float) -> float:
    if method == "ent_pur":
        return entpur.expected_fidelity_dp(n, lam0).expected_fidelity
    if method == "qubit_pur":
        return qubitpur.average_fidelity(n, lam0).expected_fidelity
    return estimate.estimation_fidelity(n).fidelity


def sweep(methods, n_values, lambda_grid) -> list[SweepRow]:
    """Evaluate the named strategies on the full (n, lambda0) grid.

    Rows come out ordered by method name, then n, then lambda0, all
    ascending, regardless of the input ordering. The ent_pur rows report
    the raw run on exactly n pairs (so the even/odd structure is visible);
    the discard-to-odd rule is applied by effective_entpur_fidelity and by
    crossing_points, which is how the strategies are actually compared.
    """
    methods = sorted(set(methods))
    if not methods:
        raise ValueError("at least one method is required")
    unknown = [m for m in methods if m not in METHOD_NAMES]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; expected a subset of {METHOD_NAMES}")
    n_values = sorted({int(n) for n in n_values})
    if not n_values:
        raise ValueError("at least one n value is required")
    if n_values[0] < 1:
        raise ValueError("n values must be positive")
    lambdas = sorted({float(l) for l in lambda_grid})
    if not lambdas:
        raise ValueError("at least one lambda0 value is required")
    if lambdas[0] <= 0.25 or lambdas[-1] >= 1.0:
        raise ValueError("lambda0 grid values must lie strictly inside (1/4, 1)")
    return [SweepRow(method=m, n=n, lambda0=lam, fidelity=_evaluate(m, n, lam))
            for m in methods for n in n_values for lam in lambdas]


def _find_crossing(gap, n: int, method: str, tol: float) -> float | None:
    """Unique root of `gap` on [1/4, 1] located by prescan plus bisection."""
    xs = np.linspace(0.25, 1.0, _PRESCAN_POINTS)
    gs = [gap(float(x)) for x in xs]
    brackets = []
    for i in range(len(xs) - 1):
        if gs[i] == 0.0:
            brackets.append((float(xs[i]), float(xs[i])))
        elif (gs[i] < 0.0) != (gs[i + 1] < 0.0) and gs[i + 1] != 0.0:
            brackets.append((float(xs[i]), float(xs[i + 1])))
    if gs[-1] == 0.0:
        brackets.append((float(xs[-1]), float(xs[-1])))
    if not brackets:
        return None
    if len(brackets) > 1:
        raise AmbiguousCrossingError(n, method, brackets)
    lo, hi = brackets[0]
    if lo == hi:
        return lo
    g_lo = gap(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid < 0.0) == (g_lo < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def crossing_points(n: int, tol: float = 1e-10) -> CrossingResult:
    """Channel qualities where each purification strategy matches estimation.

    lambda_1 is the break-even point of the channel-purification strategy
    (with the discard-to-odd rule), lambda_2 that of teleport-then-purify.
    A 64-point prescan over [1/4, 1] must see exactly one sign change per
    strategy; more than one raises AmbiguousCrossingError, and none yields
    an absent value.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if tol < 1e-12:
        raise ValueError("tolerance must be at least 1e-12")
    baseline = estimate.estimation_fidelity(n).fidelity
    lambda_1 = _find_crossing(lambda lam: effective_entpur_fidelity(n, lam) - baseline,
                              n, "ent_pur", tol)
    lambda_2 = _find_crossing(lambda lam: qubitpur.average_fidelity(n, lam).expected_fidelity
                              - baseline, n, "qubit_pur", tol)
    return CrossingResult(n=n, lambda_1=lambda_1, lambda_2=lambda_2, tolerance=tol)


def recommend(n: int, lam0: float) -> str:
    """Name of the better strategy for n resources at channel quality lam0.

    Channel purification is never recommended; it is dominated by
    teleport-then-purify everywhere. Ties go to estimation because it
    needs no quantum channel at all.
    """
    if not 0.25 < lam0 < 1.0:
        raise ValueError("channel parameter must lie strictly inside (1/4, 1)")
    purify_value = qubitpur.average_fidelity(n, lam0).expected_fidelity
    baseline = estimate.estimation_fidelity(n).fidelity
    return "qubit_pur" if purify_value > baseline else "estimation"
