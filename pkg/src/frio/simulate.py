"""Monte Carlo check that a measurement achieves its claimed rates.

Trials draw a state from the priors, then an outcome from the Born
probabilities of that state, and are tallied as success, error or
inconclusive according to the outcome labels. Random numbers come from a
Philox counter keyed by the seed; trial ``k`` always uses counter block
``k``, so the tallies do not depend on how the trials are chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qdcore import Ensemble, FrioError, Povm, QubitState, RateTriple, rates

PROBABILITY_SUM_TOL = 1e-9
CHUNK = 1 << 16

SUCCESS, ERROR, INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class TrialReport:
    n_trials: int
    empirical: RateTriple
    reference: RateTriple
    counts: tuple[int, int, int]
    standard_errors: tuple[float, float, float]
    z_scores: tuple[float, float, float]

    @property
    def max_abs_z(self) -> float:
        return max(abs(z) for z in self.z_scores)


def outcome_probabilities(state: QubitState, povm: Povm) -> np.ndarray:
    """Born probabilities of every outcome, checked to sum to one."""
    p = np.array([state.expectation(e) for e in povm.elements])
    if abs(p.sum() - 1.0) > PROBABILITY_SUM_TOL or np.any(p < -PROBABILITY_SUM_TOL):
        raise FrioError(f"outcome probabilities {p} do not form a distribution")
    return np.clip(p, 0.0, None)


def _cdf(p: np.ndarray) -> np.ndarray:
    c = np.cumsum(p)
    c[-1] = 1.0
    return c


def sample_outcome(state: QubitState, povm: Povm, rng: np.random.Generator) -> int:
    """Draw one outcome index by inverting the cumulative distribution."""
    c = _cdf(outcome_probabilities(state, povm))
    return int(min(np.searchsorted(c, rng.random(), side="right"), len(c) - 1))


def _roles(ensemble: Ensemble, povm: Povm) -> np.ndarray:
    roles = np.empty((len(ensemble), len(povm.elements)), dtype=np.int64)
    for i in range(len(ensemble)):
        for k, lab in enumerate(povm.labels):
            roles[i, k] = INCONCLUSIVE if lab is None else (SUCCESS if lab == i else ERROR)
    return roles


def _tally(state_cdf, outcome_cdfs, roles, seed: int, start: int, stop: int) -> np.ndarray:
    """Counts of success, error and inconclusive for trials ``[start, stop)``."""
    gen = np.random.Generator(np.random.Philox(key=seed).advance(start))
    # One Philox block (four doubles) per trial; only the first two are used.
    u = gen.random((stop - start, 4))
    states = np.minimum(np.searchsorted(state_cdf, u[:, 0], side="right"), len(state_cdf) - 1)
    rows = outcome_cdfs[states]
    outcomes = np.minimum((rows <= u[:, 1:2]).sum(axis=1), rows.shape[1] - 1)
    return np.bincount(roles[states, outcomes], minlength=3)


def _z(emp: float, ref: float, n: int) -> tuple[float, float]:
    se = math.sqrt(emp * (1.0 - emp) / n)
    sigma = se if se > 0 else math.sqrt(ref * (1.0 - ref) / n)
    if sigma > 0:
        return se, (emp - ref) / sigma
    return se, 0.0 if emp == ref else math.copysign(math.inf, emp - ref)


def estimate_rates(ensemble: Ensemble, povm: Povm, n_trials: int, seed: int = 0,
                   chunk: int = CHUNK) -> TrialReport:
    """Simulate ``n_trials`` measurements and compare with the exact rates.

    Standard errors use the empirical frequencies. When a frequency is 0
    or 1 the z-score falls back to the spread implied by the reference.
    """
    if n_trials < 1:
        raise FrioError(f"n_trials must be at least 1, got {n_trials}")
    if chunk < 1:
        raise FrioError(f"chunk must be at least 1, got {chunk}")
    reference = rates(ensemble, povm)
    state_cdf = _cdf(np.asarray(ensemble.priors, dtype=float))
    outcome_cdfs = np.array([_cdf(outcome_probabilities(s, povm)) for s in ensemble.states])
    roles = _roles(ensemble, povm)
    counts = np.zeros(3, dtype=np.int64)
    for start in range(0, n_trials, chunk):
        counts += _tally(state_cdf, outcome_cdfs, roles, seed, start, min(start + chunk, n_trials))
    freq = counts / n_trials
    empirical = RateTriple(*(float(f) for f in freq))
    pairs = [_z(float(f), r, n_trials) for f, r in zip(freq, reference.as_tuple())]
    return TrialReport(
        n_trials=n_trials,
        empirical=empirical,
        reference=reference,
        counts=tuple(int(c) for c in counts),
        standard_errors=tuple(p[0] for p in pairs),
        z_scores=tuple(p[1] for p in pairs),
    )
