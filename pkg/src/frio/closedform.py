"""Exact optimal-error curves for two pure states and for trine states.

Two pure states with overlap cos(theta) and priors eta_1, eta_2 = 1 - eta_1
have three prior regimes, separated by

    eta_1^(l) = cos^2 / (1 + cos^2),   eta_1^(r) = 1 / (1 + cos^2).

Below ``min(Q_th, Q_c)`` the optimum uses a rank-one inconclusive element
``xi |0><0|`` with ``xi < 1``; in regions I and III the range
``Q_th <= Q <= Q_c`` forces ``xi = 1`` and the measurement degenerates to a
projective one. Above ``Q_c`` the error vanishes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import bisect

from .curves import (
    CriticalData,
    FrioCurve,
    FrioPoint,
    NonConvexCurveError,
    Regime,
    critical_from_curve,
    curve_violations,
)
from .qdcore import (
    ZERO,
    Ensemble,
    FrioError,
    Povm,
    QubitState,
    helstrom_povm,
    projector,
)
from .reduction import lift_povm, reduce

__all__ = [
    "CriticalData",
    "FrioCurve",
    "FrioPoint",
    "InfeasibleRateError",
    "NonConvexCurveError",
    "Region",
    "Regime",
    "TwoPureProblem",
    "critical_from_curve",
    "curve_violations",
    "trine_critical",
    "trine_curve",
    "trine_ensemble",
    "trine_optimal_povm",
    "trine_me_povm",
    "trine_pe_min",
    "trine_qc",
    "two_pure_critical",
    "two_pure_curve",
    "two_pure_optimal_povm",
    "two_pure_pe_min",
    "two_pure_projective_q",
    "two_pure_ps_max",
    "two_pure_q_for_error",
    "two_pure_qc",
    "two_pure_qth",
]

BISECT_XTOL = 1e-14
# Endpoint anchoring of the projective branch.
ANCHOR_TOL = 1e-9


class InfeasibleRateError(FrioError):
    """No pure strategy is needed (or possible) at the requested rate."""


class Region(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class TwoPureProblem:
    eta1: float
    cos_theta: float

    def __post_init__(self):
        if not 0.0 < self.eta1 < 1.0:
            raise FrioError(f"eta1 = {self.eta1!r} must lie in (0, 1)")
        if not 0.0 <= self.cos_theta < 1.0:
            raise FrioError(f"cos(theta) = {self.cos_theta!r} must lie in [0, 1)")

    @property
    def eta2(self) -> float:
        return 1.0 - self.eta1

    @property
    def theta(self) -> float:
        return math.acos(self.cos_theta)

    @property
    def sin_theta(self) -> float:
        return math.sqrt(1.0 - self.cos_theta ** 2)

    @property
    def q0(self) -> float:
        return 2.0 * math.sqrt(self.eta1 * self.eta2) * self.cos_theta

    @property
    def eta1_l(self) -> float:
        c2 = self.cos_theta ** 2
        return c2 / (1.0 + c2)

    @property
    def eta1_r(self) -> float:
        return 1.0 / (1.0 + self.cos_theta ** 2)

    @property
    def region(self) -> Region:
        # Boundary ties belong to region II.
        if self.eta1 < self.eta1_l:
            return Region.I
        if self.eta1 > self.eta1_r:
            return Region.III
        return Region.II

    def ensemble(self) -> Ensemble:
        """The two states placed symmetrically about |0> at angles +-theta/2."""
        half = 0.5 * self.theta
        return Ensemble(
            (QubitState.from_angle(half), QubitState.from_angle(-half)),
            (self.eta1, self.eta2),
        )


def two_pure_qc(p: TwoPureProblem) -> float:
    """Critical rate, equal to the optimal unambiguous failure probability."""
    c2 = p.cos_theta ** 2
    region = p.region
    if region is Region.I:
        return p.eta1 + p.eta2 * c2
    if region is Region.III:
        return p.eta2 + p.eta1 * c2
    return p.q0


def two_pure_qth(p: TwoPureProblem) -> float:
    """Rate above which the optimal inconclusive element becomes a projector."""
    return 2.0 * p.eta1 * p.eta2 * p.sin_theta ** 2 / (1.0 - p.q0)


def two_pure_critical(p: TwoPureProblem) -> CriticalData:
    return CriticalData(q_c=two_pure_qc(p), alpha=0.0, q_th=two_pure_qth(p), q0=p.q0)


def _interior_pe(p: TwoPureProblem, q: float) -> float:
    q_bar = 1.0 - q
    return 0.5 * (q_bar - math.sqrt(max(q_bar ** 2 - (p.q0 - q) ** 2, 0.0)))


def _majority(p: TwoPureProblem) -> tuple[float, float]:
    """(eta_major, eta_minor); the more probable state owns the single click."""
    return (p.eta1, p.eta2) if p.eta1 >= p.eta2 else (p.eta2, p.eta1)


def two_pure_projective_q(p: TwoPureProblem, pe: float) -> float:
    """Inconclusive rate of the projective (xi = 1) measurement with error ``pe``.

    The click outside ``Pi_0`` is attributed to the more probable state, so
    the error comes from the less probable one: ``pe = eta_minor s_minor^2``.
    The sign inside the square is the one that starts at ``Q_c`` for
    ``pe = 0`` and decreases from there.
    """
    eta_major, eta_minor = _majority(p)
    x = min(max(pe / eta_minor, 0.0), 1.0)
    amp = math.sqrt(x) * p.cos_theta + math.sqrt(1.0 - x) * p.sin_theta
    return 1.0 - pe - eta_major * amp ** 2


def _projective_pe(p: TwoPureProblem, q: float) -> float:
    q_c, q_th = two_pure_qc(p), two_pure_qth(p)
    pe_th = _interior_pe(p, q_th)
    # Anchor the branch: Q(0) = Q_c and Q(pe_th) = Q_th.
    if abs(two_pure_projective_q(p, 0.0) - q_c) > ANCHOR_TOL:
        raise ArithmeticError("projective branch does not start at Q_c")
    if abs(two_pure_projective_q(p, pe_th) - q_th) > ANCHOR_TOL:
        raise ArithmeticError("projective branch does not meet the interior branch at Q_th")
    if q >= q_c:
        return 0.0
    if q <= q_th:
        return pe_th
    return bisect(lambda e: two_pure_projective_q(p, e) - q, 0.0, pe_th, xtol=BISECT_XTOL)


def _regime_limit(p: TwoPureProblem) -> float:
    """Largest rate handled by the interior formula."""
    return min(two_pure_qth(p), two_pure_qc(p))


def two_pure_pe_min(p: TwoPureProblem, q: float) -> FrioPoint:
    """Minimum error probability at inconclusive rate ``q``."""
    if not 0.0 <= q <= 1.0:
        raise FrioError(f"inconclusive rate {q!r} outside [0, 1]")
    q_c = two_pure_qc(p)
    if q > q_c:
        return FrioPoint(q, 0.0, Regime.LINEAR_TAIL)
    if q <= _regime_limit(p):
        regime = Regime.ME_POINT if q == 0.0 else Regime.INTERIOR
        return FrioPoint(q, _interior_pe(p, q), regime)
    return FrioPoint(q, _projective_pe(p, q), Regime.PROJECTIVE)


def _interior_orientation(p: TwoPureProblem) -> float:
    """Angle of the Pi_0 eigenvector |0'> relative to the lab |0>.

    At the optimum sqrt(eta_1) c_1 = sqrt(eta_2) c_2, which gives
    eta_1 c_1^2 = eta_2 c_2^2 = eta_1 eta_2 sin^2 / (1 - Q0). Of the sign
    choices for the state angles, keep the one with theta_1 - theta_2 = theta.
    """
    k = p.sin_theta ** 2 / (1.0 - p.q0)
    a1 = math.acos(min(1.0, math.sqrt(p.eta2 * k)))
    a2 = math.acos(min(1.0, math.sqrt(p.eta1 * k)))

    def mismatch(r1, r2):
        d = (r1 - r2 - p.theta) / math.pi
        return abs(d - round(d))

    r1, _ = min(((s1 * a1, s2 * a2) for s1 in (1, -1) for s2 in (1, -1)), key=lambda r: mismatch(*r))
    # The lab angle of state 1 is theta/2 = beta + r1.
    return 0.5 * p.theta - r1


def _rotated_basis(beta: float) -> tuple[np.ndarray, np.ndarray]:
    v = np.array([math.cos(beta), math.sin(beta)], dtype=complex)
    w = np.array([-math.sin(beta), math.cos(beta)], dtype=complex)
    return v, w


def two_pure_optimal_povm(p: TwoPureProblem, q: float) -> Povm:
    """Optimal measurement at rate ``q`` for the states of ``p.ensemble()``."""
    q_c = two_pure_qc(p)
    if not 0.0 <= q <= q_c:
        raise InfeasibleRateError(
            f"q = {q!r} outside [0, Q_c = {q_c!r}]; beyond Q_c mix with the trivial strategy"
        )
    ens = p.ensemble()
    if q <= _regime_limit(p):
        v, _ = _rotated_basis(_interior_orientation(p))
        weight = ens.states[0].expectation(projector(v)) * p.eta1 + ens.states[1].expectation(projector(v)) * p.eta2
        xi = min(q / weight, 1.0)
        pi0 = xi * projector(v)
        red = reduce(ens, pi0)
        return lift_povm(helstrom_povm(red.ensemble), red.omega, pi0)

    pe = _projective_pe(p, q)
    eta_major, eta_minor = _majority(p)
    alpha = math.asin(math.sqrt(min(pe / eta_minor, 1.0)))
    half = 0.5 * p.theta
    if p.eta1 >= p.eta2:
        # State 2 is the minority: its angle from |0'> is alpha.
        beta = -half - alpha
        v, w = _rotated_basis(beta)
        return Povm.from_parts(projector(v), [projector(w), ZERO])
    beta = half + alpha
    v, w = _rotated_basis(beta)
    return Povm.from_parts(projector(v), [ZERO, projector(w)])


def two_pure_ps_max(p: TwoPureProblem, pe: float) -> float:
    """Maximum success probability at error rate ``pe`` (region II form)."""
    return (math.sqrt(pe) + math.sqrt(1.0 - p.q0)) ** 2


def two_pure_q_for_error(p: TwoPureProblem, pe: float) -> float:
    """Smallest inconclusive rate that achieves error ``pe``.

    Inverse of :func:`two_pure_pe_min` restricted to ``[0, Q_c]``.
    """
    pe_max = two_pure_pe_min(p, 0.0).pe_min
    if pe >= pe_max:
        return 0.0
    if pe <= 0.0:
        return two_pure_qc(p)
    return bisect(lambda q: two_pure_pe_min(p, q).pe_min - pe, 0.0, two_pure_qc(p), xtol=BISECT_XTOL)


def two_pure_curve(p: TwoPureProblem, qs: Iterable[float], with_povm: bool = False) -> FrioCurve:
    q_c = two_pure_qc(p)
    points = []
    for q in qs:
        pt = two_pure_pe_min(p, float(q))
        if with_povm and q <= q_c:
            pt = FrioPoint(pt.q, pt.pe_min, pt.regime, two_pure_optimal_povm(p, pt.q))
        points.append(pt)
    return FrioCurve(tuple(points), label=f"two-pure eta1={p.eta1:g} cos={p.cos_theta:g}")


# ---------------------------------------------------------------------------
# Trine states
# ---------------------------------------------------------------------------

def _check_trine_angle(theta: float):
    if not 0.0 < theta <= math.pi / 4 + 1e-15:
        raise FrioError(f"trine polar half-angle {theta!r} must lie in (0, pi/4]")


def trine_ensemble(theta: float) -> Ensemble:
    """cos(theta)|0> + exp(2 pi i k / 3) sin(theta)|1>, k = 1, 2, 3, equal priors."""
    _check_trine_angle(theta)
    states = tuple(QubitState.from_angle(theta, 2.0 * math.pi * k / 3.0) for k in (1, 2, 3))
    return Ensemble(states, (1 / 3, 1 / 3, 1 / 3))


def trine_qc(theta: float) -> float:
    return math.cos(2.0 * theta)


def trine_critical(theta: float) -> CriticalData:
    return CriticalData(q_c=trine_qc(theta), alpha=1.0 / 3.0)


def trine_pe_min(theta: float, q: float) -> FrioPoint:
    _check_trine_angle(theta)
    if not 0.0 <= q <= 1.0:
        raise FrioError(f"inconclusive rate {q!r} outside [0, 1]")
    q_c = trine_qc(theta)
    if q > q_c:
        return FrioPoint(q, (1.0 - q) / 3.0, Regime.LINEAR_TAIL)
    pe = (2.0 / 3.0) * (1.0 - q - math.sin(theta) * math.sqrt(max(math.cos(theta) ** 2 - q, 0.0)))
    return FrioPoint(q, pe, Regime.ME_POINT if q == 0.0 else Regime.INTERIOR)


def trine_me_povm() -> Povm:
    """Square-root measurement for trines: (2/3)|+_k><+_k|, Pi_0 = 0.

    For trines of any polar angle this is the covariant minimum-error
    measurement, with error (2 - sin 2 theta) / 3.
    """
    elements = []
    for k in (1, 2, 3):
        plus = np.array([1.0, np.exp(2j * math.pi * k / 3.0)]) / math.sqrt(2.0)
        elements.append((2.0 / 3.0) * projector(plus))
    return Povm.from_parts(ZERO, elements)


def trine_optimal_povm(theta: float, q: float) -> Povm:
    """Optimal pure strategy with ``Pi_0 = (q / cos^2 theta) |0><0|``."""
    _check_trine_angle(theta)
    q_c = trine_qc(theta)
    if not 0.0 <= q <= q_c:
        raise InfeasibleRateError(f"q = {q!r} outside [0, cos 2 theta = {q_c!r}]")
    xi = q / math.cos(theta) ** 2
    pi0 = np.diag([xi, 0.0]).astype(complex)
    red = reduce(trine_ensemble(theta), pi0)
    return lift_povm(trine_me_povm(), red.omega, pi0)


def trine_curve(theta: float, qs: Iterable[float], with_povm: bool = False) -> FrioCurve:
    q_c = trine_qc(theta)
    points = []
    for q in qs:
        pt = trine_pe_min(theta, float(q))
        if with_povm and q <= q_c:
            pt = FrioPoint(pt.q, pt.pe_min, pt.regime, trine_optimal_povm(theta, pt.q))
        points.append(pt)
    return FrioCurve(tuple(points), label=f"trine theta={theta:g}")
