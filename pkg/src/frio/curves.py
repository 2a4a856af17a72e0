"""Sampled error-versus-inconclusive-rate curves and their shape checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .qdcore import FrioError, Povm

CURVE_TOL = 1e-9
# Relative slope tolerance for deciding that the chord to (1, 0) is tangent.
TANGENCY_RTOL = 1e-6
TANGENCY_ATOL = 1e-12


class NonConvexCurveError(FrioError):
    pass


class Regime(str, enum.Enum):
    ME_POINT = "me-point"
    INTERIOR = "interior"
    PROJECTIVE = "projective"
    LINEAR_TAIL = "linear-tail"
    PURE = "pure"
    MIXED = "mixed"


@dataclass(frozen=True)
class MixedStrategy:
    """Use ``first`` with probability ``weight`` and ``second`` otherwise."""

    weight: float
    q_first: float
    pe_first: float
    q_second: float
    pe_second: float
    povm_first: Optional[Povm] = None
    povm_second: Optional[Povm] = None


@dataclass(frozen=True)
class FrioPoint:
    q: float
    pe_min: float
    regime: Regime
    optimal_povm: Optional[Povm] = None
    mixture: Optional[MixedStrategy] = None

    def __post_init__(self):
        if not -CURVE_TOL <= self.pe_min <= 1.0 - self.q + CURVE_TOL:
            raise FrioError(f"P_e = {self.pe_min!r} outside [0, 1 - Q] at Q = {self.q!r}")

    @property
    def conditional_error(self) -> float:
        """Error probability given a conclusive answer, P_e / (1 - Q); NaN at Q = 1."""
        if self.q >= 1.0:
            return float("nan")
        return self.pe_min / (1.0 - self.q)


@dataclass(frozen=True)
class FrioCurve:
    points: tuple[FrioPoint, ...]
    label: str = ""

    def __post_init__(self):
        if not self.points:
            raise FrioError("a curve needs at least one point")
        object.__setattr__(self, "points", tuple(sorted(self.points, key=lambda p: p.q)))

    @property
    def q(self) -> np.ndarray:
        return np.array([p.q for p in self.points])

    @property
    def pe(self) -> np.ndarray:
        return np.array([p.pe_min for p in self.points])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class CriticalData:
    """Critical inconclusive rate and the slope of the linear tail beyond it.

    ``q_th`` and ``q0`` are only meaningful for two pure states.
    """

    q_c: float
    alpha: float
    q_th: Optional[float] = None
    q0: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.q_c <= 1.0:
            raise FrioError(f"critical rate {self.q_c!r} outside [0, 1]")
        if not -CURVE_TOL <= self.alpha <= 1.0:
            raise FrioError(f"tail slope {self.alpha!r} outside [0, 1]")

    @property
    def confidence(self) -> float:
        return 1.0 - self.alpha


def curve_from_arrays(qs: Sequence[float], pes: Sequence[float], regime=Regime.PURE) -> FrioCurve:
    return FrioCurve(tuple(FrioPoint(float(q), float(p), regime) for q, p in zip(qs, pes)))


def _uniform(q: np.ndarray) -> bool:
    h = np.diff(q)
    return len(h) > 0 and np.allclose(h, h[0], rtol=1e-9, atol=1e-15)


def curve_violations(curve: FrioCurve, tol: float = CURVE_TOL) -> list[str]:
    """Shape checks every optimal curve must pass.

    Midpoint convexity, non-increase, non-decreasing right slopes (compared
    in value units so the tolerance does not scale with 1/spacing),
    ``0 <= P_e <= 1 - Q`` and ``P_e(1) = 0`` when ``Q = 1`` is sampled.
    """
    q, pe = curve.q, curve.pe
    problems = []
    if np.any(np.diff(q) <= 0):
        problems.append("Q samples are not strictly increasing")
        return problems
    low = np.flatnonzero(pe < -tol)
    high = np.flatnonzero(pe > 1.0 - q + tol)
    for i in low:
        problems.append(f"negative P_e = {pe[i]:.3e} at Q = {q[i]:.6g}")
    for i in high:
        problems.append(f"P_e = {pe[i]:.6g} exceeds 1 - Q at Q = {q[i]:.6g}")

    rises = np.flatnonzero(np.diff(pe) > tol)
    for i in rises:
        problems.append(f"P_e increases by {pe[i + 1] - pe[i]:.3e} between Q = {q[i]:.6g} and {q[i + 1]:.6g}")

    if len(q) >= 3:
        h = np.diff(q)
        slopes = np.diff(pe) / h
        drop = (slopes[1:] - slopes[:-1]) * np.minimum(h[1:], h[:-1])
        for i in np.flatnonzero(drop < -tol):
            problems.append(f"right slope decreases at Q = {q[i + 1]:.6g} (by {drop[i]:.3e} in value units)")

        if _uniform(q):
            n = len(q)
            for k in range(1, (n - 1) // 2 + 1):
                mid = pe[k:n - k]
                chord = 0.5 * (pe[: n - 2 * k] + pe[2 * k:])
                bad = np.flatnonzero(mid > chord + tol)
                for i in bad:
                    problems.append(
                        f"midpoint convexity fails at Q = {q[i + k]:.6g} with half-width {k}: "
                        f"{mid[i]:.12g} > {chord[i]:.12g}"
                    )
        else:
            lhs = pe[1:-1] - (pe[:-2] * h[1:] + pe[2:] * h[:-1]) / (h[:-1] + h[1:])
            for i in np.flatnonzero(lhs > tol):
                problems.append(f"convexity fails at Q = {q[i + 1]:.6g}")

    if q[-1] == 1.0 and abs(pe[-1]) > tol:
        problems.append(f"P_e(1) = {pe[-1]:.3e}, expected 0")
    return problems


def critical_from_curve(curve: FrioCurve) -> CriticalData:
    """Locate the critical rate Q_c and tail slope alpha of a sampled curve.

    Q_c is the first sample at which the chord to ``(1, 0)`` coincides with
    the right finite-difference slope. For a convex curve ending at
    ``(1, 0)`` that coincidence forces the curve to be linear from there on.
    """
    q, pe = curve.q, curve.pe
    problems = [m for m in curve_violations(curve) if "convexity" in m or "slope" in m]
    if problems:
        raise NonConvexCurveError("; ".join(problems[:3]))
    if q[-1] < 1.0:
        q = np.append(q, 1.0)
        pe = np.append(pe, 0.0)
    for i in range(len(q) - 1):
        chord = -pe[i] / (1.0 - q[i])
        right = (pe[i + 1] - pe[i]) / (q[i + 1] - q[i])
        if abs(chord - right) <= TANGENCY_RTOL * max(abs(chord), abs(right)) + TANGENCY_ATOL:
            return CriticalData(q_c=float(q[i]), alpha=float(max(-chord, 0.0)))
    # Unreachable: the last interval always ends at (1, 0).
    raise NonConvexCurveError("no tangency found")
