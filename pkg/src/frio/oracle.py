"""Brute-force optimiser over qubit POVMs at a fixed inconclusive rate.

This is the ground truth the closed forms are checked against. It never
uses a closed-form optimum: it searches orientations of a rank-one
inconclusive element ``Pi_0 = xi |v><v|`` on a Fibonacci grid of the Bloch
sphere, refines the best ones with line searches in the tangent plane, and
for every candidate solves the remaining conclusive problem either with
the Helstrom measurement (two states) or with a pattern search over two
rank-one elements plus the residual ``I - Pi_1 - Pi_2`` (three states).
Completeness holds by construction: the two searched elements are scaled
down whenever the residual would fail to be positive. The reported error is always re-evaluated from the final POVM with
:func:`frio.qdcore.rates`, so it is achievable by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .curves import FrioCurve, FrioPoint, MixedStrategy, Regime
from .qdcore import (
    IDENTITY,
    Ensemble,
    FrioError,
    Povm,
    eigvalsh2,
    helstrom_error,
    helstrom_povm,
    mix_povms,
    rates,
    trivial_povm,
)
from .reduction import lift_povm, reduce

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]],
    dtype=complex,
)
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# A full-rank Pi_0 must beat the rank-one search by this much to be preferred.
FULL_RANK_MARGIN = 1e-12


@dataclass(frozen=True)
class OracleConfig:
    orientation_grid_size: int = 720
    refinement_iterations: int = 60
    q_constraint_tolerance: float = 1e-9
    allow_full_rank_pi0: bool = False
    random_restarts: int = 32
    seed: int = 0
    refine_candidates: int = 2
    refine_sweeps: int = 3
    inner_iterations: int = 400
    full_rank_levels: int = 8

    def __post_init__(self):
        if self.orientation_grid_size < 8:
            raise FrioError("orientation grid needs at least 8 points")
        if self.q_constraint_tolerance <= 0:
            raise FrioError("q constraint tolerance must be positive")
        if min(self.random_restarts, self.refinement_iterations, self.refine_candidates) < 1:
            raise FrioError("restarts and refinement iterations must be positive")


@dataclass(frozen=True)
class OracleResult:
    pe: float
    povm: Povm
    achieved_q: float
    strategy_kind: str  # "pure" or "mixed"
    mixture: Optional[MixedStrategy] = None
    pi0_min_eigenvalue: float = 0.0
    residual_min_eigenvalue: Optional[float] = None

    # Smallest eigenvalue above which the three-state residual counts as full rank.
    RESIDUAL_FLAG_TOL = 1e-6

    @property
    def residual_full_rank(self) -> bool:
        """True when the three-state residual element is not rank one."""
        r = self.residual_min_eigenvalue
        return r is not None and r > self.RESIDUAL_FLAG_TOL


# ---------------------------------------------------------------------------
# Bloch-sphere helpers
# ---------------------------------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` nearly uniform unit vectors, shape (n, 3)."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (1.0 + math.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def bloch_projector(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return 0.5 * (IDENTITY + np.tensordot(n, PAULI, axes=1))


def bloch_vector(op: np.ndarray) -> np.ndarray:
    return np.real(np.array([np.trace(op @ s) for s in PAULI]))


def _tangent_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    seed = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = seed - n * (seed @ n)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def golden_section(f, lo: float, hi: float, iterations: int, tol: float = 1e-13):
    """Minimise ``f`` on ``[lo, hi]``; returns ``(x, f(x))`` of the best point seen.

    The centre ``0.5 (lo + hi)`` and both ends are always evaluated, so
    the result is never worse than the starting point of a centred bracket.
    """
    best = min(((x, f(x)) for x in (0.5 * (lo + hi), lo, hi)), key=lambda t: t[1])
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if b - a < tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    for cand in ((x1, f1), (x2, f2)):
        if cand[1] < best[1]:
            best = cand
    return best


def zoom_search(f_batch, lo: float, hi: float, rounds: int, tol: float = 1e-13, points: int = 9):
    """Minimise on ``[lo, hi]`` by repeatedly sampling ``points`` abscissae at once.

    ``f_batch`` maps an array of abscissae to an array of values. Each round
    keeps the two grid cells around the best sample, so the bracket shrinks
    by ``2 / (points - 1)``. Returns ``(x, f(x))`` of the best point seen.
    """
    best_x, best_f = 0.5 * (lo + hi), math.inf
    a, b = lo, hi
    for _ in range(rounds):
        xs = np.linspace(a, b, points)
        vals = np.asarray(f_batch(xs), dtype=float)
        k = int(np.argmin(vals))
        if vals[k] < best_f:
            best_x, best_f = float(xs[k]), float(vals[k])
        cell = (b - a) / (points - 1)
        a, b = max(lo, best_x - cell), min(hi, best_x + cell)
        if b - a < tol:
            break
    return best_x, best_f


# ---------------------------------------------------------------------------
# Conclusive sub-problems
# ---------------------------------------------------------------------------

def _unit(polar, azimuth):
    s = np.sin(polar)
    return np.stack([s * np.cos(azimuth), s * np.sin(azimuth), np.cos(polar)], axis=-1)


def _three_outcome_success(params, priors, blochs):
    """Success probability for batched parameters.

    params[..., :] = (polar1, azimuth1, polar2, azimuth2, a1, a2); elements
    are ``t a_k (I + m_k . sigma) / 2`` for k = 1, 2 and the residual
    ``I - Pi_1 - Pi_2`` for the third state, where ``t <= 1`` shrinks the
    first two just enough to keep the residual positive semidefinite.
    """
    sp1, cp1 = np.sin(params[..., 0]), np.cos(params[..., 0])
    sp2, cp2 = np.sin(params[..., 2]), np.cos(params[..., 2])
    m1x, m1y = sp1 * np.cos(params[..., 1]), sp1 * np.sin(params[..., 1])
    m2x, m2y = sp2 * np.cos(params[..., 3]), sp2 * np.sin(params[..., 3])
    a1 = np.clip(params[..., 4], 0.0, 1.0)
    a2 = np.clip(params[..., 5], 0.0, 1.0)
    rx = 0.5 * (a1 * m1x + a2 * m2x)
    ry = 0.5 * (a1 * m1y + a2 * m2y)
    rz = 0.5 * (a1 * cp1 + a2 * cp2)
    top = 0.5 * (a1 + a2) + np.sqrt(rx * rx + ry * ry + rz * rz)
    t = 1.0 / np.maximum(top, 1.0)
    b = blochs
    s1 = 0.5 * a1 * (1.0 + b[..., 0, 0] * m1x + b[..., 0, 1] * m1y + b[..., 0, 2] * cp1)
    s2 = 0.5 * a2 * (1.0 + b[..., 1, 0] * m2x + b[..., 1, 1] * m2y + b[..., 1, 2] * cp2)
    s3 = 1.0 - t * (0.5 * (a1 + a2) + b[..., 2, 0] * rx + b[..., 2, 1] * ry + b[..., 2, 2] * rz)
    return t * (priors[..., 0] * s1 + priors[..., 1] * s2) + priors[..., 2] * s3


def _restart_starts(cfg: OracleConfig, count: int) -> np.ndarray:
    """Initial parameters; restart ``k`` draws from its own generator."""
    starts = np.empty((count, 6))
    for k in range(count):
        rng = np.random.default_rng([cfg.seed, k])
        u = rng.random(6)
        starts[k] = [
            math.acos(1.0 - 2.0 * u[0]), 2.0 * math.pi * u[1],
            math.acos(1.0 - 2.0 * u[2]), 2.0 * math.pi * u[3],
            0.3 + 0.6 * u[4], 0.3 + 0.6 * u[5],
        ]
    return starts


WARM_RESTARTS = 3
# Golden-section searches stop once the bracket is this narrow.
LINE_TOL = 1e-7
INNER_STEP_TOL = 1e-8
# The orientation grid only ranks candidates, so its inner solves stop early.
GRID_STEP_TOL = 1e-4
_MOVES = np.concatenate([np.eye(6), -np.eye(6)])


def _pattern_search(priors, blochs, cfg: OracleConfig, warm: Optional[np.ndarray] = None,
                    step_tol: float = INNER_STEP_TOL):
    """Maximise three-outcome success for a batch of problems.

    ``priors`` (B, 3) and ``blochs`` (B, 3, 3). Returns the best parameters
    per problem, shape (B, 6). A ``warm`` start (B, 6) replaces all but
    ``WARM_RESTARTS`` of the random restarts and starts with a small step.
    """
    batch = priors.shape[0]
    if warm is None:
        starts = np.broadcast_to(_restart_starts(cfg, cfg.random_restarts), (batch, cfg.random_restarts, 6))
        step0 = 0.25
    else:
        extra = np.broadcast_to(_restart_starts(cfg, WARM_RESTARTS), (batch, WARM_RESTARTS, 6))
        starts = np.concatenate([warm[:, None, :], extra], axis=1)
        step0 = 0.05
    restarts = starts.shape[1]
    params = starts.reshape(-1, 6).copy()
    pr = np.repeat(priors, restarts, axis=0)
    bl = np.repeat(blochs, restarts, axis=0)
    current = -_three_outcome_success(params, pr, bl)
    step = np.full(len(params), step0)
    live = np.arange(len(params))
    for _ in range(cfg.inner_iterations):
        live = live[step[live] > step_tol]
        if live.size == 0:
            break
        x = params[live]
        trial = x[:, None, :] + step[live, None, None] * _MOVES[None, :, :]
        vals = -_three_outcome_success(trial, pr[live, None, :], bl[live, None, :, :])
        best = np.argmin(vals, axis=1)
        best_val = vals[np.arange(live.size), best]
        improved = best_val < current[live] - 1e-15
        moved = live[improved]
        params[moved] = trial[improved, best[improved]]
        current[moved] = best_val[improved]
        step[live[~improved]] *= 0.5
    current = current.reshape(batch, restarts)
    winner = np.argmin(current, axis=1)
    return params.reshape(batch, restarts, 6)[np.arange(batch), winner]


def _three_outcome_povm(x: np.ndarray) -> tuple[Povm, float]:
    """Exactly complete POVM from search parameters, rescaled if needed."""
    a1, a2 = float(np.clip(x[4], 0, 1)), float(np.clip(x[5], 0, 1))
    e1 = a1 * bloch_projector(_unit(x[0], x[1]))
    e2 = a2 * bloch_projector(_unit(x[2], x[3]))
    top = eigvalsh2(e1 + e2)[1]
    if top > 1.0:
        e1, e2 = e1 / top, e2 / top
    e3 = IDENTITY - e1 - e2
    return Povm.from_parts(np.zeros((2, 2), dtype=complex), [e1, e2, e3]), float(eigvalsh2(e3)[0])


def _three_state_conclusive(reduced: Sequence[Ensemble], cfg: OracleConfig, warm=None,
                            step_tol: float = INNER_STEP_TOL) -> list[tuple]:
    """Best three-outcome POVM (Pi~_0 = 0) for each transformed ensemble.

    Returns ``(povm, residual_min_eigenvalue, params)`` per ensemble.
    """
    if not reduced:
        return []
    priors = np.array([ens.priors for ens in reduced])
    blochs = np.array([[bloch_vector(s.projector) for s in ens.states] for ens in reduced])
    best = _pattern_search(priors, blochs, cfg, warm, step_tol)
    return [(*_three_outcome_povm(x), x) for x in best]


# ---------------------------------------------------------------------------
# Candidate evaluation
# ---------------------------------------------------------------------------

@dataclass
class _Candidate:
    """Search-stage value of one inconclusive element.

    ``pe`` is (1 - Q) times the transformed error; the full POVM is only
    built for the winner.
    """

    pe: float
    pi0: np.ndarray
    reduced: object
    tilde_povm: Optional[Povm]
    residual: Optional[float]
    params: Optional[np.ndarray] = None


@dataclass
class _Solution:
    pe: float
    povm: Povm
    q: float
    pi0_min_eig: float
    residual: Optional[float]


def _pi0_for(ensemble: Ensemble, q: float, n: np.ndarray, level: float, tol: float):
    """Inconclusive element with orientation ``n`` realising rate ``q``.

    ``level`` in [0, 1) sets the weight on the orthogonal direction as a
    fraction of its largest feasible value; 0 gives a rank-one element.
    Returns None when no such element is a valid POVM element.
    """
    rho = ensemble.average_state()
    proj = bloch_projector(n)
    w = float(np.real(np.trace(rho @ proj)))
    w_perp = 1.0 - w
    lam2 = 0.0
    if level > 0.0:
        lam2 = level * min(1.0, q / w_perp) if w_perp > 0 else 0.0
    if w <= 0.0:
        return None
    lam1 = (q - lam2 * w_perp) / w
    if lam1 > 1.0 + tol or lam1 < -tol:
        return None
    lam1 = min(max(lam1, 0.0), 1.0)
    return lam1 * proj + lam2 * (IDENTITY - proj)


def _evaluate(ensemble: Ensemble, q: float, pi0s: Sequence, cfg: OracleConfig,
              warm: Optional[np.ndarray] = None, coarse: bool = False) -> list[Optional[_Candidate]]:
    prepared = []
    for pi0 in pi0s:
        red = None
        if pi0 is not None:
            try:
                red = reduce(ensemble, pi0)
            except FrioError:
                pass
        if red is not None and abs(red.q - q) > cfg.q_constraint_tolerance:
            red = None
        prepared.append((pi0, red))
    if len(ensemble) == 2:
        return [None if red is None else _Candidate((1.0 - red.q) * helstrom_error(red.ensemble), pi0, red, None, None)
                for pi0, red in prepared]
    live = [red.ensemble for _, red in prepared if red is not None]
    if warm is not None and len(warm) == 1 and len(live) > 1:
        warm = np.repeat(warm, len(live), axis=0)
    if warm is not None and len(live) != len(warm):
        warm = None
    step_tol = GRID_STEP_TOL if coarse else INNER_STEP_TOL
    solved = iter(_three_state_conclusive(live, cfg, warm, step_tol))
    out = []
    for pi0, red in prepared:
        if red is None:
            out.append(None)
            continue
        tilde_povm, residual, params = next(solved)
        tilde_pe = rates(red.ensemble, tilde_povm).p_error
        out.append(_Candidate((1.0 - red.q) * tilde_pe, pi0, red, tilde_povm, residual, params))
    return out


def _materialise(ensemble: Ensemble, q: float, cand: _Candidate, cfg: OracleConfig) -> Optional[_Solution]:
    """Lift the winner to a full POVM and re-evaluate it directly."""
    tilde = cand.tilde_povm if cand.tilde_povm is not None else helstrom_povm(cand.reduced.ensemble)
    povm = lift_povm(tilde, cand.reduced.omega, cand.pi0)
    r = rates(ensemble, povm)
    if abs(r.q_inconclusive - q) > cfg.q_constraint_tolerance:
        return None
    return _Solution(r.p_error, povm, r.q_inconclusive, float(eigvalsh2(cand.pi0)[0]), cand.residual)


def _value(c) -> float:
    return math.inf if c is None else c.pe


def _line_refine(ensemble, q, cfg, make_pi0, lo, hi, cur_n, cur_lev, cur):
    """One line search over inconclusive elements ``make_pi0(t)``.

    Two states use golden sections on the cheap Helstrom objective; three
    states evaluate whole batches of points per inner solve instead.
    """
    cache = {}
    warm = None if cur.params is None else cur.params[None, :]

    def f_batch(ts):
        made = [make_pi0(float(t)) for t in ts]
        cands = _evaluate(ensemble, q, [m[0] for m in made], cfg, warm)
        for t, m, c in zip(ts, made, cands):
            cache[float(t)] = (m[1], m[2], c)
        return [_value(c) for c in cands]

    if len(ensemble) == 2:
        t, val = golden_section(lambda t: f_batch([t])[0], lo, hi, cfg.refinement_iterations, LINE_TOL)
    else:
        t, val = zoom_search(f_batch, lo, hi, cfg.refinement_iterations, LINE_TOL)
    if val < _value(cur):
        return cache[t]
    return cur_n, cur_lev, cur


def _search(ensemble: Ensemble, q: float, cfg: OracleConfig, full_rank: bool) -> Optional[_Solution]:
    tol = cfg.q_constraint_tolerance
    n_grid = cfg.orientation_grid_size if not full_rank else max(8, cfg.orientation_grid_size // 4)
    grid = fibonacci_sphere(n_grid)
    levels = [0.0]
    if full_rank:
        levels = [(k + 1) / cfg.full_rank_levels for k in range(cfg.full_rank_levels)]
        levels[-1] = min(levels[-1], 1.0 - 1e-9)
    keys = [(tuple(n), lev) for lev in levels for n in grid]
    cands = _evaluate(ensemble, q, [_pi0_for(ensemble, q, np.array(n), lev, tol) for n, lev in keys], cfg,
                      coarse=True)
    order = np.argsort([_value(c) for c in cands], kind="stable")
    starts = [(np.array(keys[i][0]), keys[i][1], cands[i]) for i in order[: cfg.refine_candidates]
              if cands[i] is not None]
    if not starts:
        return None
    spacing = math.sqrt(4.0 * math.pi / n_grid)
    best = None
    for n0, lev0, c0 in starts:
        cur_n, cur_lev, cur = n0, lev0, c0
        h = spacing
        for _ in range(cfg.refine_sweeps):
            e1, e2 = _tangent_basis(cur_n)
            for axis in (e1, e2):
                base = cur_n

                def make_pi0(t, base=base, axis=axis, lev=cur_lev):
                    n = base + t * axis
                    n = n / np.linalg.norm(n)
                    return _pi0_for(ensemble, q, n, lev, tol), n, lev

                cur_n, cur_lev, cur = _line_refine(ensemble, q, cfg, make_pi0, -h, h, cur_n, cur_lev, cur)
            if full_rank:

                def make_pi0(lev, n=cur_n):
                    return _pi0_for(ensemble, q, n, lev, tol), n, lev

                cur_n, cur_lev, cur = _line_refine(ensemble, q, cfg, make_pi0, max(0.0, cur_lev - h),
                                                   min(1.0 - 1e-9, cur_lev + h), cur_n, cur_lev, cur)
            h *= 0.5
        if best is None or _value(cur) < _value(best):
            best = cur
    return _materialise(ensemble, q, best, cfg)


def _mixed_with_trivial(ensemble: Ensemble, q: float, cfg: OracleConfig) -> OracleResult:
    """Best mixture of a pure strategy at some q' with the trivial strategy."""
    rho_max = eigvalsh2(ensemble.average_state())[1]
    best = None
    for q1 in np.linspace(0.0, rho_max * (1.0 - 1e-9), 9):
        cand = _search(ensemble, float(q1), cfg, full_rank=False)
        if cand is None:
            continue
        ratio = cand.pe / (1.0 - cand.q)
        if best is None or ratio < best[0]:
            best = (ratio, cand)
    if best is None:
        raise FrioError(f"no feasible strategy found for q = {q!r}")
    _, cand = best
    p = (1.0 - q) / (1.0 - cand.q)
    trivial = trivial_povm(len(ensemble))
    povm = mix_povms(p, cand.povm, trivial)
    r = rates(ensemble, povm)
    mixture = MixedStrategy(p, cand.q, cand.pe, 1.0, 0.0, cand.povm, trivial)
    return OracleResult(r.p_error, povm, r.q_inconclusive, "mixed", mixture,
                        float(eigvalsh2(povm.inconclusive())[0]), cand.residual)


def _rank_one_and_best(ensemble: Ensemble, q: float, cfg: OracleConfig):
    rank_one = _search(ensemble, q, cfg, full_rank=False)
    best, full = rank_one, None
    if cfg.allow_full_rank_pi0:
        full = _search(ensemble, q, cfg, full_rank=True)
        if full is not None and (best is None or full.pe < best.pe - FULL_RANK_MARGIN):
            best = full
    return rank_one, full, best


def optimize_for_pi0(ensemble: Ensemble, pi0, cfg: Optional[OracleConfig] = None) -> OracleResult:
    """Best measurement whose inconclusive element is exactly ``pi0``."""
    cfg = cfg or OracleConfig()
    if len(ensemble) not in (2, 3):
        raise FrioError(f"oracle handles 2 or 3 states, got {len(ensemble)}")
    q = float(np.real(np.trace(ensemble.average_state() @ pi0)))
    cand = _evaluate(ensemble, q, [pi0], cfg)[0]
    sol = None if cand is None else _materialise(ensemble, q, cand, cfg)
    if sol is None:
        raise FrioError("inconclusive element leaves no conclusive problem to solve")
    return OracleResult(sol.pe, sol.povm, sol.q, "pure", None, sol.pi0_min_eig, sol.residual)


def optimize_fixed_q(ensemble: Ensemble, q: float, cfg: Optional[OracleConfig] = None) -> OracleResult:
    """Numerically minimise the error probability at inconclusive rate ``q``."""
    cfg = cfg or OracleConfig()
    if not 0.0 <= q < 1.0:
        raise FrioError(f"inconclusive rate {q!r} must lie in [0, 1)")
    if len(ensemble) not in (2, 3):
        raise FrioError(f"oracle handles 2 or 3 states, got {len(ensemble)}")
    _, _, best = _rank_one_and_best(ensemble, q, cfg)
    if best is None:
        return _mixed_with_trivial(ensemble, q, cfg)
    return OracleResult(best.pe, best.povm, best.q, "pure", None, best.pi0_min_eig, best.residual)


# ---------------------------------------------------------------------------
# Convex envelope of rate points
# ---------------------------------------------------------------------------

def _lower_hull(q: np.ndarray, pe: np.ndarray) -> list[int]:
    hull: list[int] = []
    for i in range(len(q)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (q[b] - q[a]) * (pe[i] - pe[a]) - (pe[b] - pe[a]) * (q[i] - q[a])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def convexify(points: Sequence[tuple], n_states: Optional[int] = None, tol: float = 1e-12) -> FrioCurve:
    """Lower convex envelope of ``(Q, P_e, povm)`` points.

    Points already on the envelope keep their own measurement; the others
    are replaced by the mixture of the two neighbouring hull vertices. The
    trivial point ``(1, 0)`` is added when missing.
    """
    if not points:
        raise FrioError("cannot convexify an empty point set")
    by_q: dict[float, tuple] = {}
    for q, pe, *rest in points:
        povm = rest[0] if rest else None
        q, pe = float(q), float(pe)
        if q not in by_q or pe < by_q[q][1]:
            by_q[q] = (q, pe, povm)
    if 1.0 not in by_q:
        if n_states is None:
            n_states = next((sum(1 for l in p[2].labels if l is not None) for p in by_q.values()
                             if p[2] is not None), None)
        by_q[1.0] = (1.0, 0.0, trivial_povm(n_states) if n_states else None)
    pts = sorted(by_q.values())
    q = np.array([p[0] for p in pts])
    pe = np.array([p[1] for p in pts])
    hull = _lower_hull(q, pe)
    out = []
    for i, (qi, pei, povm) in enumerate(pts):
        j = int(np.searchsorted(q[hull], qi, side="right")) - 1
        j = min(max(j, 0), len(hull) - 2) if len(hull) > 1 else 0
        if len(hull) == 1:
            out.append(FrioPoint(qi, pei, Regime.PURE, povm))
            continue
        a, b = hull[j], hull[j + 1]
        w = (q[b] - qi) / (q[b] - q[a])
        env = w * pe[a] + (1.0 - w) * pe[b]
        if pei <= env + tol:
            out.append(FrioPoint(qi, pei, Regime.PURE, povm))
            continue
        pa, pb = pts[a][2], pts[b][2]
        mixed_povm = mix_povms(w, pa, pb) if pa is not None and pb is not None else None
        mix = MixedStrategy(w, q[a], pe[a], q[b], pe[b], pa, pb)
        out.append(FrioPoint(qi, env, Regime.MIXED, mixed_povm, mix))
    return FrioCurve(tuple(out), label="convex envelope")


# ---------------------------------------------------------------------------
# Zero-eigenvalue check for the inconclusive element
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroEigenvalueCheck:
    q: float
    pe_rank_one: float
    pe_full_rank: float
    improvement: float
    winner_min_eigenvalue: float
    holds: bool
    skipped: bool = False
    reason: str = ""


def verify_zero_eigenvalue_theorem(
    ensemble: Ensemble,
    q_samples: Sequence[float],
    cfg: Optional[OracleConfig] = None,
    q_critical: Optional[float] = None,
    tol: float = 1e-6,
) -> list[ZeroEigenvalueCheck]:
    """Check that allowing a full-rank ``Pi_0`` never helps where the curve is strictly convex.

    Samples at or beyond ``q_critical``, or where the rank-one error is
    already zero, sit on a flat segment and are reported as skipped.
    """
    cfg = replace(cfg or OracleConfig(), allow_full_rank_pi0=True)
    report = []
    for q in q_samples:
        q = float(q)
        if q_critical is not None and q >= q_critical:
            report.append(ZeroEigenvalueCheck(q, math.nan, math.nan, 0.0, math.nan, True, True,
                                              "on the linear tail: curve not strictly convex"))
            continue
        r1, full, winner = _rank_one_and_best(ensemble, q, cfg)
        if r1 is None:
            report.append(ZeroEigenvalueCheck(q, math.nan, math.nan, 0.0, math.nan, True, True,
                                              "no rank-one element reaches this rate"))
            continue
        if r1.pe <= 1e-9:
            report.append(ZeroEigenvalueCheck(q, r1.pe, math.nan, 0.0, math.nan, True, True,
                                              "zero error: flat segment"))
            continue
        pe_full = math.inf if full is None else full.pe
        improvement = r1.pe - pe_full
        report.append(ZeroEigenvalueCheck(
            q, r1.pe, pe_full, improvement, winner.pi0_min_eig,
            holds=improvement <= tol and winner.pi0_min_eig <= tol,
        ))
    return report
