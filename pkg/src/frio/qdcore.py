"""Qubit states, ensembles, POVMs and the outcome-rate evaluator.

Everything here works on 2x2 complex matrices stored as numpy arrays.
Eigen-decompositions use the closed-form quadratic rather than LAPACK so
results are deterministic down to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-10
RATE_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
ZERO = np.zeros((2, 2), dtype=complex)


class FrioError(ValueError):
    """Base class for invalid inputs to the discrimination routines."""


# ---------------------------------------------------------------------------
# 2x2 Hermitian linear algebra
# ---------------------------------------------------------------------------

def as_operator(m) -> np.ndarray:
    """Return ``m`` as a 2x2 complex array, raising if the shape is wrong."""
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise FrioError(f"expected a 2x2 operator, got shape {a.shape}")
    return a


def hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrised operator."""
    a = as_operator(m)
    defect = hermitian_defect(a)
    if defect > tol:
        raise FrioError(f"operator is not Hermitian (max |A - A^H| = {defect:.3e})")
    return 0.5 * (a + a.conj().T)


def eigvalsh2(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a 2x2 Hermitian matrix via trace/determinant."""
    a = m[0, 0].real
    d = m[1, 1].real
    b = abs(m[0, 1])
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), b)
    return np.array([mean - radius, mean + radius])


def eigh2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigen-decomposition of a 2x2 Hermitian matrix.

    Returns ``(w, v)`` with ascending eigenvalues ``w`` and orthonormal
    eigenvectors in the columns of ``v``, matching ``numpy.linalg.eigh``.
    """
    w = eigvalsh2(m)
    scale = max(abs(m[0, 0].real), abs(m[1, 1].real), abs(m[0, 1]))
    if scale == 0.0 or abs(m[0, 1]) <= 1e-17 * scale:
        # Diagonal to working precision; order the basis vectors by eigenvalue.
        if m[0, 0].real <= m[1, 1].real:
            v = np.eye(2, dtype=complex)
        else:
            v = np.array([[0, 1], [1, 0]], dtype=complex)
        return w, v
    a = m[0, 0].real / scale
    d = m[1, 1].real / scale
    b = m[0, 1] / scale
    # Eigenvector for the larger eigenvalue: (b, lam - a), or the
    # equivalent (lam - d, conj b); take whichever is better conditioned.
    lam = w[1] / scale
    u1 = np.array([b, lam - a], dtype=complex)
    u2 = np.array([lam - d, np.conj(b)], dtype=complex)
    n1, n2 = np.linalg.norm(u1), np.linalg.norm(u2)
    u = u1 / n1 if n1 >= n2 else u2 / n2
    perp = np.array([-np.conj(u[1]), np.conj(u[0])])
    return w, np.column_stack([perp, u])


def op_function(m: np.ndarray, f) -> np.ndarray:
    """Apply a scalar function to a Hermitian operator through its spectrum."""
    w, v = eigh2(m)
    return (v * np.array([f(x) for x in w])) @ v.conj().T


def op_sqrt(m: np.ndarray) -> np.ndarray:
    return op_function(m, lambda x: math.sqrt(max(x, 0.0)))


def op_inv_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Inverse square root; raises if the operator is not strictly positive."""
    w = eigvalsh2(m)
    if w[0] <= tol:
        raise FrioError(f"operator not strictly positive (min eigenvalue {w[0]:.3e})")
    return op_function(m, lambda x: 1.0 / math.sqrt(x))


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def trace_norm(op) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    h = check_hermitian(op)
    return float(np.sum(np.abs(eigvalsh2(h))))


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QubitState:
    """A normalised pure qubit state ``a|0> + b|1>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (2,):
            raise FrioError(f"qubit state needs 2 amplitudes, got {amp.shape[0]}")
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise FrioError(f"state is not normalised: |a|^2 + |b|^2 = {norm2!r}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def normalised(cls, vec) -> QubitState:
        v = np.asarray(vec, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise FrioError("cannot normalise the zero vector")
        return cls(v / n)

    @classmethod
    def from_angle(cls, angle: float, phase: float = 0.0) -> QubitState:
        """``cos(angle)|0> + exp(i phase) sin(angle)|1>``."""
        return cls(np.array([math.cos(angle), np.exp(1j * phase) * math.sin(angle)]))

    @property
    def projector(self) -> np.ndarray:
        return projector(self.amplitudes)

    def expectation(self, op: np.ndarray) -> float:
        """Real part of <psi|op|psi>."""
        a = self.amplitudes
        return float(np.real(np.conj(a) @ op @ a))


@dataclass(frozen=True)
class Ensemble:
    """Pure states with prior probabilities."""

    states: tuple[QubitState, ...]
    priors: tuple[float, ...]

    def __post_init__(self):
        states = tuple(s if isinstance(s, QubitState) else QubitState(s) for s in self.states)
        priors = tuple(float(p) for p in self.priors)
        if len(states) != len(priors):
            raise FrioError(f"{len(states)} states but {len(priors)} priors")
        if len(states) < 2:
            raise FrioError("an ensemble needs at least two states")
        if min(priors) < 0:
            raise FrioError(f"negative prior in {priors}")
        if abs(sum(priors) - 1.0) > NORM_TOL:
            raise FrioError(f"priors sum to {sum(priors)!r}, not 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)

    def __len__(self) -> int:
        return len(self.states)

    def weighted_projectors(self) -> list[np.ndarray]:
        return [eta * s.projector for s, eta in zip(self.states, self.priors)]

    def average_state(self) -> np.ndarray:
        """rho = sum_i eta_i |psi_i><psi_i|."""
        return sum(self.weighted_projectors())

    def swapped(self) -> Ensemble:
        return Ensemble(self.states[::-1], self.priors[::-1])


def two_state_ensemble(psi1, psi2, eta1: float) -> Ensemble:
    return Ensemble((QubitState(psi1), QubitState(psi2)), (eta1, 1.0 - eta1))


@dataclass(frozen=True)
class Povm:
    """Ordered POVM elements with role labels.

    ``labels[k]`` is ``None`` for the inconclusive element and the index of
    the identified ensemble state otherwise. Construction does not enforce
    the POVM axioms; use :func:`validate_povm` for that.
    """

    elements: tuple[np.ndarray, ...]
    labels: tuple[Optional[int], ...]

    def __post_init__(self):
        elements = tuple(as_operator(e).copy() for e in self.elements)
        labels = tuple(self.labels)
        if len(elements) != len(labels):
            raise FrioError(f"{len(elements)} elements but {len(labels)} labels")
        for e in elements:
            e.setflags(write=False)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_parts(cls, pi0, conclusive: Sequence) -> Povm:
        """Build ``{pi0, Pi_1, ..., Pi_N}`` with ``Pi_i`` identifying state ``i-1``."""
        elements = [as_operator(pi0), *[as_operator(e) for e in conclusive]]
        return cls(tuple(elements), (None, *range(len(conclusive))))

    def inconclusive(self) -> np.ndarray:
        idx = [k for k, lab in enumerate(self.labels) if lab is None]
        if len(idx) != 1:
            raise FrioError(f"expected one inconclusive element, found {len(idx)}")
        return self.elements[idx[0]]

    def identifying(self, i: int) -> np.ndarray:
        """Sum of the elements that identify state ``i`` (zero if none)."""
        out = ZERO.copy()
        for e, lab in zip(self.elements, self.labels):
            if lab == i:
                out = out + e
        return out

    def conclusive(self, n_states: int) -> list[np.ndarray]:
        return [self.identifying(i) for i in range(n_states)]


def mix_povms(p: float, first: Povm, second: Povm) -> Povm:
    """The mixed strategy ``p * first + (1 - p) * second``.

    Elements with the same label are merged, so the inputs may list their
    outcomes in different orders.
    """
    if not 0.0 <= p <= 1.0:
        raise FrioError(f"mixing weight {p} outside [0, 1]")
    labels = [None] + sorted({lab for lab in (*first.labels, *second.labels) if lab is not None})

    def merged(povm: Povm, lab):
        if lab is None:
            return sum((e for e, l in zip(povm.elements, povm.labels) if l is None), ZERO)
        return povm.identifying(lab)

    elements = tuple(p * merged(first, lab) + (1.0 - p) * merged(second, lab) for lab in labels)
    return Povm(elements, tuple(labels))


def trivial_povm(n_states: int) -> Povm:
    """Always answer 'inconclusive'."""
    return Povm.from_parts(IDENTITY, [ZERO] * n_states)


def validate_povm(povm: Povm) -> list[str]:
    """Describe every violated POVM axiom; an empty list means valid."""
    problems = []
    for k, e in enumerate(povm.elements):
        defect = hermitian_defect(e)
        if defect > HERMITIAN_TOL:
            problems.append(f"element {k} not Hermitian: max |A - A^H| = {defect:.3e}")
            continue
        lo = eigvalsh2(0.5 * (e + e.conj().T))[0]
        if lo < -PSD_TOL:
            problems.append(f"element {k} not positive semidefinite: min eigenvalue {lo:.3e}")
    total = sum(povm.elements, ZERO)
    gap = float(np.max(np.abs(total - IDENTITY)))
    if gap > COMPLETENESS_TOL:
        problems.append(f"completeness violation: max |sum - I| = {gap:.6g}")
    n_inc = sum(1 for lab in povm.labels if lab is None)
    if n_inc != 1:
        problems.append(f"expected exactly one inconclusive element, found {n_inc}")
    return problems


@dataclass(frozen=True)
class RateTriple:
    p_success: float
    p_error: float
    q_inconclusive: float

    def __post_init__(self):
        vals = (self.p_success, self.p_error, self.q_inconclusive)
        for v in vals:
            if not -RATE_TOL <= v <= 1.0 + RATE_TOL:
                raise FrioError(f"rate {v!r} outside [0, 1]")
        if abs(sum(vals) - 1.0) > RATE_TOL:
            raise FrioError(f"rates sum to {sum(vals)!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_success, self.p_error, self.q_inconclusive)


def rates(ensemble: Ensemble, povm: Povm) -> RateTriple:
    """Average success, error and inconclusive probabilities."""
    n = len(ensemble)
    ids = [lab for lab in povm.labels if lab is not None]
    if sorted(set(ids)) != list(range(n)) or len(ids) != n:
        raise FrioError(
            f"POVM identifies states {ids}, ensemble has {n} states; need one element per state"
        )
    pi0 = povm.inconclusive()
    p_s = p_e = 0.0
    for i, (state, eta) in enumerate(zip(ensemble.states, ensemble.priors)):
        for e, lab in zip(povm.elements, povm.labels):
            if lab is None:
                continue
            p = eta * state.expectation(e)
            if lab == i:
                p_s += p
            else:
                p_e += p
    q = float(np.real(np.trace(ensemble.average_state() @ pi0)))
    return RateTriple(p_s, p_e, q)


def helstrom_error(ensemble: Ensemble) -> float:
    """Minimum error probability for discriminating two states."""
    if len(ensemble) != 2:
        raise FrioError(f"Helstrom bound needs exactly 2 states, got {len(ensemble)}")
    w1, w2 = ensemble.weighted_projectors()
    return 0.5 * (1.0 - trace_norm(w2 - w1))


def helstrom_povm(ensemble: Ensemble) -> Povm:
    """Projective measurement attaining :func:`helstrom_error` (Pi_0 = 0).

    ``Pi_1`` projects onto the positive part of ``eta_1 rho_1 - eta_2 rho_2``.
    """
    if len(ensemble) != 2:
        raise FrioError(f"Helstrom measurement needs exactly 2 states, got {len(ensemble)}")
    w1, w2 = ensemble.weighted_projectors()
    w, v = eigh2(check_hermitian(w1 - w2))
    pi1 = sum((projector(v[:, k]) for k in range(2) if w[k] > 0), ZERO)
    return Povm.from_parts(ZERO, [pi1, IDENTITY - pi1])


def overlap_angle(s1: QubitState, s2: QubitState) -> float:
    """theta in [0, pi/2] with cos(theta) = |<psi1|psi2>|."""
    ov = abs(np.vdot(s1.amplitudes, s2.amplitudes))
    return math.acos(min(1.0, ov))
