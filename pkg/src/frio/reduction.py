"""Mapping a fixed-inconclusive-rate problem onto a minimum-error problem.

Given the inconclusive element ``Pi_0``, the conclusive elements must sum
to ``Omega = I - Pi_0``. Conjugating by ``Omega^{-1/2}`` turns them into
an ordinary complete POVM for the transformed states

    rho~_i = Omega^{1/2} rho_i Omega^{1/2} / tr(Omega rho_i),
    eta~_i = eta_i tr(Omega rho_i) / (1 - Q),

and the error rate of the original measurement is ``(1 - Q)`` times the
error rate of the transformed one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qdcore import (
    IDENTITY,
    PSD_TOL,
    Ensemble,
    FrioError,
    Povm,
    QubitState,
    check_hermitian,
    eigvalsh2,
    helstrom_error,
    op_inv_sqrt,
    op_sqrt,
    validate_povm,
)

# Below this conclusive weight a state is considered annihilated by Omega.
ANNIHILATION_TOL = 1e-14


class SingularOmegaError(FrioError):
    """A state has no support on Omega, so its transformed version is undefined."""


class DegenerateReductionError(FrioError):
    """Q = 1: there is no conclusive sector left to discriminate in."""


@dataclass(frozen=True)
class ReducedProblem:
    ensemble: Ensemble
    q: float
    omega: np.ndarray


def check_inconclusive_element(pi0) -> np.ndarray:
    """Validate ``0 <= Pi_0 <= I`` and return it symmetrised."""
    p = check_hermitian(pi0)
    lo, hi = eigvalsh2(p)
    if lo < -PSD_TOL or hi > 1.0 + PSD_TOL:
        raise FrioError(f"Pi_0 eigenvalues ({lo:.6g}, {hi:.6g}) outside [0, 1]")
    return p


def reduce(ensemble: Ensemble, pi0) -> ReducedProblem:
    """Transform states and priors for the chosen inconclusive element.

    A singular ``Omega`` (``Pi_0`` with a unit eigenvalue) is accepted as
    long as every state keeps some weight on its support; the transformed
    states then all lie in that one-dimensional support.
    """
    pi0 = check_inconclusive_element(pi0)
    omega = IDENTITY - pi0
    rho = ensemble.average_state()
    q = float(np.real(np.trace(rho @ pi0)))
    weights = [s.expectation(omega) for s in ensemble.states]
    q_bar = sum(eta * w for eta, w in zip(ensemble.priors, weights))
    if q_bar <= ANNIHILATION_TOL:
        raise DegenerateReductionError(f"inconclusive rate Q = {q!r} leaves no conclusive sector")
    root = op_sqrt(omega)
    states = []
    for i, (s, w) in enumerate(zip(ensemble.states, weights)):
        if w <= ANNIHILATION_TOL:
            raise SingularOmegaError(f"state {i} is annihilated by Omega (tr(Omega rho_{i}) = {w:.3e})")
        states.append(QubitState.normalised(root @ s.amplitudes))
    priors = [eta * w / q_bar for eta, w in zip(ensemble.priors, weights)]
    # Priors are renormalised by their exact sum; q_bar == 1 - q up to rounding.
    total = sum(priors)
    priors = [p / total for p in priors]
    return ReducedProblem(Ensemble(tuple(states), tuple(priors)), q, omega)


def transform_povm(povm: Povm, omega) -> Povm:
    """Map conclusive elements to ``Omega^{-1/2} Pi_i Omega^{-1/2}``.

    The inconclusive slot of the result is the zero operator. Requires a
    strictly positive ``Omega``.
    """
    inv_root = op_inv_sqrt(check_hermitian(omega))
    elements = []
    for e, lab in zip(povm.elements, povm.labels):
        if lab is None:
            elements.append(np.zeros((2, 2), dtype=complex))
        else:
            elements.append(inv_root @ e @ inv_root)
    return Povm(tuple(elements), povm.labels)


def lift_povm(reduced_povm: Povm, omega, pi0) -> Povm:
    """Undo :func:`transform_povm`: ``Pi_i = Omega^{1/2} Pi~_i Omega^{1/2}``."""
    problems = validate_povm(reduced_povm)
    if problems:
        raise FrioError("reduced POVM is invalid: " + "; ".join(problems))
    if np.max(np.abs(reduced_povm.inconclusive())) > PSD_TOL:
        raise FrioError("reduced POVM must have a zero inconclusive element")
    root = op_sqrt(check_hermitian(omega))
    pi0 = check_hermitian(pi0)
    elements = []
    for e, lab in zip(reduced_povm.elements, reduced_povm.labels):
        elements.append(pi0 if lab is None else root @ e @ root)
    return Povm(tuple(elements), reduced_povm.labels)


def frio_error_for_pi0(ensemble: Ensemble, pi0) -> float:
    """Smallest error rate over all POVMs whose inconclusive element is ``pi0``."""
    if len(ensemble) != 2:
        raise FrioError(f"two-state reduction needs exactly 2 states, got {len(ensemble)}")
    red = reduce(ensemble, pi0)
    return (1.0 - red.q) * helstrom_error(red.ensemble)
