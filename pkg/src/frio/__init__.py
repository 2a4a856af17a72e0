"""Optimal discrimination of qubit states at a fixed rate of inconclusive outcomes."""

from .closedform import (
    Region,
    TwoPureProblem,
    trine_ensemble,
    trine_optimal_povm,
    trine_pe_min,
    two_pure_optimal_povm,
    two_pure_pe_min,
    two_pure_qc,
    two_pure_qth,
)
from .curves import CriticalData, FrioCurve, FrioPoint, Regime, critical_from_curve, curve_violations
from .qdcore import (
    Ensemble,
    FrioError,
    Povm,
    QubitState,
    RateTriple,
    helstrom_error,
    overlap_angle,
    rates,
    trace_norm,
    validate_povm,
)
from .oracle import OracleConfig, OracleResult, convexify, optimize_fixed_q, verify_zero_eigenvalue_theorem
from .reduction import frio_error_for_pi0, lift_povm, reduce
from .simulate import TrialReport, estimate_rates

__version__ = "0.1.0"
