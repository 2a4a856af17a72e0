import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frio.qdcore import (
    IDENTITY,
    Ensemble,
    FrioError,
    Povm,
    QubitState,
    RateTriple,
    check_hermitian,
    eigh2,
    eigvalsh2,
    helstrom_error,
    helstrom_povm,
    mix_povms,
    op_inv_sqrt,
    op_sqrt,
    overlap_angle,
    projector,
    rates,
    trace_norm,
    trivial_povm,
    two_state_ensemble,
    validate_povm,
)

angles = st.floats(0.0, math.pi, allow_nan=False)
phases = st.floats(0.0, 2 * math.pi, allow_nan=False)
priors = st.floats(0.01, 0.99)


def random_hermitian(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return a + a.conj().T


class TestLinearAlgebra:
    def test_eigvalsh2_matches_numpy(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            m = random_hermitian(rng)
            np.testing.assert_allclose(eigvalsh2(m), np.linalg.eigvalsh(m), atol=1e-12)

    def test_eigh2_reconstructs(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            m = random_hermitian(rng)
            w, v = eigh2(m)
            np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-12)
            np.testing.assert_allclose(v.conj().T @ v, IDENTITY, atol=1e-12)

    def test_eigh2_degenerate(self):
        w, v = eigh2(2.5 * IDENTITY)
        np.testing.assert_allclose(w, [2.5, 2.5])
        np.testing.assert_allclose(v.conj().T @ v, IDENTITY, atol=1e-15)

    def test_sqrt_and_inverse_sqrt(self):
        m = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
        r = op_sqrt(m)
        np.testing.assert_allclose(r @ r, m, atol=1e-13)
        np.testing.assert_allclose(op_inv_sqrt(m) @ m @ op_inv_sqrt(m), IDENTITY, atol=1e-13)

    def test_inverse_sqrt_rejects_singular(self):
        with pytest.raises(FrioError):
            op_inv_sqrt(projector([1, 0]))

    def test_check_hermitian_rejects(self):
        with pytest.raises(FrioError):
            check_hermitian(np.array([[0, 1], [0, 0]]))

    def test_trace_norm_of_difference_of_projectors(self):
        a, b = projector([1, 0]), projector([1 / math.sqrt(2), 1 / math.sqrt(2)])
        # |P_a - P_b|_1 = 2 sin(angle) for pure states.
        assert trace_norm(a - b) == pytest.approx(2 * math.sin(math.pi / 4), abs=1e-14)


class TestStatesAndEnsembles:
    def test_state_requires_normalisation(self):
        with pytest.raises(FrioError):
            QubitState(np.array([1.0, 1.0]))

    def test_state_copies_input(self):
        amp = np.array([1.0, 0.0], dtype=complex)
        s = QubitState(amp)
        amp[0] = 5.0
        assert s.amplitudes[0] == 1.0

    def test_from_angle(self):
        s = QubitState.from_angle(math.pi / 6, phase=math.pi / 2)
        np.testing.assert_allclose(s.amplitudes, [math.cos(math.pi / 6), 1j * math.sin(math.pi / 6)], atol=1e-15)

    @pytest.mark.parametrize("pri", [(0.5, 0.6), (-0.1, 1.1), (1.0,)])
    def test_bad_priors(self, pri):
        states = tuple(QubitState.from_angle(0.1 * k) for k in range(len(pri)))
        with pytest.raises(FrioError):
            Ensemble(states, pri)

    def test_average_state_has_unit_trace(self):
        ens = two_state_ensemble([1, 0], [0.6, 0.8], 0.3)
        rho = ens.average_state()
        assert np.trace(rho).real == pytest.approx(1.0)

    def test_overlap_angle(self):
        s1, s2 = QubitState.from_angle(0.0), QubitState.from_angle(math.pi / 3)
        assert overlap_angle(s1, s2) == pytest.approx(math.pi / 3)


class TestPovm:
    def test_validation_passes_for_projective(self):
        povm = Povm.from_parts(np.zeros((2, 2)), [projector([1, 0]), projector([0, 1])])
        assert validate_povm(povm) == []

    def test_validation_reports_incomplete(self):
        povm = Povm.from_parts(np.zeros((2, 2)), [projector([1, 0]), 0.5 * projector([0, 1])])
        problems = validate_povm(povm)
        assert any("sum" in p or "complete" in p for p in problems)

    def test_validation_reports_negative(self):
        bad = np.diag([1.2, 0.0])
        povm = Povm.from_parts(np.zeros((2, 2)), [bad, IDENTITY - bad])
        assert validate_povm(povm)

    def test_trivial_povm(self):
        t = trivial_povm(3)
        assert validate_povm(t) == []
        np.testing.assert_allclose(t.inconclusive(), IDENTITY)

    def test_mix_povms_is_convex_in_rates(self):
        ens = two_state_ensemble([1, 0], [0.6, 0.8], 0.4)
        a = helstrom_povm(ens)
        b = trivial_povm(2)
        m = mix_povms(0.3, a, b)
        ra, rb, rm = rates(ens, a), rates(ens, b), rates(ens, m)
        for x, y, z in zip(ra.as_tuple(), rb.as_tuple(), rm.as_tuple()):
            assert z == pytest.approx(0.3 * x + 0.7 * y, abs=1e-14)

    def test_elements_are_read_only(self):
        e = projector([1, 0])
        povm = Povm.from_parts(np.zeros((2, 2)), [e, IDENTITY - e])
        with pytest.raises(ValueError):
            povm.elements[1][0, 0] = 3.0
        e[0, 0] = 9.0
        assert povm.elements[1][0, 0] == 1.0


class TestRates:
    def test_rate_triple_rejects_bad_sum(self):
        with pytest.raises(FrioError):
            RateTriple(0.5, 0.5, 0.5)

    def test_rates_mismatched_arity(self):
        ens = two_state_ensemble([1, 0], [0, 1], 0.5)
        with pytest.raises(FrioError):
            rates(ens, trivial_povm(3))

    def test_orthogonal_states_perfect(self):
        ens = two_state_ensemble([1, 0], [0, 1], 0.3)
        r = rates(ens, Povm.from_parts(np.zeros((2, 2)), [projector([1, 0]), projector([0, 1])]))
        assert r.as_tuple() == pytest.approx((1.0, 0.0, 0.0))

    def test_helstrom_value(self):
        c = 0.5
        ens = two_state_ensemble([1, 0], [c, math.sqrt(1 - c * c)], 0.5)
        assert helstrom_error(ens) == pytest.approx(0.5 * (1 - math.sqrt(1 - c * c)), abs=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(a=angles, b=angles, ph=phases, eta=priors)
    def test_helstrom_povm_achieves_bound(self, a, b, ph, eta):
        ens = Ensemble((QubitState.from_angle(a / 2), QubitState.from_angle(b / 2, ph)), (eta, 1 - eta))
        povm = helstrom_povm(ens)
        assert validate_povm(povm) == []
        assert rates(ens, povm).p_error == pytest.approx(helstrom_error(ens), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(a=angles, b=angles, ph=phases, eta=priors)
    def test_helstrom_matches_pure_state_formula(self, a, b, ph, eta):
        s1, s2 = QubitState.from_angle(a / 2), QubitState.from_angle(b / 2, ph)
        ov = abs(np.vdot(s1.amplitudes, s2.amplitudes)) ** 2
        expected = 0.5 * (1 - math.sqrt(max(0.0, 1 - 4 * eta * (1 - eta) * ov)))
        assert helstrom_error(Ensemble((s1, s2), (eta, 1 - eta))) == pytest.approx(expected, abs=1e-12)
