import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascaded_qwm.model import (
    CONJUGATE_INDEX,
    OMEGA_ENTRIES,
    DriveAmplitudes,
    ParameterError,
    SystemParams,
    block_slices,
    build_A,
    build_b,
    build_Omega,
    conjugation_defect,
    equations_rhs,
    source_factor,
    source_steady_state,
    vacuum_state,
)

ZERO = DriveAmplitudes(0, 0, 0, 0)


def det_coherence_block(r):
    return -(r + 2) * (2 * r + 1) / 8


def det_z_block(r):
    return (r + 1) ** 3 / 4


class TestSystemParams:
    def test_derived_quantities(self):
        p = SystemParams(gamma_s=2.0, gamma_pr=8.0, mu=0.5)
        assert p.r == 0.25
        assert p.alpha == pytest.approx(0.25)

    @pytest.mark.parametrize("kwargs", [
        dict(gamma_s=0.0, gamma_pr=1.0),
        dict(gamma_s=1.0, gamma_pr=-1.0),
        dict(gamma_s=1.0, gamma_pr=1.0, mu=1.5),
        dict(gamma_s=1.0, gamma_pr=1.0, mu=-0.1),
        dict(gamma_s=1.0, gamma_pr=1.0, delta_omega=-1.0),
        dict(gamma_s=float("nan"), gamma_pr=1.0),
    ])
    def test_rejects_unphysical(self, kwargs):
        with pytest.raises(ParameterError):
            SystemParams(**kwargs)

    @given(
        r=st.floats(1e-3, 1e3),
        mu=st.floats(0, 1),
    )
    def test_alpha_squared_is_mu_squared_r(self, r, mu):
        p = SystemParams(gamma_s=r * 3.0, gamma_pr=3.0, mu=mu)
        assert p.alpha**2 == pytest.approx(mu**2 * p.r, rel=1e-12, abs=1e-300)

    def test_voltages(self):
        p = SystemParams.from_voltages(gamma_s=4.0, gamma_pr=9.0, eps_s=0.1, eps_pr=0.2)
        assert p.omega_s_amp == pytest.approx(0.2)
        assert p.omega_pr_amp == pytest.approx(0.6)


class TestDriveAmplitudes:
    @given(theta=st.floats(0, 2 * math.pi))
    def test_products_are_phase_independent(self, theta):
        p = SystemParams(gamma_s=1.0, gamma_pr=2.0, omega_s_amp=0.3 - 0.1j, omega_pr_amp=0.2 + 0.4j)
        d = p.drives(theta)
        assert d.p_plus * d.p_minus == pytest.approx(abs(p.omega_pr_amp) ** 2 / 4)
        assert d.s_plus * d.s_minus == pytest.approx(abs(p.omega_s_amp) ** 2 / 4)
        assert d.p_plus == pytest.approx(np.conj(d.p_minus))
        assert d.s_minus == pytest.approx(np.conj(d.s_plus))


class TestBuildA:
    @pytest.mark.parametrize("r", [0.1, 0.5, 1, 2, 5, 10])
    def test_block_determinants(self, r):
        A = build_A(r, 0.37)
        blocks = block_slices()
        for name in ("A_minus", "A_plus"):
            idx = blocks[name]
            assert np.linalg.det(A[np.ix_(idx, idx)]) == pytest.approx(det_coherence_block(r), rel=1e-12)
        idx = blocks["A_z"]
        assert np.linalg.det(A[np.ix_(idx, idx)]) == pytest.approx(det_z_block(r), rel=1e-12)

    def test_determinant_values_at_r1(self):
        A = build_A(1.0, 1.0)
        assert np.linalg.det(A[:3, :3]) == pytest.approx(-9 / 8)
        assert np.linalg.det(A[8:, 8:]) == pytest.approx(2.0)

    def test_block_diagonal(self):
        A = build_A(0.7, 0.4)
        mask = np.zeros_like(A, dtype=bool)
        for idx in block_slices().values():
            mask[np.ix_(idx, idx)] = True
        assert np.all(A[~mask] == 0)

    @pytest.mark.parametrize("r", [0.05, 1.0, 30.0])
    def test_vacuum_is_fixed_point(self, r):
        assert np.all(build_A(r, math.sqrt(r)) @ vacuum_state() + build_b(ZERO, r) == 0)

    def test_nonpositive_ratio(self):
        with pytest.raises(ParameterError):
            build_A(0.0, 0.0)


class TestBuildOmega:
    def test_zero_drive(self):
        assert np.all(build_Omega(ZERO) == 0)

    def test_known_rows(self):
        d = DriveAmplitudes(1.1, 2.2, 3.3, 4.4)
        Om = build_Omega(d)
        row1 = np.zeros(12, complex)
        row1[8] = 1.1
        assert np.array_equal(Om[0], row1)
        row9 = np.zeros(12, complex)
        row9[0], row9[3] = -2 * 2.2, -2 * 1.1
        assert np.array_equal(Om[8], row9)

    def test_entry_count(self):
        assert len(OMEGA_ENTRIES) == 28
        d = DriveAmplitudes(1.0, 1.0, 1.0, 1.0)
        assert np.count_nonzero(build_Omega(d)) == 28

    @given(st.lists(st.complex_numbers(max_magnitude=10), min_size=4, max_size=4),
           st.floats(-5, 5))
    def test_linear_in_drives(self, z, k):
        d = DriveAmplitudes(*z)
        scaled = DriveAmplitudes(*(k * v for v in z))
        assert np.allclose(build_Omega(scaled), k * build_Omega(d))


class TestBuildB:
    def test_zero_source(self):
        b = build_b(DriveAmplitudes(0.3, 0.3, 0, 0), 1.7)
        expected = np.zeros(12)
        expected[8], expected[11] = -1, 1
        assert np.array_equal(b, expected)

    def test_source_factor_value(self):
        d = DriveAmplitudes(0, 0, 0.1, 0.1)
        assert source_factor(d, 2.0) == pytest.approx(1 / 1.02)
        b = build_b(d, 2.0)
        assert b[1] == pytest.approx(2 * 0.1 / 2 / 1.02)
        assert b[4] == pytest.approx(2 * 0.1 / 2 / 1.02)
        assert b[11] == pytest.approx(1 / 1.02)

    def test_second_order_coefficient(self):
        r, eps = 0.8, 1e-4
        d = DriveAmplitudes(0, 0, eps, eps)
        # 1 - F ~ 8 s+ s- / r**2 for tiny drives
        assert (1 - source_factor(d, r)) / eps**2 == pytest.approx(8 / r**2, rel=1e-6)


class TestSourceSteadyState:
    def test_undriven(self):
        sz, sm = source_steady_state(SystemParams(gamma_s=2.0, gamma_pr=1.0))
        assert (sz, sm) == (-1.0, 0.0)

    def test_half_saturation(self):
        g = 3.0
        p = SystemParams(gamma_s=g, gamma_pr=1.0, omega_s_amp=g / math.sqrt(8))
        assert source_steady_state(p)[0] == pytest.approx(-0.5)

    def test_weak_drive_coherence(self):
        p = SystemParams(gamma_s=2.0, gamma_pr=1.0, omega_s_amp=1e-5 * (1 + 1j))
        assert source_steady_state(p)[1] == pytest.approx(-2 * p.omega_s_amp / 2.0, rel=1e-9)

    def test_matches_b_vector(self):
        p = SystemParams(gamma_s=1.3, gamma_pr=2.1, omega_s_amp=0.4 + 0.2j)
        sz, sm = source_steady_state(p)
        b = build_b(p.drives(0.0), p.r)
        assert b[11] == pytest.approx(-sz)
        assert b[1] == pytest.approx(-sm)


class TestEquationsRhs:
    def test_vacuum_undriven(self):
        p = SystemParams(gamma_s=1.0, gamma_pr=1.0)
        assert np.all(equations_rhs(vacuum_state(), p) == 0)

    def test_first_equation(self):
        p = SystemParams(gamma_s=0.5, gamma_pr=2.0, mu=0.6, omega_pr_amp=0.3j)
        rng = np.random.default_rng(1)
        x = rng.normal(size=12) + 1j * rng.normal(size=12)
        d = p.drives(0.4)
        expected = d.p_minus * x[8] + p.alpha * x[1] - x[0] / 2
        assert equations_rhs(x, p, 0.4)[0] == pytest.approx(expected)

    @settings(max_examples=150, deadline=None)
    @given(
        r=st.floats(0.1, 10), mu=st.floats(0, 1), theta=st.floats(0, 2 * math.pi),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_matches_matrix_form(self, r, mu, theta, seed):
        rng = np.random.default_rng(seed)
        p = SystemParams(
            gamma_s=r * 1.5, gamma_pr=1.5, mu=mu,
            omega_s_amp=complex(*rng.normal(size=2)), omega_pr_amp=complex(*rng.normal(size=2)),
        )
        x = rng.normal(size=12) + 1j * rng.normal(size=12)
        d = p.drives(theta)
        matrix = (build_A(p) + build_Omega(d)) @ x + build_b(d, p.r)
        direct = equations_rhs(x, p, theta)
        assert np.max(np.abs(matrix - direct)) <= 1e-10 * np.max(np.abs(direct))

    @settings(max_examples=50, deadline=None)
    @given(theta=st.floats(0, 2 * math.pi), seed=st.integers(0, 2**32 - 1))
    def test_conjugation_closure(self, theta, seed):
        rng = np.random.default_rng(seed)
        p = SystemParams(gamma_s=0.7, gamma_pr=1.2, mu=0.9,
                         omega_s_amp=complex(*rng.normal(size=2)),
                         omega_pr_amp=complex(*rng.normal(size=2)))
        z = rng.normal(size=12) + 1j * rng.normal(size=12)
        x = np.empty(12, complex)
        for i, j in enumerate(CONJUGATE_INDEX):
            x[i] = z[i] if i <= j else np.conj(z[j])
        x[8], x[11] = z[8].real, z[11].real
        assert conjugation_defect(x) == 0
        assert conjugation_defect(equations_rhs(x, p, theta)) < 1e-14
