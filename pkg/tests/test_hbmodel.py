"""Hermite-Biehler models: evaluation, phase, kernel, majorant."""
import numpy as np
import pytest

from pwlab import (HBModel, check_hb_property, eval_E, log_abs_E, majorant,
                   majorant_halfplane, phase, phase_derivative,
                   reproducing_kernel)
from pwlab.numerics import Grid, InvalidInputError


class TestModel:
    def test_zero_in_upper_half_plane_rejected(self):
        with pytest.raises(InvalidInputError):
            HBModel(zeros=(1j,), constant=1.0)
        with pytest.raises(InvalidInputError):
            HBModel(zeros=(1.0 + 0j,), constant=1.0)

    def test_zero_constant_rejected(self):
        with pytest.raises(InvalidInputError):
            HBModel(zeros=(-1j,), constant=0.0)

    def test_round_trip(self, stair):
        again = HBModel.from_dict(stair.to_dict())
        assert again.zeros == stair.zeros
        assert again.drift == stair.drift
        assert again.genus_factors == stair.genus_factors

    def test_strip_zeros(self, stair):
        strip = stair.strip_zeros(0.5)
        # eta_k = (1+|k|)^{-1/2} < 1/2 exactly when |k| >= 4
        assert np.all(np.abs(strip.real) >= 4)
        assert strip.size == 2 * (40 - 4 + 1)


class TestSingleZero:
    """The lone zero -i: E(z) = 1 - iz, everything in closed form."""

    def test_eval(self, single):
        assert abs(eval_E(single, 1.0) - (1.0 - 1.0j)) < 1e-12
        assert abs(eval_E(single, -1j)) < 1e-12

    def test_phase_derivative(self, single):
        # Poisson kernel of -i: 1/(x^2+1)
        assert abs(phase_derivative(single, 0.0) - 1.0) < 1e-12
        assert abs(phase_derivative(single, 2.0) - 0.2) < 1e-12

    def test_phase(self, single):
        assert abs(phase(single, 0.0)) < 1e-12
        assert abs(phase(single, 1.0) - np.pi / 4.0) < 1e-12

    def test_kernel_diagonal(self, single):
        # k_0(0) = phi'(0) |E(0)|^2 / pi = 1/pi
        assert abs(reproducing_kernel(single, 0.0, 0.0) - 1.0 / np.pi) < 1e-10

    def test_majorant_constant(self, single):
        xs = np.linspace(-50.0, 50.0, 101)
        assert np.allclose(majorant(single, xs), 1.0 / np.sqrt(np.pi),
                           atol=1e-10)

    def test_hb_property(self, single):
        ok, margin = check_hb_property(single,
                                       Grid.linspace(-5.0, 5.0, 21, imag=1.0))
        assert ok
        assert margin > 0.0


class TestPhase:
    def test_increasing(self, stair):
        xs = np.linspace(-10.0, 10.0, 201)
        assert np.all(np.diff(phase(stair, xs)) > 0)

    def test_derivative_positive(self, stair):
        xs = np.linspace(-10.0, 10.0, 201)
        assert np.all(phase_derivative(stair, xs) > 0)

    def test_derivative_matches_finite_difference(self, stair):
        h = 1e-6
        for x in (-3.7, 0.0, 4.1):
            fd = (phase(stair, x + h) - phase(stair, x - h)) / (2 * h)
            assert abs(fd - phase_derivative(stair, x)) < 1e-5


class TestKernel:
    def test_hermitian_symmetry(self, stair):
        a, b = 0.7, 2.3 + 0.4j
        k1 = reproducing_kernel(stair, a, b)
        k2 = reproducing_kernel(stair, b, a)
        assert abs(k1 - np.conj(k2)) < 1e-9 * (1 + abs(k1))

    def test_diagonal_positive(self, stair):
        for z in (0.5, 1.0 + 0.5j, -4.0 + 2.0j):
            val = reproducing_kernel(stair, z, z)
            assert np.real(val) > 0
            assert abs(np.imag(val)) < 1e-9 * np.real(val)

    def test_majorant_is_kernel_norm(self, stair):
        for x in (-2.5, 0.0, 3.25):
            diag = float(np.real(reproducing_kernel(stair, x, x)))
            assert abs(majorant(stair, x) - np.sqrt(diag)) < 1e-9

    def test_halfplane_majorant_matches_kernel(self, stair):
        for z in (1.0 + 2.0j, -3.0 + 4.0j):
            diag = float(np.real(reproducing_kernel(stair, z, z)))
            assert abs(majorant_halfplane(stair, z)
                       - np.sqrt(diag)) < 1e-7 * np.sqrt(diag)


class TestHBProperty:
    def test_fixture_models_pass(self, stair, bad, unit_multiplier):
        grid = Grid.linspace(-8.0, 8.0, 33, imag=1.0)
        for model in (stair, bad, unit_multiplier):
            ok, margin = check_hb_property(model, grid)
            assert ok
            assert margin > 0.0

    def test_log_abs_consistency(self, stair):
        z = 1.3 + 0.7j
        assert abs(log_abs_E(stair, z)
                   - np.log(abs(eval_E(stair, z)))) < 1e-10
