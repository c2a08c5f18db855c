"""Partition, centroids, drift, and the multiplier lemma."""
import numpy as np
import pytest

import pwlab
from pwlab import (Weight, build_centroids, build_multiplier, build_partition,
                   halfplane_majorant_check, pw_membership_diagnostic,
                   verify_multiplier_lemma)
from pwlab.hbmodel import phase_derivative, reproducing_kernel
from pwlab.multiplier import drift_coefficient
from pwlab.numerics import Grid, InvalidGridError, InvalidInputError


class TestPartition:
    def test_unit_weight(self, unit_weight):
        p = build_partition(unit_weight, 3)
        assert np.allclose(p.x, [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0])
        assert p.index_range == (-3, 2)

    def test_step_weight(self, step_weight):
        # mass 2 on [0,1] halves the cell there
        p = build_partition(step_weight, 3)
        assert np.allclose(p.x, [-3.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0])

    def test_cell_lookup(self, unit_weight):
        p = build_partition(unit_weight, 3)
        assert p.cell(0) == (0.0, 1.0)
        assert p.cell(-3) == (-3.0, -2.0)
        with pytest.raises(InvalidInputError):
            p.cell(3)

    def test_unit_mass_per_cell(self, step_weight):
        p = build_partition(step_weight, 5)
        for _, a, b in p.cells():
            mass = (step_weight.cumulative_mass(b)
                    - step_weight.cumulative_mass(a))
            assert abs(mass - 1.0) < 1e-10


class TestCentroids:
    def test_unit_weight_midpoints(self, unit_weight):
        c = build_centroids(unit_weight, build_partition(unit_weight, 3))
        assert np.allclose(c.xi, [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])

    def test_step_weight_first_cell(self, step_weight):
        c = build_centroids(step_weight, build_partition(step_weight, 3))
        # cell [0, 0.5] with m = 2: xi = int 2t dt = 0.25
        assert abs(c.value(0) - 0.25) < 1e-12


class TestDrift:
    def test_symmetric_weight_has_no_drift(self, unit_weight, step_weight):
        assert abs(drift_coefficient(unit_weight, 100.0)) < 1e-12
        # the step sits inside [-1,1] where chi = 0
        assert abs(drift_coefficient(step_weight, 100.0)) < 1e-12

    def test_log_oracle(self):
        # extra mass 1 on [1,2]: drift = int_1^2 dt/t = log 2 at any R >= 2
        m = Weight.from_pieces([(1.0, 2.0, 2.0)])
        for R in (10.0, 100.0):
            assert abs(drift_coefficient(m, R) - np.log(2.0)) < 1e-12


class TestMultiplier:
    def test_normalization(self, unit_multiplier):
        assert abs(pwlab.eval_E(unit_multiplier, 0.0) - 1.0) < 1e-12

    def test_radius_must_cover_window(self, step_weight):
        with pytest.raises(InvalidInputError):
            build_multiplier(step_weight, 0.5)

    def test_phase_derivative_cotangent_oracle(self, unit_multiplier):
        # zeros at k + 1/2 - i: sum of Poisson kernels has the closed form
        # pi sinh(2 pi) / (cosh(2 pi) - cos(2 pi (x - 1/2)))
        for x in (0.0, 0.25, 1.7):
            expect = (np.pi * np.sinh(2 * np.pi)
                      / (np.cosh(2 * np.pi) - np.cos(2 * np.pi * (x - 0.5))))
            got = phase_derivative(unit_multiplier, x)
            assert abs(got - expect) < 5e-3  # truncation at R = 1e3

    def test_lemma_certificate(self, unit_multiplier, unit_weight):
        grid = Grid.linspace(-10.0, 10.0, 81)
        cert = verify_multiplier_lemma(unit_multiplier, unit_weight, grid,
                                       (0.9, 1.2))
        assert cert.passed
        assert "reflection log-deviation" in cert.notes

    def test_lemma_reliable_range_enforced(self, unit_multiplier, unit_weight):
        grid = Grid.linspace(-600.0, 600.0, 5)
        with pytest.raises(InvalidGridError):
            verify_multiplier_lemma(unit_multiplier, unit_weight, grid,
                                    (0.5, 2.0))

    def test_lemma_depth_enforced(self, unit_multiplier, unit_weight):
        grid = Grid.linspace(-5.0, 5.0, 5, imag=-1.0)
        with pytest.raises(InvalidGridError):
            verify_multiplier_lemma(unit_multiplier, unit_weight, grid,
                                    (0.5, 2.0))

    def test_halfplane_majorant(self, unit_multiplier, unit_weight):
        grid = Grid.linspace(-5.0, 5.0, 21, imag=3.0)
        cert = halfplane_majorant_check(unit_multiplier, unit_weight, grid,
                                        (0.1, 1.0))
        assert cert.passed
        # constant-offset comparability: the band is tight
        assert cert.ratio_max / cert.ratio_min < 1.1

    def test_halfplane_depth_enforced(self, unit_multiplier, unit_weight):
        grid = Grid.linspace(-5.0, 5.0, 5, imag=1.0)
        with pytest.raises(InvalidGridError):
            halfplane_majorant_check(unit_multiplier, unit_weight, grid,
                                     (0.1, 1.0))


class TestMembership:
    def test_kernel_is_member(self, unit_multiplier, unit_representation):
        rep, _ = unit_representation
        f = lambda z: reproducing_kernel(unit_multiplier, 0.0, z)
        grid = Grid.linspace(-10.0, 10.0, 81)
        out = pw_membership_diagnostic(f, rep.m, rep.g_coeffs, grid)
        assert out["verdict"] == "consistent with membership"
        assert out["type_estimate"] <= out["type_tolerance"]
        assert 0.5 < out["norm"] < 2.0

    def test_fast_growth_flagged(self, unit_representation):
        rep, _ = unit_representation
        f = lambda z: np.exp(-8j * z)
        grid = Grid.linspace(-10.0, 10.0, 41)
        out = pw_membership_diagnostic(f, rep.m, rep.g_coeffs, grid)
        assert out["verdict"] == "type too large"
