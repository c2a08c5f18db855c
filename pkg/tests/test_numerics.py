"""Quadrature, principal values, grids, and certificates."""
import numpy as np
import pytest

from pwlab.numerics import (ComparabilityCertificate, Grid, InvalidGridError,
                            InvalidInputError, certify_comparable,
                            integrate_line, integrate_pv, ray_type_estimate,
                            thread_count)


class TestGrid:
    def test_linspace_real(self):
        g = Grid.linspace(-1.0, 1.0, 5)
        assert len(g) == 5
        assert np.allclose(np.real(g.points), [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_linspace_offset(self):
        g = Grid.linspace(0.0, 1.0, 3, imag=2.0)
        assert np.allclose(np.imag(g.points), 2.0)

    def test_unordered_rejected(self):
        with pytest.raises(InvalidGridError):
            Grid(np.array([0.0, 2.0, 1.0]))


class TestIntegrateLine:
    def test_gaussian(self):
        value, err = integrate_line(lambda t: np.exp(-t * t))
        assert abs(value - np.sqrt(np.pi)) < 1e-9
        assert err < 1e-6

    def test_two_sided_exponential(self):
        value, _ = integrate_line(lambda t: np.exp(-abs(t)))
        assert abs(value - 2.0) < 1e-9

    def test_log_singularity(self):
        # int_0^1 log(t) dt = -1, declared singularity at 0
        value, _ = integrate_line(
            lambda t: np.log(abs(t)) if 0 < t < 1 else 0.0,
            singularities=(0.0,), breakpoints=(0.0, 1.0))
        assert abs(value - (-1.0)) < 1e-7


class TestIntegratePV:
    def test_rational_oracle(self):
        # pv int dt / ((1-t)(1+t^2)) = pi/2
        value = integrate_pv(lambda t: 1.0 / ((1.0 - t) * (1.0 + t * t)),
                             pole=1.0)
        assert abs(value - np.pi / 2.0) < 1e-8

    def test_odd_part_cancels(self):
        # even integrand about the pole: pv int e^{-(t-2)^2}/(2-t) dt = 0
        value = integrate_pv(lambda t: np.exp(-(t - 2.0) ** 2) / (2.0 - t),
                             pole=2.0)
        assert abs(value) < 1e-9


class TestRayType:
    def test_exponential(self):
        rays = [np.exp(1j * np.pi / 3), np.exp(2j * np.pi / 3), 1j]
        radii = np.linspace(5.0, 40.0, 8)
        est = ray_type_estimate(lambda z: float(np.real(z)), rays, radii)
        assert abs(est - 0.5) < 1e-9  # slope of Re z along the 60-degree ray

    def test_bounded_function_has_zero_type(self):
        rays = [1j]
        radii = np.linspace(5.0, 40.0, 8)
        est = ray_type_estimate(lambda z: 0.0, rays, radii)
        assert est == 0.0


class TestCertificates:
    def test_pass_and_ratios(self):
        grid = Grid.linspace(1.0, 2.0, 11)
        cert = certify_comparable(lambda z: 2.0 * np.real(z),
                                  lambda z: np.real(z),
                                  grid, (1.0, 3.0))
        assert cert.passed
        assert abs(cert.ratio_min - 2.0) < 1e-12
        assert abs(cert.ratio_max - 2.0) < 1e-12

    def test_fail_outside_band(self):
        grid = Grid.linspace(1.0, 2.0, 11)
        cert = certify_comparable(lambda z: 5.0, lambda z: 1.0,
                                  grid, (1.0, 3.0))
        assert not cert.passed

    def test_to_dict(self):
        grid = Grid.linspace(0.0, 1.0, 3)
        cert = certify_comparable(lambda z: 1.0, lambda z: 1.0,
                                  grid, (0.5, 2.0), notes="unit")
        d = cert.to_dict()
        assert d["kind"] == "comparability_certificate"
        assert d["verdict"] == "pass"
        assert d["band"] == [0.5, 2.0]
        assert d["notes"] == "unit"

    def test_inverted_ratios_rejected(self):
        with pytest.raises(InvalidInputError):
            ComparabilityCertificate(Grid.linspace(0, 1, 2), 2.0, 1.0,
                                     (0.5, 2.0), True)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("PWLAB_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.delenv("PWLAB_THREADS")
    assert thread_count() >= 1
