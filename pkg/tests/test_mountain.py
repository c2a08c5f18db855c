"""Mountain chains: segmentation, axioms, shift-down comparisons."""
import numpy as np
import pytest

import pwlab
from pwlab import (StripParams, check_axioms, delta_ladder, gamma_delta,
                   mountain_integral_check, nearest_zero, poisson_remainder,
                   segment_chain, shift_down, verify_shift_ratio,
                   verify_shift_ratio_real)
from pwlab.numerics import Grid, InvalidInputError


class TestSegmentation:
    def test_stair_summits(self, stair, strip_params):
        chain = segment_chain(stair, strip_params, (-20.0, 20.0))
        summits = sorted(mt.zero.real for mt in chain.mountains)
        # eta_k < delta = 1/2 exactly when |k| >= 4
        expect = sorted(set(range(-20, -3)) | set(range(4, 21)))
        assert summits == [float(k) for k in expect]

    def test_sigma_values(self, stair, strip_params):
        chain = segment_chain(stair, strip_params, (-20.0, 20.0))
        assert abs(chain.sigma(4.0) - 5.0 ** -0.5) < 1e-12
        assert chain.sigma(0.0) == 1.0  # plateau

    def test_bases_tile_window(self, stair, strip_params):
        chain = segment_chain(stair, strip_params, (-20.0, 20.0))
        segs = sorted([mt.base for mt in chain.mountains]
                      + list(chain.plateaux))
        assert abs(segs[0][0] - (-20.0)) < 1e-9
        assert abs(segs[-1][1] - 20.0) < 1e-9
        for (a1, b1), (a2, b2) in zip(segs[:-1], segs[1:]):
            assert abs(b1 - a2) < 1e-9

    def test_nearest_zero_regions(self, stair, strip_params):
        zero, region = nearest_zero(stair, 4.1, strip_params)
        assert zero.real == 4.0
        assert region == "I"
        zero, region = nearest_zero(stair, 0.0, strip_params)
        assert region == "III"

    def test_gamma_at_summit(self, stair, strip_params):
        # at the summit gamma = eta / eta^2 = 1/eta
        eta = 5.0 ** -0.5
        assert abs(gamma_delta(stair, 4.0, strip_params) - 1.0 / eta) < 1e-12
        assert gamma_delta(stair, 0.0, strip_params) == 1.0


class TestAxioms:
    def test_stair_passes(self, stair, strip_params):
        report = check_axioms(stair, strip_params, (-20.0, 20.0), (0.1, 10.0))
        assert report.passed, report.to_dict()

    def test_bad_fails_growth_with_witness(self, bad, strip_params):
        report = check_axioms(bad, strip_params, (-20.0, 20.0), (0.1, 10.0))
        assert not report.axiom3.passed
        assert report.axiom3.witness is not None
        assert report.axiom3.value > 1.0

    def test_delta_ladder(self, stair):
        best, reports = delta_ladder(stair, (-20.0, 20.0), (0.1, 10.0),
                                     [0.3, 0.5])
        assert best == 0.5
        assert set(reports) == {0.3, 0.5}

    def test_report_serializes(self, stair, strip_params):
        report = check_axioms(stair, strip_params, (-10.0, 10.0), (0.1, 10.0))
        d = report.to_dict()
        assert d["overall"] in ("pass", "fail")
        assert "value" in d["axiom3"]


class TestShiftDown:
    def test_strip_zeros_moved_to_delta(self, stair, strip_params):
        F = shift_down(stair, strip_params)
        strip = stair.strip_zeros(strip_params.delta)
        shifted = {z.real for z in F.zeros
                   if abs(z.imag + strip_params.delta) < 1e-12}
        assert {z.real for z in strip} <= shifted

    def test_idempotent(self, stair, strip_params):
        F = shift_down(stair, strip_params)
        again = shift_down(F, strip_params)
        assert np.allclose(sorted(z.real for z in again.zeros),
                           sorted(z.real for z in F.zeros))

    def test_ratio_off_axis(self, stair, strip_params):
        F = shift_down(stair, strip_params)
        grid = Grid.linspace(-10.0, 10.0, 81, imag=0.3)
        cert = verify_shift_ratio(stair, F, strip_params, grid, (0.5, 2.0))
        assert cert.passed, cert.to_dict()

    def test_ratio_on_axis(self, stair, strip_params):
        F = shift_down(stair, strip_params)
        chain = segment_chain(stair, strip_params, (-20.0, 20.0))
        grid = Grid.linspace(-10.0, 10.0, 81)
        cert = verify_shift_ratio_real(stair, F, chain, grid, (0.1, 0.8))
        assert cert.passed, cert.to_dict()


class TestPoissonRemainder:
    def test_region_three_rejected(self, stair, strip_params):
        with pytest.raises(InvalidInputError):
            poisson_remainder(stair, 0.0, strip_params)

    def test_remainder_bounded_in_region_one(self, stair, strip_params):
        rem = poisson_remainder(stair, 4.1, strip_params)
        full = pwlab.phase_derivative(stair, 4.1)
        assert 0.0 < rem < full


class TestMountainIntegrals:
    def test_report_structure(self, stair, strip_params):
        chain = segment_chain(stair, strip_params, (-20.0, 20.0))
        out = mountain_integral_check(chain, stair,
                                      lambda x: 1.0 / (1.0 + x * x),
                                      p=2.0, eps=0.25)
        assert out["verdict"] == "bounded"
        assert np.isfinite(out["weighted_norm"])
        assert out["per_mountain_integrals"]
        # each summit integral is an arctan difference, below pi
        assert max(out["per_mountain_integrals"]) <= np.pi
