"""Shared fixtures: weights, fixture models, and the unit multiplier.

Everything expensive is session-scoped; the unit multiplier carries a few
thousand zeros and the representation runs the full smoothing pipeline.
"""
import pytest

import pwlab


@pytest.fixture(scope="session")
def unit_weight():
    return pwlab.Weight.constant(1.0)


@pytest.fixture(scope="session")
def step_weight():
    """m = 1 + indicator([0, 1])."""
    return pwlab.Weight.from_pieces([(0.0, 1.0, 2.0)])


@pytest.fixture(scope="session")
def unit_multiplier(unit_weight):
    return pwlab.build_multiplier(unit_weight, 1000.0)


@pytest.fixture(scope="session")
def strip_params():
    return pwlab.StripParams(delta=0.5, epsilon_growth=0.3)


@pytest.fixture(scope="session")
def stair():
    return pwlab.stair_model()


@pytest.fixture(scope="session")
def bad():
    return pwlab.bad_model()


@pytest.fixture(scope="session")
def single():
    return pwlab.single_zero_model()


@pytest.fixture(scope="session")
def unit_representation(unit_multiplier, strip_params):
    rep, cert = pwlab.build_majorant_representation(
        unit_multiplier, strip_params, 8, window=(-16.0, 16.0),
        band=(0.05, 8.0))
    return rep, cert


@pytest.fixture(scope="session")
def stair_representation(stair, strip_params):
    rep, cert = pwlab.build_majorant_representation(
        stair, strip_params, 16, window=(-32.0, 32.0), band=(0.05, 8.0))
    return rep, cert
