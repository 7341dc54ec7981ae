"""Shared states and bases for the test suites."""
import pytest

from core.states import MeasurementBasis, make_bell, make_classical_mixture, make_one_way
from tests.helpers import plus_state, zero_state


@pytest.fixture
def bell():
    return make_bell()


@pytest.fixture
def mixture():
    return make_classical_mixture()


@pytest.fixture
def one_way():
    return make_one_way(zero_state(), plus_state())


@pytest.fixture
def computational():
    return MeasurementBasis.computational(2)


@pytest.fixture
def hadamard():
    return MeasurementBasis.hadamard()


@pytest.fixture
def circular():
    return MeasurementBasis.circular()
