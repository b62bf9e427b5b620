import numpy as np
import pytest

from graph_states import g1_graph, g2_graph, graph_to_stabilizer
from model_zoo import eap_tableau
from pauli_core import PauliString
from stabilizer_group import from_generators


def pauli(text, n):
    return PauliString.parse(text, n)


@pytest.fixture
def bell():
    return from_generators([pauli("X1 X2", 2), pauli("Z1 Z2", 2)])


@pytest.fixture
def zero_state():
    def build(n):
        return from_generators([pauli(f"Z{i}", n) for i in range(1, n + 1)])
    return build


@pytest.fixture(scope="session")
def g1_12():
    return graph_to_stabilizer(g1_graph(12))


@pytest.fixture(scope="session")
def g2_9():
    return graph_to_stabilizer(g2_graph(9))


@pytest.fixture(scope="session")
def eap_8():
    return eap_tableau(8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
