import numpy as np
import pytest

from roadhmm import roadmap, sensor


def make_random_instance(rng, num_states, num_steps):
    """Random strictly-positive column-stochastic model plus measurements."""
    transition = rng.random((num_states, num_states)) + 0.05
    transition /= transition.sum(axis=0)
    observation = rng.random((num_states, num_states)) + 0.05
    observation /= observation.sum(axis=0)
    initial = rng.random(num_states) + 0.05
    initial /= initial.sum()
    measurements = tuple(int(v) for v in rng.integers(1, num_states + 1, size=num_steps))
    return transition, observation, initial, measurements


@pytest.fixture
def random_instance():
    return make_random_instance


@pytest.fixture
def two_state():
    """Worked 2-state instance: (A, obs, initial, measurements)."""
    transition = np.array([[0.9, 0.2], [0.1, 0.8]])
    observation = np.array([[0.7, 0.3], [0.4, 0.6]])
    initial = np.array([0.5, 0.5])
    return transition, observation, initial, (1, 2)


@pytest.fixture
def chain5_graph():
    """Bidirectional chain 1-2-3-4-5 with unit weights and self loops."""
    edges = []
    for a in range(1, 5):
        edges.append(roadmap.Edge(a, a + 1, 1.0))
        edges.append(roadmap.Edge(a + 1, a, 1.0))
    edges.extend(roadmap.Edge(n, n, 1.0) for n in range(1, 6))
    return roadmap.RoadGraph(num_nodes=5, edges=tuple(edges))


@pytest.fixture(scope="session")
def default_graph():
    return roadmap.generate_default_map()


@pytest.fixture(scope="session")
def default_transition(default_graph):
    return roadmap.build_transition_matrix(default_graph)


@pytest.fixture(scope="session")
def default_base(default_graph):
    return sensor.build_confusion_base(default_graph)


@pytest.fixture(scope="session")
def default_observation(default_base):
    return sensor.apply_gaussian_noise(default_base, sensor.NoiseSpec(1.0))
