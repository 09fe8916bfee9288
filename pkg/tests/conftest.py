import pytest

from eesaa_sim.model import Mode, NetworkConfig, NodeState, Position


def make_node(node_id, x, y, energy=0.5, app_type=0, mode=Mode.ACTIVE, partner=None):
    return NodeState(id=node_id, position=Position(x, y), app_type=app_type,
                     residual_energy=energy, mode=mode, partner=partner)


@pytest.fixture
def small_cfg():
    """20-node configuration that dies quickly; keeps full-run tests fast."""
    return NetworkConfig(n_nodes=20, max_rounds=3000, rng_seed=11)
