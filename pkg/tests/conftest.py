import pytest

import mindisc as md


@pytest.fixture(scope="session")
def orthogonal_pair():
    return md.pure_pair(0.0)


@pytest.fixture(scope="session")
def orthogonal_projectors(orthogonal_pair):
    return md.validate_povm([s.mat for s in orthogonal_pair.states])


@pytest.fixture(scope="session")
def trine_ensemble():
    return md.trine()


@pytest.fixture(scope="session")
def trine_srm(trine_ensemble):
    return md.square_root_measurement(trine_ensemble)


@pytest.fixture(scope="session")
def single_state_problem():
    ens = md.Ensemble([1.0], (md.pure_state([1.0, 0.0]),))
    return ens, md.uniform_povm(1, 2)
