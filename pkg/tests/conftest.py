import random

import pytest

from rhocarroll import catalog


@pytest.fixture(scope="session")
def quantum_plane():
    return catalog.build_quantum_plane()


@pytest.fixture(scope="session")
def nc_torus():
    return catalog.build_nc_torus()


@pytest.fixture(scope="session")
def r22_super():
    return catalog.build_r22_super()


@pytest.fixture(scope="session")
def z22():
    return catalog.build_z22()


@pytest.fixture(scope="session")
def eq2():
    return catalog.build_eq2()


@pytest.fixture(scope="session")
def torus_line():
    return catalog.build_torus_line()


@pytest.fixture(scope="session")
def all_entries(quantum_plane, nc_torus, r22_super, z22, eq2, torus_line):
    return {
        "quantum_plane": quantum_plane,
        "nc_torus": nc_torus,
        "r22_super": r22_super,
        "z22": z22,
        "eq2": eq2,
        "torus_line": torus_line,
    }


@pytest.fixture
def rng():
    return random.Random(20240801)
