import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from etacm.modpoly import compute_modular_polynomial, load_embedded


@pytest.fixture(scope="session")
def phi313_embedded():
    return load_embedded(3, 13)


@pytest.fixture(scope="session")
def phi313_computed():
    return compute_modular_polynomial(3, 13)


@pytest.fixture(scope="session")
def phi_pool(phi313_embedded):
    """Modular polynomials reused across tests, keyed by (p1, p2)."""
    pool = {(3, 13): phi313_embedded}

    def get(p1, p2):
        if (p1, p2) not in pool:
            pool[(p1, p2)] = compute_modular_polynomial(p1, p2)
        return pool[(p1, p2)]

    return get
