import numpy as np
import pytest

from apollonian import geometry
from apollonian.quadruples import enumerate_orbit

STANDARD_ROOT = (-1, 2, 2, 3)
STRIP_ROOT = (0, 0, 1, 1)
STRIP_WINDOW = (0.0, 2.0, 0.0, 2.0)

# roots used by the residue/density checks; all satisfy the Descartes relation
TEST_ROOTS = [(-1, 2, 2, 3), (-2, 3, 6, 7), (-3, 4, 12, 13), (-6, 10, 15, 19)]


@pytest.fixture(scope="session")
def std_orbit_1e4():
    """Standard packing to T=1e4 with tangency graph, quadruples, and exact
    plane embedding; shared by most statistics tests."""
    return enumerate_orbit(
        STANDARD_ROOT, 10**4, tangency=True, keep_quads=True, embedding="auto"
    )


@pytest.fixture(scope="session")
def std_orbit_1e5():
    """Curvature multiset only, for exponent fits."""
    return enumerate_orbit(STANDARD_ROOT, 10**5)


@pytest.fixture(scope="session")
def std_circles_1e4(std_orbit_1e4):
    return geometry.circles_from_rows(std_orbit_1e4.acc_rows)


@pytest.fixture(scope="session")
def std_geo_1e3():
    return geometry.generate_packing_geometric(geometry.standard_seed(), 1000)
