import math

import pytest

from striplab.surfaces import build_sphere, build_torus


@pytest.fixture(scope="session")
def sym_torus():
    # a = d = arcsinh(sqrt 2), theta = pi/2: cosh 2b = cosh 2c = 2 exactly.
    r = math.asinh(math.sqrt(2.0))
    return build_torus(r, r, math.pi / 2.0)


@pytest.fixture(scope="session")
def boundary_panel():
    return build_torus(1.2, 0.9, 1.45)


@pytest.fixture(scope="session")
def cone_panel():
    return build_torus(0.8, 0.65, 1.3, flavor="cone")


@pytest.fixture(scope="session")
def sphere_panel():
    return build_sphere(0.9, 1.1, 1.3)
