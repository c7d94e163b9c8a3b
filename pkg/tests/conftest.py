import numpy as np
import pytest

from hermlab import catalog, families
from hermlab import geometry as geo


def chart_cases(count=20, points=5, seed=2024):
    """Random rational chart metrics (n = 2, 3) and sample points."""
    rng = np.random.default_rng(seed)
    cases = []
    for k in range(count):
        n = 2 + k % 2
        model = families.random_chart_model(seed + k, n)
        for _ in range(points):
            cases.append((model, families.random_point(rng, n)))
    return cases


@pytest.fixture(scope="session")
def random_charts():
    return chart_cases()


@pytest.fixture(scope="session")
def random_packages(random_charts):
    return [(m, p, geo.curvature_package(m, p)) for m, p in random_charts]


@pytest.fixture(scope="session")
def hopf2():
    return catalog.build("hopf", n=2)


@pytest.fixture(scope="session")
def hopf3():
    return catalog.build("hopf", n=3)


@pytest.fixture(scope="session")
def so3c():
    return catalog.build("so3c", scale=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_torsion(rng, n):
    T = rng.standard_normal((n, n, n)) + 1j * rng.standard_normal((n, n, n))
    return T - T.transpose(0, 2, 1)


def random_curvature(rng, n):
    return rng.standard_normal((n,) * 4) + 1j * rng.standard_normal((n,) * 4)
