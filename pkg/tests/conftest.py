import math

import numpy as np
import pytest

from catpol.polarization import SphereGrid
from catpol.states import CatSuperposition, TwoModeCoherent


@pytest.fixture(scope="session")
def grid():
    return SphereGrid.build()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260808)


def random_label(rng, radius):
    """Uniform draw from the complex disk of the given radius."""
    magnitude = radius * math.sqrt(rng.uniform())
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return magnitude * complex(math.cos(angle), math.sin(angle))


def random_cat(rng, radius):
    return CatSuperposition.from_terms(
        TwoModeCoherent(random_label(rng, radius), random_label(rng, radius)),
        TwoModeCoherent(random_label(rng, radius), random_label(rng, radius)),
    )


@pytest.fixture(scope="session")
def make_random_cats():
    def _make(count, radius, seed=7):
        local = np.random.default_rng(seed)
        return [random_cat(local, radius) for _ in range(count)]

    return _make
