import numpy as np
import pytest

import divrisk as dr

BUILTIN_NAMES = ("kl", "chi2", "power:1.5", "power:3")


@pytest.fixture(scope="session")
def specs():
    return {name: dr.make_builtin_divergence(name) for name in BUILTIN_NAMES}


@pytest.fixture(scope="session")
def kl(specs):
    return specs["kl"]


@pytest.fixture(scope="session")
def chi2(specs):
    return specs["chi2"]


@pytest.fixture(scope="session")
def power15(specs):
    return specs["power:1.5"]


@pytest.fixture(scope="session")
def young_pairs(specs):
    return {name: dr.young_pair(spec) for name, spec in specs.items()}


def random_dist(rng, n=None, scale=None, shift=None, nonneg=False, uniform_probs=False):
    n = int(rng.integers(2, 11)) if n is None else n
    scale = float(rng.uniform(0.2, 2.5)) if scale is None else scale
    shift = float(rng.uniform(-1.5, 1.5)) if shift is None else shift
    atoms = rng.normal(0.0, 1.0, n) * scale + shift
    if nonneg:
        atoms = np.abs(atoms)
    if uniform_probs:
        probs = np.full(n, 1.0 / n)
    else:
        probs = rng.dirichlet(np.ones(n) * rng.uniform(0.8, 3.0))
    return dr.EmpiricalDistribution(atoms=atoms, probs=probs)
