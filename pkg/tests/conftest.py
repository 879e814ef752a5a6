"""Shared fixtures for facloc tests."""

from fractions import Fraction
from pathlib import Path

import pytest

from facloc._types import Agent, GeneratorConfig, Instance, Preference
from facloc.instances import k3_counterexample, lower_bound_family, random_instance

FIXTURES = Path(__file__).parent / "fixtures"

F1 = Preference.of(1)
F2 = Preference.of(2)
F12 = Preference.of(1, 2)

CORPUS_SEED = 20240501


def make_instance(*agents: tuple[object, int, Preference], k: int = 2) -> Instance:
    """Build an instance from (location, weight, preference) triples."""
    return Instance.from_agents(
        [Agent(location=Fraction(str(x)), weight=w, preference=p) for x, w, p in agents],
        k=k,
    )


def corpus(size: int, seed: int = CORPUS_SEED, **options: object) -> list[Instance]:
    """Seeded random instances; the same arguments always give the same list."""
    config = GeneratorConfig(**options)
    return [random_instance(config, [seed, i]) for i in range(size)]


@pytest.fixture
def mixed_instance():
    return make_instance((0, 1, F1), (2, 1, F12), (10, 1, F2))


@pytest.fixture
def lower_bound_n1():
    return lower_bound_family(1)


@pytest.fixture
def k3_witness():
    return k3_counterexample(Fraction(5), Fraction(2))


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(300)


@pytest.fixture
def k3_witness_path():
    return FIXTURES / "k3_witness.txt"


@pytest.fixture
def lower_bound_path():
    return FIXTURES / "lower_bound_n10.txt"


@pytest.fixture
def commented_path():
    return FIXTURES / "commented.txt"
