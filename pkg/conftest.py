"""
Общие фикстуры тестов
"""
import os

import hypothesis
import numpy as np
import pytest

from frontend.modules.data_loader import parse_problem

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=1000, deadline=None, derandomize=True)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

EXAMPLES_DIR = os.path.join(os.path.dirname(__file__), "src_data", "examples")

# зерно для рандомизированных наборов
RANDOM_SEED = 20240601


def example_path(number: int) -> str:
    return os.path.join(EXAMPLES_DIR, f"example{number}.soft")


@pytest.fixture
def examples_dir() -> str:
    return EXAMPLES_DIR


@pytest.fixture
def load_example():
    """Разбирает src_data/examples/exampleN.soft"""
    def _load(number: int):
        return parse_problem(example_path(number))
    return _load


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(RANDOM_SEED)
