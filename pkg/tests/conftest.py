import json
import logging

import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import strategies as st

from pexider_kit.core.expressions import IDENTITY, Exp, Poly
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D
from pexider_kit.core.random_functions import random_pair, random_subinterval
from pexider_kit.core.solution_families import paper_example
from pexider_kit.main import main


@pytest.fixture
def example():
    return paper_example()


@pytest.fixture
def unit():
    return OpenInterval(0.0, 1.0)


@pytest.fixture
def identity_on():
    def make(lo: float, hi: float, name: str = "id") -> Fn1D:
        return Fn1D.from_expr(OpenInterval(lo, hi), IDENTITY, name)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Random monotone function library

def monotone_library(I: OpenInterval):
    """A fixed set of strictly increasing closed forms on I"""
    return {
        "identity": Fn1D.from_expr(I, IDENTITY, "identity"),
        "cubic": Fn1D.from_expr(I, Poly((0.0, 1.0, 0.0, 1.0)), "cubic"),
        "exp": Fn1D.from_expr(I, Exp(1.0, 0.0), "exp"),
        "steep": Fn1D.from_expr(I, Poly((1.0, 5.0, 0.1)), "steep"),
    }


@st.composite
def monotone_instances(draw, I=OpenInterval(0.0, 4.0)):
    """(H, g1, g2, I) with g's drawn from a seeded generator, both senses"""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    direction = draw(st.sampled_from([1, -1]))
    gen = np.random.default_rng(seed)
    g1, g2 = random_pair(gen, I, direction)
    return random_subinterval(gen, I), g1, g2, I


# CLI helpers

@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner):
    def run(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return run


@pytest.fixture
def write_config(tmp_path):
    def write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return write


@pytest.fixture
def example_artifact(invoke, tmp_path):
    path = tmp_path / "example.artifact.json"
    result = invoke("build", "--family", "paper-example", "--out", path)
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture(autouse=True)
def reenable_logging():
    yield
    logging.disable(logging.NOTSET)
