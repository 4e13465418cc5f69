import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from vertexrank.fragments import random_fragment  # noqa: E402
from vertexrank.model import VertexModel  # noqa: E402
from vertexrank.polynomials import monomials  # noqa: E402
from vertexrank.scalar import GaussRational, I  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

small_ints = st.integers(-4, 4)
fractions_ = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(GaussRational, fractions_, fractions_)
nonzero_scalars = scalars.filter(bool)


def example2_model(degree=4):
    """h(x) = 1, h(y) = i, zero elsewhere."""
    return VertexModel(2, {(1, 0): 1, (0, 1): I}, degree)


def matching_model(degree=4):
    return VertexModel(2, {(1, d - 1): 1 for d in range(1, degree + 1)}, degree)


def random_model(rng, n, e, density=0.6):
    support = {}
    for alpha in monomials(n, e):
        if rng.random() < density:
            support[alpha] = GaussRational(rng.randint(-3, 3), rng.randint(-2, 2))
    return VertexModel(n, support, e)


@st.composite
def models(draw, max_n=3, e=3):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_model(random.Random(seed), n, e)


@st.composite
def fragments(draw, k=None, max_k=4, max_vertices=3, max_degree=3, extra_edges=3):
    if k is None:
        k = draw(st.integers(0, max_k))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_fragment(random.Random(seed), k, max_vertices, max_degree, extra_edges)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    results = sys.modules.get("test_acceptance")
    lines = getattr(results, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
