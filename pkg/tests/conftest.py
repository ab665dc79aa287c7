import io
import itertools
import math
import random

import pytest

from lpa.cli import run
from lpa.graph import Graph, make_graph

SEED = 20240611
N_RANDOM = 220


def random_graph(rng: random.Random, n: int | None = None, density: float | None = None,
                 inf_prob: float = 0.0, mult_prob: float = 0.1) -> Graph:
    """At most one bundle per ordered pair; ids e0, e1, ... so path names never collide."""
    n = rng.randint(1, 8) if n is None else n
    density = rng.uniform(0.08, 0.45) if density is None else density
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for a, b in itertools.product(vs, vs):
        if rng.random() < density:
            if rng.random() < inf_prob:
                m = math.inf
            elif rng.random() < mult_prob:
                m = rng.randint(2, 3)
            else:
                m = 1
            edges.append((f"e{len(edges)}", a, b, m))
    return make_graph(vs, edges)


def random_graphs(count: int = N_RANDOM, seed: int = SEED, **kw) -> list[Graph]:
    rng = random.Random(seed)
    return [random_graph(rng, **kw) for _ in range(count)]


def powerset(xs):
    xs = list(xs)
    return (frozenset(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r))


@pytest.fixture
def cli():
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""

    def call(*argv):
        out, err = io.StringIO(), io.StringIO()
        code = run([str(a) for a in argv], out=out, err=err)
        return code, out.getvalue(), err.getvalue()

    return call


@pytest.fixture
def toeplitz():
    return make_graph(["u", "v"], [("c", "u", "u"), ("e", "u", "v")])


@pytest.fixture
def larki():
    return make_graph(["u", "v"], [("c", "u", "u"), ("e", "u", "v", math.inf)])


@pytest.fixture
def ex32():
    return make_graph(
        ["u", "v1", "v2", "v3"], [("e1", "u", "v1"), ("e2", "v1", "v2"), ("e3", "v1", "v3")]
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
