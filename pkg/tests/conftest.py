import json
import subprocess
import sys

import pytest

from lapdual import MultiPoly


@pytest.fixture
def disc_g():
    """g(x) = x1^2 + x2^2 in the plane; K_y is the disc of radius sqrt(y)."""
    return MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0})


@pytest.fixture
def interval_g():
    """g(x) = x^2 on the line; K_y is the interval [-sqrt(y), sqrt(y)]."""
    return MultiPoly(1, {(2,): 1.0})


@pytest.fixture
def quartic_g():
    """Nonconvex quartic whose level set at 1 is a four-lobed star."""
    return MultiPoly(2, {(4, 0): 1.0, (0, 4): 1.0, (2, 2): -1.925})


@pytest.fixture
def sextic_g():
    """Nonconvex sextic companion of the quartic benchmark set."""
    return MultiPoly(2, {(6, 0): 1.0, (0, 6): 1.0, (3, 3): -1.925})


@pytest.fixture
def one_2d():
    return MultiPoly.constant(2, 1.0)


@pytest.fixture
def one_1d():
    return MultiPoly.constant(1, 1.0)


def run_cli(*args):
    """Run the CLI in a subprocess; returns CompletedProcess with text I/O."""
    return subprocess.run(
        [sys.executable, "-m", "lapdual.cli", *args],
        capture_output=True,
        text=True,
    )


def write_problem(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)
