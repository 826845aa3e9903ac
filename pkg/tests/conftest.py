import itertools
from pathlib import Path

import numpy as np
import pytest

from cwsclique.eval.verify import CWSCode
from cwsclique.model.ac06 import AC06Data, BooleanFunction
from cwsclique.model.gf2 import ClassicalCode, GF2Matrix
from cwsclique.model.graphs import Graph

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
EXAMPLES_DIR = DATA_DIR / "examples"

EXAMPLE2_ROWS = ["0011001111", "0110011110", "1100011101", "1000111011", "0001101000"]
EXAMPLE2_SUPPORT = ["11100", "00111", "01110", "11001", "10011", "01111"]
EXAMPLE2_GENERATORS = ["IZYYZ", "ZYYZI", "YYZIZ", "YZIZY", "IZIXX"]
EXAMPLE2_C_PRIME = ["00011", "11000", "10001", "00110", "01100", "10000"]


def _row(bits):
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


@pytest.fixture
def pentagon():
    return Graph.ring(5)


@pytest.fixture
def pentagon_code(pentagon):
    return CWSCode(pentagon, ClassicalCode.from_strs(["00000", "11111"]))


@pytest.fixture
def star4():
    return Graph.star(4)


@pytest.fixture
def example3_linear(star4):
    return CWSCode(star4, ClassicalCode.from_strs(["0000", "0110", "0101", "0011"]))


@pytest.fixture
def example3_nonlinear(star4):
    return CWSCode(star4, ClassicalCode.from_strs(["0000", "0110", "0101", "1011"]))


@pytest.fixture
def example2():
    return AC06Data(BooleanFunction.from_strs(EXAMPLE2_SUPPORT),
                    GF2Matrix(tuple(_row(r) for r in EXAMPLE2_ROWS), 10))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def example2_expected():
    return {"generators": EXAMPLE2_GENERATORS, "c_prime": EXAMPLE2_C_PRIME, "support": EXAMPLE2_SUPPORT}


@pytest.fixture
def examples_dir():
    return EXAMPLES_DIR


def brute_force_clique(cg):
    """Lexicographically smallest maximum clique through vertex 0, by exhaustion."""
    best = (0,)
    others = range(1, cg.size)
    for k in range(1, cg.size):
        found = next((c for c in itertools.combinations(others, k) if cg.is_clique((0,) + c)), None)
        if found is None:
            break
        best = (0,) + found
    return best
