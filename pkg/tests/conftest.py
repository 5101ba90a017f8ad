import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bandapprox import RAW_D, SymmetricOperator, eigh
from bandapprox.harness import OperatorSpec, build_operator


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def diag_dec():
    """D = diag(1, 2, 3), given directly."""
    return eigh(SymmetricOperator(np.diag([1.0, 2.0, 3.0]), kind=RAW_D))


@pytest.fixture
def cycle16_dec():
    return eigh(build_operator(OperatorSpec(builtin="cycle", size=16)))


@pytest.fixture
def random_dec():
    op = build_operator(OperatorSpec(builtin="random_psd", size=12, seed=99))
    return eigh(op)


def random_vector(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
