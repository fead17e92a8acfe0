import numpy as np
import pytest

from swcoding.codes.ldpc_code import SparseParityMatrix, gallager_construct, identity_code
from swcoding.correlation.correlation_model import CorrelationModel


@pytest.fixture
def small_code():
    """2x3 matrix [[1,1,0],[0,1,1]]."""
    return SparseParityMatrix.from_rows(3, [[0, 1], [1, 2]])


@pytest.fixture
def regular_code():
    return gallager_construct(96, 3, 6, seed=11)


@pytest.fixture
def corner_codes():
    """Asymmetric corner point: source 1 uncompressed, source 2 at rate 1/2."""
    return identity_code(96), gallager_construct(96, 3, 6, seed=5)


@pytest.fixture
def model():
    return CorrelationModel(p=0.9)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
