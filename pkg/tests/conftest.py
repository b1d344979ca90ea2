import numpy as np
import pytest
from hypothesis import strategies as st

from littlewood_lab import new_tensor
from littlewood_lab.tensor import CoefficientTensor


@pytest.fixture
def T2():
    return new_tensor(2, [2, 2], {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1})


def from_dense(A):
    A = np.asarray(A, dtype=float)
    idx = np.argwhere(A != 0)
    return CoefficientTensor(A.shape, idx, A[tuple(idx.T)])


@st.composite
def dense_arrays(draw, max_m=3, max_dim=3, integer=True, min_m=1):
    m = draw(st.integers(min_m, max_m))
    shape = tuple(draw(st.integers(1, max_dim)) for _ in range(m))
    size = int(np.prod(shape))
    if integer:
        elems = st.integers(-3, 3)
    else:
        # keep away from subnormals: the brute-force oracles power naively
        elems = st.one_of(st.just(0.0), st.floats(1e-6, 5.0), st.floats(-5.0, -1e-6))
    vals = draw(st.lists(elems, min_size=size, max_size=size))
    return np.array(vals, dtype=float).reshape(shape)


def random_dense(rng, max_m=3, max_dim=3, integer=False, min_m=2):
    m = int(rng.integers(min_m, max_m + 1))
    shape = tuple(int(d) for d in rng.integers(1, max_dim + 1, size=m))
    if integer:
        return rng.integers(-3, 4, size=shape).astype(float)
    return rng.standard_normal(shape)
