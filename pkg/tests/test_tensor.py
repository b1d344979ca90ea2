import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from littlewood_lab import (
    TensorError,
    axis_slice,
    coefficient,
    deserialize,
    evaluate,
    new_tensor,
    serialize,
)
from littlewood_lab.tensor import SignAssignment

from conftest import dense_arrays, from_dense
from oracles import dense_eval


class TestNewTensor:
    def test_t2_as_displayed(self, T2):
        assert T2.m == 2 and T2.dims == (2, 2) and T2.nnz == 4
        assert dict(T2.entries()) == {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1}

    def test_empty(self):
        T = new_tensor(1, [3], {})
        assert T.nnz == 0 and T.dims == (3,)

    def test_zero_dropped(self):
        assert new_tensor(2, [2, 2], {(1, 1): 0}).nnz == 0

    def test_entries_sorted(self):
        T = new_tensor(2, [3, 3], [((3, 1), 2), ((1, 2), 5), ((1, 1), -1)])
        assert [i for i, _ in T.entries()] == [(1, 1), (1, 2), (3, 1)]

    @pytest.mark.parametrize(
        "m, dims, entries",
        [
            (2, [2, 2], [((3, 1), 1)]),
            (2, [2, 2], [((0, 1), 1)]),
            (2, [2, 0], []),
            (2, [2, 2], [((1, 1), 1), ((1, 1), 2)]),
            (2, [2, 2], [((1, 1), 0), ((1, 1), 2)]),
            (2, [2], []),
            (0, [], []),
            (2, [2, 2], [((1,), 1)]),
        ],
    )
    def test_rejects(self, m, dims, entries):
        with pytest.raises(TensorError):
            new_tensor(m, dims, entries)

    def test_immutable(self, T2):
        with pytest.raises(ValueError):
            T2.values[0] = 7.0
        with pytest.raises(ValueError):
            T2.indices[0, 0] = 1


class TestEvaluate:
    def test_all_ones(self, T2):
        assert evaluate(T2, [[1, 1], [1, 1]]) == 2

    def test_basis_reads_coefficient(self, T2):
        assert evaluate(T2, [[1, 0], [0, 1]]) == 1

    def test_mixed_signs(self, T2):
        # 1 + 1 - 1 + 1 by direct expansion
        assert evaluate(T2, [[1, -1], [1, 1]]) == 2

    def test_integer_path_returns_int(self, T2):
        assert isinstance(evaluate(T2, [[1, -1], [1, 1]]), int)
        assert isinstance(evaluate(T2, [[0.5, -1], [1, 1]]), float)

    def test_integer_path_exact_beyond_float(self):
        big = 2**40
        T = new_tensor(2, [1, 1], {(1, 1): big})
        assert evaluate(T, [[big], [big + 1]]) == big * big * (big + 1)

    def test_dimension_mismatch(self, T2):
        with pytest.raises(TensorError):
            evaluate(T2, [[1, 1, 1], [1, 1]])
        with pytest.raises(TensorError):
            evaluate(T2, [[1, 1]])

    @settings(max_examples=60, deadline=None)
    @given(dense_arrays(integer=True), st.data())
    def test_matches_dense_oracle(self, A, data):
        T = from_dense(A)
        xs = [data.draw(st.lists(st.integers(-4, 4), min_size=d, max_size=d)) for d in A.shape]
        assert evaluate(T, xs) == dense_eval(A.astype(int), xs)

    @settings(max_examples=60, deadline=None)
    @given(dense_arrays(integer=True), st.data())
    def test_multilinear(self, A, data):
        T = from_dense(A)
        k = data.draw(st.integers(0, T.m - 1))
        xs = [data.draw(st.lists(st.integers(-4, 4), min_size=d, max_size=d)) for d in A.shape]
        y = data.draw(st.lists(st.integers(-4, 4), min_size=A.shape[k], max_size=A.shape[k]))
        c = data.draw(st.integers(-5, 5))
        combo = [c * a + b for a, b in zip(xs[k], y)]
        lhs = evaluate(T, xs[:k] + [combo] + xs[k + 1 :])
        rhs = c * evaluate(T, xs) + evaluate(T, xs[:k] + [y] + xs[k + 1 :])
        assert lhs == rhs

    @settings(max_examples=60, deadline=None)
    @given(dense_arrays(integer=True, min_m=2), st.data())
    def test_row_expansion(self, A, data):
        T = from_dense(A)
        xs = [data.draw(st.lists(st.integers(-4, 4), min_size=d, max_size=d)) for d in A.shape]
        rows = sum(xs[0][i] * evaluate(axis_slice(T, 1, i + 1), xs[1:]) for i in range(T.dims[0]))
        assert evaluate(T, xs) == rows


class TestCoefficient:
    def test_values(self, T2):
        assert coefficient(T2, (2, 2)) == -1
        assert coefficient(T2, (1, 1)) == 1
        assert coefficient(T2.scale(3), (2, 2)) == -3

    def test_missing_is_zero(self):
        assert coefficient(new_tensor(2, [2, 2], {(1, 1): 1}), (2, 1)) == 0

    def test_out_of_range(self, T2):
        with pytest.raises(TensorError):
            coefficient(T2, (3, 1))


class TestAxisSlice:
    def test_row(self, T2):
        s = axis_slice(T2, 1, 2)
        assert s.dims == (2,) and dict(s.entries()) == {(1,): 1, (2,): -1}

    def test_column(self, T2):
        assert dict(axis_slice(T2, 2, 1).entries()) == {(1,): 1, (2,): 1}

    def test_empty(self):
        T = new_tensor(3, [2, 3, 2], {})
        for axis in (1, 2, 3):
            assert axis_slice(T, axis, 1).nnz == 0

    def test_errors(self, T2):
        with pytest.raises(TensorError):
            axis_slice(T2, 3, 1)
        with pytest.raises(TensorError):
            axis_slice(T2, 1, 3)
        with pytest.raises(TensorError):
            axis_slice(new_tensor(1, [2], {}), 1, 1)

    @settings(max_examples=40, deadline=None)
    @given(dense_arrays(integer=False, min_m=2), st.data())
    def test_matches_dense_slice(self, A, data):
        T = from_dense(A)
        axis = data.draw(st.integers(1, T.m))
        i = data.draw(st.integers(1, T.dims[axis - 1]))
        np.testing.assert_array_equal(axis_slice(T, axis, i).to_dense(), np.take(A, i - 1, axis=axis - 1))


class TestSerialization:
    def test_t2_document(self, T2):
        doc = json.loads(serialize(T2))
        assert doc["m"] == 2 and doc["dims"] == [2, 2] and len(doc["entries"]) == 4
        assert doc["entries"][3] == {"idx": [2, 2], "val": -1}
        assert deserialize(serialize(T2)) == T2

    def test_duplicate_rejected(self):
        doc = {"m": 2, "dims": [2, 2], "entries": [{"idx": [1, 1], "val": 1}, {"idx": [1, 1], "val": 2}]}
        with pytest.raises(TensorError, match="duplicate"):
            deserialize(json.dumps(doc))

    def test_out_of_range_rejected(self):
        doc = {"m": 2, "dims": [2, 2], "entries": [{"idx": [3, 1], "val": 1}]}
        with pytest.raises(TensorError):
            deserialize(json.dumps(doc))

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[]",
            '{"m": 2, "dims": [2, 2]}',
            '{"m": 2, "dims": [2, 2], "entries": [{"idx": [1, 1]}]}',
            '{"m": 2, "dims": [2, 2], "entries": [{"idx": [1, 1], "val": "x"}]}',
            '{"m": 2, "dims": [2, 2], "entries": [{"idx": [1.5, 1], "val": 1}]}',
            '{"m": 3, "dims": [2, 2], "entries": []}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(TensorError):
            deserialize(text)

    def test_zero_values_dropped_on_load(self):
        doc = {"m": 1, "dims": [2], "entries": [{"idx": [1], "val": 0}]}
        assert deserialize(json.dumps(doc)).nnz == 0

    @settings(max_examples=60, deadline=None)
    @given(dense_arrays(integer=False))
    def test_round_trip(self, A):
        T = from_dense(A)
        assert deserialize(serialize(T)) == T


class TestSignAssignment:
    def test_validation(self, T2):
        SignAssignment([[1, -1], [1, 1]]).check(T2)
        with pytest.raises(TensorError):
            SignAssignment([[1, 0]])
        with pytest.raises(TensorError):
            SignAssignment([[1, -1]]).check(T2)
        with pytest.raises(TensorError):
            SignAssignment([[1, -1], [1]]).check(T2)
