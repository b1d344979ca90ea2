"""Sparse coefficient tensors for finitely supported m-linear forms on c0.

A form ``T`` is stored by its coefficients ``T(e_{i1}, ..., e_{im})``.
Indices are 1-based at every public boundary (constructors, accessors,
JSON documents); internally they are kept 0-based in an ``(nnz, m)``
integer array sorted lexicographically.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "CoefficientTensor",
    "SignAssignment",
    "TensorError",
    "new_tensor",
    "evaluate",
    "coefficient",
    "axis_slice",
    "serialize",
    "deserialize",
]

# products of |coef| * prod |x| beyond this fall back to Python ints
_INT64_SAFE = 2**62


class TensorError(ValueError):
    """Raised on malformed tensors, indices, or documents."""


class CoefficientTensor:
    """Immutable sparse m-way array of real coefficients.

    Use :func:`new_tensor` for checked construction from 1-based entries.
    """

    __slots__ = ("_m", "_dims", "_idx", "_val", "_integral")

    def __init__(self, dims: Sequence[int], indices: np.ndarray, values: np.ndarray, *, _checked: bool = False):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 1:
            raise TensorError("arity must be at least 1")
        if any(d < 1 for d in dims):
            raise TensorError(f"nonpositive dimension in {list(dims)}")
        m = len(dims)
        idx = np.asarray(indices, dtype=np.int64).reshape(-1, m)
        val = np.asarray(values, dtype=np.float64).reshape(-1)
        if idx.shape[0] != val.shape[0]:
            raise TensorError("indices and values differ in length")
        if not _checked:
            if not np.all(np.isfinite(val)):
                raise TensorError("coefficients must be finite")
            if idx.size and (idx.min() < 0 or np.any(idx >= np.asarray(dims))):
                raise TensorError("index out of range")
            order = np.lexsort(idx.T[::-1]) if idx.shape[0] else np.arange(0)
            idx, val = idx[order], val[order]
            if idx.shape[0] > 1:
                same = np.all(idx[1:] == idx[:-1], axis=1)
                if same.any():
                    dup = tuple(int(i) + 1 for i in idx[1:][same][0])
                    raise TensorError(f"duplicate index {dup}")
            keep = val != 0.0
            idx, val = idx[keep], val[keep]
        idx = np.ascontiguousarray(idx)
        val = np.ascontiguousarray(val)
        idx.flags.writeable = False
        val.flags.writeable = False
        self._m = m
        self._dims = dims
        self._idx = idx
        self._val = val
        self._integral = bool(np.all(val == np.round(val)) and np.all(np.abs(val) < 2**53))

    @property
    def m(self) -> int:
        return self._m

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def nnz(self) -> int:
        return int(self._val.shape[0])

    @property
    def indices(self) -> np.ndarray:
        """0-based ``(nnz, m)`` index array, lexicographically sorted, read-only."""
        return self._idx

    @property
    def values(self) -> np.ndarray:
        return self._val

    @property
    def is_integral(self) -> bool:
        """True when every coefficient is an integer exactly representable in float64."""
        return self._integral

    def entries(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """Yield ``(1-based index tuple, coefficient)`` in lexicographic order."""
        for row, v in zip(self._idx.tolist(), self._val.tolist()):
            yield tuple(i + 1 for i in row), (int(v) if self._integral else v)

    def scale(self, c: float) -> "CoefficientTensor":
        return CoefficientTensor(self._dims, self._idx, self._val * float(c))

    def permute_axes(self, perm: Sequence[int]) -> "CoefficientTensor":
        """Reorder axes; ``perm`` lists old 1-based axes in their new order."""
        p = [int(a) - 1 for a in perm]
        if sorted(p) != list(range(self._m)):
            raise TensorError(f"not a permutation of 1..{self._m}: {list(perm)}")
        return CoefficientTensor([self._dims[a] for a in p], self._idx[:, p], self._val)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self._dims)
        if self.nnz:
            out[tuple(self._idx.T)] = self._val
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoefficientTensor):
            return NotImplemented
        return (
            self._dims == other._dims
            and np.array_equal(self._idx, other._idx)
            and np.array_equal(self._val, other._val)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CoefficientTensor(m={self._m}, dims={list(self._dims)}, nnz={self.nnz})"


class SignAssignment:
    """One ``{-1, +1}`` vector per tensor axis: a vertex of the unit ball of c0^m."""

    __slots__ = ("signs",)

    def __init__(self, signs: Iterable[Sequence[int]]):
        vecs = []
        for s in signs:
            v = np.asarray(s, dtype=np.int64).reshape(-1)
            if not np.all(np.abs(v) == 1):
                raise TensorError("sign vectors must have entries in {-1, +1}")
            v.flags.writeable = False
            vecs.append(v)
        self.signs: tuple[np.ndarray, ...] = tuple(vecs)

    def check(self, T: CoefficientTensor) -> None:
        if len(self.signs) != T.m:
            raise TensorError(f"expected {T.m} sign vectors, got {len(self.signs)}")
        for k, (v, d) in enumerate(zip(self.signs, T.dims), start=1):
            if v.shape[0] != d:
                raise TensorError(f"axis {k}: sign vector has length {v.shape[0]}, expected {d}")

    def tolist(self) -> list[list[int]]:
        return [v.tolist() for v in self.signs]

    def __len__(self) -> int:
        return len(self.signs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignAssignment):
            return NotImplemented
        return self.tolist() == other.tolist()

    def __hash__(self) -> int:
        return hash(tuple(tuple(v) for v in self.tolist()))

    def __repr__(self) -> str:
        return f"SignAssignment({self.tolist()})"


def new_tensor(
    m: int,
    dims: Sequence[int],
    entries: Mapping[Sequence[int], float] | Iterable[tuple[Sequence[int], float]] = (),
) -> CoefficientTensor:
    """Build a canonical sparse tensor from 1-based ``(index, coefficient)`` pairs.

    Zero coefficients are dropped. Raises :class:`TensorError` on arity or
    dimension mismatch, out-of-range indices and duplicate indices.

    >>> T2 = new_tensor(2, [2, 2], {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1})
    >>> T2.nnz
    4
    """
    if m < 1:
        raise TensorError("arity must be at least 1")
    dims = [int(d) for d in dims]
    if len(dims) != m:
        raise TensorError(f"dims has {len(dims)} extents for arity {m}")
    if any(d < 1 for d in dims):
        raise TensorError(f"nonpositive dimension in {dims}")
    pairs = entries.items() if isinstance(entries, Mapping) else entries
    rows, vals = [], []
    for key, v in pairs:
        key = tuple(int(i) for i in key)
        if len(key) != m:
            raise TensorError(f"index {key} has length {len(key)}, expected {m}")
        for i, d in zip(key, dims):
            if not 1 <= i <= d:
                raise TensorError(f"index {key} out of range for dims {dims}")
        rows.append([i - 1 for i in key])
        vals.append(float(v))
    idx = np.array(rows, dtype=np.int64).reshape(-1, m)
    return CoefficientTensor(dims, idx, np.array(vals, dtype=np.float64))


def _integer_vectors(xs: Sequence[np.ndarray]) -> bool:
    return all(np.issubdtype(x.dtype, np.integer) or bool(np.all(x == np.round(x))) for x in xs)


def evaluate(T: CoefficientTensor, x: Sequence[Sequence[float]]) -> float | int:
    """Evaluate ``T(x_1, ..., x_m)``.

    Returns a Python ``int`` computed without rounding when the tensor and
    all argument vectors are integer valued.
    """
    if len(x) != T.m:
        raise TensorError(f"expected {T.m} argument vectors, got {len(x)}")
    xs = [np.asarray(v).reshape(-1) for v in x]
    for k, (v, d) in enumerate(zip(xs, T.dims), start=1):
        if v.shape[0] != d:
            raise TensorError(f"axis {k}: vector has length {v.shape[0]}, expected {d}")
    if T.nnz == 0:
        return 0 if T.is_integral and _integer_vectors(xs) else 0.0
    idx = T.indices
    if T.is_integral and _integer_vectors(xs):
        bound = float(np.abs(T.values).max())
        for v in xs:
            bound *= float(np.abs(v).max()) if v.size else 0.0
        if bound * T.nnz < _INT64_SAFE:
            terms = T.values.astype(np.int64)
            for k, v in enumerate(xs):
                terms = terms * v.astype(np.int64)[idx[:, k]]
            return int(terms.sum())
        ivs = [[int(a) for a in v.tolist()] for v in xs]
        total = 0
        for row, c in zip(idx.tolist(), T.values.tolist()):
            t = int(c)
            for k, i in enumerate(row):
                t *= ivs[k][i]
            total += t
        return total
    terms = T.values.copy()
    for k, v in enumerate(xs):
        terms *= np.asarray(v, dtype=np.float64)[idx[:, k]]
    return float(terms.sum())


def coefficient(T: CoefficientTensor, idx: Sequence[int]) -> float | int:
    """Stored coefficient at a 1-based multi-index, or zero."""
    key = [int(i) for i in idx]
    if len(key) != T.m or any(not 1 <= i <= d for i, d in zip(key, T.dims)):
        raise TensorError(f"index {tuple(key)} out of range for dims {list(T.dims)}")
    if T.nnz:
        target = np.asarray(key, dtype=np.int64) - 1
        hit = np.flatnonzero(np.all(T.indices == target, axis=1))
        if hit.size:
            v = float(T.values[hit[0]])
            return int(v) if T.is_integral else v
    return 0 if T.is_integral else 0.0


def axis_slice(T: CoefficientTensor, axis: int, index: int) -> CoefficientTensor:
    """Arity ``m - 1`` tensor of the entries with ``i_axis == index`` (both 1-based)."""
    if T.m < 2:
        raise TensorError("axis_slice requires arity at least 2")
    if not 1 <= axis <= T.m:
        raise TensorError(f"axis {axis} out of range 1..{T.m}")
    if not 1 <= index <= T.dims[axis - 1]:
        raise TensorError(f"index {index} out of range 1..{T.dims[axis - 1]}")
    a = axis - 1
    keep = T.indices[:, a] == index - 1
    rest = [k for k in range(T.m) if k != a]
    # dropping one column of a lexicographically sorted array keeps rows
    # with equal dropped value sorted
    return CoefficientTensor(
        [T.dims[k] for k in rest], T.indices[keep][:, rest], T.values[keep], _checked=True
    )


def to_document(T: CoefficientTensor) -> dict:
    return {
        "m": T.m,
        "dims": list(T.dims),
        "entries": [{"idx": list(i), "val": v} for i, v in T.entries()],
    }


def from_document(doc: object) -> CoefficientTensor:
    if not isinstance(doc, dict) or not {"m", "dims", "entries"} <= doc.keys():
        raise TensorError("tensor document needs keys 'm', 'dims', 'entries'")
    m, dims, entries = doc["m"], doc["dims"], doc["entries"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise TensorError("'m' must be an integer")
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise TensorError("'dims' must be a list of integers")
    if not isinstance(entries, list):
        raise TensorError("'entries' must be a list")
    pairs = []
    for e in entries:
        if not isinstance(e, dict) or "idx" not in e or "val" not in e:
            raise TensorError("each entry needs 'idx' and 'val'")
        idx, val = e["idx"], e["val"]
        if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise TensorError(f"malformed idx {idx!r}")
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise TensorError(f"malformed val {val!r}")
        pairs.append((idx, val))
    return new_tensor(m, dims, pairs)


def serialize(T: CoefficientTensor) -> bytes:
    """UTF-8 JSON tensor document; entries in lexicographic index order."""
    return (json.dumps(to_document(T), separators=(",", ":")) + "\n").encode("utf-8")


def deserialize(data: bytes | str) -> CoefficientTensor:
    """Parse a JSON tensor document, enforcing all tensor invariants."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TensorError(f"document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TensorError(f"malformed JSON: {exc}") from None
    return from_document(doc)
