"""Dense bit-packed linear algebra over GF(2).

Rows are packed little-endian into uint64 words: bit ``j`` of a row lives in
word ``j // 64`` at position ``j % 64``. Values are immutable once built.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

_WORD = np.dtype("<u8")
_ONE = np.uint64(1)


class ShapeMismatch(ValueError):
    pass


class ContainmentViolation(ValueError):
    pass


def _nwords(nbits: int) -> int:
    return (nbits + 63) >> 6


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a 2D 0/1 array into (rows, nwords) uint64 words."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    packed = np.packbits(dense, axis=1, bitorder="little")
    out = np.zeros((rows, nw * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(_WORD).reshape(rows, nw)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    if words.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words, dtype=_WORD).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=_WORD)
    a.flags.writeable = False
    return a


class BitVector:
    """Fixed-length vector over GF(2)."""

    __slots__ = ("length", "_words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise ValueError("length must be non-negative")
        self.length = int(length)
        if words is None:
            words = np.zeros(_nwords(length), dtype=_WORD)
        elif words.shape != (_nwords(length),):
            raise ShapeMismatch(f"expected {_nwords(length)} words, got {words.shape}")
        self._words = _frozen(words)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    @classmethod
    def from_bits(cls, bits: str | Iterable[int]) -> BitVector:
        if isinstance(bits, str):
            arr = np.array([int(ch) for ch in bits if ch in "01"], dtype=np.uint8)
        else:
            arr = np.asarray(list(bits), dtype=np.uint8)
        return cls(arr.size, _pack(arr.reshape(1, -1))[0])

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        """Vector with ones at ``support``; repeated indices cancel."""
        idx = np.fromiter((int(i) for i in support), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= length):
            raise IndexError("support index out of range")
        words = np.zeros(_nwords(length), dtype=_WORD)
        np.bitwise_xor.at(words, idx >> 6, _ONE << (idx & 63).astype(_WORD))
        return cls(length, words)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self._words[i >> 6] >> np.uint64(i & 63)) & _ONE)

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ShapeMismatch(f"lengths differ: {self.length} vs {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self._words ^ other._words)

    __add__ = __xor__

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self._words & other._words)

    def dot(self, other: BitVector) -> int:
        """Inner product mod 2."""
        self._check(other)
        return int(np.bitwise_count(self._words & other._words).sum()) & 1

    def weight(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def any(self) -> bool:
        return bool(self._words.any())

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.to_array())

    def to_array(self) -> np.ndarray:
        return _unpack(self._words.reshape(1, -1), self.length)[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.length, self._words.tobytes()))

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitVector('{''.join(map(str, self.to_array()))}')"
        return f"BitVector(length={self.length}, weight={self.weight()})"


class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("rows", "cols", "_words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if words is None:
            words = np.zeros((self.rows, _nwords(self.cols)), dtype=_WORD)
        elif words.shape != (self.rows, _nwords(self.cols)):
            raise ShapeMismatch(f"word array has shape {words.shape}")
        self._words = _frozen(words)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        idx = np.arange(n)
        return cls.from_coo(n, n, idx, idx)

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ShapeMismatch("expected a 2D array")
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector | str], cols: int | None = None) -> BitMatrix:
        vecs = [BitVector.from_bits(r) if isinstance(r, str) else r for r in rows]
        if not vecs:
            if cols is None:
                raise ShapeMismatch("cannot infer width of an empty row list")
            return cls(0, cols)
        width = vecs[0].length if cols is None else cols
        if any(v.length != width for v in vecs):
            raise ShapeMismatch("rows have inconsistent lengths")
        return cls(len(vecs), width, np.stack([v.words for v in vecs]))

    @classmethod
    def from_coo(cls, rows: int, cols: int, r, c) -> BitMatrix:
        """Build from coordinate lists; duplicate entries add mod 2."""
        r = np.asarray(r, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)
        if r.shape != c.shape:
            raise ShapeMismatch("row/col index arrays differ in shape")
        if r.size and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise IndexError("coordinate out of range")
        words = np.zeros((rows, _nwords(cols)), dtype=_WORD)
        np.bitwise_xor.at(words, (r, c >> 6), _ONE << (c & 63).astype(_WORD))
        return cls(rows, cols, words)

    @classmethod
    def from_supports(cls, cols: int, supports: Sequence[Iterable[int]]) -> BitMatrix:
        r, c = [], []
        for i, sup in enumerate(supports):
            for j in sup:
                r.append(i)
                c.append(j)
        return cls.from_coo(len(supports), cols, r, c)

    # -- accessors ------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return int((self._words[i, j >> 6] >> np.uint64(j & 63)) & _ONE)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self._words[i].copy())

    def __iter__(self):
        for i in range(self.rows):
            yield self.row(i)

    def row_list(self) -> list[BitVector]:
        return list(self)

    def to_dense(self) -> np.ndarray:
        return _unpack(self._words, self.cols)

    def nonzero(self, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
        """Row and column indices of the set bits, row-major."""
        rs, cs = [], []
        for start in range(0, self.rows, chunk):
            block = _unpack(self._words[start : start + chunk], self.cols)
            r, c = np.nonzero(block)
            rs.append(r + start)
            cs.append(c)
        if not rs:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        return np.concatenate(rs).astype(np.int64), np.concatenate(cs).astype(np.int64)

    def row_supports(self) -> list[list[int]]:
        r, c = self.nonzero()
        out: list[list[int]] = [[] for _ in range(self.rows)]
        for i, j in zip(r.tolist(), c.tolist()):
            out[i].append(j)
        return out

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1).astype(np.int64)

    def is_zero(self) -> bool:
        return not self._words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, nnz={int(self.row_weights().sum())})"

    # -- structural operations -----------------------------------------

    @property
    def T(self) -> BitMatrix:
        r, c = self.nonzero()
        return BitMatrix.from_coo(self.cols, self.rows, c, r)

    def transpose(self) -> BitMatrix:
        return self.T

    def select_rows(self, idx) -> BitMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        return BitMatrix(idx.size, self.cols, self._words[idx])

    def select_cols(self, idx) -> BitMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        remap = np.full(self.cols, -1, dtype=np.int64)
        remap[idx] = np.arange(idx.size)
        r, c = self.nonzero()
        keep = remap[c] >= 0
        return BitMatrix.from_coo(self.rows, idx.size, r[keep], remap[c[keep]])

    def permute_cols(self, perm) -> BitMatrix:
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        return self.select_cols(perm)

    @staticmethod
    def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
        if not blocks:
            raise ShapeMismatch("nothing to stack")
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ShapeMismatch("column counts differ")
        return BitMatrix(sum(b.rows for b in blocks), cols, np.concatenate([b.words for b in blocks]))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, self._words ^ other._words)

    __xor__ = __add__

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return matmul(self, other)

    def mul_vec(self, v: BitVector) -> BitVector:
        """Return ``self @ v`` as a vector of row parities."""
        if v.length != self.cols:
            raise ShapeMismatch(f"vector length {v.length} != cols {self.cols}")
        par = np.bitwise_count(self._words & v.words).sum(axis=1) & 1
        return BitVector.from_support(self.rows, np.flatnonzero(par))

    def rank(self) -> int:
        return rank(self)


# ----------------------------------------------------------------------
# elimination


def _eliminate(words: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form by column-major, leftmost-pivot elimination.

    Returns the nonzero RREF rows and their pivot columns.
    """
    W = np.array(words, dtype=_WORD, copy=True)
    nrows = W.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        hits = np.flatnonzero((W[r:, w] >> b) & _ONE)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            W[[r, p]] = W[[p, r]]
        mask = ((W[:, w] >> b) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            W[mask] ^= W[r]
        pivots.append(c)
        r += 1
    return W[:r], pivots


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    words, pivots = _eliminate(m.words, m.cols)
    return BitMatrix(len(pivots), m.cols, words), pivots


def rank(m: BitMatrix) -> int:
    """Dimension of the row space."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_eliminate(m.words, m.cols)[1])


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.rows, _nwords(b.cols)), dtype=_WORD)
    r, c = a.nonzero()
    if r.size * out.shape[1] <= 20_000_000:
        np.bitwise_xor.at(out, r, b.words[c])
    else:
        for j in range(a.cols):
            mask = ((a.words[:, j >> 6] >> np.uint64(j & 63)) & _ONE).astype(bool)
            if mask.any():
                out[mask] ^= b.words[j]
    return BitMatrix(a.rows, b.cols, out)


def nullspace_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of ``{v : m v = 0}``, one vector per non-pivot column."""
    R, pivots = rref(m)
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    if not free:
        return []
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        dense = R.to_dense()
        basis[:, pivots] = dense[:, free].T
    packed = _pack(basis)
    return [BitVector(m.cols, packed[i]) for i in range(len(free))]


def solve(m: BitMatrix, b: BitVector) -> BitVector | None:
    """One solution of ``m x = b``, or ``None`` when the system is inconsistent."""
    if b.length != m.rows:
        raise ShapeMismatch(f"rhs length {b.length} vs {m.rows} rows")
    aug = BitMatrix.from_dense(np.hstack([m.to_dense(), b.to_array().reshape(-1, 1)]))
    R, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    last = (R.words[:, m.cols >> 6] >> np.uint64(m.cols & 63)) & _ONE
    return BitVector.from_support(m.cols, [c for c, bit in zip(pivots, last) if bit])


def _as_matrix(vectors: Sequence[BitVector] | BitMatrix, cols: int | None) -> BitMatrix:
    if isinstance(vectors, BitMatrix):
        return vectors
    return BitMatrix.from_rows(list(vectors), cols)


def _reduce_against(words: np.ndarray, basis: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Clear every pivot column of an RREF ``basis`` from each row of ``words``."""
    W = np.array(words, dtype=_WORD, copy=True)
    for row, c in zip(basis, pivots):
        mask = ((W[:, c >> 6] >> np.uint64(c & 63)) & _ONE).astype(bool)
        if mask.any():
            W[mask] ^= row
    return W


def in_rowspace(v: BitVector, m: BitMatrix) -> bool:
    R, pivots = rref(m)
    return not _reduce_against(v.words.reshape(1, -1), R.words, pivots).any()


def quotient_basis(
    big: Sequence[BitVector] | BitMatrix, small: Sequence[BitVector] | BitMatrix
) -> list[BitVector]:
    """Canonical representatives of a basis of span(big) / span(small).

    Each returned vector is zero on the pivot columns of RREF(small), so no
    nonzero combination of them lies in span(small).
    """
    ncols = None
    for group in (big, small):
        if isinstance(group, BitMatrix):
            ncols = group.cols
        elif len(group):
            ncols = group[0].length
        if ncols is not None:
            break
    if ncols is None:
        return []
    B = _as_matrix(big, ncols)
    S = _as_matrix(small, ncols)
    if B.cols != S.cols:
        raise ShapeMismatch("big and small live in different spaces")
    RB, pb = rref(B)
    if S.rows and _reduce_against(S.words, RB.words, pb).any():
        raise ContainmentViolation("span(small) is not contained in span(big)")
    RS, ps = rref(S)
    reduced = _reduce_against(RB.words, RS.words, ps)
    Q, _ = _eliminate(reduced, B.cols)
    return [BitVector(B.cols, Q[i].copy()) for i in range(Q.shape[0])]


__all__ = [
    "BitMatrix",
    "BitVector",
    "ContainmentViolation",
    "ShapeMismatch",
    "in_rowspace",
    "matmul",
    "nullspace_basis",
    "quotient_basis",
    "rank",
    "rref",
    "solve",
]
