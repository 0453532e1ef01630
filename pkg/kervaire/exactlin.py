"""
Exact linear algebra over GF(2) and the rationals.

Only ranks are needed downstream (Betti numbers), so the module keeps to
rank and kernel dimension. Nothing here ever rounds.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class GF2Matrix:
    """Matrix over the 2-element field, one packed int per row (bit j = column j)"""

    rows: int
    cols: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError(f"expected {self.rows} packed rows, got {len(self.bits)}")
        limit = 1 << self.cols
        for word in self.bits:
            if word < 0 or word >= limit:
                raise ValueError("packed row has bits outside the column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> 'GF2Matrix':
        if cols is None:
            cols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            word = 0
            for j, entry in enumerate(row):
                if entry % 2:
                    word |= 1 << j
            packed.append(word)
        return cls(len(packed), cols, tuple(packed))

    @classmethod
    def from_int_matrix(cls, m: 'IntMatrix') -> 'GF2Matrix':
        """Reduce an integer matrix mod 2"""
        return cls.from_rows(m.entries, m.cols)

    @classmethod
    def identity(cls, n: int) -> 'GF2Matrix':
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'GF2Matrix':
        return cls(rows, cols, (0,) * rows)

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def to_rows(self) -> List[List[int]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self) -> 'GF2Matrix':
        packed = []
        for j in range(self.cols):
            word = 0
            for i, row in enumerate(self.bits):
                if (row >> j) & 1:
                    word |= 1 << i
            packed.append(word)
        return GF2Matrix(self.cols, self.rows, tuple(packed))


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix with arbitrary-precision entries"""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> 'IntMatrix':
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'IntMatrix':
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence[int]) -> 'IntMatrix':
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def transpose(self) -> 'IntMatrix':
        return IntMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)
        ))

    def select(self, rows: Iterable[int], cols: Iterable[int]) -> 'IntMatrix':
        """Submatrix on the given row and column indices (order kept)"""
        rows = list(rows)
        cols = list(cols)
        return IntMatrix(len(rows), len(cols),
                         tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def matmul(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        columns = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in columns)
            for row in self.entries
        ))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_array(self) -> np.ndarray:
        """Object array of Python ints, shape (rows, cols)"""
        out = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                out[i, j] = x
        return out


def gf2_rank(m: GF2Matrix) -> int:
    """Rank over GF(2) by row reduction with word-level XOR"""
    rows = list(m.bits)
    rank = 0
    for col in range(m.cols):
        mask = 1 << col
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i] & mask:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pivot_row = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i] & mask:
                rows[i] ^= pivot_row
        rank += 1
        if rank == len(rows):
            break
    return rank


def gf2_kernel_dim(m: GF2Matrix) -> int:
    return m.cols - gf2_rank(m)


def rat_rank(m: IntMatrix) -> int:
    """
    Rank over the rationals by fraction-free (Bareiss) elimination.

    Pivot is the first nonzero entry in column order. Every division below
    is exact, so the integer entries stay minors of the input.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    a = m.to_array()
    nrows, ncols = a.shape
    rank = 0
    prev = 1
    for col in range(ncols):
        nonzero = np.nonzero(a[rank:, col] != 0)[0]
        if len(nonzero) == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            a[[rank, pivot], :] = a[[pivot, rank], :]
        p = a[rank, col]
        if rank + 1 < nrows:
            below = a[rank + 1:, col + 1:]
            factors = a[rank + 1:, col].reshape(-1, 1)
            pivot_tail = a[rank, col + 1:].reshape(1, -1)
            a[rank + 1:, col + 1:] = (below * p - factors * pivot_tail) // prev
            a[rank + 1:, col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rat_kernel_dim(m: IntMatrix) -> int:
    return m.cols - rat_rank(m)
