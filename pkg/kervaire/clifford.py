"""
Exterior algebra of E* with the two Clifford actions.

    c(v)  = v*^ - i_v     (skew-adjoint, c(v)^2 = -|v|^2)
    c^(v) = v*^ + i_v     (self-adjoint, c^(v)^2 = |v|^2)

Basis elements of the exterior algebra are bitmasks: bit j set means the
factor e^(j+1) is present, factors always in increasing order. Operators are
dense 2^m x 2^m matrices acting on coefficient columns.

Integer inputs stay in int64 and Fraction inputs in object arrays, so the
Clifford relations can be checked with zero residual; anything else is
computed in float64.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Integral, Rational
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from kervaire.errors import (
    BasisNotOrthonormal, DegenerateGap, DimensionTooLarge, InvalidDimension, NotSymmetric,
    ResidualTooLarge, SingularMatrix,
)
from kervaire.symeig import SYMMETRY_TOL, sym_eigen

MAX_DIM = 12
ORTHONORMAL_TOL = 1e-10
SINGULAR_TOL = 1e-9
GAP_TOL = 1e-6
RESIDUAL_TOL = 1e-8


def _kind(values) -> str:
    """'int', 'exact' (rationals) or 'float'"""
    flat = list(np.asarray(values, dtype=object).ravel())
    if all(isinstance(x, (Integral, np.integer)) and not isinstance(x, bool) for x in flat):
        return 'int'
    if all(isinstance(x, (Rational, np.integer)) for x in flat):
        return 'exact'
    return 'float'


def _as_array(values, kind: str) -> np.ndarray:
    if kind == 'int':
        return np.asarray(values, dtype=object).astype(np.int64)
    if kind == 'exact':
        arr = np.asarray(values, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr
    return np.asarray(values, dtype=float)


def _check_dim(m: int):
    if m < 1:
        raise InvalidDimension(f"dimension must be >= 1, got {m}", {'m': m})
    if m > MAX_DIM:
        raise DimensionTooLarge(f"dimension {m} exceeds {MAX_DIM} (operators are 2^m x 2^m)",
                                {'m': m})


def popcount(mask: int) -> int:
    return bin(mask).count('1')


@lru_cache(maxsize=None)
def _elementary(m: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """(e^j wedge, i_(e_j)) for j = 0..m-1, as int64 matrices"""
    size = 1 << m
    out = []
    for j in range(m):
        bit = 1 << j
        ext = np.zeros((size, size), dtype=np.int64)
        con = np.zeros((size, size), dtype=np.int64)
        for mask in range(size):
            sign = -1 if popcount(mask & (bit - 1)) % 2 else 1
            if mask & bit:
                con[mask ^ bit, mask] = sign
            else:
                ext[mask | bit, mask] = sign
        ext.flags.writeable = False
        con.flags.writeable = False
        out.append((ext, con))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class ExteriorVector:
    """Element of the exterior algebra, coefficients indexed by bitmask"""

    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (1 << self.m,):
            raise ValueError(f"expected {1 << self.m} coefficients, got {self.coeffs.shape}")

    @classmethod
    def from_terms(cls, m: int, terms: Dict[int, float]) -> 'ExteriorVector':
        coeffs = np.zeros(1 << m)
        for mask, value in terms.items():
            coeffs[mask] = value
        return cls(m, coeffs)

    @classmethod
    def basis(cls, m: int, mask: int) -> 'ExteriorVector':
        return cls.from_terms(m, {mask: 1.0})

    @classmethod
    def wedge(cls, vectors: np.ndarray) -> 'ExteriorVector':
        """v_1 ^ ... ^ v_p for the columns of an m x p array, via p x p minors"""
        vectors = np.asarray(vectors, dtype=float)
        m, p = vectors.shape
        coeffs = np.zeros(1 << m)
        if p == 0:
            coeffs[0] = 1.0
            return cls(m, coeffs)
        for rows in combinations(range(m), p):
            mask = sum(1 << i for i in rows)
            coeffs[mask] = np.linalg.det(vectors[list(rows), :])
        return cls(m, coeffs)

    def terms(self, tol: float = 0.0) -> Dict[int, float]:
        return {mask: c for mask, c in enumerate(self.coeffs) if abs(c) > tol}

    def dot(self, other: 'ExteriorVector') -> float:
        return float(np.dot(self.coeffs, other.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs.astype(float)))

    def normalized(self) -> 'ExteriorVector':
        return ExteriorVector(self.m, self.coeffs.astype(float) / self.norm())

    def __neg__(self) -> 'ExteriorVector':
        return ExteriorVector(self.m, -self.coeffs)

    def parity(self) -> int:
        """Degree parity carrying most of the weight (0 even, 1 odd)"""
        weights = np.abs(self.coeffs.astype(float)) ** 2
        odd = sum(weights[mask] for mask in range(len(weights)) if popcount(mask) % 2)
        return 1 if odd > 0.5 * weights.sum() else 0


@dataclass(frozen=True, eq=False)
class CliffOp:
    """Linear operator on the exterior algebra of an m-dimensional space"""

    m: int
    matrix: np.ndarray

    def __post_init__(self):
        size = 1 << self.m
        if self.matrix.shape != (size, size):
            raise ValueError(f"expected a {size}x{size} matrix, got {self.matrix.shape}")

    @classmethod
    def identity(cls, m: int, scalar=1) -> 'CliffOp':
        eye = np.eye(1 << m, dtype=np.int64)
        return cls(m, eye * scalar)

    @classmethod
    def zero(cls, m: int) -> 'CliffOp':
        return cls(m, np.zeros((1 << m, 1 << m), dtype=np.int64))

    @property
    def exact(self) -> bool:
        return self.matrix.dtype != np.float64

    def __add__(self, other: 'CliffOp') -> 'CliffOp':
        return CliffOp(self.m, self.matrix + other.matrix)

    def __sub__(self, other: 'CliffOp') -> 'CliffOp':
        return CliffOp(self.m, self.matrix - other.matrix)

    def __matmul__(self, other: 'CliffOp') -> 'CliffOp':
        return CliffOp(self.m, self.matrix @ other.matrix)

    def __mul__(self, scalar) -> 'CliffOp':
        return CliffOp(self.m, self.matrix * scalar)

    __rmul__ = __mul__

    def adjoint(self) -> 'CliffOp':
        return CliffOp(self.m, self.matrix.T.copy())

    def apply(self, v: ExteriorVector) -> ExteriorVector:
        return ExteriorVector(self.m, self.matrix @ v.coeffs)

    def equals(self, other: 'CliffOp', tol: float = 0.0) -> bool:
        diff = self.matrix - other.matrix
        if self.exact and other.exact and tol == 0.0:
            return bool(np.all(diff == 0))
        return float(np.abs(diff.astype(float)).max(initial=0.0)) <= tol

    def norm(self) -> float:
        return float(np.abs(self.matrix.astype(float)).max(initial=0.0))

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        return self.equals(self.adjoint(), tol)

    def is_skew_adjoint(self, tol: float = 0.0) -> bool:
        return self.equals(self.adjoint() * -1, tol)


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Symmetric m x m matrix, exact (object/int64) or float64"""

    entries: np.ndarray

    def __post_init__(self):
        a = self.entries
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
        if a.dtype == np.float64:
            scale = max(1.0, float(np.abs(a).max(initial=0.0)))
            if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
                raise NotSymmetric("matrix is not symmetric")
        elif not np.all(a == a.T):
            raise NotSymmetric("matrix is not symmetric")

    @classmethod
    def of(cls, rows) -> 'SymMatrix':
        kind = _kind(rows)
        return cls(_as_array(rows, kind))

    @classmethod
    def diag(cls, values: Sequence) -> 'SymMatrix':
        n = len(values)
        return cls.of([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    def as_float(self) -> np.ndarray:
        return self.entries.astype(float)


def _vector_op(v: Sequence, contraction_sign: int) -> CliffOp:
    kind = _kind(v)
    vec = _as_array(v, kind)
    m = len(vec)
    _check_dim(m)
    size = 1 << m
    dtype = np.int64 if kind == 'int' else (object if kind == 'exact' else float)
    total = np.zeros((size, size), dtype=dtype)
    if kind == 'exact':
        total = total + Fraction(0)
    for coeff, (ext, con) in zip(vec, _elementary(m)):
        if coeff == 0:
            continue
        piece = ext + contraction_sign * con
        total = total + (piece.astype(object) if kind == 'exact' else piece) * coeff
    return CliffOp(m, total)


def c_op(v: Sequence) -> CliffOp:
    """Clifford action c(v) = v*^ - i_v"""
    return _vector_op(v, -1)


def chat_op(v: Sequence) -> CliffOp:
    """Clifford action c^(v) = v*^ + i_v"""
    return _vector_op(v, +1)


def _as_sym(a) -> SymMatrix:
    return a if isinstance(a, SymMatrix) else SymMatrix.of(a)


def hat_A(a, basis: Optional[np.ndarray] = None) -> CliffOp:
    """
    A^ = sum_ij a_ij c(e_i) c^(e_j), with a_ij = <e_i, A e_j> in the frame
    given by the columns of basis (standard frame when omitted).
    """
    a = _as_sym(a)
    m = a.m
    _check_dim(m)
    if basis is None:
        frame = np.eye(m, dtype=np.int64)
    else:
        kind = _kind(basis)
        frame = _as_array(basis, kind)
        if frame.shape != (m, m):
            raise BasisNotOrthonormal(f"basis must be {m}x{m}, got {frame.shape}")
        gram = frame.T @ frame - np.eye(m, dtype=np.int64)
        if kind == 'float':
            if np.abs(gram).max() > ORTHONORMAL_TOL:
                raise BasisNotOrthonormal("basis is not orthonormal",
                                          {'defect': float(np.abs(gram).max())})
        elif not np.all(gram == 0):
            raise BasisNotOrthonormal("basis is not orthonormal")

    coeffs = frame.T @ a.entries @ frame
    c_ops = [c_op(list(frame[:, i])) for i in range(m)]
    total = CliffOp.zero(m)
    for j in range(m):
        mixed = CliffOp.zero(m)
        for i in range(m):
            if coeffs[i, j] != 0:
                mixed = mixed + c_ops[i] * coeffs[i, j]
        total = total + mixed @ chat_op(list(frame[:, j]))
    return total


def checked_spectrum(a) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a, refusing (numerically) singular input"""
    a = _as_sym(a)
    values, vectors = sym_eigen(a.as_float())
    scale = float(np.abs(values).max(initial=0.0))
    det = float(np.prod(values))
    if scale == 0.0 or abs(det) <= SINGULAR_TOL * scale ** len(values):
        raise SingularMatrix("matrix is singular", {'det': det, 'scale': scale})
    return values, vectors


def K_op(a) -> CliffOp:
    """K = tr|A| + A^, a non-negative operator with a one-dimensional kernel"""
    a = _as_sym(a)
    _check_dim(a.m)
    values, _ = checked_spectrum(a)
    trace_abs = float(np.abs(values).sum())
    return CliffOp.identity(a.m, trace_abs) + hat_A(a.as_float())


def negative_wedge(values: np.ndarray, vectors: np.ndarray) -> ExteriorVector:
    """Wedge of an orthonormal basis of the negative eigenspace (unit norm)"""
    return ExteriorVector.wedge(vectors[:, values < 0])


def lemma1_kernel(a) -> Tuple[ExteriorVector, int]:
    """
    Unit generator of ker K(a) and its degree parity (0 iff det a > 0).

    The kernel is the wedge of the negative-eigenvalue eigenvectors. K has
    eigenvalues tr|A| + sum_i s_i lambda_i with s_i = +-1, so its second
    smallest eigenvalue is 2 min|lambda_i|; that gap must be resolvable.
    """
    a = _as_sym(a)
    _check_dim(a.m)
    values, vectors = checked_spectrum(a)
    trace_abs = float(np.abs(values).sum())
    gap = 2.0 * float(np.abs(values).min())
    if gap < GAP_TOL * trace_abs:
        raise DegenerateGap("second eigenvalue of K is too close to zero",
                            {'gap': gap, 'trace_abs': trace_abs})
    kernel = negative_wedge(values, vectors)
    parity = int(np.count_nonzero(values < 0) % 2)

    residual = K_op(a).apply(kernel).norm()
    if residual > RESIDUAL_TOL * trace_abs:
        raise ResidualTooLarge("wedge of negative eigenvectors is not annihilated by K",
                               {'residual': residual, 'trace_abs': trace_abs})
    return kernel, parity
