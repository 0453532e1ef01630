"""
Mod-2 circle index.

Along a singular circle the field A(t) is a loop of symmetric invertible
matrices. ker K(A(t)) is a real line; it is spanned by the wedge of the
negative eigenvectors of A(t). Chaining the signs of consecutive overlaps
of those wedges gives the monodromy of the line bundle, and
ind2 = 1 exactly when that monodromy is +1.
"""

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from kervaire.clifford import (
    GAP_TOL, ExteriorVector, K_op, checked_spectrum, negative_wedge,
)
from kervaire.errors import (
    BlockStructureViolated, DegenerateGap, DimensionTooLarge, InvalidDimension, LoopNotClosed,
    NonConstantNegativeIndex, NotBoundaryLoop, ParseError, SamplingTooCoarse, ValidationError,
)
from kervaire.symeig import check_symmetric, sym_eigen

__all__ = [
    'OVERLAP_THRESHOLD', 'MatrixLoop', 'LoopGenerator', 'CircleIndexResult', 'sym_eigen',
    'kernel_wedge', 'validate_loop', 'monodromy', 'ind2', 'ind2_oracle', 'boundary_reduce',
    'refine_samples', 'reverse', 'load_loop', 'loop_to_json',
]

OVERLAP_THRESHOLD = 0.1
MAX_ORACLE_DIM = 8
CLOSURE_TOL = 1e-9
BLOCK_TOL = 1e-12
LOCATIONS = ('interior', 'boundary')
GENERATOR_TYPES = ('constant', 'conjugated_diag', 'boundary')


# ---------------------------------------------------------------------------
# Loops and generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MatrixLoop:
    samples: Tuple[np.ndarray, ...]
    location: str = 'interior'
    boundary_sign: Optional[int] = None
    generator: Optional['LoopGenerator'] = None
    name: str = ''

    @property
    def m(self) -> int:
        return self.samples[0].shape[0] if self.samples else 0

    @property
    def count(self) -> int:
        return len(self.samples)


def _rotation(m: int, plane: Tuple[int, int], angle: float) -> np.ndarray:
    i, j = plane
    r = np.eye(m)
    c, s = math.cos(angle), math.sin(angle)
    r[i, i], r[i, j] = c, -s
    r[j, i], r[j, j] = s, c
    return r


def _parse_turns(value) -> Fraction:
    try:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10 ** 6)
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"turns must be a rational number, got {value!r}") from exc


@dataclass(frozen=True)
class LoopGenerator:
    """
    Built-in loop families.

    constant         A(t) = diag (or a full matrix)
    conjugated_diag  A(t) = R(2 pi turns t) diag R(2 pi turns t)^T, R rotating `plane`
    boundary         A(t) = block diag(sign, inner(t))
    """

    type: str
    diag: Tuple[float, ...] = ()
    matrix: Optional[Tuple[Tuple[float, ...], ...]] = None
    plane: Tuple[int, int] = (0, 1)
    turns: Fraction = Fraction(0)
    count: int = 16
    sign: Optional[int] = None
    inner: Optional['LoopGenerator'] = None

    def __post_init__(self):
        if self.type not in GENERATOR_TYPES:
            raise ParseError(f"unknown generator type {self.type!r}")
        if self.count < 1:
            raise ValidationError(f"sample count must be >= 1, got {self.count}")
        if self.type == 'boundary':
            if self.sign not in (1, -1):
                raise ValidationError(f"boundary sign must be +1 or -1, got {self.sign!r}")
            if self.inner is None:
                raise ParseError("boundary generator needs an 'inner' generator")
        elif self.type == 'constant' and not self.diag and self.matrix is None:
            raise ParseError("constant generator needs 'diag' or 'matrix'")
        elif self.type == 'conjugated_diag':
            m = len(self.diag)
            i, j = self.plane
            if not (0 <= i < m and 0 <= j < m and i != j):
                raise ValidationError(f"rotation plane {self.plane} does not fit dimension {m}",
                                      {'plane': list(self.plane), 'm': m})

    @property
    def m(self) -> int:
        if self.type == 'boundary':
            return 1 + self.inner.m
        if self.matrix is not None:
            return len(self.matrix)
        return len(self.diag)

    def _base(self) -> np.ndarray:
        if self.matrix is not None:
            return np.array(self.matrix, dtype=float)
        return np.diag(np.array(self.diag, dtype=float))

    def _sample(self, t: float) -> np.ndarray:
        if self.type == 'boundary':
            inner = self.inner._sample(t)
            out = np.zeros((self.m, self.m))
            out[0, 0] = self.sign
            out[1:, 1:] = inner
            return out
        base = self._base()
        if self.type == 'constant':
            return base
        r = _rotation(self.m, self.plane, 2.0 * math.pi * float(self.turns) * t)
        return r @ base @ r.T

    def samples(self, count: Optional[int] = None) -> Tuple[np.ndarray, ...]:
        count = self.count if count is None else count
        if count < 1:
            raise ValidationError(f"sample count must be >= 1, got {count}")
        gap = float(np.abs(self._sample(1.0) - self._sample(0.0)).max())
        if gap > CLOSURE_TOL:
            raise LoopNotClosed("generator does not return to its starting matrix",
                                {'gap': gap, 'turns': str(self.turns)})
        return tuple(self._sample(k / count) for k in range(count))

    def build(self, count: Optional[int] = None, name: str = '') -> MatrixLoop:
        count = self.count if count is None else count
        gen = replace(self, count=count)
        if self.type == 'boundary':
            return MatrixLoop(gen.samples(), 'boundary', self.sign, gen, name)
        return MatrixLoop(gen.samples(), 'interior', None, gen, name)

    def refined(self) -> 'LoopGenerator':
        return replace(self, count=2 * self.count)

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'type': self.type, 'count': self.count}
        if self.type == 'boundary':
            inner = self.inner.to_json()
            inner.pop('count', None)
            payload.update(sign=self.sign, inner=inner)
            return payload
        if self.matrix is not None:
            payload['matrix'] = [list(row) for row in self.matrix]
        else:
            payload['diag'] = list(self.diag)
        if self.type == 'conjugated_diag':
            payload['plane'] = [self.plane[0] + 1, self.plane[1] + 1]
            payload['turns'] = str(self.turns)
        return payload

    @classmethod
    def from_json(cls, obj: Mapping[str, Any], count: Optional[int] = None) -> 'LoopGenerator':
        if not isinstance(obj, Mapping) or 'type' not in obj:
            raise ParseError("generator object needs a 'type'")
        kind = obj['type']
        count = int(obj.get('count', count if count is not None else 16))
        if kind == 'boundary':
            if 'inner' not in obj:
                raise ParseError("boundary generator needs an 'inner' generator")
            inner = cls.from_json(obj['inner'], count)
            return cls('boundary', count=count, sign=obj.get('sign'), inner=inner)
        matrix = obj.get('matrix')
        if matrix is not None:
            matrix = tuple(tuple(float(x) for x in row) for row in matrix)
        # planes are written 1-based, as in "the (1,2)-plane"
        plane = obj.get('plane', [1, 2])
        if len(plane) != 2:
            raise ParseError(f"plane must name two axes, got {plane!r}")
        return cls(
            type=kind,
            diag=tuple(float(x) for x in obj.get('diag', ())),
            matrix=matrix,
            plane=(int(plane[0]) - 1, int(plane[1]) - 1),
            turns=_parse_turns(obj.get('turns', 0)),
            count=count,
        )


# ---------------------------------------------------------------------------
# Validation and kernel sections
# ---------------------------------------------------------------------------

def _check_block(sample: np.ndarray, sign: int, index: int):
    if abs(sample[0, 0] - sign) > BLOCK_TOL or np.abs(sample[0, 1:]).max(initial=0.0) > BLOCK_TOL:
        raise BlockStructureViolated(
            f"sample {index} does not have first row (boundary_sign, 0, ..., 0)",
            {'sample': index, 'first_row': [float(x) for x in sample[0]]},
        )


def validate_loop(loop: MatrixLoop) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Check the loop invariants; returns the eigen-decomposition of every sample"""
    if not loop.samples:
        raise ValidationError("loop has no samples")
    m = loop.m
    if m < 1:
        raise InvalidDimension("loop samples must be at least 1x1")
    if loop.location not in LOCATIONS:
        raise ValidationError(f"location must be one of {LOCATIONS}, got {loop.location!r}")
    if loop.location == 'boundary':
        if loop.boundary_sign not in (1, -1):
            raise ValidationError("boundary loop needs boundary_sign +1 or -1")
    elif loop.boundary_sign is not None:
        raise ValidationError("boundary_sign is only allowed on boundary loops")

    spectra = []
    for index, sample in enumerate(loop.samples):
        if sample.shape != (m, m):
            raise ValidationError(f"sample {index} has shape {sample.shape}, expected {(m, m)}",
                                  {'sample': index})
        check_symmetric(sample)
        if loop.location == 'boundary':
            _check_block(sample, loop.boundary_sign, index)
        spectra.append(checked_spectrum(sample))

    counts = [int(np.count_nonzero(values < 0)) for values, _ in spectra]
    if len(set(counts)) > 1:
        raise NonConstantNegativeIndex("number of negative eigenvalues changes along the loop",
                                       {'negative_counts': counts})
    return spectra


def kernel_wedge(a) -> ExteriorVector:
    """Unit generator of ker K(a): wedge of the negative eigenvectors of a"""
    values, vectors = checked_spectrum(a)
    return negative_wedge(values, vectors)


def _chain(sections: Sequence[np.ndarray]) -> Tuple[int, float]:
    sign = 1
    min_overlap = 1.0
    n = len(sections)
    for i in range(n):
        j = (i + 1) % n
        overlap = float(np.dot(sections[i], sections[j]))
        if abs(overlap) < OVERLAP_THRESHOLD:
            raise SamplingTooCoarse(
                f"kernel lines at samples {i} and {j} are nearly orthogonal; supply more samples",
                {'sample': i, 'next': j, 'overlap': abs(overlap)},
            )
        if overlap < 0:
            sign = -sign
        min_overlap = min(min_overlap, abs(overlap))
    return sign, min_overlap


def _flip_columns(vectors: np.ndarray, rng: Optional[np.random.Generator]) -> np.ndarray:
    if rng is None:
        return vectors
    return vectors * rng.choice([-1.0, 1.0], size=vectors.shape[1])


def _wedge_chain(loop: MatrixLoop, sign_flips: Optional[np.random.Generator]):
    spectra = validate_loop(loop)
    sections = [negative_wedge(values, _flip_columns(vectors, sign_flips)).coeffs
                for values, vectors in spectra]
    sign, min_overlap = _chain(sections)
    return spectra, sign, min_overlap


def monodromy(loop: MatrixLoop, sign_flips: Optional[np.random.Generator] = None) -> Tuple[int, float]:
    """
    (sign, min_overlap) of the kernel line around the loop.

    sign_flips, when given, randomizes the sign of every eigenvector before
    wedging; the result must not depend on it.
    """
    _, sign, min_overlap = _wedge_chain(loop, sign_flips)
    return sign, min_overlap


# ---------------------------------------------------------------------------
# Index
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleIndexResult:
    monodromy: int
    parity: str
    ind2: int
    min_overlap: float
    negative_index: int = 0
    samples: int = 0
    location: str = 'interior'
    route: str = 'wedge'
    name: str = ''

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'monodromy': self.monodromy,
            'parity': self.parity,
            'ind2': self.ind2,
            'min_overlap': round(self.min_overlap, 12),
            'negative_index': self.negative_index,
            'samples': self.samples,
            'location': self.location,
            'route': self.route,
        }
        if self.name:
            payload['name'] = self.name
        return payload


def _result(loop: MatrixLoop, spectra, sign: int, min_overlap: float, route: str) -> CircleIndexResult:
    p = int(np.count_nonzero(spectra[0][0] < 0))
    return CircleIndexResult(
        monodromy=sign,
        parity='even' if p % 2 == 0 else 'odd',
        ind2=1 if sign == 1 else 0,
        min_overlap=min_overlap,
        negative_index=p,
        samples=loop.count,
        location=loop.location,
        route=route,
        name=loop.name,
    )


def ind2(loop: MatrixLoop, sign_flips: Optional[np.random.Generator] = None) -> CircleIndexResult:
    spectra, sign, min_overlap = _wedge_chain(loop, sign_flips)
    return _result(loop, spectra, sign, min_overlap, 'wedge')


def ind2_oracle(loop: MatrixLoop) -> CircleIndexResult:
    """Same index, with the kernel line read off the dense 2^m x 2^m operator K"""
    if loop.m > MAX_ORACLE_DIM:
        raise DimensionTooLarge(f"dense route limited to m <= {MAX_ORACLE_DIM}, got m = {loop.m}",
                                {'m': loop.m})
    spectra = validate_loop(loop)
    sections = []
    for index, (sample, (values, _)) in enumerate(zip(loop.samples, spectra)):
        k_values, k_vectors = np.linalg.eigh(K_op(sample).matrix)
        trace_abs = float(np.abs(values).sum())
        if k_values[1] < GAP_TOL * trace_abs:
            raise DegenerateGap("kernel of K is not resolvable", {'sample': index})
        sections.append(k_vectors[:, 0])
    sign, min_overlap = _chain(sections)
    return _result(loop, spectra, sign, min_overlap, 'oracle')


def boundary_reduce(loop: MatrixLoop) -> MatrixLoop:
    """The (m-1)-dimensional loop A0(t) obtained by deleting the normal row and column"""
    if loop.location != 'boundary':
        raise NotBoundaryLoop("only boundary loops can be reduced", {'location': loop.location})
    if loop.m < 2:
        raise InvalidDimension("a 1x1 boundary loop has nothing left after reduction")
    for index, sample in enumerate(loop.samples):
        _check_block(sample, loop.boundary_sign, index)
    inner = loop.generator.inner if loop.generator is not None else None
    if inner is not None:
        inner = replace(inner, count=loop.count)
    reduced = tuple(sample[1:, 1:].copy() for sample in loop.samples)
    return MatrixLoop(reduced, 'interior', None, inner, loop.name)


def refine_samples(loop: MatrixLoop) -> MatrixLoop:
    """Double the sampling: through the generator when known, else by midpoints"""
    if loop.generator is not None:
        refined = loop.generator.refined()
        out = refined.build(name=loop.name)
        if loop.generator.type != 'boundary' and loop.location == 'boundary':
            return replace(out, location='boundary', boundary_sign=loop.boundary_sign)
        return out
    samples: List[np.ndarray] = []
    n = loop.count
    for i, sample in enumerate(loop.samples):
        samples.append(sample)
        samples.append(0.5 * (sample + loop.samples[(i + 1) % n]))
    return replace(loop, samples=tuple(samples))


def reverse(loop: MatrixLoop) -> MatrixLoop:
    """Traverse the loop backwards, keeping the first sample in place"""
    samples = (loop.samples[0],) + tuple(reversed(loop.samples[1:]))
    return replace(loop, samples=samples, generator=None)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def load_loop(obj: Mapping[str, Any]) -> MatrixLoop:
    """
    Loop object, either explicit
        {"m", "location", "boundary_sign"?, "samples": [[[row], ...], ...]}
    or generated
        {"generator": {"type", "diag", "plane", "turns", "count"}, "location"?}
    """
    if not isinstance(obj, Mapping):
        raise ParseError("loop must be a JSON object")
    name = str(obj.get('name', ''))
    location = obj.get('location')
    sign = obj.get('boundary_sign')

    if 'generator' in obj:
        gen = LoopGenerator.from_json(obj['generator'])
        loop = gen.build(name=name)
        if location is not None and location != loop.location:
            if location == 'boundary' and gen.type != 'boundary':
                loop = replace(loop, location='boundary', boundary_sign=sign)
            else:
                raise ValidationError(f"generator of type {gen.type!r} cannot be {location!r}")
        validate_loop(loop)
        return loop

    if 'samples' not in obj:
        raise ParseError("loop needs 'samples' or 'generator'")
    try:
        samples = tuple(np.array(s, dtype=float) for s in obj['samples'])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"loop samples must be numeric matrices: {exc}") from exc
    if any(s.ndim != 2 for s in samples):
        raise ParseError("every loop sample must be a matrix")
    loop = MatrixLoop(samples, location or 'interior', sign, None, name)
    if 'm' in obj and samples and int(obj['m']) != loop.m:
        raise ValidationError(f"declared m = {obj['m']} but samples are {loop.m}x{loop.m}")
    validate_loop(loop)
    return loop


def loop_to_json(loop: MatrixLoop) -> Dict[str, Any]:
    payload: Dict[str, Any] = {'m': loop.m, 'location': loop.location}
    if loop.boundary_sign is not None:
        payload['boundary_sign'] = loop.boundary_sign
    if loop.name:
        payload['name'] = loop.name
    if loop.generator is not None:
        payload['generator'] = loop.generator.to_json()
    else:
        payload['samples'] = [s.tolist() for s in loop.samples]
    return payload
