"""
Randomized property suites behind `kervaire check`.

Every trial draws from its own generator seeded with (seed, m, trial), so a
failing trial is reproduced from those three numbers alone.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from kervaire import builders
from kervaire.circleindex import (
    LoopGenerator, MatrixLoop, boundary_reduce, ind2, ind2_oracle, monodromy, refine_samples,
)
from kervaire.clifford import MAX_DIM, K_op, c_op, chat_op, hat_A, lemma1_kernel
from kervaire.errors import DimensionTooLarge, InvalidDimension, KervaireError, ParseError
from kervaire.harness import euler_les_check

MAX_REPRODUCERS = 10
DET_FLOOR = 1e-3
ENTRY_RANGE = 3.0
PSD_TOL = 1e-8
GAP_TOL = 1e-6
OVERLAP_MIN = 0.999
BASIS_TOL = 1e-9
ROUTE_TURNS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2))
ROUTE_SAMPLES = 32

TrialFn = Callable[[np.random.Generator, int], Optional[str]]


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    dims: List[int]
    failures: int = 0
    reproducers: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, m: int, trial: int, reason: str):
        self.failures += 1
        if len(self.reproducers) < MAX_REPRODUCERS:
            self.reproducers.append({'seed': self.seed, 'dim': m, 'trial': trial, 'reason': reason})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'seed': self.seed,
            'trials': self.trials,
            'dims': list(self.dims),
            'total_trials': self.trials * len(self.dims),
            'failures': self.failures,
            'reproducers': list(self.reproducers),
            'status': 'pass' if self.passed else 'fail',
        }


def trial_rng(seed: int, m: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, m, trial])


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def random_rational_vector(rng: np.random.Generator, m: int) -> List[Fraction]:
    nums = rng.integers(-9, 10, size=m)
    dens = rng.integers(1, 7, size=m)
    return [Fraction(int(n), int(d)) for n, d in zip(nums, dens)]


def clear_denominators(*vectors: Sequence[Fraction]) -> Tuple[List[List[int]], int]:
    """Scale all vectors by the lcm of their denominators"""
    scale = math.lcm(*(x.denominator for v in vectors for x in v)) if vectors else 1
    return [[int(x * scale) for x in v] for v in vectors], scale


def random_symmetric(rng: np.random.Generator, m: int, floor: float = DET_FLOOR,
                     attempts: int = 100) -> np.ndarray:
    """Entries uniform in [-3, 3], resampled until |det| >= floor"""
    for _ in range(attempts):
        upper = rng.uniform(-ENTRY_RANGE, ENTRY_RANGE, size=(m, m))
        a = np.triu(upper) + np.triu(upper, 1).T
        if abs(np.linalg.det(a)) >= floor:
            return a
    raise KervaireError(f"could not draw an invertible {m}x{m} matrix in {attempts} attempts")


def random_diag(rng: np.random.Generator, m: int, mixed_plane: bool = True) -> Tuple[float, ...]:
    """Magnitudes in [0.5, 3]; with mixed_plane the first two entries have opposite signs"""
    mags = rng.uniform(0.5, 3.0, size=m)
    signs = rng.choice([-1.0, 1.0], size=m)
    if mixed_plane and m >= 2:
        signs[0], signs[1] = -1.0, 1.0
    return tuple(float(x) for x in mags * signs)


def random_generator(rng: np.random.Generator, m: int, turns: Optional[Fraction] = None,
                     count: int = ROUTE_SAMPLES) -> LoopGenerator:
    if turns is None:
        turns = ROUTE_TURNS[int(rng.integers(len(ROUTE_TURNS)))]
    if m < 2:
        return LoopGenerator('constant', diag=random_diag(rng, m, False), count=count)
    return LoopGenerator('conjugated_diag', diag=random_diag(rng, m), plane=(0, 1),
                         turns=turns, count=count)


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------

def _trial_clifford(rng: np.random.Generator, m: int) -> Optional[str]:
    (v, w), _ = clear_denominators(random_rational_vector(rng, m), random_rational_vector(rng, m))
    cv, cw, hv, hw = c_op(v), c_op(w), chat_op(v), chat_op(w)
    inner = sum(a * b for a, b in zip(v, w))
    norm2 = sum(a * a for a in v)
    eye = np.eye(1 << m, dtype=np.int64)

    if not np.array_equal((cv @ cw + cw @ cv).matrix, -2 * inner * eye):
        return "c(v)c(w) + c(w)c(v) != -2<v,w>"
    if not np.array_equal((hv @ hw + hw @ hv).matrix, 2 * inner * eye):
        return "c^(v)c^(w) + c^(w)c^(v) != 2<v,w>"
    if not np.array_equal((cv @ hw + hw @ cv).matrix, 0 * eye):
        return "c(v)c^(w) + c^(w)c(v) != 0"
    if not np.array_equal((cv @ cv).matrix, -norm2 * eye):
        return "c(v)^2 != -|v|^2"
    if not cv.is_skew_adjoint():
        return "c(v) is not skew-adjoint"
    if not hv.is_self_adjoint():
        return "c^(v) is not self-adjoint"
    return None


def _trial_lemma1(rng: np.random.Generator, m: int) -> Optional[str]:
    a = random_symmetric(rng, m)
    values = np.linalg.eigvalsh(a)
    trace_abs = float(np.abs(values).sum())
    k_values, k_vectors = np.linalg.eigh(K_op(a).matrix)
    if k_values[0] < -PSD_TOL * trace_abs:
        return f"K has eigenvalue {k_values[0]:.3e} < 0"
    if k_values[1] < GAP_TOL * trace_abs:
        return "kernel of K is not one-dimensional"
    frame, _ = np.linalg.qr(rng.normal(size=(m, m)))
    drift = (hat_A(a, frame) - hat_A(a)).norm()
    if drift > BASIS_TOL * max(1.0, trace_abs):
        return f"A^ depends on the frame (drift {drift:.3e})"
    kernel, parity = lemma1_kernel(a)
    det_positive = np.linalg.det(a) > 0
    if parity != (0 if det_positive else 1):
        return f"parity {parity} contradicts sign of det"
    if kernel.parity() != parity:
        return "kernel generator has the wrong degree parity"
    overlap = abs(float(np.dot(kernel.coeffs, k_vectors[:, 0])))
    if overlap < OVERLAP_MIN:
        return f"wedge and dense kernel disagree (overlap {overlap:.4f})"
    return None


def _trial_euler_les(rng: np.random.Generator, m: int) -> Optional[str]:
    c = builders.random_complex(rng, n_vertices=8, max_dim=m, n_tops=6)
    report = euler_les_check(builders.random_subcomplex(rng, c))
    if not report.passed:
        return f"alternating sum is {report.lhs}"
    return None


def _trial_routes(rng: np.random.Generator, m: int) -> Optional[str]:
    turns = ROUTE_TURNS[int(rng.integers(len(ROUTE_TURNS)))]
    loop = random_generator(rng, m, turns).build()
    wedge = ind2(loop)
    dense = ind2_oracle(loop)
    expected = 1 if turns.denominator == 1 else 0
    if wedge.ind2 != dense.ind2 or wedge.parity != dense.parity:
        return f"routes disagree: wedge {wedge.ind2}, dense {dense.ind2} (turns {turns})"
    if wedge.ind2 != expected:
        return f"ind2 = {wedge.ind2} for {turns} turns, expected {expected}"
    return None


def _trial_boundary(rng: np.random.Generator, m: int) -> Optional[str]:
    sign = int(rng.choice([-1, 1]))
    inner = random_generator(rng, m - 1)
    loop = LoopGenerator('boundary', count=inner.count, sign=sign, inner=inner).build()
    full = ind2(loop)
    reduced = ind2(boundary_reduce(loop))
    if full.ind2 != reduced.ind2:
        return f"boundary_sign {sign}: ind2 {full.ind2} before reduction, {reduced.ind2} after"
    return None


def _trial_stability(rng: np.random.Generator, m: int) -> Optional[str]:
    loop = random_generator(rng, m).build()
    base, _ = monodromy(loop)
    refined, _ = monodromy(refine_samples(loop))
    if refined != base:
        return "monodromy changed when the generator sampling was doubled"
    explicit = refine_samples(MatrixLoop(loop.samples, loop.location, loop.boundary_sign))
    if monodromy(explicit)[0] != base:
        return "monodromy changed under midpoint refinement"
    flipped, _ = monodromy(loop, sign_flips=rng)
    if flipped != base:
        return "monodromy depends on eigenvector signs"
    return None


@dataclass(frozen=True)
class Suite:
    trial: TrialFn
    default_dims: Tuple[int, ...]
    min_dim: int = 1
    max_dim: int = MAX_DIM


SUITES: Dict[str, Suite] = {
    'clifford': Suite(_trial_clifford, (2, 3, 4, 6)),
    'lemma1': Suite(_trial_lemma1, (2, 4, 6), max_dim=8),
    'euler-les': Suite(_trial_euler_les, (3,), max_dim=6),
    'routes': Suite(_trial_routes, (2, 4), min_dim=2, max_dim=8),
    'boundary': Suite(_trial_boundary, (3, 4, 5), min_dim=3, max_dim=9),
    'stability': Suite(_trial_stability, (2, 3, 4), min_dim=2, max_dim=8),
}


def run_suite(name: str, trials: int, seed: int, dims: Optional[Sequence[int]] = None,
              progress: Optional[Callable[[int, int], None]] = None) -> SuiteResult:
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}, expected one of {sorted(SUITES)}")
    suite = SUITES[name]
    dims = list(dims) if dims else list(suite.default_dims)
    for m in dims:
        if m < suite.min_dim:
            raise InvalidDimension(f"suite {name!r} needs dimension >= {suite.min_dim}, got {m}",
                                   {'dim': m})
        if m > suite.max_dim:
            raise DimensionTooLarge(f"suite {name!r} is limited to dimension {suite.max_dim}, got {m}",
                                    {'dim': m})
    if trials < 0:
        raise InvalidDimension(f"trial count must be >= 0, got {trials}")

    result = SuiteResult(name, seed, trials, dims)
    for m in dims:
        for trial in range(trials):
            rng = trial_rng(seed, m, trial)
            try:
                reason = suite.trial(rng, m)
            except KervaireError as exc:
                reason = f"{exc.kind}: {exc.message}"
            if reason is not None:
                result.record(m, trial, reason)
        if progress is not None:
            progress(m, result.failures)
    return result
