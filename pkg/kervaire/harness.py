"""
Scenario manifests and the three verifiers.

    counting   kappa(M, dM) = sum of ind2 over the interior circles (mod 2)
    closed     kappa(M)     = sum of ind2 over all circles (mod 2)
    cutpaste   kappa(M)     = kappa(M1 u_phi M2) for every listed phi
    euler      chi(M, dM) - chi(M) + chi(dM) = 0

A scenario file looks like

    {"name": ..., "mode": ..., "manifold": {...}, "circles": [...],
     "cut": {"sides": {...}, "automorphisms": [...]}, "expected": {...}}
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from kervaire.builders import factor_automorphism, pair_from_json, read_json
from kervaire.circleindex import CircleIndexResult, MatrixLoop, ind2, load_loop
from kervaire.errors import (
    DimensionNotAdmissible, EulerPreconditionViolated, KervaireError, NotClosed, NotOrientable,
    ParseError, PreconditionViolation, ValidationError,
)
from kervaire.simplicial import (
    ComplexPair, Simplex, SimplicialComplex, VertexMap, alternating_sum, boundary_subcomplex, cut, euler,
    euler_relative, f_vector, glue, is_closed, kappa, kappa_relative, orientable,
    relative_betti, split_product_vertex, validate,
)

MODES = ('counting', 'closed', 'cutpaste', 'euler')
STATUSES = ('pass', 'fail', 'precondition_violated', 'error')

PathLike = Union[str, Path]


@dataclass(frozen=True)
class CutSpec:
    sides: Mapping[str, Any]
    automorphisms: Tuple[Any, ...] = ('identity',)


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    manifold: ComplexPair
    circles: Tuple[MatrixLoop, ...] = ()
    mode: str = 'counting'
    expected: Mapping[str, Any] = field(default_factory=dict)
    cut: Optional[CutSpec] = None
    source: str = ''

    @property
    def dimension(self) -> int:
        return self.manifold.total.dimension


@dataclass
class VerificationReport:
    mode: str
    name: str = ''
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    per_circle: List[CircleIndexResult] = field(default_factory=list)
    status: str = 'fail'
    notes: str = ''
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    fixture_errors: List[str] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None
    expected_status: str = 'pass'

    @property
    def meets_expectation(self) -> bool:
        return self.status == self.expected_status and not self.fixture_errors

    def finalize(self) -> 'VerificationReport':
        agree = self.lhs is not None and self.lhs == self.rhs
        self.status = 'pass' if agree and all(self.checks.values()) else 'fail'
        return self

    @property
    def passed(self) -> bool:
        return self.status == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'mode': self.mode,
            'name': self.name,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'status': self.status,
            'per_circle': [r.to_dict() for r in self.per_circle],
            'checks': dict(self.checks),
            'details': dict(self.details),
            'fixture_errors': list(self.fixture_errors),
        }
        if self.notes:
            payload['notes'] = self.notes
        if self.error:
            payload['error'] = self.error
        return payload


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _load_circle(obj: Any, base_dir: Path) -> MatrixLoop:
    if isinstance(obj, Mapping) and 'file' in obj:
        path = Path(obj['file'])
        if not path.is_absolute():
            path = base_dir / path
        merged = dict(read_json(path))
        merged.update({k: v for k, v in obj.items() if k != 'file'})
        return load_loop(merged)
    return load_loop(obj)


def load_scenario(path: PathLike) -> Scenario:
    path = Path(path)
    obj = read_json(path)
    if not isinstance(obj, Mapping) or 'manifold' not in obj:
        raise ParseError(f"{path}: scenario needs a 'manifold'", {'path': str(path)})
    base_dir = path.parent

    manifold = pair_from_json(obj['manifold'], base_dir)
    validate(manifold.total)
    circles = obj.get('circles', [])
    if not isinstance(circles, list):
        raise ParseError("'circles' must be a list")
    loops = tuple(_load_circle(c, base_dir) for c in circles)

    cut_spec = None
    if 'cut' in obj:
        raw = obj['cut']
        if not isinstance(raw, Mapping) or 'sides' not in raw:
            raise ParseError("'cut' needs a 'sides' rule")
        cut_spec = CutSpec(raw['sides'], tuple(raw.get('automorphisms', ['identity'])))

    default_mode = 'cutpaste' if cut_spec else ('counting' if not manifold.sub.is_empty() else 'closed')
    mode = obj.get('mode', default_mode)
    if mode not in MODES:
        raise ParseError(f"unknown mode {mode!r}, expected one of {MODES}")
    if mode == 'cutpaste' and cut_spec is None:
        raise ParseError("cutpaste scenarios need a 'cut' section")
    validate(manifold.sub)
    # the pair identity holds for any pair; theorem modes need chi(dM) = 0
    if mode != 'euler' and not manifold.sub.is_empty():
        chi = euler(manifold.sub)
        if chi != 0:
            raise EulerPreconditionViolated(f"boundary has Euler characteristic {chi}, expected 0",
                                            {'euler_boundary': chi, 'path': str(path)})

    return Scenario(
        name=str(obj.get('name', path.stem)),
        manifold=manifold,
        circles=loops,
        mode=mode,
        expected=dict(obj.get('expected', {})),
        cut=cut_spec,
        source=str(path),
    )


# ---------------------------------------------------------------------------
# Preconditions
# ---------------------------------------------------------------------------

def _require_admissible(c: SimplicialComplex) -> int:
    n = validate(c)
    if n % 4 != 1:
        raise DimensionNotAdmissible(f"dimension {n} is not of the form 4q+1", {'dimension': n})
    return n


def _require_orientable(c: SimplicialComplex):
    if not orientable(c):
        raise NotOrientable("manifold is not orientable")


def _check_expected(report: VerificationReport, expected: Mapping[str, Any], observed: Mapping[str, Any]):
    for key, want in expected.items():
        if key not in observed:
            continue
        got = observed[key]
        if got != want:
            report.fixture_errors.append(f"{key}: expected {want}, computed {got}")


def _circle_results(circles: Sequence[MatrixLoop]) -> List[CircleIndexResult]:
    return [ind2(loop) for loop in circles]


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------

def verify_counting(s: Scenario) -> VerificationReport:
    pair = s.manifold
    n = _require_admissible(pair.total)
    _require_orientable(pair.total)
    chi_boundary = euler(pair.sub)
    if chi_boundary != 0:
        raise EulerPreconditionViolated(f"boundary has Euler characteristic {chi_boundary}",
                                        {'euler_boundary': chi_boundary})

    results = _circle_results(s.circles)
    interior = [r for r in results if r.location == 'interior']
    boundary = [r for r in results if r.location == 'boundary']

    report = VerificationReport('counting', s.name)
    report.lhs = kappa_relative(pair)
    report.rhs = sum(r.ind2 for r in interior) % 2
    report.per_circle = results
    report.checks['sub_is_boundary'] = (set(pair.sub.all_simplices())
                                        == set(boundary_subcomplex(pair.total).all_simplices()))
    report.details.update(
        dimension=n,
        relative_betti=relative_betti(pair),
        interior_circles=len(interior),
        boundary_circles=len(boundary),
        boundary_ind2_sum=sum(r.ind2 for r in boundary) % 2,
        trivial_lines=sum(r.ind2 for r in results),
    )
    if boundary:
        report.notes = "boundary circles are reported but do not enter the sum"
    report.finalize()
    _check_expected(report, s.expected, {'kappa_relative': report.lhs, 'sum_ind2': report.rhs})
    return report


def verify_closed(s: Scenario) -> VerificationReport:
    total = s.manifold.total
    if not s.manifold.sub.is_empty():
        raise NotClosed("closed verification needs an empty sub; use counting mode for pairs")
    n = _require_admissible(total)
    if not is_closed(total):
        raise NotClosed("manifold has boundary")
    _require_orientable(total)
    chi = euler(total)
    if chi != 0:
        raise EulerPreconditionViolated(f"closed manifold has Euler characteristic {chi}",
                                        {'euler': chi})

    results = _circle_results(s.circles)
    report = VerificationReport('closed', s.name)
    report.lhs = kappa(total)
    report.rhs = sum(r.ind2 for r in results) % 2
    report.per_circle = results
    report.details.update(dimension=n, circles=len(results),
                          trivial_lines=sum(r.ind2 for r in results))
    report.finalize()
    _check_expected(report, s.expected, {'kappa': report.lhs, 'sum_ind2': report.rhs})
    return report


def resolve_sides(m: SimplicialComplex, rule: Mapping[str, Any]) -> Dict[Simplex, int]:
    """
    Side of every top simplex from a manifest rule:

        {"side_1": [[v, ...], ...]}     listed top simplices on side 1
        {"touching": [v, ...]}          side 1 iff the simplex meets the set
        {"within": [v, ...]}            side 1 iff the simplex lies in the set

    With "factor": k the names are coordinates of factor k of a product.
    Every other top simplex is on side 2.
    """
    tops = m.level(m.dimension)
    if 'side_1' in rule:
        chosen = {tuple(sorted(str(v) for v in s)) for s in rule['side_1']}
        unknown = chosen - set(tops)
        if unknown:
            raise ValidationError("side_1 lists simplices that are not top simplices",
                                  {'simplices': [list(s) for s in sorted(unknown)[:5]]})
        return {t: 1 if t in chosen else 2 for t in tops}

    factor = rule.get('factor')

    def key(v: str) -> str:
        if factor is None:
            return v
        try:
            return split_product_vertex(v)[int(factor)]
        except (ValueError, IndexError) as exc:
            raise ValidationError(f"vertex {v!r} is not a product vertex") from exc

    if 'touching' in rule:
        names = set(map(str, rule['touching']))
        return {t: 1 if any(key(v) in names for v in t) else 2 for t in tops}
    if 'within' in rule:
        names = set(map(str, rule['within']))
        return {t: 1 if all(key(v) in names for v in t) else 2 for t in tops}
    raise ParseError("side rule needs 'side_1', 'touching' or 'within'", {'rule': dict(rule)})


def resolve_automorphism(interface: SimplicialComplex, spec: Any) -> Tuple[str, VertexMap]:
    """
    "identity" | {"name", "factor": k, "pairs": {...}} | {"name", "map": {...}};
    vertices a map leaves out are fixed.
    """
    if spec == 'identity' or (isinstance(spec, Mapping) and spec.get('kind') == 'identity'):
        return 'identity', VertexMap.identity(interface.vertices)
    if not isinstance(spec, Mapping):
        raise ParseError(f"cannot read automorphism {spec!r}")
    name = str(spec.get('name', 'phi'))
    if 'factor' in spec:
        return name, factor_automorphism(interface, int(spec['factor']), spec.get('pairs', {}))
    if 'map' in spec:
        mapping = {v: v for v in interface.vertices}
        mapping.update({str(k): str(v) for k, v in spec['map'].items()})
        return name, VertexMap.from_dict(mapping)
    raise ParseError(f"automorphism {name!r} needs 'factor' or 'map'")


@dataclass(frozen=True, eq=False)
class _CutData:
    lhs: int
    side_1: ComplexPair
    side_2: ComplexPair
    interface: SimplicialComplex
    kappa_1: int
    kappa_2: int


def _prepare_cut(m: SimplicialComplex, side_assignment: Mapping[Simplex, int]) -> _CutData:
    _require_admissible(m)
    if not is_closed(m):
        raise NotClosed("only a closed manifold can be cut and pasted")
    _require_orientable(m)
    side_1, side_2, interface = cut(m, side_assignment)
    chi = euler(interface)
    if chi != 0:
        raise EulerPreconditionViolated(f"interface has Euler characteristic {chi}, expected 0",
                                        {'euler_interface': chi})
    return _CutData(kappa(m), side_1, side_2, interface,
                    kappa_relative(side_1), kappa_relative(side_2))


def _paste(data: _CutData, phi: VertexMap, name: str) -> VerificationReport:
    glued = glue(data.side_1, data.side_2, phi)
    report = VerificationReport('cutpaste', name)
    report.lhs = data.lhs
    report.rhs = kappa(glued)
    report.checks['decomposition'] = report.rhs == (data.kappa_1 + data.kappa_2) % 2
    report.checks['glued_closed'] = is_closed(glued)
    report.details.update(
        automorphism=name,
        kappa_side_1=data.kappa_1,
        kappa_side_2=data.kappa_2,
        euler_interface=euler(data.interface),
        interface_f_vector=f_vector(data.interface),
        glued_f_vector=f_vector(glued),
    )
    return report.finalize()


def verify_cutpaste(m: SimplicialComplex, side_assignment: Mapping[Simplex, int],
                    phi: VertexMap) -> VerificationReport:
    return _paste(_prepare_cut(m, side_assignment), phi, 'phi')


def verify_cutpaste_all(m: SimplicialComplex, side_assignment: Mapping[Simplex, int],
                        phis: Sequence[Any], name: str = '') -> VerificationReport:
    """
    One cut, pasted back under every automorphism in phis (VertexMaps or
    manifest specs). The combined report passes iff every pasting passes
    and rhs is the same for all of them.
    """
    data = _prepare_cut(m, side_assignment)
    pastings = []
    for index, spec in enumerate(phis):
        if isinstance(spec, VertexMap):
            label, phi = f"phi{index}", spec
        else:
            label, phi = resolve_automorphism(data.interface, spec)
        pastings.append(_paste(data, phi, label))

    report = VerificationReport('cutpaste', name)
    report.lhs = data.lhs
    report.rhs = pastings[0].rhs if pastings else None
    report.checks['phi_independent'] = len({p.rhs for p in pastings}) <= 1
    report.checks['decomposition'] = all(p.checks['decomposition'] for p in pastings)
    report.checks['glued_closed'] = all(p.checks['glued_closed'] for p in pastings)
    report.checks['every_pasting_passes'] = all(p.passed for p in pastings)
    report.details.update(
        kappa_side_1=data.kappa_1,
        kappa_side_2=data.kappa_2,
        euler_interface=euler(data.interface),
        interface_f_vector=f_vector(data.interface),
        automorphisms=[{'name': p.details['automorphism'], 'rhs': p.rhs, 'status': p.status}
                       for p in pastings],
    )
    return report.finalize()


def euler_les_check(p: ComplexPair, name: str = '') -> VerificationReport:
    """chi(M, dM) - chi(M) + chi(dM) from three separate computations"""
    report = VerificationReport('euler', name)
    relative = euler_relative(p)
    absolute = euler(p.total)
    sub = euler(p.sub)
    report.lhs = relative - absolute + sub
    report.rhs = 0
    homological = alternating_sum(relative_betti(p))
    report.checks['relative_betti_sum'] = homological == relative
    report.details.update(euler_relative=relative, euler_total=absolute, euler_sub=sub,
                          relative_betti_sum=homological)
    return report.finalize()


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def _verify_scenario_cutpaste(s: Scenario) -> VerificationReport:
    m = s.manifold.total
    if not s.manifold.sub.is_empty():
        raise NotClosed("cut-and-paste needs a closed manifold (empty sub)")
    sides = resolve_sides(m, s.cut.sides)
    report = verify_cutpaste_all(m, sides, s.cut.automorphisms, s.name)
    _check_expected(report, s.expected, {'kappa': report.lhs, 'kappa_glued': report.rhs})
    return report


def _dispatch(s: Scenario, mode: str) -> VerificationReport:
    try:
        if mode == 'counting':
            return verify_counting(s)
        if mode == 'closed':
            return verify_closed(s)
        if mode == 'cutpaste':
            if s.cut is None:
                raise ParseError(f"scenario {s.name!r} has no 'cut' section")
            return _verify_scenario_cutpaste(s)
        if mode == 'euler':
            return euler_les_check(s.manifold, s.name)
        raise ParseError(f"unknown mode {mode!r}, expected one of {MODES}")
    except PreconditionViolation as exc:
        return VerificationReport(mode, s.name, status='precondition_violated',
                                  notes=exc.message, error=exc.to_dict())


def run_verification(s: Scenario, mode: Optional[str] = None) -> VerificationReport:
    """Verify in the requested mode; violated preconditions become a report"""
    report = _dispatch(s, mode or s.mode)
    report.expected_status = str(s.expected.get('status', 'pass'))
    return report


def _declared_status(path: PathLike) -> str:
    try:
        obj = read_json(path)
    except ParseError:
        return 'pass'
    expected = obj.get('expected', {}) if isinstance(obj, Mapping) else {}
    return str(expected.get('status', 'pass')) if isinstance(expected, Mapping) else 'pass'


def _run_one(path: PathLike) -> VerificationReport:
    try:
        return run_verification(load_scenario(path))
    except KervaireError as exc:
        status = 'precondition_violated' if isinstance(exc, PreconditionViolation) else 'error'
        return VerificationReport('load', Path(path).stem, status=status, notes=exc.message,
                                  error=exc.to_dict(), expected_status=_declared_status(path))


def scenario_paths(directory: PathLike) -> List[Path]:
    return sorted(Path(directory).glob('*.json'))


def run_scenarios(paths: Sequence[PathLike], workers: int = 4) -> List[VerificationReport]:
    """Verify many manifests on a thread pool; reports come back in input order"""
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(_run_one, paths))
