"""
Abstract simplicial complexes and pairs.

Constructions (boundary, product, cut, glue, subdivision) and the invariants
the Kervaire checks need: Euler characteristic, Betti numbers of a complex
and of a pair, and the semi-characteristics kappa(M) and kappa(M, dM).

Vertex identifiers are opaque strings. A k-simplex is the tuple of its k+1
vertex ids in lexicographic order, and every construction sorts the same way,
so boundary matrices come out identical from run to run.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Set, Tuple

from kervaire.errors import (
    DimensionOutOfRange, DuplicateVertexInSimplex, EmptySide, IdentificationCollision,
    InterfaceNotSeparating, MissingFace, NonManifoldInterface, NonManifoldRidge,
    NotAnIsomorphism, NotASubcomplex, NotClosed, NotPure, UnsortedSimplex, ValidationError,
)
from kervaire.exactlin import GF2Matrix, IntMatrix, gf2_rank, rat_rank

Simplex = Tuple[str, ...]

FIELDS = ('Q', 'GF2')


def _normalize(simplex: Iterable) -> Simplex:
    vertices = [str(v) for v in simplex]
    if len(set(vertices)) != len(vertices):
        raise DuplicateVertexInSimplex(f"simplex {vertices} repeats a vertex",
                                       {'simplex': vertices})
    return tuple(sorted(vertices))


def faces(simplex: Simplex) -> List[Simplex]:
    """Codimension-one faces, face i omits vertex i"""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite abstract simplicial complex, simplices grouped by dimension"""

    vertices: Tuple[str, ...]
    simplices: Tuple[Tuple[Simplex, ...], ...]

    @classmethod
    def from_top_simplices(cls, tops: Iterable[Iterable], vertices: Iterable = ()) -> 'SimplicialComplex':
        """Close a list of simplices under taking faces"""
        levels: Dict[int, Set[Simplex]] = {}
        for top in tops:
            simplex = _normalize(top)
            if not simplex:
                continue
            for size in range(1, len(simplex) + 1):
                for face in combinations(simplex, size):
                    levels.setdefault(size - 1, set()).add(face)
        for v in vertices:
            levels.setdefault(0, set()).add((str(v),))
        if not levels:
            return cls.empty()
        n = max(levels)
        simplices = tuple(tuple(sorted(levels.get(k, ()))) for k in range(n + 1))
        return cls(tuple(s[0] for s in simplices[0]), simplices)

    @classmethod
    def empty(cls) -> 'SimplicialComplex':
        return cls((), ())

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def is_empty(self) -> bool:
        return not self.simplices

    def count(self, k: int) -> int:
        if 0 <= k < len(self.simplices):
            return len(self.simplices[k])
        return 0

    def level(self, k: int) -> Tuple[Simplex, ...]:
        if 0 <= k < len(self.simplices):
            return self.simplices[k]
        return ()

    def all_simplices(self) -> Iterable[Simplex]:
        for level in self.simplices:
            yield from level

    @cached_property
    def _members(self) -> FrozenSet[Simplex]:
        return frozenset(self.all_simplices())

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._members

    @cached_property
    def _indices(self) -> Tuple[Dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def index(self, k: int) -> Dict[Simplex, int]:
        if 0 <= k < len(self.simplices):
            return self._indices[k]
        return {}

    def maximal_simplices(self) -> List[Simplex]:
        covered: Set[Simplex] = set()
        for level in self.simplices[1:]:
            for s in level:
                covered.update(faces(s))
        return [s for s in self.all_simplices() if s not in covered]

    def is_pure(self) -> bool:
        return all(len(s) == self.dimension + 1 for s in self.maximal_simplices())

    def is_subcomplex_of(self, other: 'SimplicialComplex') -> bool:
        return all(s in other for s in self.all_simplices())

    def to_json(self) -> dict:
        return {
            'vertices': list(self.vertices),
            'top_simplices': [list(s) for s in self.maximal_simplices()],
        }


@dataclass(frozen=True)
class ComplexPair:
    """A complex together with a subcomplex (M, dM)"""

    total: SimplicialComplex
    sub: SimplicialComplex

    def __post_init__(self):
        for simplex in self.sub.all_simplices():
            if simplex not in self.total:
                raise NotASubcomplex(f"simplex {list(simplex)} of the subcomplex is missing from the total",
                                     {'simplex': list(simplex)})

    @classmethod
    def closed(cls, c: SimplicialComplex) -> 'ComplexPair':
        return cls(c, SimplicialComplex.empty())

    @property
    def dimension(self) -> int:
        return self.total.dimension


@dataclass(frozen=True)
class VertexMap:
    """Bijection between two vertex sets"""

    pairs: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        sources = [a for a, _ in self.pairs]
        targets = [b for _, b in self.pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise NotAnIsomorphism("vertex map is not a bijection")

    @classmethod
    def from_dict(cls, mapping: Mapping[str, str]) -> 'VertexMap':
        return cls(tuple(sorted((str(a), str(b)) for a, b in mapping.items())))

    @classmethod
    def identity(cls, vertices: Iterable[str]) -> 'VertexMap':
        return cls(tuple((v, v) for v in sorted(vertices)))

    @cached_property
    def mapping(self) -> Dict[str, str]:
        return dict(self.pairs)

    @property
    def domain(self) -> Set[str]:
        return set(self.mapping)

    @property
    def image(self) -> Set[str]:
        return set(self.mapping.values())

    def __call__(self, vertex: str) -> str:
        return self.mapping[vertex]

    def apply(self, simplex: Simplex) -> Simplex:
        return tuple(sorted(self.mapping[v] for v in simplex))

    def inverse(self) -> 'VertexMap':
        return VertexMap(tuple(sorted((b, a) for a, b in self.pairs)))

    def compose(self, other: 'VertexMap') -> 'VertexMap':
        """self after other"""
        return VertexMap(tuple(sorted((a, self.mapping[b]) for a, b in other.pairs)))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(c: SimplicialComplex) -> int:
    """Check face closure and sortedness; returns the dimension n"""
    for k, level in enumerate(c.simplices):
        for simplex in level:
            if len(simplex) != k + 1:
                raise ValidationError(f"simplex {list(simplex)} filed under dimension {k}",
                                      {'simplex': list(simplex)})
            if len(set(simplex)) != len(simplex):
                raise DuplicateVertexInSimplex(f"simplex {list(simplex)} repeats a vertex",
                                               {'simplex': list(simplex)})
            if list(simplex) != sorted(simplex):
                raise UnsortedSimplex(f"simplex {list(simplex)} is not sorted",
                                      {'simplex': list(simplex)})
            if k == 0:
                continue
            for face in faces(simplex):
                if face not in c:
                    raise MissingFace(f"face {list(face)} of {list(simplex)} is missing",
                                      {'simplex': list(simplex), 'face': list(face)})
    zero_cells = {s[0] for s in c.level(0)}
    if set(c.vertices) != zero_cells:
        raise ValidationError("vertex list differs from the set of 0-simplices")
    return c.dimension


# ---------------------------------------------------------------------------
# Chain complexes and invariants
# ---------------------------------------------------------------------------

def boundary_matrix(c: SimplicialComplex, k: int) -> IntMatrix:
    """Matrix of d_k: rows are k-simplices, columns (k-1)-simplices"""
    if k < 1 or k > c.dimension:
        raise DimensionOutOfRange(f"boundary index {k} outside 1..{c.dimension}",
                                  {'k': k, 'n': c.dimension})
    lower = c.index(k - 1)
    rows = []
    for simplex in c.level(k):
        row = [0] * len(lower)
        for i, face in enumerate(faces(simplex)):
            row[lower[face]] = -1 if i % 2 else 1
        rows.append(row)
    return IntMatrix.from_rows(rows, len(lower))


def _rank(m: IntMatrix, field: str) -> int:
    if field == 'Q':
        return rat_rank(m)
    if field == 'GF2':
        return gf2_rank(GF2Matrix.from_int_matrix(m))
    raise ValueError(f"unknown coefficient field {field!r}, expected one of {FIELDS}")


def _relative_boundary(p: ComplexPair, k: int) -> IntMatrix:
    full = boundary_matrix(p.total, k)
    rows = [i for i, s in enumerate(p.total.level(k)) if s not in p.sub]
    cols = [j for j, s in enumerate(p.total.level(k - 1)) if s not in p.sub]
    return full.select(rows, cols)


def _betti_from_ranks(sizes: List[int], ranks: Dict[int, int]) -> List[int]:
    return [sizes[k] - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(len(sizes))]


def betti(c: SimplicialComplex, field: str = 'Q') -> List[int]:
    """b_k = dim C_k - rank d_k - rank d_(k+1), exact"""
    n = c.dimension
    ranks = {k: _rank(boundary_matrix(c, k), field) for k in range(1, n + 1)}
    return _betti_from_ranks([c.count(k) for k in range(n + 1)], ranks)


def relative_betti(p: ComplexPair, field: str = 'Q') -> List[int]:
    """Betti numbers of the quotient chain complex C(total)/C(sub)"""
    n = p.total.dimension
    ranks = {k: _rank(_relative_boundary(p, k), field) for k in range(1, n + 1)}
    sizes = [p.total.count(k) - p.sub.count(k) for k in range(n + 1)]
    return _betti_from_ranks(sizes, ranks)


def f_vector(c: SimplicialComplex) -> List[int]:
    return [len(level) for level in c.simplices]


def euler(c: SimplicialComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(f_vector(c)))


def euler_relative(p: ComplexPair) -> int:
    """Alternating count of the cells of the quotient C(total)/C(sub)"""
    return sum((-1) ** k * sum(1 for s in level if s not in p.sub)
               for k, level in enumerate(p.total.simplices))


def alternating_sum(values: Sequence[int]) -> int:
    return sum((-1) ** k * v for k, v in enumerate(values))


def kappa(c: SimplicialComplex) -> int:
    """Kervaire semi-characteristic: even-degree Betti numbers summed mod 2"""
    return sum(betti(c)[0::2]) % 2


def kappa_relative(p: ComplexPair) -> int:
    return sum(relative_betti(p)[0::2]) % 2


# ---------------------------------------------------------------------------
# Manifold-like structure
# ---------------------------------------------------------------------------

def _ridge_cofaces(c: SimplicialComplex) -> Dict[Simplex, List[Tuple[Simplex, int]]]:
    """(n-1)-simplex -> [(top simplex, omitted position)]; refuses impure or branching complexes"""
    if not c.is_pure():
        raise NotPure(f"complex is not pure of dimension {c.dimension}")
    cofaces: Dict[Simplex, List[Tuple[Simplex, int]]] = {}
    for top in c.level(c.dimension):
        for i, face in enumerate(faces(top)):
            cofaces.setdefault(face, []).append((top, i))
    for ridge, around in cofaces.items():
        if len(around) > 2:
            raise NonManifoldRidge(f"ridge {list(ridge)} lies in {len(around)} top simplices",
                                   {'ridge': list(ridge), 'cofaces': len(around)})
    return cofaces


def boundary_subcomplex(c: SimplicialComplex) -> SimplicialComplex:
    """Subcomplex generated by the ridges with exactly one coface"""
    if c.dimension <= 0:
        return SimplicialComplex.empty()
    cofaces = _ridge_cofaces(c)
    return SimplicialComplex.from_top_simplices(
        ridge for ridge, around in cofaces.items() if len(around) == 1
    )


def is_closed(c: SimplicialComplex) -> bool:
    return boundary_subcomplex(c).is_empty()


def orientable(c: SimplicialComplex) -> int:
    """1 iff the top simplices can be oriented coherently across shared ridges"""
    n = c.dimension
    if n <= 0:
        return 1
    cofaces = _ridge_cofaces(c)
    orientation: Dict[Simplex, int] = {}
    for start in c.level(n):
        if start in orientation:
            continue
        orientation[start] = 1
        queue = deque([start])
        while queue:
            top = queue.popleft()
            for i, ridge in enumerate(faces(top)):
                induced = orientation[top] * (-1) ** i
                for other, j in cofaces[ridge]:
                    if other == top:
                        continue
                    wanted = -induced * (-1) ** j
                    if other not in orientation:
                        orientation[other] = wanted
                        queue.append(other)
                    elif orientation[other] != wanted:
                        return 0
    return 1


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def product_vertex(x: str, y: str) -> str:
    return f"({x},{y})"


def split_product_vertex(name: str) -> Tuple[str, str]:
    """Inverse of product_vertex, respecting nested parentheses"""
    if not (name.startswith('(') and name.endswith(')')):
        raise ValueError(f"{name!r} is not a product vertex")
    depth = 0
    for i, ch in enumerate(name[1:-1], start=1):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == ',' and depth == 0:
            return name[1:i], name[i + 1:-1]
    raise ValueError(f"{name!r} is not a product vertex")


def _staircases(alpha: Simplex, beta: Simplex) -> Iterable[Simplex]:
    p, q = len(alpha) - 1, len(beta) - 1
    for right_steps in combinations(range(p + q), p):
        i = j = 0
        path = [product_vertex(alpha[0], beta[0])]
        for step in range(p + q):
            if step in right_steps:
                i += 1
            else:
                j += 1
            path.append(product_vertex(alpha[i], beta[j]))
        yield tuple(path)


def product_complex(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of |a| x |b|, using each factor's vertex order"""
    tops = []
    for alpha in a.maximal_simplices():
        for beta in b.maximal_simplices():
            tops.extend(_staircases(alpha, beta))
    return SimplicialComplex.from_top_simplices(tops)


def relabel(c: SimplicialComplex, rename) -> SimplicialComplex:
    return SimplicialComplex.from_top_simplices(
        [tuple(rename(v) for v in s) for s in c.maximal_simplices()]
    )


def disjoint_union(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    tops = [tuple(f"0:{v}" for v in s) for s in a.maximal_simplices()]
    tops += [tuple(f"1:{v}" for v in s) for s in b.maximal_simplices()]
    return SimplicialComplex.from_top_simplices(tops)


def cone(c: SimplicialComplex, apex: str = 'apex') -> SimplicialComplex:
    if apex in c.vertices:
        raise ValidationError(f"apex id {apex!r} already names a vertex")
    if c.is_empty():
        return SimplicialComplex.from_top_simplices([(apex,)])
    return SimplicialComplex.from_top_simplices(s + (apex,) for s in c.maximal_simplices())


def _barycenter(simplex: Simplex) -> str:
    return f"{len(simplex) - 1:02d}:" + '|'.join(simplex)


def barycentric_subdivision(c: SimplicialComplex) -> SimplicialComplex:
    """Vertices are the simplices of c; simplices are chains under inclusion"""
    tops = []
    for top in c.maximal_simplices():
        for order in permutations(top):
            tops.append(tuple(_barycenter(tuple(sorted(order[:i + 1]))) for i in range(len(order))))
    return SimplicialComplex.from_top_simplices(tops)


def barycentric_subdivision_pair(p: ComplexPair) -> ComplexPair:
    return ComplexPair(barycentric_subdivision(p.total), barycentric_subdivision(p.sub))


def cut(m: SimplicialComplex, side_assignment: Mapping[Simplex, int]
        ) -> Tuple[ComplexPair, ComplexPair, SimplicialComplex]:
    """Split a closed pure complex along the ridges separating side 1 from side 2"""
    n = m.dimension
    cofaces = _ridge_cofaces(m) if n > 0 else {}
    if any(len(around) == 1 for around in cofaces.values()):
        raise NotClosed("only a closed complex can be cut")

    sides: Dict[Simplex, int] = {}
    for top in m.level(n):
        side = side_assignment.get(top)
        if side not in (1, 2):
            raise ValidationError(f"top simplex {list(top)} has side {side!r}, expected 1 or 2",
                                  {'simplex': list(top)})
        sides[top] = side
    one = [t for t, s in sides.items() if s == 1]
    two = [t for t, s in sides.items() if s == 2]
    if not one or not two:
        raise EmptySide("every top simplex is on the same side",
                        {'side_1': len(one), 'side_2': len(two)})

    interface = [ridge for ridge, around in cofaces.items()
                 if {sides[top] for top, _ in around} == {1, 2}]
    m1 = SimplicialComplex.from_top_simplices(one)
    m2 = SimplicialComplex.from_top_simplices(two)
    interface_complex = SimplicialComplex.from_top_simplices(interface)

    shared = m1._members & m2._members
    if shared != interface_complex._members:
        stray = sorted(shared - interface_complex._members)
        raise InterfaceNotSeparating("the two sides meet outside the interface",
                                     {'stray_simplices': [list(s) for s in stray[:5]]})
    try:
        if not is_closed(interface_complex):
            raise NonManifoldInterface("the interface has boundary")
    except NonManifoldRidge as exc:
        raise NonManifoldInterface(f"the interface branches: {exc.message}", exc.details) from exc

    return ComplexPair(m1, interface_complex), ComplexPair(m2, interface_complex), interface_complex


def _check_isomorphism(source: SimplicialComplex, target: SimplicialComplex, phi: VertexMap):
    if phi.domain != set(source.vertices) or phi.image != set(target.vertices):
        raise NotAnIsomorphism("vertex map does not match the two boundary vertex sets")
    if f_vector(source) != f_vector(target):
        raise NotAnIsomorphism("boundaries have different f-vectors")
    for simplex in source.all_simplices():
        if phi.apply(simplex) not in target:
            raise NotAnIsomorphism(f"image of {list(simplex)} is not a simplex",
                                   {'simplex': list(simplex)})


def glue(m1: ComplexPair, m2: ComplexPair, phi: VertexMap) -> SimplicialComplex:
    """M1 and M2 with x in dM1 identified with phi(x) in dM2"""
    _check_isomorphism(m1.sub, m2.sub, phi)
    boundary_vertices = set(m1.sub.vertices)

    def rename_1(v: str) -> str:
        return f"2:{phi(v)}" if v in boundary_vertices else f"1:{v}"

    def image_1(s: Simplex) -> Simplex:
        return tuple(sorted(rename_1(v) for v in s))

    def image_2(s: Simplex) -> Simplex:
        return tuple(f"2:{v}" for v in s)

    inner_1 = {image_1(s): s for s in m1.total.all_simplices() if s not in m1.sub}
    inner_2 = {image_2(s): s for s in m2.total.all_simplices() if s not in m2.sub}
    collisions = sorted(set(inner_1) & set(inner_2))
    if collisions:
        first = collisions[0]
        raise IdentificationCollision(
            "simplices of both sides land on the same glued simplex; subdivide first",
            {'simplex_1': list(inner_1[first]), 'simplex_2': list(inner_2[first]),
             'collisions': len(collisions)},
        )
    tops = [image_1(s) for s in m1.total.maximal_simplices()]
    tops += [image_2(s) for s in m2.total.maximal_simplices()]
    return SimplicialComplex.from_top_simplices(tops)
