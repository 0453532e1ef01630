"""
Named complexes, build recipes and the JSON complex/pair file format.

Complex file:  {"vertices": [...], "top_simplices": [[v, ...], ...]}
Pair file:     the same plus {"sub_top_simplices": [...]} or {"sub": "boundary"}
Recipe:        {"kind": "point" | "simplex" | "sphere" | "cycle" | "cone" |
                         "product" | "disjoint_union" | "mobius" | "complex", ...}
"""

import json
from functools import reduce
from itertools import combinations
from pathlib import Path
from typing import Any, Mapping, Optional, Union

import numpy as np

from kervaire.errors import MissingFace, NotAnIsomorphism, ParseError, ValidationError
from kervaire.simplicial import (
    ComplexPair, SimplicialComplex, VertexMap, boundary_subcomplex, cone, disjoint_union,
    product_complex, product_vertex, split_product_vertex, validate,
)

PathLike = Union[str, Path]


def point() -> SimplicialComplex:
    return SimplicialComplex.from_top_simplices([('0',)])


def simplex(n: int) -> SimplicialComplex:
    """The full n-simplex on vertices 0..n"""
    if n < 0:
        raise ValidationError(f"simplex dimension must be >= 0, got {n}")
    return SimplicialComplex.from_top_simplices([tuple(str(i) for i in range(n + 1))])


def sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex, a triangulated n-sphere"""
    if n < 0:
        raise ValidationError(f"sphere dimension must be >= 0, got {n}")
    return SimplicialComplex.from_top_simplices(combinations([str(i) for i in range(n + 2)], n + 1))


def cycle(length: int, bipartite: bool = False) -> SimplicialComplex:
    """
    Triangulated circle.

    The bipartite form has original vertices a0..a(k-1) and midpoints
    b0..b(k-1); each edge joins an a-vertex to a b-vertex, so rotations and
    reflections of the circle preserve the vertex order on every edge.
    """
    if bipartite:
        if length < 2:
            raise ValidationError(f"a bipartite cycle needs at least 2 original vertices, got {length}")
        edges = []
        for i in range(length):
            edges.append((f"a{i}", f"b{i}"))
            edges.append((f"a{(i + 1) % length}", f"b{i}"))
        return SimplicialComplex.from_top_simplices(edges)
    if length < 3:
        raise ValidationError(f"a cycle needs at least 3 vertices, got {length}")
    return SimplicialComplex.from_top_simplices(
        (str(i), str((i + 1) % length)) for i in range(length)
    )


def mobius_band() -> SimplicialComplex:
    """Minimal 5-vertex triangulation of the Moebius band"""
    return SimplicialComplex.from_top_simplices(
        (str(i), str((i + 1) % 5), str((i + 2) % 5)) for i in range(5)
    )


def random_complex(rng: np.random.Generator, n_vertices: int = 8, max_dim: int = 3,
                   n_tops: int = 6) -> SimplicialComplex:
    tops = []
    for _ in range(n_tops):
        dim = int(rng.integers(0, max_dim + 1))
        chosen = rng.choice(n_vertices, size=min(dim + 1, n_vertices), replace=False)
        tops.append(tuple(str(int(v)) for v in chosen))
    return SimplicialComplex.from_top_simplices(tops)


def random_subcomplex(rng: np.random.Generator, c: SimplicialComplex,
                      keep: float = 0.3) -> ComplexPair:
    chosen = [s for s in c.all_simplices() if rng.random() < keep]
    return ComplexPair(c, SimplicialComplex.from_top_simplices(chosen))


def factor_automorphism(c: SimplicialComplex, factor: int, pairs: Mapping[str, str]) -> VertexMap:
    """Lift a vertex permutation of one product factor to the product complex"""
    if factor not in (0, 1):
        raise ValidationError(f"factor index must be 0 or 1, got {factor}")
    mapping = {}
    for v in c.vertices:
        x, y = split_product_vertex(v)
        if factor == 0:
            mapping[v] = product_vertex(pairs.get(x, x), y)
        else:
            mapping[v] = product_vertex(x, pairs.get(y, y))
    if set(mapping.values()) != set(c.vertices):
        raise NotAnIsomorphism("factor map does not permute the product vertices")
    return VertexMap.from_dict(mapping)


# ---------------------------------------------------------------------------
# Recipes
# ---------------------------------------------------------------------------

def _require(recipe: Mapping[str, Any], key: str):
    if key not in recipe:
        raise ParseError(f"recipe {recipe.get('kind')!r} needs {key!r}", {'recipe': dict(recipe)})
    return recipe[key]


def build_complex(recipe: Mapping[str, Any]) -> SimplicialComplex:
    kind = recipe.get('kind')
    if kind == 'point':
        return point()
    if kind == 'simplex':
        return simplex(int(_require(recipe, 'dim')))
    if kind == 'sphere':
        return sphere(int(_require(recipe, 'dim')))
    if kind == 'cycle':
        return cycle(int(_require(recipe, 'length')), bool(recipe.get('bipartite', False)))
    if kind == 'mobius':
        return mobius_band()
    if kind == 'cone':
        return cone(build_complex(_require(recipe, 'of')), recipe.get('apex', 'apex'))
    if kind == 'product':
        factors = [build_complex(r) for r in _require(recipe, 'factors')]
        if not factors:
            raise ParseError("product recipe needs at least one factor")
        return reduce(product_complex, factors)
    if kind == 'disjoint_union':
        parts = [build_complex(r) for r in _require(recipe, 'parts')]
        if not parts:
            raise ParseError("disjoint_union recipe needs at least one part")
        return reduce(disjoint_union, parts)
    if kind == 'complex':
        return complex_from_json(recipe)
    raise ParseError(f"unknown recipe kind {kind!r}", {'recipe': dict(recipe)})


# ---------------------------------------------------------------------------
# JSON I/O
# ---------------------------------------------------------------------------

def read_json(path: PathLike) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"file not found: {path}", {'path': str(path)}) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})",
                         {'path': str(path)}) from exc


def complex_from_json(obj: Mapping[str, Any]) -> SimplicialComplex:
    if not isinstance(obj, Mapping) or 'top_simplices' not in obj:
        raise ParseError("complex object needs 'top_simplices'")
    tops = obj['top_simplices']
    if not isinstance(tops, list) or not all(isinstance(t, list) for t in tops):
        raise ParseError("'top_simplices' must be a list of vertex lists")
    declared = obj.get('vertices')
    if declared is not None:
        known = {str(v) for v in declared}
        for top in tops:
            for v in top:
                if str(v) not in known:
                    raise MissingFace(f"vertex {v!r} of {top} is not declared",
                                      {'simplex': [str(x) for x in top], 'face': [str(v)]})
    c = SimplicialComplex.from_top_simplices(tops, declared or ())
    validate(c)
    return c


def pair_from_json(obj: Mapping[str, Any], base_dir: Optional[PathLike] = None) -> ComplexPair:
    """Manifold object of a manifest: inline, {"file": ...} or {"build": recipe}"""
    if not isinstance(obj, Mapping):
        raise ParseError("manifold must be a JSON object")
    if 'file' in obj:
        path = Path(obj['file'])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        loaded = read_json(path)
        merged = dict(loaded)
        merged.update({k: v for k, v in obj.items() if k != 'file'})
        return pair_from_json(merged, path.parent)
    if 'build' in obj:
        total = build_complex(obj['build'])
    else:
        total = complex_from_json(obj)
    sub_spec = obj.get('sub')
    if sub_spec == 'boundary':
        sub = boundary_subcomplex(total)
    elif 'sub_top_simplices' in obj:
        sub = SimplicialComplex.from_top_simplices(obj['sub_top_simplices'])
        validate(sub)
    elif sub_spec is None:
        sub = SimplicialComplex.empty()
    else:
        raise ParseError(f"unknown sub specification {sub_spec!r}")
    return ComplexPair(total, sub)


def _manifold_object(path: PathLike) -> Any:
    """Complex or pair object of a file; scenario manifests yield their manifold"""
    obj = read_json(path)
    if isinstance(obj, Mapping) and 'manifold' in obj:
        return obj['manifold']
    return obj


def load_complex(path: PathLike) -> SimplicialComplex:
    return pair_from_json(_manifold_object(path), Path(path).parent).total


def load_pair(path: PathLike, sub: Optional[str] = None) -> ComplexPair:
    """Read a complex or pair file; sub='boundary' or a second file path overrides the stored sub"""
    pair = pair_from_json(_manifold_object(path), Path(path).parent)
    if sub is None:
        return pair
    if sub == 'boundary':
        return ComplexPair(pair.total, boundary_subcomplex(pair.total))
    return ComplexPair(pair.total, load_complex(sub))


def pair_to_json(p: ComplexPair) -> dict:
    payload = p.total.to_json()
    if not p.sub.is_empty():
        payload['sub_top_simplices'] = [list(s) for s in p.sub.maximal_simplices()]
    return payload


def dump_complex(c: Union[SimplicialComplex, ComplexPair], path: PathLike):
    pair = c if isinstance(c, ComplexPair) else ComplexPair.closed(c)
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(pair_to_json(pair), fh, indent=2, sort_keys=True)
        fh.write('\n')
