import json

import numpy as np
import pytest

from kervaire import builders
from kervaire.errors import MissingFace, NotAnIsomorphism, ParseError, ValidationError
from kervaire.simplicial import ComplexPair, euler, f_vector, is_closed

from tests.conftest import COMPLEXES, SCENARIOS


def test_named_complexes():
    assert f_vector(builders.point()) == [1]
    assert f_vector(builders.simplex(3)) == [4, 6, 4, 1]
    assert f_vector(builders.sphere(2)) == [4, 6, 4]
    assert f_vector(builders.mobius_band()) == [5, 10, 5]


def test_bipartite_cycle():
    c = builders.cycle(2, bipartite=True)
    assert sorted(c.vertices) == ['a0', 'a1', 'b0', 'b1']
    assert euler(c) == 0
    assert all(s[0].startswith('a') for s in c.level(1))


@pytest.mark.parametrize('call', [
    lambda: builders.simplex(-1),
    lambda: builders.cycle(2),
    lambda: builders.cycle(1, bipartite=True),
])
def test_rejects_bad_sizes(call):
    with pytest.raises(ValidationError):
        call()


def test_factor_automorphism_rotates_circle():
    c = builders.build_complex({'kind': 'product', 'factors': [
        {'kind': 'cycle', 'length': 2, 'bipartite': True}, {'kind': 'sphere', 'dim': 1}]})
    phi = builders.factor_automorphism(c, 0, {'a0': 'a1', 'a1': 'a0', 'b0': 'b1', 'b1': 'b0'})
    assert phi('(a0,2)') == '(a1,2)'
    assert all(phi.apply(s) in c for s in c.all_simplices())


def test_factor_automorphism_must_permute():
    c = builders.build_complex({'kind': 'product', 'factors': [
        {'kind': 'cycle', 'length': 3}, {'kind': 'point'}]})
    with pytest.raises(NotAnIsomorphism):
        builders.factor_automorphism(c, 0, {'0': '7'})


class TestRecipes:
    def test_cone_is_a_ball(self):
        ball = builders.build_complex({'kind': 'cone', 'of': {'kind': 'sphere', 'dim': 2}})
        assert f_vector(ball) == [5, 10, 10, 4]
        assert not is_closed(ball)

    def test_disjoint_union(self):
        c = builders.build_complex({'kind': 'disjoint_union',
                                    'parts': [{'kind': 'point'}, {'kind': 'point'}]})
        assert c.vertices == ('0:0', '1:0')

    def test_missing_key(self):
        with pytest.raises(ParseError):
            builders.build_complex({'kind': 'sphere'})

    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            builders.build_complex({'kind': 'torus'})


class TestJson:
    def test_undeclared_vertex(self):
        with pytest.raises(MissingFace):
            builders.load_complex(COMPLEXES / 'broken.json')

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"top_simplices": [', encoding='utf-8')
        with pytest.raises(ParseError):
            builders.read_json(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            builders.read_json(tmp_path / 'absent.json')

    def test_pair_with_boundary(self):
        pair = builders.load_pair(COMPLEXES / 'd3.json')
        assert f_vector(pair.sub) == [4, 6, 4]

    def test_sub_override(self):
        pair = builders.load_pair(COMPLEXES / 's5.json', 'boundary')
        assert pair.sub.is_empty()

    def test_scenario_file_yields_manifold(self):
        c = builders.load_complex(SCENARIOS / 's5.json')
        assert f_vector(c) == f_vector(builders.sphere(5))

    def test_unknown_sub(self):
        with pytest.raises(ParseError):
            builders.pair_from_json({'build': {'kind': 'point'}, 'sub': 'interior'})

    def test_dump_and_reload(self, tmp_path):
        pair = ComplexPair(builders.simplex(2), builders.boundary_subcomplex(builders.simplex(2)))
        path = tmp_path / 'triangle.json'
        builders.dump_complex(pair, path)
        stored = json.loads(path.read_text(encoding='utf-8'))
        assert stored['top_simplices'] == [['0', '1', '2']]
        assert builders.load_pair(path) == pair


def test_random_subcomplex_is_a_subcomplex():
    rng = np.random.default_rng(7)
    c = builders.random_complex(rng)
    pair = builders.random_subcomplex(rng, c)
    assert pair.sub.is_subcomplex_of(c)
