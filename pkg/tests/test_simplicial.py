import numpy as np
import pytest

from kervaire.builders import cycle, load_complex, mobius_band, point, simplex, sphere
from kervaire.errors import (
    DimensionOutOfRange, DuplicateVertexInSimplex, EmptySide, IdentificationCollision,
    MissingFace, NotAnIsomorphism, NotASubcomplex, NotClosed, NotPure,
)
from kervaire.simplicial import (
    ComplexPair, SimplicialComplex, VertexMap, alternating_sum, barycentric_subdivision,
    barycentric_subdivision_pair, betti, boundary_matrix,
    boundary_subcomplex, cone, cut, disjoint_union, euler, euler_relative, f_vector, glue,
    is_closed, kappa, kappa_relative, orientable, product_complex, relative_betti,
    split_product_vertex, validate,
)

from tests.conftest import COMPLEXES


def endpoints(*names):
    return SimplicialComplex.from_top_simplices([(n,) for n in names])


def disk_pair(c):
    return ComplexPair(c, boundary_subcomplex(c))


@pytest.fixture(scope='module')
def s1xd4():
    return disk_pair(product_complex(cycle(3), simplex(4)))


from tests.conftest import COMPLEXES

class TestConstruction:
    def test_from_top_simplices_sorts_and_closes(self):
        c = SimplicialComplex.from_top_simplices([['2', '0', '1']])
        assert c.level(2) == (('0', '1', '2'),)
        assert f_vector(c) == [3, 3, 1]

    def test_repeated_vertex(self):
        with pytest.raises(DuplicateVertexInSimplex):
            SimplicialComplex.from_top_simplices([['0', '0']])

    def test_subcomplex_must_be_contained(self):
        with pytest.raises(NotASubcomplex):
            ComplexPair(simplex(1), endpoints('7'))

    def test_maximal_simplices(self):
        c = SimplicialComplex.from_top_simplices([('0', '1', '2'), ('2', '3'), ('4',)])
        assert sorted(c.maximal_simplices()) == [('0', '1', '2'), ('2', '3'), ('4',)]
        assert not c.is_pure()


class TestValidate:
    def test_sphere(self):
        assert validate(sphere(2)) == 2

    def test_missing_edge(self):
        c = SimplicialComplex(
            ('0', '1', '2'),
            ((('0',), ('1',), ('2',)), (('0', '1'), ('1', '2')), (('0', '1', '2'),)),
        )
        with pytest.raises(MissingFace) as info:
            validate(c)
        assert info.value.details['face'] == ['0', '2']

    def test_product_of_cycle_and_sphere(self):
        assert validate(product_complex(cycle(3), sphere(4))) == 5


class TestBoundaryMatrix:
    def test_triangle(self, triangle):
        d1 = boundary_matrix(triangle, 1)
        assert (d1.rows, d1.cols) == (3, 3)
        assert d1.entries[0] == (-1, 1, 0)

    def test_out_of_range(self, triangle):
        with pytest.raises(DimensionOutOfRange):
            boundary_matrix(triangle, 3)
        with pytest.raises(DimensionOutOfRange):
            boundary_matrix(triangle, 0)

    def test_composite_is_zero(self):
        c = sphere(3)
        assert boundary_matrix(c, 2).matmul(boundary_matrix(c, 1)).is_zero()


class TestBetti:
    def test_point(self):
        assert betti(point()) == [1]

    def test_five_sphere(self):
        assert betti(sphere(5)) == [1, 0, 0, 0, 0, 1]
        assert betti(sphere(5), 'GF2') == [1, 0, 0, 0, 0, 1]

    def test_moebius_band_is_a_circle(self):
        assert betti(mobius_band()) == [1, 1, 0]

    def test_unknown_field(self, triangle):
        with pytest.raises(ValueError):
            betti(triangle, 'Z')

    @pytest.mark.slow
    def test_s1_times_s4(self):
        assert betti(product_complex(cycle(3), sphere(4))) == [1, 1, 0, 0, 1, 1]

    def test_relative_interval(self):
        assert relative_betti(ComplexPair(simplex(1), endpoints('0', '1'))) == [0, 1]

    def test_relative_ball(self):
        assert relative_betti(disk_pair(simplex(3))) == [0, 0, 0, 1]

    def test_relative_with_empty_sub(self):
        c = sphere(2)
        assert relative_betti(ComplexPair.closed(c)) == betti(c)

    def test_relative_s1_times_d4(self, s1xd4):
        assert relative_betti(s1xd4) == [0, 0, 0, 0, 1, 1]


class TestEuler:
    @pytest.mark.parametrize('c, chi', [(sphere(2), 2), (cycle(3), 0), (sphere(5), 0)])
    def test_absolute(self, c, chi):
        assert euler(c) == chi

    def test_relative_ball(self):
        assert euler_relative(disk_pair(simplex(3))) == -1

    def test_relative_with_empty_sub(self):
        assert euler_relative(ComplexPair.closed(sphere(2))) == 2

    def test_relative_s1_times_d4(self, s1xd4):
        assert euler_relative(s1xd4) == 0
        assert euler(s1xd4.sub) == 0


class TestKappa:
    def test_sphere(self):
        assert kappa(sphere(5)) == 1

    def test_point(self):
        assert kappa(point()) == 1

    @pytest.mark.slow
    def test_s1_times_s4(self):
        assert kappa(product_complex(cycle(3), sphere(4))) == 0

    def test_relative_ball(self):
        assert kappa_relative(disk_pair(simplex(3))) == 0

    def test_relative_with_empty_sub(self):
        assert kappa_relative(ComplexPair.closed(sphere(5))) == kappa(sphere(5))

    def test_relative_s1_times_d4(self, s1xd4):
        assert kappa_relative(s1xd4) == 1


class TestManifoldStructure:
    def test_boundary_of_simplex(self):
        assert boundary_subcomplex(simplex(3)) == sphere(2)

    def test_sphere_is_closed(self):
        assert boundary_subcomplex(sphere(2)).is_empty()
        assert is_closed(sphere(2))

    def test_boundary_of_product(self):
        ball = cone(sphere(3))
        boundary = boundary_subcomplex(product_complex(cycle(3), ball))
        expected = product_complex(cycle(3), sphere(3))
        assert set(boundary.all_simplices()) == set(expected.all_simplices())

    def test_impure(self):
        c = SimplicialComplex.from_top_simplices([('0', '1', '2'), ('2', '3')])
        with pytest.raises(NotPure):
            boundary_subcomplex(c)

    def test_orientable(self):
        assert orientable(sphere(2)) == 1
        assert orientable(mobius_band()) == 0

    def test_product_orientable(self):
        assert orientable(product_complex(cycle(3), sphere(4))) == 1


class TestProducts:
    def test_square(self):
        square = product_complex(simplex(1), simplex(1))
        assert f_vector(square) == [4, 5, 2]

    def test_point_factor(self):
        c = sphere(2)
        assert f_vector(product_complex(point(), c)) == f_vector(c)

    def test_top_simplex_count(self):
        assert product_complex(cycle(3), sphere(4)).count(5) == 90

    def test_vertex_names(self):
        assert split_product_vertex('((0,1),a)') == ('(0,1)', 'a')
        with pytest.raises(ValueError):
            split_product_vertex('plain')

    def test_disjoint_unions(self):
        assert betti(disjoint_union(point(), point())) == [2]
        assert euler(disjoint_union(sphere(2), sphere(2))) == 4
        assert betti(disjoint_union(cycle(3), sphere(5))) == [2, 1, 0, 0, 0, 1]

    def test_subdivision(self, triangle):
        sd = barycentric_subdivision(triangle)
        assert f_vector(sd) == [7, 12, 6]
        assert euler(sd) == euler(triangle)

    def test_subdivision_keeps_relative_invariants(self):
        pair = disk_pair(simplex(3))
        sd = barycentric_subdivision_pair(pair)
        assert sd.total.count(3) == 24
        assert relative_betti(sd) == relative_betti(pair)
        assert kappa_relative(sd) == kappa_relative(pair)
        assert set(sd.sub.all_simplices()) == set(boundary_subcomplex(sd.total).all_simplices())


class TestCutAndGlue:
    def square_sides(self):
        c = cycle(4)
        return c, {('0', '1'): 1, ('1', '2'): 1, ('2', '3'): 2, ('0', '3'): 2}

    def test_cut_cycle_into_arcs(self):
        c, sides = self.square_sides()
        side_1, side_2, interface = cut(c, sides)
        assert interface.level(0) == (('0',), ('2',))
        assert side_1.sub == interface
        assert relative_betti(side_1) == [0, 1]
        assert side_2.total.count(1) == 2

    def test_all_on_one_side(self):
        c = cycle(4)
        with pytest.raises(EmptySide):
            cut(c, {t: 1 for t in c.level(1)})

    def test_cut_needs_closed_manifold(self):
        c = simplex(2)
        with pytest.raises(NotClosed):
            cut(c, {c.level(2)[0]: 1})

    def test_glue_two_arcs(self):
        arc = ComplexPair(
            SimplicialComplex.from_top_simplices([('0', '1'), ('1', '2')]), endpoints('0', '2'))
        glued = glue(arc, arc, VertexMap.identity(['0', '2']))
        assert euler(glued) == 0
        assert betti(glued) == [1, 1]

    def test_glue_two_balls(self):
        ball = disk_pair(cone(sphere(2)))
        glued = glue(ball, ball, VertexMap.identity(ball.sub.vertices))
        assert betti(glued) == [1, 0, 0, 1]
        assert is_closed(glued)

    def test_glue_needs_subdivision(self):
        with pytest.raises(IdentificationCollision):
            glue(disk_pair(simplex(3)), disk_pair(simplex(3)), VertexMap.identity('0123'))

    def test_glue_rejects_non_isomorphism(self):
        ball = disk_pair(cone(sphere(2)))
        phi = VertexMap.from_dict({'0': '0', '1': '1', '2': '2', '3': '9'})
        with pytest.raises(NotAnIsomorphism):
            glue(ball, ball, phi)


class TestVertexMap:
    def test_inverse_and_compose(self):
        phi = VertexMap.from_dict({'a': 'b', 'b': 'c', 'c': 'a'})
        assert phi.compose(phi.inverse()) == VertexMap.identity('abc')
        assert phi.apply(('a', 'c')) == ('a', 'b')

    def test_not_a_bijection(self):
        with pytest.raises(NotAnIsomorphism):
            VertexMap.from_dict({'a': 'c', 'b': 'c'})


def torus():
    return product_complex(cycle(3), cycle(3))


class TestKunneth:
    @pytest.mark.parametrize('a, b', [
        (cycle(3), cycle(3)),
        (cycle(3), sphere(2)),
        (sphere(2), simplex(1)),
        (mobius_band(), cycle(4)),
        (disjoint_union(point(), point()), cycle(3)),
    ])
    def test_betti_of_product_is_convolution(self, a, b):
        expected = np.convolve(betti(a), betti(b)).tolist()
        assert betti(product_complex(a, b)) == expected

    def test_torus(self):
        assert betti(torus()) == [1, 2, 1]
        assert betti(torus(), 'GF2') == [1, 2, 1]


@pytest.mark.parametrize('c', [
    point(), simplex(3), sphere(3), cycle(5), mobius_band(), torus(),
    disjoint_union(sphere(2), cycle(4)), cone(cycle(4)),
    load_complex(COMPLEXES / 's5.json'), load_complex(COMPLEXES / 'd3.json'),
], ids=['point', 'simplex3', 'sphere3', 'cycle5', 'mobius', 'torus', 'union', 'cone', 's5', 'd3'])
def test_alternating_betti_sum_is_euler(c):
    assert alternating_sum(betti(c)) == euler(c)
    assert alternating_sum(betti(c, 'GF2')) == euler(c)


class TestSubdivisionOfPairs:
    @pytest.mark.parametrize('c', [simplex(2), product_complex(cycle(3), simplex(1))],
                             ids=['disk', 'annulus'])
    def test_kappa_one_survives_subdivision(self, c):
        pair = disk_pair(c)
        assert kappa_relative(pair) == 1
        sd = barycentric_subdivision_pair(pair)
        assert relative_betti(sd) == relative_betti(pair)
        assert kappa_relative(sd) == 1

    def test_annulus_relative_betti(self):
        assert relative_betti(disk_pair(product_complex(cycle(3), simplex(1)))) == [0, 1, 1]


class TestCutThenGlue:
    @pytest.mark.parametrize('m, side_1', [
        (sphere(2), [('0', '1', '2'), ('0', '1', '3')]),
        (sphere(3), [t for t in sphere(3).level(3) if '0' in t]),
        (torus(), [t for t in torus().level(2) if split_product_vertex(t[0])[0] == '0'
                   and all(split_product_vertex(v)[0] in ('0', '1') for v in t)]),
    ], ids=['sphere2', 'sphere3', 'torus'])
    def test_identity_regluing_restores_the_manifold(self, m, side_1):
        sides = {t: 1 if t in side_1 else 2 for t in m.level(m.dimension)}
        m1, m2, interface = cut(m, sides)
        glued = glue(m1, m2, VertexMap.identity(interface.vertices))
        assert f_vector(glued) == f_vector(m)
        assert betti(glued) == betti(m)
        assert kappa(glued) == kappa(m)
