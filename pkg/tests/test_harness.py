import pytest

from kervaire import builders
from kervaire.errors import (
    DimensionNotAdmissible, EulerPreconditionViolated, NotClosed, ParseError, ValidationError,
)
from kervaire.harness import (
    Scenario, euler_les_check, load_scenario, resolve_automorphism, resolve_sides,
    run_scenarios, run_verification, scenario_paths, verify_closed, verify_counting,
    verify_cutpaste, verify_cutpaste_all,
)
from kervaire.simplicial import (
    ComplexPair, VertexMap, betti, boundary_subcomplex, cut, f_vector, glue,
)

from tests.conftest import SCENARIOS


@pytest.fixture(scope='module')
def s1xd4():
    return load_scenario(SCENARIOS / 's1xd4.json')


def bipartite_s1xs4():
    return builders.build_complex({'kind': 'product', 'factors': [
        {'kind': 'cycle', 'length': 2, 'bipartite': True}, {'kind': 'sphere', 'dim': 4}]})


class TestLoading:
    def test_counting_fixture(self, s1xd4):
        assert s1xd4.mode == 'counting'
        assert s1xd4.dimension == 5
        assert [c.location for c in s1xd4.circles] == ['interior']

    def test_boundary_with_nonzero_euler(self):
        with pytest.raises(EulerPreconditionViolated) as info:
            load_scenario(SCENARIOS / 'bad_boundary_euler.json')
        assert info.value.details['euler_boundary'] == 2

    def test_euler_mode_accepts_any_pair(self):
        scenario = load_scenario(SCENARIOS / 'd3_euler.json')
        assert scenario.mode == 'euler'

    def test_default_mode(self, write_json):
        path = write_json('point.json', {'manifold': {'build': {'kind': 'sphere', 'dim': 5}}})
        assert load_scenario(path).mode == 'closed'

    def test_unknown_mode(self, write_json):
        path = write_json('odd.json', {'mode': 'signature',
                                       'manifold': {'build': {'kind': 'point'}}})
        with pytest.raises(ParseError):
            load_scenario(path)

    def test_cutpaste_needs_cut(self, write_json):
        path = write_json('nocut.json', {'mode': 'cutpaste',
                                         'manifold': {'build': {'kind': 'point'}}})
        with pytest.raises(ParseError):
            load_scenario(path)


class TestCounting:
    def test_single_constant_circle(self, s1xd4):
        report = verify_counting(s1xd4)
        assert (report.lhs, report.rhs, report.status) == (1, 1, 'pass')
        assert report.checks['sub_is_boundary']
        assert report.details['relative_betti'] == [0, 0, 0, 0, 1, 1]
        assert not report.fixture_errors

    def test_moebius_and_constant(self):
        report = verify_counting(load_scenario(SCENARIOS / 's1xd4_two_circles.json'))
        assert [c.ind2 for c in report.per_circle] == [0, 1]
        assert (report.rhs, report.status) == (1, 'pass')

    def test_boundary_circle_is_left_out(self):
        report = verify_counting(load_scenario(SCENARIOS / 's1xd4_boundary_circle.json'))
        assert report.details['boundary_circles'] == 1
        assert (report.rhs, report.status) == (1, 'pass')
        assert report.notes

    def test_without_circles(self, s1xd4):
        bare = Scenario('bare', s1xd4.manifold)
        report = verify_counting(bare)
        assert report.rhs == 0
        assert report.status == 'fail'

    def test_expected_values_are_fixture_checks(self, s1xd4):
        wrong = Scenario('wrong', s1xd4.manifold, s1xd4.circles, expected={'kappa_relative': 0})
        report = verify_counting(wrong)
        assert report.passed
        assert report.fixture_errors == ['kappa_relative: expected 0, computed 1']
        assert not report.meets_expectation

    def test_dimension_must_be_admissible(self):
        ball = builders.simplex(3)
        scenario = Scenario('ball', ComplexPair(ball, boundary_subcomplex(ball)))
        with pytest.raises(DimensionNotAdmissible):
            verify_counting(scenario)


class TestClosed:
    def test_five_sphere(self):
        report = verify_closed(load_scenario(SCENARIOS / 's5.json'))
        assert (report.lhs, report.rhs, report.status) == (1, 1, 'pass')

    @pytest.mark.slow
    def test_s1_times_s4(self):
        report = verify_closed(load_scenario(SCENARIOS / 's1xs4.json'))
        assert (report.lhs, report.rhs, report.status) == (0, 0, 'pass')

    def test_nonempty_sub(self, s1xd4):
        with pytest.raises(NotClosed):
            verify_closed(s1xd4)
        report = run_verification(s1xd4, 'closed')
        assert report.status == 'precondition_violated'
        assert report.error['error'] == 'NotClosed'


class TestCutPaste:
    def test_sides_touching_a_factor_vertex(self):
        m = bipartite_s1xs4()
        sides = resolve_sides(m, {'touching': ['0'], 'factor': 1})
        assert set(sides.values()) == {1, 2}

    def test_side_list_must_name_top_simplices(self):
        with pytest.raises(ValidationError):
            resolve_sides(builders.sphere(2), {'side_1': [['0', '1']]})

    def test_automorphism_specs(self):
        m = bipartite_s1xs4()
        _, _, interface = cut(m, resolve_sides(m, {'touching': ['0'], 'factor': 1}))
        name, phi = resolve_automorphism(interface, 'identity')
        assert name == 'identity'
        assert phi == VertexMap.identity(interface.vertices)
        name, phi = resolve_automorphism(interface, {'name': 'swap', 'map': {'(a0,1)': '(a0,1)'}})
        assert name == 'swap'
        with pytest.raises(ParseError):
            resolve_automorphism(interface, {'name': 'nothing'})

    @pytest.mark.slow
    def test_every_automorphism(self):
        report = run_verification(load_scenario(SCENARIOS / 's1xs4_cut.json'))
        assert (report.lhs, report.rhs, report.status) == (0, 0, 'pass')
        assert report.checks['phi_independent']
        assert report.details['kappa_side_1'] == report.details['kappa_side_2'] == 1
        assert [a['name'] for a in report.details['automorphisms']] == [
            'identity', 'rotation', 'reflection']

    @pytest.mark.slow
    def test_single_pasting(self):
        m = bipartite_s1xs4()
        sides = resolve_sides(m, {'touching': ['0'], 'factor': 1})
        _, _, interface = cut(m, sides)
        report = verify_cutpaste(m, sides, VertexMap.identity(interface.vertices))
        assert report.passed
        assert report.checks['glued_closed']

    @pytest.mark.slow
    def test_identity_regluing_restores_s1_times_s4(self):
        m = bipartite_s1xs4()
        m1, m2, interface = cut(m, resolve_sides(m, {'touching': ['0'], 'factor': 1}))
        glued = glue(m1, m2, VertexMap.identity(interface.vertices))
        assert f_vector(glued) == f_vector(m)
        assert betti(glued) == betti(m) == [1, 1, 0, 0, 1, 1]

    def test_interface_with_nonzero_euler(self):
        report = run_verification(load_scenario(SCENARIOS / 'bad_cut_interface.json'))
        assert report.status == 'precondition_violated'
        assert report.error['details']['euler_interface'] == 4
        assert report.meets_expectation

    def test_split_along_a_four_sphere(self):
        m = builders.sphere(5)
        sides = {t: 1 if '0' in t else 2 for t in m.level(5)}
        with pytest.raises(EulerPreconditionViolated):
            verify_cutpaste_all(m, sides, [])


class TestEulerPair:
    def test_ball(self):
        ball = builders.simplex(3)
        report = euler_les_check(ComplexPair(ball, boundary_subcomplex(ball)))
        assert report.passed
        assert report.details['euler_relative'] == -1
        assert report.details['relative_betti_sum'] == -1

    def test_empty_sub(self):
        report = euler_les_check(ComplexPair.closed(builders.sphere(2)))
        assert (report.lhs, report.details['euler_relative']) == (0, 2)

    def test_scenario(self):
        report = run_verification(load_scenario(SCENARIOS / 's1xd4_euler.json'))
        assert report.passed
        assert report.details['euler_relative'] == 0


@pytest.mark.slow
def test_shipped_scenarios_meet_their_expectations():
    paths = scenario_paths(SCENARIOS)
    reports = run_scenarios(paths, workers=2)
    assert len(reports) == len(paths)
    failing = [(p.name, r.status) for p, r in zip(paths, reports) if not r.meets_expectation]
    assert failing == []


def test_runner_reports_load_errors(write_json):
    write_json('broken.json', {'name': 'no manifold'})
    path = write_json('fine.json', {'mode': 'euler', 'manifold': {'build': {'kind': 'point'}}})
    reports = run_scenarios(scenario_paths(path.parent), workers=2)
    assert [r.status for r in reports] == ['error', 'pass']
