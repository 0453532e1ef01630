#!/usr/bin/env python3
"""
Kervaire semi-characteristic checks from the command line.

Every command writes one JSON document to stdout (tables with --pretty) and
diagnostics to stderr. Exit codes: 0 pass, 1 failure or internal error,
2 rejected input or violated precondition.
"""

import functools
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict

import click

from kervaire import __version__, builders, output
from kervaire.checks import SUITES, run_suite
from kervaire.circleindex import ind2, ind2_oracle, load_loop, reverse
from kervaire.config import settings
from kervaire.errors import KervaireError, ParseError
from kervaire.harness import (
    MODES, load_scenario, resolve_automorphism, resolve_sides, run_scenarios, run_verification,
    scenario_paths,
)
from kervaire.simplicial import (
    ComplexPair, betti, boundary_subcomplex, cut, euler, euler_relative, f_vector, glue,
    kappa, kappa_relative, relative_betti,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class CliState:
    pretty: bool = False
    verbose: bool = False

    def log(self, message: str):
        if self.verbose:
            output.info(message)


def emit(ctx: click.Context, command: str, payload: Dict[str, Any], exit_code: int = EXIT_OK):
    """Write the payload once and leave with exit_code"""
    state: CliState = ctx.obj
    document = {'command': command, **payload}
    click.echo(output.format_output(document, 'pretty' if state.pretty else 'json'))
    if exit_code != EXIT_OK:
        sys.exit(exit_code)


def handle_errors(command: str):
    """Turn library errors into a diagnostic, a JSON error document and an exit code"""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            ctx = click.get_current_context()
            try:
                return func(*args, **kwargs)
            except KervaireError as exc:
                output.failure(f"{exc.kind}: {exc.message}")
                emit(ctx, command, {'status': 'error', **exc.to_dict()}, exc.exit_code)
            except (OSError, ValueError) as exc:
                output.failure(f"{type(exc).__name__}: {exc}")
                emit(ctx, command, {'status': 'error', 'error': type(exc).__name__,
                                    'message': str(exc)}, EXIT_FAIL)
        return wrapper
    return decorator


def _field(gf2: bool) -> str:
    return 'GF2' if gf2 else 'Q'


@click.group()
@click.option('--pretty', is_flag=True, default=settings.output == 'pretty',
              help='Human-readable tables instead of JSON')
@click.option('--verbose', '-v', is_flag=True, help='Progress diagnostics on stderr')
@click.version_option(version=__version__, prog_name='kervaire')
@click.pass_context
def main(ctx, pretty, verbose):
    """Kervaire semi-characteristic, circle index and theorem verification"""
    output.enable_color()
    for name, raw in settings.ignored:
        output.warning(f"ignoring {name}={raw!r}, using the default")
    ctx.obj = CliState(pretty=pretty, verbose=verbose)


@main.command('betti')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--sub', default=None, help="Subcomplex file, or 'boundary'")
@click.option('--gf2', is_flag=True, help='Coefficients in GF(2) instead of Q')
@click.pass_context
@handle_errors('betti')
def cmd_betti(ctx, path, sub, gf2):
    """Betti numbers of a complex, or of a pair with --sub"""
    pair = builders.load_pair(path, sub)
    field = _field(gf2)
    ctx.obj.log(f"complex {path}: f-vector {f_vector(pair.total)}")
    if sub is None:
        numbers = betti(pair.total, field)
    else:
        numbers = relative_betti(pair, field)
    emit(ctx, 'betti', {'betti': numbers, 'field': field, 'relative': sub is not None})


@main.command('kappa')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--rel', is_flag=True, help='Relative to the stored sub (the boundary if none)')
@click.option('--sub', default=None, help="Subcomplex file, or 'boundary'")
@click.pass_context
@handle_errors('kappa')
def cmd_kappa(ctx, path, rel, sub):
    """Kervaire semi-characteristic kappa(M) or kappa(M, dM)"""
    pair = builders.load_pair(path, sub)
    if rel or sub is not None:
        if pair.sub.is_empty() and sub is None:
            pair = ComplexPair(pair.total, boundary_subcomplex(pair.total))
        ctx.obj.log(f"relative to a sub with f-vector {f_vector(pair.sub)}")
        emit(ctx, 'kappa', {'kappa': kappa_relative(pair), 'relative': True,
                            'betti': relative_betti(pair)})
    else:
        emit(ctx, 'kappa', {'kappa': kappa(pair.total), 'relative': False,
                            'betti': betti(pair.total)})


@main.command('euler')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--sub', default=None, help="Subcomplex file, or 'boundary'")
@click.pass_context
@handle_errors('euler')
def cmd_euler(ctx, path, sub):
    """Euler characteristic (and the pair identity with --sub)"""
    pair = builders.load_pair(path, sub)
    payload = {'euler': euler(pair.total), 'f_vector': f_vector(pair.total)}
    if sub is not None:
        relative = euler_relative(pair)
        payload.update(euler_relative=relative, euler_sub=euler(pair.sub),
                       identity=relative - payload['euler'] + euler(pair.sub))
    emit(ctx, 'euler', payload)


@main.command('circle-index')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--oracle', is_flag=True, help='Read the kernel line off the dense operator K')
@click.option('--reverse', 'backwards', is_flag=True, help='Traverse the loop backwards')
@click.pass_context
@handle_errors('circle-index')
def cmd_circle_index(ctx, path, oracle, backwards):
    """Monodromy and mod-2 index of a loop file"""
    loop = load_loop(builders.read_json(path))
    if backwards:
        loop = reverse(loop)
    ctx.obj.log(f"loop {path}: m = {loop.m}, {loop.count} samples, {loop.location}")
    result = ind2_oracle(loop) if oracle else ind2(loop)
    emit(ctx, 'circle-index', result.to_dict())


@main.command('check')
@click.argument('suite', type=click.Choice(sorted(SUITES)))
@click.option('--trials', type=int, default=lambda: settings.trials, help='Trials per dimension')
@click.option('--seed', type=int, default=lambda: settings.seed, help='Random seed')
@click.option('--dim', 'dims', type=int, multiple=True, help='Dimension m (repeatable)')
@click.pass_context
@handle_errors('check')
def cmd_check(ctx, suite, trials, seed, dims):
    """Randomized property suite; failures come with (seed, dim, trial) reproducers"""
    def progress(m, failures):
        ctx.obj.log(f"{suite}: m = {m} done, {failures} failures so far")

    result = run_suite(suite, trials, seed, dims or None, progress)
    if result.passed:
        ctx.obj.log(f"{suite}: {result.trials} trials per dimension passed")
    else:
        first = result.reproducers[0]
        output.failure(f"{suite}: {result.failures} failures, first at seed {first['seed']} "
                       f"dim {first['dim']} trial {first['trial']}: {first['reason']}")
    emit(ctx, 'check', result.to_dict(), EXIT_OK if result.passed else EXIT_FAIL)


def _report_exit(report) -> int:
    if report.status == 'precondition_violated':
        return EXIT_INPUT
    if report.status != 'pass' or report.fixture_errors:
        return EXIT_FAIL
    return EXIT_OK


@main.command('verify')
@click.argument('mode', type=click.Choice(MODES))
@click.argument('path', type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors('verify')
def cmd_verify(ctx, mode, path):
    """Verify one scenario in the given mode"""
    scenario = load_scenario(path)
    ctx.obj.log(f"scenario {scenario.name}: dimension {scenario.dimension}, "
                f"{len(scenario.circles)} circles")
    report = run_verification(scenario, mode)
    for circle in report.per_circle:
        ctx.obj.log(f"circle {circle.name or '-'}: ind2 {circle.ind2} ({circle.location})")
    for problem in report.fixture_errors:
        output.warning(f"fixture: {problem}")
    if report.status == 'precondition_violated':
        output.failure(report.notes)
    elif report.passed:
        output.success(f"{scenario.name}: lhs = rhs = {report.lhs}")
    else:
        output.failure(f"{scenario.name}: lhs {report.lhs}, rhs {report.rhs}")
    emit(ctx, 'verify', report.to_dict(), _report_exit(report))


@main.command('run')
@click.argument('directory', type=click.Path(file_okay=False),
                default=lambda: settings.scenario_dir)
@click.option('--workers', type=int, default=lambda: settings.workers, help='Worker threads')
@click.pass_context
@handle_errors('run')
def cmd_run(ctx, directory, workers):
    """Verify every scenario in a directory against its declared outcome"""
    paths = scenario_paths(directory)
    if not paths:
        raise ParseError(f"no scenario files in {directory}")
    ctx.obj.log(f"verifying {len(paths)} scenarios on {workers} threads")
    reports = run_scenarios(paths, workers)
    rows = []
    for path, report in zip(paths, reports):
        rows.append({
            'file': path.name,
            'name': report.name,
            'mode': report.mode,
            'lhs': report.lhs,
            'rhs': report.rhs,
            'status': report.status,
            'expected': report.expected_status,
            'ok': report.meets_expectation,
        })
        if not report.meets_expectation:
            output.failure(f"{path.name}: {report.status}, expected {report.expected_status}")
    ok = all(row['ok'] for row in rows)
    emit(ctx, 'run', {'scenarios': rows, 'total': len(rows),
                      'ok': sum(row['ok'] for row in rows)},
         EXIT_OK if ok else EXIT_FAIL)


def _parse_recipe(source: str) -> Any:
    """Inline JSON or a path to a JSON file"""
    text = source.strip()
    if text.startswith('{'):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid recipe JSON: {exc.msg}") from exc
    return builders.read_json(source)


BUILD_KINDS = ('point', 'simplex', 'sphere', 'cycle', 'mobius', 'recipe', 'cutpaste')


@main.command('build')
@click.argument('kind', type=click.Choice(BUILD_KINDS))
@click.argument('source', required=False)
@click.option('--dim', type=int, default=None, help='Dimension for simplex/sphere')
@click.option('--length', type=int, default=3, help='Vertices of a cycle')
@click.option('--bipartite', is_flag=True, help='Bipartite cycle (rotation-friendly)')
@click.option('--automorphism', default='identity', help='Automorphism name for cutpaste')
@click.option('--with-boundary', is_flag=True, help='Store the boundary as the sub')
@click.option('-o', '--out', 'out', type=click.Path(dir_okay=False), default=None,
              help='Write the complex here (default: stdout)')
@click.pass_context
@handle_errors('build')
def cmd_build(ctx, kind, source, dim, length, bipartite, automorphism, with_boundary, out):
    """
    Construct a fixture complex.

    recipe takes an inline JSON recipe or a recipe file as SOURCE; cutpaste
    takes a cutpaste scenario and glues its two sides back together.
    """
    if kind in ('simplex', 'sphere'):
        if dim is None:
            raise ParseError(f"{kind} needs --dim")
        c = builders.build_complex({'kind': kind, 'dim': dim})
    elif kind == 'cycle':
        c = builders.cycle(length, bipartite)
    elif kind in ('point', 'mobius'):
        c = builders.build_complex({'kind': kind})
    elif kind == 'recipe':
        if source is None:
            raise ParseError("recipe needs a JSON recipe or file")
        c = builders.build_complex(_parse_recipe(source))
    else:
        if source is None:
            raise ParseError("cutpaste needs a scenario file")
        scenario = load_scenario(source)
        if scenario.cut is None:
            raise ParseError(f"scenario {scenario.name!r} has no 'cut' section")
        m = scenario.manifold.total
        side_1, side_2, interface = cut(m, resolve_sides(m, scenario.cut.sides))
        specs = {resolve_automorphism(interface, spec)[0]: spec
                 for spec in scenario.cut.automorphisms}
        if automorphism not in specs:
            raise ParseError(f"unknown automorphism {automorphism!r}",
                             {'available': sorted(specs)})
        _, phi = resolve_automorphism(interface, specs[automorphism])
        c = glue(side_1, side_2, phi)

    pair = ComplexPair(c, boundary_subcomplex(c)) if with_boundary else ComplexPair.closed(c)
    ctx.obj.log(f"built {kind}: f-vector {f_vector(c)}")
    payload: Dict[str, Any] = {'dimension': c.dimension, 'f_vector': f_vector(c)}
    if out:
        builders.dump_complex(pair, out)
        payload['written'] = str(Path(out))
    else:
        payload['complex'] = builders.pair_to_json(pair)
    emit(ctx, 'build', payload)


if __name__ == '__main__':
    main()
