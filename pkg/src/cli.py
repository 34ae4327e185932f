"""Command-line front end: parse arrangement files, run a stage, report it."""

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .chambers import Chamber, format_signs
from .complexes import (WeightVector, aomoto_complex, cohomology_dims, minimal_complex, monodromies,
                        tangent_cone_compare, write_matrices_csv)
from .config import Defaults, load_defaults
from .errors import ArrangementError, DimensionMismatch, ParseError, WeightError
from .fixtures import FIXTURES, Fixture, load_fixture
from .geometry import Arrangement, Flag, Hyperplane, is_essential
from .os_algebra import Monomial, degree_map, format_combination
from .pipeline import Pipeline
from .verify import run_checks

logger = logging.getLogger(__name__)

SCHEMA = 'chamber-basis/1'
COMMANDS = ('poset', 'chambers', 'strata', 'basis', 'constants', 'aomoto', 'minimal', 'compare', 'verify')
WEIGHT_COMMANDS = ('aomoto', 'minimal', 'compare')

_RATIONAL = re.compile(r'[+-]?\d+(/\d+)?$')
_TOKEN = re.compile(r'\S+')


def _parse_rational(token: str, line: int, column: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"malformed rational {token!r}", line, column)
    value = token.split('/')
    if len(value) == 2 and int(value[1]) == 0:
        raise ParseError(f"zero denominator in {token!r}", line, column)
    return Fraction(token)


def parse_input(text: str) -> Tuple[Arrangement, Optional[Flag]]:
    """
    Parse the line-oriented arrangement format.

    A `dim l` line comes first, then one line  a_1 ... a_l b  per hyperplane,
    then optionally a `flag` line followed by one `point` line and l `dir`
    lines.  Lines starting with '#' are comments.

    Args:
        text: File contents

    Returns:
        (arrangement, flag or None)

    Raises:
        ParseError: on malformed input, with 1-based line and column
        DimensionMismatch: when a row has the wrong number of entries
    """
    dimension: Optional[int] = None
    hyperplanes: List[Hyperplane] = []
    basepoint: Optional[List[Fraction]] = None
    directions: List[List[Fraction]] = []
    in_flag = False
    last_line = 0

    for number, raw in enumerate(text.splitlines(), start=1):
        last_line = number
        if not raw.strip() or raw.lstrip().startswith('#'):
            continue
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(raw)]
        column, keyword = tokens[0]

        if dimension is None:
            if keyword != 'dim' or len(tokens) != 2:
                raise ParseError("expected 'dim <dimension>'", number, column)
            dim_column, value = tokens[1]
            if not value.isdigit() or int(value) < 1:
                raise ParseError(f"dimension must be a positive integer, got {value!r}", number, dim_column)
            dimension = int(value)
            continue

        if keyword == 'flag':
            if in_flag or len(tokens) != 1:
                raise ParseError("unexpected 'flag'", number, column)
            in_flag = True
            continue

        if keyword in ('point', 'dir'):
            if not in_flag:
                raise ParseError(f"'{keyword}' outside a flag block", number, column)
            if (keyword == 'point') != (basepoint is None):
                raise ParseError(f"unexpected '{keyword}'", number, column)
            values = [_parse_rational(token, number, col) for col, token in tokens[1:]]
            if len(values) != dimension:
                raise DimensionMismatch(f"line {number}: '{keyword}' needs {dimension} numbers, got {len(values)}")
            if keyword == 'point':
                basepoint = values
            else:
                directions.append(values)
            continue

        if in_flag:
            raise ParseError("hyperplanes must precede the flag block", number, column)
        values = [_parse_rational(token, number, col) for col, token in tokens]
        if len(values) != dimension + 1:
            raise DimensionMismatch(f"line {number}: a hyperplane needs {dimension + 1} numbers, got {len(values)}")
        hyperplanes.append(Hyperplane(values[:-1], values[-1]))

    if dimension is None:
        raise ParseError("missing 'dim' line", max(last_line, 1), 1)
    arrangement = Arrangement(dimension, hyperplanes)
    if not in_flag:
        return arrangement, None
    if basepoint is None or len(directions) != dimension:
        raise ParseError(f"a flag needs one 'point' and {dimension} 'dir' lines", last_line, 1)
    return arrangement, Flag(basepoint, directions)


def format_arrangement(arrangement: Arrangement, flag: Optional[Flag] = None) -> str:
    """Inverse of parse_input."""
    lines = [f"dim {arrangement.dimension}"]
    for h in arrangement.hyperplanes:
        lines.append(' '.join(str(x) for x in h.coefficients + (h.offset,)))
    if flag is not None:
        lines.append('flag')
        lines.append('point ' + ' '.join(str(x) for x in flag.basepoint))
        lines.extend('dir ' + ' '.join(str(x) for x in v) for v in flag.directions)
    return '\n'.join(lines) + '\n'


def parse_weights(text: str, size: int) -> WeightVector:
    """
    Parse comma-separated weights.

    Rationals and decimals (`1/100`, `0.25`) stay exact; anything else is read
    as a complex number `a+bi`.

    Raises:
        WeightError: on an unreadable item or a length other than `size`
    """
    values = []
    for item in text.split(','):
        item = item.strip()
        try:
            values.append(Fraction(item))
            continue
        except (ValueError, ZeroDivisionError):
            pass
        try:
            values.append(complex(item.replace('i', 'j')))
        except ValueError:
            raise WeightError(f"cannot read weight {item!r}") from None
    weights = WeightVector(tuple(values))
    weights.check_length(size)
    return weights


@dataclass(frozen=True)
class RunConfig:
    """One invocation: what to load, which stage to run, how to report it."""
    command: str
    input_path: Optional[str] = None
    fixture: Optional[str] = None
    weights: Optional[str] = None
    tolerance: Optional[float] = None
    seed: Optional[int] = None
    output_format: str = 'text'
    exact: bool = False
    csv_dir: Optional[str] = None


@dataclass
class Report:
    payload: dict
    lines: List[str] = field(default_factory=list)
    ok: bool = True

    def render(self, output_format: str) -> str:
        if output_format == 'json':
            return json.dumps(self.payload, indent=2, ensure_ascii=False)
        return '\n'.join(self.lines)


def _rationals(values) -> List[str]:
    return [str(v) for v in values]


def _indices(indices) -> List[int]:
    return [i + 1 for i in sorted(indices)]


def _chamber_row(pipeline: Pipeline, chamber: Chamber) -> dict:
    stratification = pipeline.stratification
    row = {'signs': format_signs(chamber.sign_vector), 'witness': _rationals(chamber.witness),
           'stratum': stratification.degree(chamber), 'sgn': stratification.sgn[chamber],
           'bounded': chamber.bounded}
    if chamber.sign_vector in pipeline.names:
        row['name'] = pipeline.names[chamber.sign_vector]
    return row


def _poset(pipeline: Pipeline, report: Report) -> None:
    poset, betti = pipeline.poset, pipeline.betti
    report.payload['flats'] = [
        {'rank': flat.rank, 'generators': _indices(flat.generators), 'mobius': poset.mobius[flat]}
        for flat in poset.flats()]
    report.payload['betti'] = list(betti.coefficients)
    report.payload['beta'] = betti.beta
    report.payload['essential'] = is_essential(pipeline.arrangement)
    report.lines.append(f"Rank sizes: {poset.rank_sizes()}")
    for flat in poset.flats():
        report.lines.append(f"  rank {flat.rank}  {flat.label:<16} μ = {poset.mobius[flat]}")
    report.lines.append(f"π(A, t) = {betti.format_polynomial()}")
    report.lines.append(f"β = {betti.beta}")


def _chambers(pipeline: Pipeline, report: Report) -> None:
    chambers, betti = pipeline.chambers, pipeline.betti
    bounded = sum(c.bounded for c in chambers)
    report.payload['chambers'] = [_chamber_row(pipeline, c) for c in chambers]
    report.payload['zaslavsky'] = {'chambers': len(chambers), 'bounded': bounded,
                                   'expected_chambers': betti.total, 'expected_bounded': betti.beta}
    report.ok = len(chambers) == betti.total and bounded == betti.beta
    report.lines.append(f"{len(chambers)} chambers ({bounded} bounded); π(A, 1) = {betti.total}, β = {betti.beta}")
    for chamber in chambers:
        witness = ', '.join(_rationals(chamber.witness))
        suffix = '  bounded' if chamber.bounded else ''
        report.lines.append(f"  {pipeline.label(chamber):<6} {chamber.label}  ({witness}){suffix}")


def _strata(pipeline: Pipeline, report: Report) -> None:
    stratification = pipeline.stratification
    flag = pipeline.flag
    report.payload['flag'] = {'point': _rationals(flag.basepoint),
                              'directions': [_rationals(v) for v in flag.directions]}
    report.payload['strata'] = [[_chamber_row(pipeline, c) for c in stratum]
                                for stratum in stratification.strata]
    report.lines.append(f"Strata sizes: {stratification.sizes}")
    for q, stratum in enumerate(stratification.strata):
        cells = ', '.join(f"{pipeline.label(c)} ({'+' if stratification.sgn[c] > 0 else '-'})" for c in stratum)
        report.lines.append(f"  ch^{q}: {cells}")


def _word(monomial: Monomial) -> List[int]:
    return [i + 1 for i in monomial.indices]


def _basis(pipeline: Pipeline, report: Report) -> None:
    basis, stratification = pipeline.basis, pipeline.stratification
    xi_tables, nu_tables = [], []
    for q, stratum in enumerate(stratification.strata):
        columns, matrix = basis.xi_table(q)
        xi_tables.append({'degree': q, 'rows': [pipeline.label(c) for c in stratum],
                          'columns': [_word(m) for m in columns],
                          'matrix': [_rationals(row) for row in matrix]})
        report.lines.append(f"Degree {q}")
        for j, monomial in enumerate(columns):
            combination = format_combination(
                (f"[{pipeline.label(c)}]", row[j]) for c, row in zip(stratum, matrix) if row[j] != 0)
            report.lines.append(f"  ξ({monomial}) = {combination}")
        rows = []
        for chamber in stratum:
            nu = basis.nu(chamber)
            rows.append({'chamber': pipeline.label(chamber),
                         'terms': [{'monomial': _word(m), 'coefficient': str(c)} for m, c in nu.terms.items()]})
            report.lines.append(f"  ν({pipeline.label(chamber)}) = {nu}")
        nu_tables.append({'degree': q, 'rows': rows})
    report.payload['xi'] = xi_tables
    report.payload['nu'] = nu_tables
    report.payload['integral'] = basis.integral


def _constants(pipeline: Pipeline, report: Report) -> None:
    constants = pipeline.constants
    deg = degree_map(constants)
    report.payload['constants'] = [
        {'degree': e.degree, 'source': pipeline.label(e.source), 'target': pipeline.label(e.target),
         'N': e.multiplicity, 'S': _indices(e.separating), 'deg': deg[(e.target, e.source)]}
        for e in constants.entries]
    for q in range(constants.dimension):
        for source in pipeline.stratification.strata[q]:
            terms = [(f"ν({pipeline.label(e.target)})", e) for e in constants.degree_entries(q)
                     if e.source == source]
            body = ' + '.join(f"{e} {target}" for target, e in terms) or '0'
            report.lines.append(f"ω_λ ∧ ν({pipeline.label(source)}) = {body}")


def _weights(config: RunConfig, pipeline: Pipeline) -> WeightVector:
    if config.weights is None:
        raise WeightError(f"'{config.command}' needs --lambda")
    weights = parse_weights(config.weights, len(pipeline.arrangement))
    if config.exact and not weights.exact:
        raise WeightError("--exact needs rational weights")
    return weights


def _dims_lines(title: str, betti_report) -> List[str]:
    ranks = ', '.join(str(r) for r in betti_report.ranks)
    return [f"{title}: dims {betti_report.dims}, ranks ({ranks}), Euler characteristic {betti_report.euler}"]


def _complex(pipeline: Pipeline, config: RunConfig, defaults: Defaults, report: Report) -> None:
    weights = _weights(config, pipeline)
    sc = pipeline.constants
    if config.command == 'compare':
        result = tangent_cone_compare(sc, weights, defaults.tolerance, exact=config.exact or None)
        report.payload['minimal'] = result.minimal.to_dict()
        report.payload['aomoto'] = result.aomoto.to_dict()
        report.payload['in_small_regime'] = result.in_small_regime
        report.payload['agree'] = result.agree
        report.ok = result.agree or not result.in_small_regime
        report.lines += _dims_lines('minimal', result.minimal) + _dims_lines('aomoto', result.aomoto)
        report.lines.append(f"in small regime: {result.in_small_regime}; agree: {result.agree}")
        return

    if config.command == 'aomoto':
        cx = aomoto_complex(sc, weights)
        betti_report = cohomology_dims(cx, defaults.tolerance, exact=config.exact,
                                       composition_tolerance=defaults.composition_tolerance)
    else:
        cx = minimal_complex(sc, weights)
        betti_report = cohomology_dims(cx, defaults.tolerance,
                                       composition_tolerance=defaults.composition_tolerance)
        report.payload['monodromy'] = [[q.real, q.imag] for q in monodromies(weights)]
    report.payload['cohomology'] = betti_report.to_dict()
    report.lines += _dims_lines(config.command, betti_report)
    if config.csv_dir:
        paths = write_matrices_csv(cx, config.csv_dir)
        report.payload['csv'] = paths
        report.lines.append(f"Wrote {len(paths)} matrices to {config.csv_dir}")


def _verify(pipeline: Pipeline, fixture: Optional[Fixture], report: Report) -> None:
    results = run_checks(pipeline, fixture)
    report.payload['checks'] = [{'name': r.name, 'passed': r.passed, 'detail': r.detail} for r in results]
    report.ok = all(r.passed for r in results)
    for r in results:
        report.lines.append(f"  {'PASS' if r.passed else 'FAIL'}  {r.name}" + (f": {r.detail}" if r.detail else ''))
    if all(r.passed for r in results if r.name in ('inverse pair', 'factorization')):
        _basis(pipeline, report)
    report.lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")


def run(config: RunConfig, defaults: Optional[Defaults] = None) -> Report:
    """
    Load the input and run one command.

    Args:
        config: What to run
        defaults: Numerical defaults; CLI values in `config` take precedence

    Returns:
        Report with a JSON payload, text lines and an overall verdict
    """
    if config.command not in COMMANDS:
        raise ValueError(f"unknown command {config.command!r}")
    defaults = defaults or load_defaults()
    overrides = {k: v for k, v in (('tolerance', config.tolerance), ('seed', config.seed)) if v is not None}
    defaults = replace(defaults, **overrides)

    fixture = None
    if config.input_path:
        with open(config.input_path, encoding='utf-8') as f:
            text = f.read()
        name = config.input_path
    else:
        fixture = load_fixture(config.fixture or 'fig1')
        text, name = fixture.text, fixture.name

    arrangement, flag = parse_input(text)
    pipeline = Pipeline(arrangement, flag, defaults, fixture.names_by_sign() if fixture else None)
    report = Report({'schema': SCHEMA, 'command': config.command, 'input': name, 'seed': defaults.seed,
                     'tolerance': defaults.tolerance})
    report.lines.append(f"Loaded {name}: {len(arrangement)} hyperplanes in R^{arrangement.dimension}")
    logger.info("running %s on %s", config.command, name)

    if config.command == 'poset':
        _poset(pipeline, report)
    elif config.command == 'chambers':
        _chambers(pipeline, report)
    elif config.command == 'strata':
        _strata(pipeline, report)
    elif config.command == 'basis':
        _basis(pipeline, report)
    elif config.command == 'constants':
        _constants(pipeline, report)
    elif config.command in WEIGHT_COMMANDS:
        _complex(pipeline, config, defaults, report)
    else:
        _verify(pipeline, fixture, report)
    report.payload['ok'] = report.ok
    return report


def build_parser(defaults: Defaults) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='chamber_basis',
        description='Chamber basis, structure constants and local-system cohomology of real arrangements')
    parser.add_argument('command', choices=COMMANDS, help='Stage to run')
    parser.add_argument('input', nargs='?', help='Arrangement file (default: the fig1 fixture)')
    parser.add_argument('--fixture', choices=sorted(FIXTURES), help='Use a bundled arrangement')
    parser.add_argument('--lambda', dest='weights',
                        help='Comma-separated weights, rational or complex a+bi (use --lambda=-1,... for a leading minus)')
    parser.add_argument('--tolerance', type=float, default=defaults.tolerance,
                        help=f'Relative singular-value cutoff (default: {defaults.tolerance:g})')
    parser.add_argument('--seed', type=int, default=defaults.seed,
                        help=f'Seed for flag search and random checks (default: {defaults.seed})')
    parser.add_argument('--json', action='store_true', help='Print the JSON report')
    parser.add_argument('--exact', action='store_true', help='Exact rational ranks for the Aomoto complex')
    parser.add_argument('--csv', dest='csv_dir', help='Also write the differentials as CSV files to this directory')
    parser.add_argument('--verbose', action='store_true', help='Log pipeline progress to stderr')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        defaults = load_defaults()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return ArrangementError.exit_code

    parser = build_parser(defaults)
    args = parser.parse_args(argv)
    if args.seed < 0 or args.tolerance < 0:
        parser.error("--seed and --tolerance must be non-negative")
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(name)s:%(levelname)s:%(message)s')
    config = RunConfig(command=args.command, input_path=args.input, fixture=args.fixture,
                       weights=args.weights, tolerance=args.tolerance, seed=args.seed,
                       output_format='json' if args.json else 'text', exact=args.exact,
                       csv_dir=args.csv_dir)
    try:
        report = run(config, defaults)
    except ArrangementError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return ArrangementError.exit_code

    print(report.render(config.output_format))
    return 0 if report.ok else 1


if __name__ == '__main__':
    sys.exit(main())
