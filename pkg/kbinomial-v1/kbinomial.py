#!/usr/bin/env python3
"""
Main entry point - command-line front end of the k-binomial word toolkit
"""

import sys
import os
import argparse
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from config import ToolkitConfig
from utils import KBinomialError, get_enumeration_stats, reset_enumeration_stats
from words import parse_word, signature, binom, Word
from equivalence import equivalent, parikh_matrix, switch_neighbors, switch_class
from classgen import class2, class2_tree, exchange_trace
from nil2 import parse_signed, phi, nil_normal_form
from census import (
    class_census,
    census_table,
    count_classes,
    ll_language,
    sing_language,
    f_parikh,
    f_parikh_sum,
    check_growth_bounds,
    growth_bounds_table,
    coefficient_range,
    cake_count,
    polynomial_bound,
    interpolation_check,
)
from singletons import (
    GrowthSequence,
    validate_sequence,
    minimal_sequence,
    tower_sequence,
    rho,
    letter_factorization,
    is_singleton,
    check_prop54,
    apply_morphism_sigma,
    sigma_suffix_check,
)
from automaticity import build_slice, approx_nerode_table
from reporting import ResultFormatter, FORMATS

logger = logging.getLogger(__name__)

PUBLISHED_TABLES = {
    ('LL', 2, 3, 15): (1, 3, 5, 9, 16, 27, 49, 88, 154),
    ('LL', 3, 2, 9): (1, 4, 8, 19, 42, 62),
}
TERNARY_COUNTS = (1, 3, 9, 27, 78, 216, 568, 1410)


@dataclass
class CommandOutput:
    """What a subcommand hands back for rendering"""
    inputs: Dict[str, Any]
    result: Any
    records: Any = None
    notes: List[str] = field(default_factory=list)
    lines: Optional[List[Dict[str, Any]]] = None


def setup_logging(log_level: str = 'WARNING', log_dir: str = 'logs'):
    """Setup logging configuration; standard output stays free for results"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(log_dir, 'kbinomial.log')))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def _infer_m(text: str, m: Optional[int]) -> int:
    """Explicit --m, else the largest letter in the text"""
    if m is not None:
        return m
    separator = ',' if ',' in text else None
    if separator is None and '.' in text:
        tokens = [token.strip().rstrip("'") for token in text.split('.')]
    elif separator:
        tokens = [token.strip() for token in text.split(',')]
    else:
        tokens = list(text.strip())
    letters = [int(token) for token in tokens if token.isdigit()]
    return max(letters, default=1)


def _word(text: str, m: Optional[int]) -> Word:
    return parse_word(text, _infer_m(text, m))


def _words(texts: Sequence[str], m: Optional[int]) -> List[Word]:
    m = m if m is not None else max(_infer_m(text, None) for text in texts)
    return [parse_word(text, m) for text in texts]


def _vector(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise ValueError(f"Parikh vector must be comma-separated integers, got {text!r}")


def _sequence(args, needed: int) -> GrowthSequence:
    if args.sequence:
        return GrowthSequence(_vector(args.sequence))
    if getattr(args, 'tower', False):
        return tower_sequence(needed)
    return minimal_sequence(needed)


def cmd_binom(args) -> CommandOutput:
    u, v = _words([args.u, args.v], args.m)
    return CommandOutput({'u': u, 'v': v}, binom(u, v))


def cmd_signature(args) -> CommandOutput:
    w = _word(args.word, args.m)
    result = signature(w, args.k)
    records = [{'subword': key, 'coefficient': value} for key, value in result.as_dict().items()]
    return CommandOutput({'word': w, 'm': w.m, 'k': args.k}, result, records)


def cmd_equiv(args) -> CommandOutput:
    u, v = _words([args.u, args.v], args.m)
    return CommandOutput({'u': u, 'v': v, 'k': args.k}, equivalent(u, v, args.k))


def cmd_parikh_matrix(args) -> CommandOutput:
    w = _word(args.word, args.m or 2)
    matrix = parikh_matrix(w)
    return CommandOutput({'word': w}, matrix.as_array().tolist(),
                         {'n1': matrix.n1, 'n2': matrix.n2, 'c12': matrix.c12})


def cmd_switch_neighbors(args) -> CommandOutput:
    w = _word(args.word, args.m)
    return CommandOutput({'word': w}, switch_neighbors(w))


def cmd_switch_class(args) -> CommandOutput:
    w = _word(args.word, args.m)
    return CommandOutput({'word': w}, switch_class(w))


def cmd_class2(args) -> CommandOutput:
    w = _word(args.word, args.m)
    if args.tree:
        edges = class2_tree(w)
        records = [edge.to_record() for edge in edges]
        return CommandOutput({'word': w, 'tree': True}, records, records, lines=records)
    return CommandOutput({'word': w}, class2(w))


def cmd_trace(args) -> CommandOutput:
    w = _word(args.word, args.m)
    trace = exchange_trace(w)
    result = {
        'steps': [{'position': position, 'a': a, 'b': b} for position, a, b in trace.steps],
        'totals': {f"{b}{a}": count for (a, b), count in trace.totals.items()},
    }
    return CommandOutput({'word': w}, result, result['steps'])


def cmd_phi(args) -> CommandOutput:
    signed = parse_signed(args.word, _infer_m(args.word, args.m))
    return CommandOutput({'word': signed}, phi(signed))


def cmd_normal_form(args) -> CommandOutput:
    w = _word(args.word, args.m)
    normal_form = nil_normal_form(w)
    return CommandOutput({'word': w}, {'normal_form': str(normal_form), **normal_form.as_dict()})


def cmd_census(args) -> CommandOutput:
    inputs = {'m': args.m, 'k': args.k, 'n': args.n}
    if args.n_max is not None:
        table = census_table(args.m, args.k, args.n_max, args.budget)
        return CommandOutput({'m': args.m, 'k': args.k, 'n_max': args.n_max}, table, table)
    if args.classes:
        census = class_census(args.m, args.n, args.k, args.budget)
        records = [
            {'digest': record.signature.digest(), 'representative': str(record.representative), 'size': record.size}
            for record in census.classes
        ]
        return CommandOutput(inputs, {'count': census.count, 'classes': records}, records)
    count = count_classes(args.m, args.n, args.k, args.budget)
    return CommandOutput(inputs, count, {'m': args.m, 'k': args.k, 'n': args.n, 'count': count})


def cmd_ll(args) -> CommandOutput:
    return CommandOutput({'m': args.m, 'k': args.k, 'n': args.n}, ll_language(args.m, args.n, args.k, args.budget))


def cmd_sing(args) -> CommandOutput:
    return CommandOutput({'m': args.m, 'k': args.k, 'n': args.n}, sing_language(args.m, args.n, args.k, args.budget))


def cmd_f_parikh(args) -> CommandOutput:
    x = _vector(args.parikh)
    return CommandOutput({'parikh': x, 'k': args.k}, f_parikh(x, args.k, args.budget))


def cmd_bounds(args) -> CommandOutput:
    if args.parikh:
        reports = [check_growth_bounds(_vector(args.parikh), budget=args.budget)]
        inputs = {'parikh': _vector(args.parikh)}
    else:
        if args.n is None:
            raise ValueError("bounds needs a Parikh vector or --n")
        reports = growth_bounds_table(args.m, args.n, args.budget)
        inputs = {'m': args.m, 'n': args.n}
    notes = [
        f"uncorrected product bound fails at {list(report.parikh)}: f = {report.f} > {report.uncorrected_upper}"
        for report in reports if not report.uncorrected_upper_holds
    ]
    records = [report.to_record() for report in reports]
    return CommandOutput(inputs, records, records, notes)


def cmd_coeff_range(args) -> CommandOutput:
    values = coefficient_range(args.a, args.b, args.i, args.j, args.budget)
    return CommandOutput({'a': args.a, 'b': args.b, 'i': args.i, 'j': args.j}, sorted(values))


def cmd_cake(args) -> CommandOutput:
    return CommandOutput({'n': args.n}, cake_count(args.n))


def _rho_record(p: int, n: int, sequence: GrowthSequence) -> Dict[str, Any]:
    word = rho(p, n, sequence)
    return {'p': p, 'n': n, 'sequence': list(sequence.terms), 'runs': word, 'nb': len(word.runs)}


def cmd_rho(args) -> CommandOutput:
    sequence = _sequence(args, args.n - 1)
    return CommandOutput({'p': args.p, 'n': args.n}, _rho_record(args.p, args.n, sequence))


def cmd_validate_seq(args) -> CommandOutput:
    sequence = tower_sequence(args.tower) if args.tower else GrowthSequence(tuple(args.terms))
    report = validate_sequence(sequence)
    records = [check.to_record() for check in report.checks]
    return CommandOutput({'sequence': list(sequence.terms)}, {'passed': report.passed, 'terms': records}, records)


def cmd_min_seq(args) -> CommandOutput:
    sequence = minimal_sequence(args.N)
    return CommandOutput({'N': args.N}, list(sequence.terms))


def cmd_nb(args) -> CommandOutput:
    w = _word(args.word, args.m)
    runs = letter_factorization(w)
    return CommandOutput({'word': w}, {'nb': len(runs.runs), 'runs': runs})


def cmd_is_singleton(args) -> CommandOutput:
    if args.rho:
        p, n = args.rho
        w = rho(p, n, _sequence(args, n - 1))
    elif args.word:
        w = _word(args.word, args.m)
    else:
        raise ValueError("is-singleton needs a word or --rho P N")
    return CommandOutput({'word': w, 'k': args.k}, is_singleton(w, args.k, args.budget))


def cmd_prop54(args) -> CommandOutput:
    w = rho(args.p, args.n, _sequence(args, args.n - 1))
    report = check_prop54(w, args.budget)
    result = {
        'rho': w,
        'competitors': report.competitors,
        'thresholds': dict(zip(('12', '23', '31'), report.thresholds)),
        'counterexample': report.counterexample,
        'passed': report.passed,
    }
    return CommandOutput({'p': args.p, 'n': args.n}, result)


def cmd_sigma(args) -> CommandOutput:
    if args.suffix:
        p, n = args.suffix
        report = sigma_suffix_check(p, n, _sequence(args, n - 1))
        result = {'offset': report.offset, 'image': report.image, 'expected': report.expected,
                  'matches': report.matches}
        return CommandOutput({'p': p, 'n': n}, result)
    if not args.word:
        raise ValueError("sigma needs a word or --suffix P N")
    w = _word(args.word, args.m)
    return CommandOutput({'word': w}, apply_morphism_sigma(w))


def _automaticity_table(kind: str, m: int, k: int, cutoff: int, ts: Sequence[int],
                        published: Optional[Sequence[int]], budget: Optional[int]):
    language = build_slice(kind, m, k, cutoff, budget)
    table = approx_nerode_table(language, ts, published)
    if published is None:
        note = f"domain convention: {table.convention.name}"
    elif table.matches_published:
        note = f"domain convention: {table.convention.name} (reproduces the published table)"
    else:
        note = f"domain convention: {table.convention.name} (no convention reproduces the published table)"
    return table, note


def cmd_automaticity(args) -> CommandOutput:
    ts = args.t if args.t else list(range(1, args.cutoff + 1))
    published = _vector(args.published) if args.published else PUBLISHED_TABLES.get(
        (args.kind.upper(), args.m, args.k, args.cutoff)
    )
    if published is not None and len(published) != len(ts):
        published = None
    table, note = _automaticity_table(args.kind, args.m, args.k, args.cutoff, ts, published, args.budget)
    records = [dict(record, convention=table.convention.name) for record in table.to_records()]
    inputs = {'kind': args.kind.upper(), 'm': args.m, 'k': args.k, 'cutoff': args.cutoff, 't': ts}
    return CommandOutput(inputs, records, records, [note])


def cmd_seed_tables(args) -> CommandOutput:
    """Regenerate every reference table in one run"""
    budget = args.budget
    notes = []
    ternary = [count_classes(3, n, 2, budget) for n in range(10)]
    binary = [{'n': n, 'count': count_classes(2, n, 2, budget), 'cake': cake_count(n)} for n in range(13)]
    interpolation = interpolation_check(ternary[:9], 9, ternary[9])

    bounds = []
    for n in range(13):
        bounds.extend(report.to_record() for report in growth_bounds_table(3, n, budget))
    for n in range(15):
        bounds.extend(report.to_record() for report in growth_bounds_table(2, n, budget))
    notes.extend(
        f"uncorrected product bound fails at {record['parikh']}"
        for record in bounds if not record['uncorrected_upper_holds']
    )

    sequence = minimal_sequence(3)
    rho13 = rho(1, 3, sequence)
    automaticity = {}
    for (kind, m, k, cutoff), published in PUBLISHED_TABLES.items():
        table, note = _automaticity_table(kind, m, k, cutoff, range(1, len(published) + 1), published, budget)
        automaticity[f"{kind}(k={k},m={m},C={cutoff})"] = list(table.counts)
        notes.append(f"{kind}(k={k},m={m},C={cutoff}) {note}")

    result = {
        'ternary_census': ternary,
        'ternary_census_matches': ternary[:8] == list(TERNARY_COUNTS),
        'polynomial_bound_holds': all(
            count <= polynomial_bound(3, n, 2) for n, count in enumerate(ternary)
        ),
        'f_parikh_sum': {n: f_parikh_sum(3, n, budget) for n in range(8)},
        'interpolation': {'predicted': interpolation.predicted, 'actual': interpolation.actual,
                          'extends': interpolation.extends},
        'binary_census': binary,
        'class2_1223312': class2(parse_word('1223312', 3)),
        'coefficient_ranges_full': all(
            coefficient_range(1, 2, i, j, budget) == set(range(i * j + 1))
            for i in range(6) for j in range(6)
        ),
        'growth_bounds_pass': all(record['lower_holds'] and record['upper_holds'] for record in bounds),
        'minimal_sequence': list(sequence.terms),
        'minimal_sequence_valid': validate_sequence(sequence).passed,
        'tower_sequence_valid': validate_sequence(tower_sequence(2)).passed,
        'rho_1_3_singleton': is_singleton(rho13, 2, budget),
        'prop54_rho_1_3': check_prop54(rho13, budget).passed,
        'prop54_rho_2_2': check_prop54(rho(2, 2, sequence), budget).passed,
        'nb_112333122132': len(letter_factorization(parse_word('112333122132', 3)).runs),
        'automaticity': automaticity,
    }
    return CommandOutput({}, result, notes=notes)


COMMANDS: Dict[str, Callable] = {
    'binom': cmd_binom,
    'signature': cmd_signature,
    'equiv': cmd_equiv,
    'parikh-matrix': cmd_parikh_matrix,
    'switch-neighbors': cmd_switch_neighbors,
    'switch-class': cmd_switch_class,
    'class2': cmd_class2,
    'trace': cmd_trace,
    'phi': cmd_phi,
    'normal-form': cmd_normal_form,
    'census': cmd_census,
    'll': cmd_ll,
    'sing': cmd_sing,
    'f-parikh': cmd_f_parikh,
    'bounds': cmd_bounds,
    'coeff-range': cmd_coeff_range,
    'cake': cmd_cake,
    'rho': cmd_rho,
    'validate-seq': cmd_validate_seq,
    'min-seq': cmd_min_seq,
    'nb': cmd_nb,
    'is-singleton': cmd_is_singleton,
    'prop54': cmd_prop54,
    'sigma': cmd_sigma,
    'automaticity': cmd_automaticity,
    'seed-tables': cmd_seed_tables,
}


def positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--m', type=positive_int, help='Alphabet size (default: inferred from the word)')
    common.add_argument('--k', type=positive_int, default=2, help='Equivalence order (default: 2)')
    common.add_argument('--budget', type=positive_int, help='Enumeration budget in words (default: KBINOM_BUDGET)')
    common.add_argument('--format', choices=FORMATS, default='human', help='Output format (default: human)')
    common.add_argument('--output', help='Write the result to this file instead of standard output')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Set logging level (default: KBINOM_LOG_LEVEL or WARNING)')

    sequence_options = argparse.ArgumentParser(add_help=False)
    sequence_options.add_argument('--sequence', help='Comma-separated growth sequence (default: minimal sequence)')
    sequence_options.add_argument('--tower', action='store_true', help='Use s_n = 2*8^(8^n)')

    parser = argparse.ArgumentParser(
        description='k-binomial equivalence of finite words: coefficients, classes, censuses and singletons',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python kbinomial.py class2 --m 3 1223312          # 2-binomial class of a word
  python kbinomial.py census --m 3 --k 2 --n 7      # Number of classes of length 7
  python kbinomial.py phi --m 3 "1.2.3'.2.3.1'"     # Nil-2 coordinates of a signed word
  python kbinomial.py automaticity --m 2 --k 3 --cutoff 15 --t 1 2 3 --format csv
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add(name: str, help_text: str, *parents) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common, *parents])

    sub = add('binom', 'Occurrences of V as a scattered subword of U')
    sub.add_argument('u')
    sub.add_argument('v')

    sub = add('signature', 'All coefficients binom(W, x) for 1 <= |x| <= k')
    sub.add_argument('word')

    sub = add('equiv', 'Test k-binomial equivalence of U and V')
    sub.add_argument('u')
    sub.add_argument('v')

    sub = add('parikh-matrix', 'Parikh matrix of a binary word')
    sub.add_argument('word')

    sub = add('switch-neighbors', 'Words one switch away from W')
    sub.add_argument('word')

    sub = add('switch-class', 'Closure of W under switches')
    sub.add_argument('word')

    sub = add('class2', '2-binomial class of W')
    sub.add_argument('word')
    sub.add_argument('--tree', action='store_true', help='Emit the explored exchange edges; JSON lines in human format')

    sub = add('trace', 'Exchanges from the sorted word to W')
    sub.add_argument('word')

    sub = add('phi', "Nil-2 coordinates of a signed word such as 1.2.3'")
    sub.add_argument('word')

    sub = add('normal-form', 'Commutator normal form of W')
    sub.add_argument('word')

    sub = add('census', 'Number of k-binomial classes of words of length n')
    sub.add_argument('--n', type=int, default=0, help='Word length')
    sub.add_argument('--n-max', type=int, help='Tabulate lengths 0..N_MAX instead')
    sub.add_argument('--classes', action='store_true', help='Include one record per class')

    for name, help_text in (('ll', 'Lexicographically least class representatives'),
                            ('sing', 'Words alone in their class')):
        sub = add(name, help_text)
        sub.add_argument('--n', type=int, required=True, help='Word length')

    sub = add('f-parikh', 'Number of classes with a given Parikh vector')
    sub.add_argument('parikh', help='Comma-separated Parikh vector, e.g. 2,2')

    sub = add('bounds', 'Growth bounds on the per-Parikh-vector class count')
    sub.add_argument('parikh', nargs='?', help='Comma-separated Parikh vector')
    sub.add_argument('--n', type=int, help='Check every Parikh vector of this length over --m letters')

    sub = add('coeff-range', 'Values of binom(u, ab) over words with I copies of A and J copies of B')
    for name in ('a', 'b', 'i', 'j'):
        sub.add_argument(name, type=int)

    sub = add('cake', '(n^3 + 5n + 6) / 6')
    sub.add_argument('n', type=int)

    sub = add('rho', 'Run-length singleton word rho(p, n)', sequence_options)
    sub.add_argument('--p', type=positive_int, required=True)
    sub.add_argument('--n', type=int, required=True)

    sub = add('validate-seq', 'Check the growth conditions term by term')
    sub.add_argument('terms', nargs='*', type=int)
    sub.add_argument('--tower', type=positive_int, metavar='N', help='Validate the first N terms of 2*8^(8^n)')

    sub = add('min-seq', 'Least sequence meeting the growth conditions')
    sub.add_argument('N', type=positive_int)

    sub = add('nb', 'Letter factorization and number of blocks')
    sub.add_argument('word')

    sub = add('is-singleton', 'Whether W is alone in its class', sequence_options)
    sub.add_argument('word', nargs='?')
    sub.add_argument('--rho', type=int, nargs=2, metavar=('P', 'N'), help='Check rho(P, N) instead')

    sub = add('prop54', 'Search the abelian class of rho(p, n) for a dominating competitor', sequence_options)
    sub.add_argument('--p', type=positive_int, required=True)
    sub.add_argument('--n', type=int, required=True)

    sub = add('sigma', 'Image under 1 -> 3, 2 -> 1, 3 -> 2', sequence_options)
    sub.add_argument('word', nargs='?')
    sub.add_argument('--suffix', type=int, nargs=2, metavar=('P', 'N'),
                     help='Compare sigma of the reduced suffix of rho(P, N) with rho(., N-1)')

    sub = add('automaticity', 'Truncated Nerode class counts of a language slice')
    sub.add_argument('--kind', default='LL', choices=['LL', 'SING', 'll', 'sing'])
    sub.add_argument('--cutoff', type=int, required=True, help='Slice length C')
    sub.add_argument('--t', type=int, nargs='+', help='Indices t (default: 1..C)')
    sub.add_argument('--published', help='Comma-separated reference values used to pick the domain convention')

    add('seed-tables', 'Regenerate every reference table')

    return parser


def _defaults_for(args):
    if args.command in ('census', 'll', 'sing', 'automaticity', 'bounds') and args.m is None:
        args.m = 2
    return args


def render(formatter: ResultFormatter, args, output: CommandOutput, payload: Dict[str, Any]) -> str:
    if output.lines is not None and args.format == 'human':
        return ''.join(json.dumps(line, ensure_ascii=False) + '\n' for line in output.lines)
    if args.format == 'json':
        return formatter.render_json(payload)
    if args.format == 'csv':
        return formatter.render_csv(output.records if output.records is not None else output.result)
    return formatter.render_human(payload)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return the exit code"""
    parser = build_parser()
    try:
        args = _defaults_for(parser.parse_args(argv))
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0

    config = ToolkitConfig()
    setup_logging(args.log_level or config.log_level, config.log_dir)
    logger.info(f"Arguments: {vars(args)}")

    formatter = ResultFormatter()
    inputs = {key: value for key, value in vars(args).items() if key not in ('format', 'output', 'log_level')}
    try:
        config.validate()
        reset_enumeration_stats()
        output = COMMANDS[args.command](args)
        payload = formatter.ensure_valid(formatter.build_result(
            args.command,
            output.inputs,
            output.result,
            budget_used=get_enumeration_stats()['words_enumerated'],
            convention_notes=output.notes,
            config=config.to_dict(),
        ))
        formatter.write_output(render(formatter, args, output, payload), args.output, sys.stdout)
        return 0

    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except (KBinomialError, ValueError, OverflowError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        logger.debug("Full error details:", exc_info=True)
        if args.format == 'json':
            formatter.write_output(formatter.render_json(formatter.build_error(args.command, inputs, e)),
                                   None, sys.stdout)
        return 1


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
