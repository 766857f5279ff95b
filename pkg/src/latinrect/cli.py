# Copyright 2022 The latinrect Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
'''Command line tool.

    latinrect solve --input FILE [--seed K] [--output FILE] [--node-limit N]
    latinrect circulant --r R --n N
    latinrect verify-parity --r R --n N [--ordering lex|paper] [--max-edges M] [--jobs J]
    latinrect uniqueness --r R --n N
    latinrect involution-selfcheck --r R --n N [--ordering lex|paper]
    latinrect validate --input FILE --candidate FILE

Every result is a JSON document on standard output, logs go to standard error.
Exit status: 0 success, 1 failed check or unsatisfiable instance, 2 bad
input, 3 size guard refusal.

Instance files look like {"r": 2, "n": 3, "lists": [[[0, 1, 2], ...], ...]}:
rows in order, symbols all integers or all strings.
'''

import argparse
import enum
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from latinrect import config
from latinrect.errors import (PreconditionError, SizeGuardError, StructuralError,
                              UnsatisfiableError)
from latinrect.orientations import associated_matrix
from latinrect.parity import (circulant, circulant_orientation, delta_map,
                              involution_selfcheck, parity_census,
                              triangle_free_realizations)
from latinrect.rectangular_graph import ORDERINGS, ListAssignment, Verdict, list_assignment
from latinrect.solver import guaranteed_regime, solve, validate_solution

logger = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    OK = 0
    FAILED = 1
    INPUT_ERROR = 2
    SIZE_GUARD = 3


def read_json(path: str) -> Any:
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except OSError as err:
        raise StructuralError(f'Cannot read {path}: {err}') from err
    except UnicodeDecodeError as err:
        raise StructuralError(f'{path} is not UTF-8 text: {err}') from err
    except json.JSONDecodeError as err:
        raise StructuralError(f'{path} is not valid JSON: {err}') from err


def parse_instance(document: Any) -> ListAssignment:
    '''ListAssignment from an instance document.'''
    if not isinstance(document, dict) or not {'r', 'n', 'lists'} <= document.keys():
        raise StructuralError('Instance should be an object with r, n and lists.')
    lists = list_assignment(document['lists'])
    if (lists.r, lists.n) != (document['r'], document['n']):
        raise StructuralError(f'Instance declares {document["r"]}x{document["n"]}, '
                              f'lists are {lists.r}x{lists.n}.')
    return lists


def instance_document(lists: ListAssignment) -> Dict[str, Any]:
    '''Canonical instance document: sorted lists, keys r, n, lists.'''
    return {'r': lists.r, 'n': lists.n, 'lists': lists.as_lists()}


def read_instance(path: str) -> ListAssignment:
    return parse_instance(read_json(path))


def read_candidate(path: str) -> List[List[Any]]:
    '''A rectangle, either bare or under the "rectangle" key of a solve output.'''
    document = read_json(path)
    if isinstance(document, dict):
        if 'rectangle' not in document:
            raise StructuralError(f'{path} has no rectangle.')
        document = document['rectangle']
    if not isinstance(document, list):
        raise StructuralError(f'{path} should hold an array of rows.')
    return document


def _emit(command: str, payload: Dict[str, Any], output: Optional[str] = None):
    document = {'schema': config.SCHEMA_VERSION, 'command': command, **payload}
    text = json.dumps(document, indent=2)
    if output is None:
        print(text)
    else:
        try:
            with open(output, 'w', encoding='utf-8') as f:
                f.write(text + '\n')
        except OSError as err:
            raise StructuralError(f'Cannot write {output}: {err}') from err
        logger.info('Result saved to %s', output)


def _rows(grid) -> List[List[Any]]:
    return [[x.item() if hasattr(x, 'item') else x for x in row] for row in grid]


def _verdict(verdict: Verdict) -> Dict[str, Any]:
    return {
        'valid': verdict.valid,
        'violations': [{'kind': v.kind,
                        'where': list(v.where) if isinstance(v.where, tuple) else v.where,
                        'symbol': v.symbol} for v in verdict.violations],
    }


def _solve(args) -> ExitCode:
    lists = read_instance(args.input)
    method = ('square_plus_one' if lists.r == lists.n and lists.min_size() >= lists.n + 1
              else 'rectangle')
    try:
        result = solve(lists, seed=args.seed, node_limit=args.node_limit)
    except UnsatisfiableError as err:
        logger.error('%s', err)
        _emit('solve', {'status': 'unsatisfiable', 'r': lists.r, 'n': lists.n,
                        'stats': err.stats._asdict() if err.stats else None}, args.output)
        return ExitCode.FAILED
    _emit('solve', {
        'status': 'solved',
        'r': lists.r,
        'n': lists.n,
        'method': method,
        'guaranteed': guaranteed_regime(lists),
        'rectangle': _rows(result.rectangle),
        'stats': result.stats._asdict(),
    }, args.output)
    return ExitCode.OK


def _circulant(args) -> ExitCode:
    _emit('circulant', {'r': args.r, 'n': args.n,
                        'rectangle': _rows(circulant(args.r, args.n).entries)})
    return ExitCode.OK


def _verify_parity(args) -> ExitCode:
    census = parity_census(args.r, args.n, delta_map(args.r, args.n),
                           ORDERINGS[args.ordering], args.max_edges, args.jobs)
    _emit('verify-parity', {
        'r': args.r,
        'n': args.n,
        'ordering': args.ordering,
        'de': census.de,
        'do': census.do_,
        'difference': census.difference,
        'gap': census.gap,
        'holds': census.gap == 1,
    })
    return ExitCode.OK if census.gap == 1 else ExitCode.FAILED


def _uniqueness(args) -> ExitCode:
    found = triangle_free_realizations(args.r, args.n, delta_map(args.r, args.n),
                                       max_edges=args.max_edges)
    expected = circulant_orientation(args.r, args.n)
    holds = found == [expected]
    _emit('uniqueness', {
        'r': args.r,
        'n': args.n,
        'count': len(found),
        'associated_matrices': [_rows(associated_matrix(d)) for d in found],
        'matches_circulant': holds,
    })
    return ExitCode.OK if holds else ExitCode.FAILED


def _involution_selfcheck(args) -> ExitCode:
    report = involution_selfcheck(args.r, args.n, ordering=ORDERINGS[args.ordering],
                                  max_edges=args.max_edges)
    _emit('involution-selfcheck', {
        'r': args.r,
        'n': args.n,
        'ordering': args.ordering,
        'realizations': report.realizations,
        'checked': report.checked,
        'results': {name: {'passed': passed, 'failed': failed}
                    for name, (passed, failed) in report.results.items()},
        'containing': {'de': report.containing.de, 'do': report.containing.do_},
        'ok': report.ok,
    })
    return ExitCode.OK if report.ok else ExitCode.FAILED


def _validate(args) -> ExitCode:
    verdict = validate_solution(read_candidate(args.candidate), read_instance(args.input))
    _emit('validate', _verdict(verdict))
    return ExitCode.OK if verdict.valid else ExitCode.FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='latinrect',
        description='Partial latin rectangles from lists and the orientation parity behind them.')
    parser.add_argument('--verbose', action='store_true', help='Enable debug logging')
    commands = parser.add_subparsers(dest='command', required=True)

    def dimensions(sub):
        sub.add_argument('--r', type=int, required=True, help='Number of rows')
        sub.add_argument('--n', type=int, required=True, help='Number of columns')

    def guard(sub):
        sub.add_argument('--max-edges', type=int, default=None,
                         help=f'Size guard, default {config.DEFAULT_MAX_EDGES} '
                         f'or ${config.MAX_EDGES_ENV}')

    sub = commands.add_parser('solve', help='Solve an instance file')
    sub.add_argument('--input', required=True)
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--output', default=None)
    sub.add_argument('--node-limit', type=int, default=None,
                     help='Restart the search with a new seed after this many nodes')
    sub.set_defaults(handler=_solve)

    sub = commands.add_parser('circulant', help='Print the circulant rectangle')
    dimensions(sub)
    sub.set_defaults(handler=_circulant)

    sub = commands.add_parser('verify-parity', help='Census of the delta map, expects |DE-DO|=1')
    dimensions(sub)
    sub.add_argument('--ordering', choices=sorted(ORDERINGS), default='lex')
    sub.add_argument('--jobs', type=int, default=1)
    guard(sub)
    sub.set_defaults(handler=_verify_parity)

    sub = commands.add_parser('uniqueness', help='Triangle-free realizations of the delta map')
    dimensions(sub)
    guard(sub)
    sub.set_defaults(handler=_uniqueness)

    sub = commands.add_parser('involution-selfcheck', help='Exhaustive involution check')
    dimensions(sub)
    sub.add_argument('--ordering', choices=sorted(ORDERINGS), default='lex')
    guard(sub)
    sub.set_defaults(handler=_involution_selfcheck)

    sub = commands.add_parser('validate', help='Check a candidate rectangle against lists')
    sub.add_argument('--input', required=True)
    sub.add_argument('--candidate', required=True)
    sub.set_defaults(handler=_validate)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    '''Runs the command line and returns the exit status.'''
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return ExitCode.OK if err.code == 0 else ExitCode.INPUT_ERROR

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                        stream=sys.stderr)
    try:
        return int(args.handler(args))
    except SizeGuardError as err:
        logger.error('%s', err)
        return ExitCode.SIZE_GUARD
    except (StructuralError, PreconditionError) as err:
        logger.error('%s', err)
        return ExitCode.INPUT_ERROR


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
