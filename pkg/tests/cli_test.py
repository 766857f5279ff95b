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
'''Tests suite for latinrect.cli'''

import json

import pytest

from latinrect.cli import ExitCode, instance_document, parse_instance, run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_circulant(capsys):
    '''Prints the circulant rectangle with a schema version.'''
    code, document = _run(capsys, 'circulant', '--r', '2', '--n', '3')

    assert code == ExitCode.OK
    assert document['schema'] == 1
    assert document['rectangle'] == [[0, 1, 2], [1, 2, 0]]


def test_verify_parity(capsys):
    '''Single edge: de = 0, do = 1.'''
    code, document = _run(capsys, 'verify-parity', '--r', '1', '--n', '2')

    assert code == ExitCode.OK
    assert document['schema'] == 1
    assert (document['de'], document['do'], document['gap']) == (0, 1, 1)
    assert document['holds']


def test_verify_parity_decreasing_column_ordering(capsys):
    '''Gap holds under the other ordering too.'''
    code, document = _run(capsys, 'verify-parity', '--r', '2', '--n', '3', '--ordering', 'paper')

    assert code == ExitCode.OK
    assert document['gap'] == 1
    assert document['ordering'] == 'paper'


def test_verify_parity_errors(capsys, monkeypatch):
    '''Bad dimensions exit 2, the size guard exits 3.'''
    monkeypatch.delenv('LATINRECT_MAX_EDGES', raising=False)
    assert _run(capsys, 'verify-parity', '--r', '3', '--n', '3')[0] == ExitCode.INPUT_ERROR
    assert _run(capsys, 'verify-parity', '--r', '4', '--n', '5')[0] == ExitCode.SIZE_GUARD
    assert _run(capsys, 'verify-parity', '--r', '2', '--n', '3',
                '--max-edges', '4')[0] == ExitCode.SIZE_GUARD


def test_uniqueness(capsys):
    '''The single triangle-free realization is the circulant one.'''
    code, document = _run(capsys, 'uniqueness', '--r', '2', '--n', '3')

    assert code == ExitCode.OK
    assert document['schema'] == 1
    assert document['count'] == 1
    assert document['associated_matrices'] == [[[0, 1, 2], [1, 2, 0]]]
    assert document['matches_circulant']


def test_involution_selfcheck(capsys):
    '''Every property passes on 1 x 4.'''
    code, document = _run(capsys, 'involution-selfcheck', '--r', '1', '--n', '4')

    assert code == ExitCode.OK
    assert document['schema'] == 1
    assert document['ok']
    assert all(result['failed'] == 0 for result in document['results'].values())
    assert document['containing']['de'] == document['containing']['do']


def test_solve_and_validate(capsys, write_json, tmp_path):
    '''A solve output is a valid candidate for its instance.'''
    instance = write_json('instance.json', {
        'r': 2, 'n': 3, 'lists': [[[0, 1, 2], [1, 2, 3], [2, 3, 4]],
                                  [[0, 3, 4], [0, 1, 2], [1, 3, 4]]]})
    output = str(tmp_path / 'solution.json')

    code, document = _run(capsys, 'solve', '--input', instance, '--seed', '3', '--output', output)
    assert code == ExitCode.OK
    assert document is None, 'Output goes to the file'

    with open(output, encoding='utf-8') as f:
        solution = json.load(f)
    assert solution['schema'] == 1
    assert solution['status'] == 'solved'
    assert solution['method'] == 'rectangle'
    assert solution['guaranteed']

    code, document = _run(capsys, 'validate', '--input', instance, '--candidate', output)
    assert code == ExitCode.OK
    assert document['schema'] == 1
    assert document['command'] == 'validate'
    assert document['valid']


def test_solve_square(capsys, write_json):
    '''Squares with lists of n + 1 go through the extended instance.'''
    instance = write_json('square.json', {
        'r': 2, 'n': 2, 'lists': [[['a', 'b', 'c'], ['a', 'b', 'c']],
                                  [['a', 'b', 'c'], ['b', 'c', 'd']]]})

    code, document = _run(capsys, 'solve', '--input', instance)
    assert code == ExitCode.OK
    assert document['method'] == 'square_plus_one'
    assert len(document['rectangle']) == 2


def test_solve_unsatisfiable(capsys, write_json):
    '''Exhausted search exits 1.'''
    instance = write_json('unsat.json', {'r': 1, 'n': 2, 'lists': [[[0], [0]]]})

    code, document = _run(capsys, 'solve', '--input', instance)
    assert code == ExitCode.FAILED
    assert document['status'] == 'unsatisfiable'


def test_validate_column_repeat(capsys, write_json):
    '''The violating column is listed.'''
    instance = write_json('instance.json', {'r': 2, 'n': 1, 'lists': [[[0, 1]], [[0, 1]]]})
    candidate = write_json('candidate.json', [[0], [0]])

    code, document = _run(capsys, 'validate', '--input', instance, '--candidate', candidate)
    assert code == ExitCode.FAILED
    assert document['violations'] == [{'kind': 'column', 'where': 1, 'symbol': 0}]
    assert document['schema'] == 1


def test_validate_boolean_candidate(capsys, write_json):
    '''true is not the symbol 1.'''
    instance = write_json('instance.json', {'r': 1, 'n': 1, 'lists': [[[1]]]})
    candidate = write_json('candidate.json', [[True]])

    code, _ = _run(capsys, 'validate', '--input', instance, '--candidate', candidate)
    assert code == ExitCode.INPUT_ERROR


def test_unwritable_output(capsys, write_json, tmp_path):
    '''An output path that cannot be written exits 2.'''
    instance = write_json('instance.json', {'r': 1, 'n': 2, 'lists': [[[0, 1], [0, 1]]]})
    output = str(tmp_path / 'missing' / 'solution.json')

    code, _ = _run(capsys, 'solve', '--input', instance, '--output', output)
    assert code == ExitCode.INPUT_ERROR


@pytest.mark.parametrize('document', [
    {'r': 1, 'n': 2, 'lists': [[[0, 'a'], [1]]]},
    {'r': 2, 'n': 2, 'lists': [[[0], [1]]]},
    {'r': 1, 'n': 2, 'lists': [[[0], [1]], [[0]]]},
    {'lists': []},
    {'r': 1, 'n': 2, 'lists': [['ab', 'bc']]},
])
def test_bad_instances(capsys, write_json, document):
    '''Malformed instances exit 2.'''
    instance = write_json('bad.json', document)

    assert _run(capsys, 'solve', '--input', instance)[0] == ExitCode.INPUT_ERROR


def test_unreadable_input(capsys, tmp_path):
    '''Missing files, broken JSON and non UTF-8 text exit 2.'''
    broken = tmp_path / 'broken.json'
    broken.write_text('{"r": 1,', encoding='utf-8')

    assert _run(capsys, 'solve', '--input', str(tmp_path / 'missing.json'))[0] == \
        ExitCode.INPUT_ERROR
    assert _run(capsys, 'solve', '--input', str(broken))[0] == ExitCode.INPUT_ERROR

    latin1 = tmp_path / 'latin1.json'
    latin1.write_bytes(b'{"r": 1, "n": 1, "lists": [[["\xff"]]]}')
    assert _run(capsys, 'solve', '--input', str(latin1))[0] == ExitCode.INPUT_ERROR


def test_bad_arguments(capsys):
    '''Argument errors exit 2.'''
    assert run(['circulant', '--r', 'two', '--n', '3']) == ExitCode.INPUT_ERROR
    assert run(['no-such-command']) == ExitCode.INPUT_ERROR
    capsys.readouterr()


def test_instance_round_trip():
    '''Parsing then serializing gives the canonical form, and is idempotent.'''
    document = {'r': 1, 'n': 2, 'lists': [[[3, 1, 2], [2, 2, 0]]]}

    canonical = instance_document(parse_instance(document))
    assert canonical == {'r': 1, 'n': 2, 'lists': [[[1, 2, 3], [0, 2]]]}
    assert instance_document(parse_instance(canonical)) == canonical
    assert list(canonical) == ['r', 'n', 'lists']
