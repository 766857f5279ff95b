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
'''Tests suite for latinrect.solver'''

import itertools
import logging

import pytest

from latinrect.errors import PreconditionError, StructuralError, UnsatisfiableError
from latinrect.rectangular_graph import Violation, list_assignment
from latinrect.solver import (DEFAULT_MAX_RESTARTS, alon_tarsi_hypothesis, extend_square,
                              guaranteed_regime, random_list_assignment, solve,
                              solve_rectangle, solve_square_plus_one, validate_solution)


def _identity_lists(r, n):
    return list_assignment([[list(range(n))] * n] * r)


@pytest.mark.parametrize('r,n', [(1, 1), (1, 3), (2, 3), (3, 3), (4, 6)])
def test_identity_lists(r, n):
    '''Lists 0..n-1 everywhere: a latin rectangle exists.'''
    lists = _identity_lists(r, n)
    result = solve_rectangle(lists, seed=1)

    assert validate_solution(result.rectangle, lists).valid
    assert result.stats.nodes >= r * n


def test_distinct_representatives():
    '''A single row needs distinct entries from the lists.'''
    lists = list_assignment([[[5, 7], [5, 9]]])
    for seed in range(10):
        rectangle = solve_rectangle(lists, seed=seed).rectangle
        assert rectangle in (((5, 9), ), ((7, 5), ), ((7, 9), ))


@pytest.mark.parametrize('r,n', [(2, 3), (3, 4), (3, 5), (4, 5), (5, 6), (6, 7)])
def test_solve_rectangle_random_instances(r, n):
    '''Lists of n symbols out of 2n always admit a rectangle when r < n.'''
    for seed in range(200):
        lists = random_list_assignment(r, n, n, list(range(2 * n)), seed)
        assert guaranteed_regime(lists)
        assert alon_tarsi_hypothesis(lists)

        result = solve_rectangle(lists, seed=seed)
        verdict = validate_solution(result.rectangle, lists)
        assert verdict.valid, f'seed={seed} {verdict.violations}'


@pytest.mark.parametrize('n', range(2, 7))
def test_solve_square_plus_one_random_instances(n):
    '''Lists of n + 1 symbols always admit a square.'''
    for seed in range(100):
        lists = random_list_assignment(n, n, n + 1, list(range(2 * n + 2)), seed)
        result = solve_square_plus_one(lists, seed=seed)

        assert validate_solution(result.rectangle, lists).valid, f'seed={seed}'
        assert validate_solution(result.extended, extend_square(lists)).valid, \
            'Intermediate rectangle should fit the extended lists'
        assert [row[:-1] for row in result.extended] == list(result.rectangle)


def test_solve_square_plus_one_examples():
    '''n = 1 and n = 2 by hand.'''
    assert solve_square_plus_one(list_assignment([[[5, 9]]])).rectangle in (((5, ), ), ((9, ), ))

    lists = list_assignment([[[0, 1, 2]] * 2] * 2)
    square = solve_square_plus_one(lists, seed=3).rectangle
    candidates = [((a, b), (c, d))
                  for a, b, c, d in itertools.product(range(3), repeat=4)
                  if a != b and c != d and a != c and b != d]
    assert square in candidates


def test_solve_square_needs_square():
    '''The reduction is only for n x n instances.'''
    with pytest.raises(PreconditionError):
        solve_square_plus_one(_identity_lists(2, 3))


def test_extend_square():
    '''Column n + 1 repeats the lists of column n.'''
    lists = random_list_assignment(3, 3, 4, list(range(8)), seed=0)
    extended = extend_square(lists)

    assert (extended.r, extended.n) == (3, 4)
    for i in range(1, 4):
        assert extended.external((i, 4)) == lists.external((i, 3))
        assert extended.external((i, 1)) == lists.external((i, 1))


def test_solve_selects_method():
    '''Squares with n + 1 symbols go through the extended instance.'''
    square = random_list_assignment(3, 3, 4, list(range(8)), seed=5)
    assert solve(square).extended is not None

    rectangle = random_list_assignment(2, 3, 3, list(range(6)), seed=5)
    assert solve(rectangle).extended is None


def test_solver_is_deterministic():
    '''Same instance and seed, same rectangle.'''
    lists = random_list_assignment(4, 5, 5, list(range(10)), seed=11)

    assert solve_rectangle(lists, seed=4).rectangle == solve_rectangle(lists, seed=4).rectangle


def test_string_symbols():
    '''External symbols are mapped back after the search.'''
    lists = list_assignment([[['x', 'y'], ['y', 'z']], [['x', 'y', 'z'], ['x', 'z']]])
    result = solve_rectangle(lists)

    assert validate_solution(result.rectangle, lists).valid
    assert all(isinstance(symbol, str) for row in result.rectangle for symbol in row)


def test_unsatisfiable(caplog):
    '''Outside the guaranteed regime exhaustion is reported.'''
    lists = list_assignment([[[0], [0]]])

    with caplog.at_level(logging.WARNING):
        with pytest.raises(UnsatisfiableError) as err:
            solve_rectangle(lists)
    assert 'outside the guaranteed regime' in caplog.text
    assert err.value.stats.nodes >= 1
    assert not guaranteed_regime(lists)


def test_node_limit_restarts():
    '''Restarts are bounded and the last attempt completes the search.'''
    lists = random_list_assignment(2, 3, 3, list(range(6)), seed=2)
    result = solve_rectangle(lists, seed=0, node_limit=1)

    assert result.stats.restarts == DEFAULT_MAX_RESTARTS
    assert validate_solution(result.rectangle, lists).valid


def test_validate_solution_examples():
    '''Membership and repetitions.'''
    assert validate_solution([[0, 1, 2], [1, 2, 0]], _identity_lists(2, 3)).valid

    membership = validate_solution([[0, 1]], list_assignment([[[0], [0, 2]]]))
    assert membership.violations == (Violation('membership', (1, 2), 1), )

    column = validate_solution([[0], [0]], list_assignment([[[0]], [[0]]]))
    assert column.violations == (Violation('column', 1, 0), )


def test_validate_solution_dimension_mismatch():
    '''The rectangle has to match the lists.'''
    with pytest.raises(StructuralError):
        validate_solution([[0, 1]], _identity_lists(2, 2))


def test_validate_solution_rejects_booleans():
    '''True is not accepted in place of the symbol 1.'''
    with pytest.raises(StructuralError):
        validate_solution([[True]], list_assignment([[[1]]]))
    assert validate_solution([[1]], list_assignment([[[1]]])).valid


def test_alon_tarsi_hypothesis():
    '''delta(v) < |S_v|: true with n symbols, false when a list is too short.'''
    assert alon_tarsi_hypothesis(_identity_lists(2, 3))
    assert not alon_tarsi_hypothesis(list_assignment([[[0, 1, 2], [0, 1, 2], [0, 1]]]))
    assert not alon_tarsi_hypothesis(_identity_lists(3, 3))
