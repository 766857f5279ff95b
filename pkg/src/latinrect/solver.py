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
'''Partial latin rectangles from per-cell lists.

If r < n and every cell list has n symbols, an r x n partial latin rectangle
with every entry taken from its cell list exists. For squares lists of n + 1
symbols suffice: copy the lists of column n into a new column n + 1, solve the
n x (n + 1) rectangle and delete the last column.

Existence is not constructive, so the solver is a complete backtracking
search: most constrained cell first, seeded random value order and forward
checking over the cell's row and column.
'''

import logging
import time
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from latinrect.errors import PreconditionError, StructuralError, UnsatisfiableError
from latinrect.parity import delta_map
from latinrect.rectangular_graph import (ListAssignment, Symbol, Verdict, Violation,
                                         as_grid, line_repeats, list_assignment)

logger = logging.getLogger(__name__)

SymbolGrid = Tuple[Tuple[Symbol, ...], ...]

# Restarts allowed with a node limit, the last attempt runs without it.
DEFAULT_MAX_RESTARTS = 10


class SearchStats(NamedTuple):
    nodes: int
    backtracks: int
    restarts: int
    wall_time: float


class SolveResult(NamedTuple):
    '''A solution in external symbols.

    `extended` is the intermediate n x (n + 1) rectangle of the square case.
    '''
    rectangle: SymbolGrid
    stats: SearchStats
    extended: Optional[SymbolGrid] = None


class _NodeLimitReached(Exception):
    pass


def _members(mask: int) -> List[int]:
    '''Set bits of the mask, ascending.'''
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return result


def _popcount(mask: int) -> int:
    return bin(mask).count('1')


class _Backtracker:
    '''One search over symbol ids; candidates are bitmasks.'''

    def __init__(self, lists: ListAssignment, rng: np.random.Generator,
                 node_limit: Optional[int]):
        self.r, self.n = lists.r, lists.n
        self.allowed = [[sum(1 << s for s in cell) for cell in row] for row in lists.lists]
        self.row_used = [0] * self.r
        self.column_used = [0] * self.n
        self.grid: List[List[Optional[int]]] = [[None] * self.n for _ in range(self.r)]
        self.unassigned = {(i, j) for i in range(self.r) for j in range(self.n)}
        self.rng = rng
        self.node_limit = node_limit
        self.nodes = 0
        self.backtracks = 0

    def candidates(self, i: int, j: int) -> int:
        return self.allowed[i][j] & ~(self.row_used[i] | self.column_used[j])

    def _select(self) -> Tuple[int, int]:
        return min(self.unassigned,
                   key=lambda cell: (_popcount(self.candidates(*cell)), cell))

    def _assign(self, i: int, j: int, symbol: int):
        self.grid[i][j] = symbol
        self.row_used[i] |= 1 << symbol
        self.column_used[j] |= 1 << symbol
        self.unassigned.discard((i, j))

    def _unassign(self, i: int, j: int, symbol: int):
        self.grid[i][j] = None
        self.row_used[i] &= ~(1 << symbol)
        self.column_used[j] &= ~(1 << symbol)
        self.unassigned.add((i, j))

    def _forward_check(self, i: int, j: int) -> bool:
        '''No open cell of row i or column j is left without candidates.'''
        for jj in range(self.n):
            if (i, jj) in self.unassigned and not self.candidates(i, jj):
                return False
        for ii in range(self.r):
            if (ii, j) in self.unassigned and not self.candidates(ii, j):
                return False
        return True

    def search(self) -> bool:
        if not self.unassigned:
            return True
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _NodeLimitReached()

        i, j = self._select()
        values = _members(self.candidates(i, j))
        for ix in self.rng.permutation(len(values)):
            symbol = values[ix]
            self._assign(i, j, symbol)
            if self._forward_check(i, j) and self.search():
                return True
            self._unassign(i, j, symbol)
            self.backtracks += 1
        return False


def guaranteed_regime(lists: ListAssignment) -> bool:
    '''Lists large enough for a solution to exist whatever their contents.'''
    r, n, smallest = lists.r, lists.n, lists.min_size()
    return (r < n and smallest >= n) or (r == n and smallest >= n + 1)


def alon_tarsi_hypothesis(lists: ListAssignment) -> bool:
    '''delta(v) < |S_v| at every cell for the delta of delta_map (r < n only).'''
    if lists.r >= lists.n:
        return False
    return bool(np.all(delta_map(lists.r, lists.n).as_array() < lists.sizes()))


def solve_rectangle(lists: ListAssignment,
                    seed: int = 0,
                    node_limit: Optional[int] = None,
                    max_restarts: int = DEFAULT_MAX_RESTARTS) -> SolveResult:
    '''Partial latin rectangle with every entry from its cell list.

    Raises UnsatisfiableError when the search space is exhausted, which can
    happen only outside the guaranteed regime.
    '''
    if not guaranteed_regime(lists):
        logger.warning('%dx%d instance with lists of %d symbols is outside the guaranteed '
                       'regime, searching anyway', lists.r, lists.n, lists.min_size())

    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    nodes, backtracks, restarts = 0, 0, 0
    while True:
        limited = node_limit is not None and restarts < max_restarts
        backtracker = _Backtracker(lists, rng, node_limit if limited else None)
        try:
            found = backtracker.search()
        except _NodeLimitReached:
            restarts += 1
            logger.debug('Node limit %s reached, restart %d', node_limit, restarts)
            found = None
        nodes += backtracker.nodes
        backtracks += backtracker.backtracks
        if found is not None:
            break

    stats = SearchStats(nodes=nodes,
                        backtracks=backtracks,
                        restarts=restarts,
                        wall_time=time.perf_counter() - start)
    if not found:
        raise UnsatisfiableError(
            f'No {lists.r}x{lists.n} partial latin rectangle fits the lists.', stats)

    rectangle = tuple(tuple(lists.symbols[s] for s in row) for row in backtracker.grid)
    verdict = validate_solution(rectangle, lists)
    assert verdict.valid, f'Solver returned an invalid rectangle: {verdict.violations}'
    logger.debug('Solved %dx%d: %s', lists.r, lists.n, stats)
    return SolveResult(rectangle=rectangle, stats=stats)


def extend_square(lists: ListAssignment) -> ListAssignment:
    '''n x (n + 1) instance where column n + 1 repeats the lists of column n.'''
    if lists.r != lists.n:
        raise PreconditionError(f'Expect a square instance, got {lists.r}x{lists.n}.')
    return ListAssignment(lists=tuple(row + (row[-1], ) for row in lists.lists),
                          symbols=lists.symbols)


def solve_square_plus_one(lists: ListAssignment,
                          seed: int = 0,
                          node_limit: Optional[int] = None,
                          max_restarts: int = DEFAULT_MAX_RESTARTS) -> SolveResult:
    '''Partial latin square from lists of n + 1 symbols.'''
    extended_lists = extend_square(lists)
    if lists.min_size() < lists.n + 1:
        logger.warning('Square instance with lists of %d symbols, expected at least %d',
                       lists.min_size(), lists.n + 1)
    extended = solve_rectangle(extended_lists, seed, node_limit, max_restarts)
    # Dropping a column only removes constraints.
    square = tuple(row[:-1] for row in extended.rectangle)
    verdict = validate_solution(square, lists)
    assert verdict.valid, f'Square is invalid after deleting the last column: {verdict.violations}'
    return SolveResult(rectangle=square, stats=extended.stats, extended=extended.rectangle)


def solve(lists: ListAssignment,
          seed: int = 0,
          node_limit: Optional[int] = None,
          max_restarts: int = DEFAULT_MAX_RESTARTS) -> SolveResult:
    '''Square reduction for n x n instances with lists of n + 1, plain search otherwise.'''
    if lists.r == lists.n and lists.min_size() >= lists.n + 1:
        return solve_square_plus_one(lists, seed, node_limit, max_restarts)
    return solve_rectangle(lists, seed, node_limit, max_restarts)


def validate_solution(rectangle: Iterable[Iterable[Symbol]], lists: ListAssignment) -> Verdict:
    '''Rows and columns repetition free and every entry from its cell list.'''
    grid = as_grid(rectangle)
    if (len(grid), len(grid[0])) != (lists.r, lists.n):
        raise StructuralError(f'Rectangle is {len(grid)}x{len(grid[0])}, '
                              f'the lists are {lists.r}x{lists.n}.')
    if any(isinstance(symbol, bool) or not isinstance(symbol, (int, str))
           for row in grid for symbol in row):
        raise StructuralError('Rectangle entries should be integers or strings.')
    ids = lists.symbol_ids()
    violations = line_repeats(grid)
    for i, row in enumerate(grid, start=1):
        for j, symbol in enumerate(row, start=1):
            if ids.get(symbol) not in lists.lists[i - 1][j - 1]:
                violations.append(Violation('membership', (i, j), symbol))
    return Verdict(valid=not violations, violations=tuple(violations))


def random_list_assignment(r: int, n: int, size: int, alphabet: Sequence[Symbol],
                           seed: int) -> ListAssignment:
    '''Every cell gets `size` distinct symbols drawn from `alphabet`.'''
    if size > len(alphabet):
        raise PreconditionError(f'Cannot draw {size} distinct symbols from {len(alphabet)}.')
    rng = np.random.default_rng(seed)
    return list_assignment([[[alphabet[ix] for ix in rng.choice(len(alphabet), size, replace=False)]
                             for _ in range(n)] for _ in range(r)])
