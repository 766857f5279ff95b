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
'''Rectangular graphs, vertex orderings and the value types shared by all modules.

The rectangular graph of size r x n has the vertices (i, j), 1 <= i <= r,
1 <= j <= n, two vertices are adjacent precisely when they have a coordinate
in common. It is the line graph of the complete bipartite graph K_{r,n}, so a
proper vertex coloring of it is a partial latin rectangle.

Vertices are 1-indexed everywhere, the cell index (i - 1) * n + (j - 1) is
used only for numpy tables.
'''

import collections
import enum
import functools
import itertools
from typing import (Dict, FrozenSet, Iterable, List, Mapping, NamedTuple,
                    Optional, Sequence, Tuple, Union)

import networkx as nx
import numpy as np

from latinrect.errors import PreconditionError, StructuralError

Vertex = Tuple[int, int]
Edge = Tuple[Vertex, Vertex]
Symbol = Union[int, str]
Grid = Tuple[Tuple[int, ...], ...]


class OrderingKind(enum.Enum):
    '''How vertices are compared when counting inverted edges.'''
    LEX = 'lex'
    PAPER_THM1 = 'paper'
    RELABELED = 'relabeled'


class VertexOrdering(NamedTuple):
    '''Total order on the vertex set.

    LEX:        (i, j) < (i', j') iff i < i', or i = i' and j < j'.
    PAPER_THM1: (i, j) < (i', j') iff i < i', or i = i' and j > j'.
    RELABELED:  the order of `sequence`, which lists every vertex once.
    '''
    kind: OrderingKind
    sequence: Tuple[Vertex, ...] = ()

    def key(self, vertex: Vertex) -> Tuple[int, int]:
        '''Sort key of the vertex, only for LEX and PAPER_THM1.'''
        i, j = vertex
        if self.kind is OrderingKind.LEX:
            return (i, j)
        if self.kind is OrderingKind.PAPER_THM1:
            return (i, -j)
        raise PreconditionError('Relabeled ordering has no closed form key, use ranks().')

    def ranks(self, r: int, n: int) -> Dict[Vertex, int]:
        '''Position of every vertex of the r x n graph in this order.'''
        all_vertices = vertices(r, n)
        if self.kind is OrderingKind.RELABELED:
            if sorted(self.sequence) != all_vertices:
                raise StructuralError(
                    f'Relabeling should list each vertex of the {r}x{n} graph once.')
            ordered = list(self.sequence)
        else:
            ordered = sorted(all_vertices, key=self.key)
        return {vertex: rank for rank, vertex in enumerate(ordered)}

    @property
    def name(self) -> str:
        return self.kind.value


LEX = VertexOrdering(OrderingKind.LEX)
PAPER_THM1 = VertexOrdering(OrderingKind.PAPER_THM1)
ORDERINGS = {LEX.name: LEX, PAPER_THM1.name: PAPER_THM1}


@functools.lru_cache(maxsize=None)
def vertex_ranks(r: int, n: int, ordering: VertexOrdering) -> Mapping[Vertex, int]:
    '''Cached VertexOrdering.ranks.'''
    return ordering.ranks(r, n)


def random_relabeling(r: int, n: int, seed: int) -> VertexOrdering:
    '''Arbitrary total order on the vertices drawn from a seeded permutation.'''
    all_vertices = vertices(r, n)
    permutation = np.random.default_rng(seed).permutation(len(all_vertices))
    return VertexOrdering(OrderingKind.RELABELED,
                          tuple(all_vertices[ix] for ix in permutation))


def vertices(r: int, n: int) -> List[Vertex]:
    '''Vertices of the r x n rectangular graph in lexicographic order.'''
    _check_dimensions(r, n)
    return [(i, j) for i in range(1, r + 1) for j in range(1, n + 1)]


def cell_index(vertex: Vertex, n: int) -> int:
    '''Row-major 0-based index of the vertex.'''
    i, j = vertex
    return (i - 1) * n + (j - 1)


def edge_count(r: int, n: int) -> int:
    '''Number of edges: r * C(n, 2) row edges plus n * C(r, 2) column edges.'''
    return r * n * (n - 1) // 2 + n * r * (r - 1) // 2


def canonical_edges(r: int, n: int, ordering: VertexOrdering = LEX) -> List[Edge]:
    '''All pairs of vertices with a coordinate in common.

    Each edge is stored as (u, v) with u preceding v under `ordering` and the
    list is sorted by (u, v) under the same order.
    '''
    rank = vertex_ranks(r, n, ordering)
    edges = []
    for u, v in itertools.combinations(vertices(r, n), 2):
        if u[0] == v[0] or u[1] == v[1]:
            edges.append((u, v) if rank[u] < rank[v] else (v, u))
    edges.sort(key=lambda edge: (rank[edge[0]], rank[edge[1]]))
    return edges


class EdgeTables(NamedTuple):
    '''Numpy view of the canonical edges, one entry per edge id.

    `smaller` and `larger` hold the cell index of the order-smaller and
    order-larger endpoint. `incident` lists the edge ids at every cell.
    '''
    smaller: np.ndarray
    larger: np.ndarray
    horizontal: np.ndarray
    edge_ids: Mapping[Edge, int]
    incident: Tuple[Tuple[int, ...], ...]


class RectangularGraph(NamedTuple):
    '''The r x n rectangular graph with its canonical edge order.'''
    r: int
    n: int
    ordering: VertexOrdering
    edges: Tuple[Edge, ...]

    @property
    def tables(self) -> EdgeTables:
        return _edge_tables(self.r, self.n, self.ordering)

    def edge_id(self, u: Vertex, v: Vertex) -> int:
        '''Id of the edge between u and v, in either order.'''
        try:
            return self.tables.edge_ids[(u, v)]
        except KeyError as err:
            raise StructuralError(f'{u} and {v} are not adjacent in {self.r}x{self.n}.') from err

    def vertices(self) -> List[Vertex]:
        return vertices(self.r, self.n)


@functools.lru_cache(maxsize=None)
def rectangular_graph(r: int, n: int, ordering: VertexOrdering = LEX) -> RectangularGraph:
    '''Returns the (cached) rectangular graph of size r x n.'''
    edges = tuple(canonical_edges(r, n, ordering))
    assert len(edges) == edge_count(r, n), 'Edge enumeration lost or doubled an edge'
    return RectangularGraph(r=r, n=n, ordering=ordering, edges=edges)


@functools.lru_cache(maxsize=None)
def _edge_tables(r: int, n: int, ordering: VertexOrdering) -> EdgeTables:
    graph = rectangular_graph(r, n, ordering)
    edges_num = len(graph.edges)
    # Initialize with impossible value to validate that every edge is filled.
    smaller = np.full((edges_num, ), graph.r * n, dtype=np.int64)
    larger = np.full((edges_num, ), graph.r * n, dtype=np.int64)
    horizontal = np.zeros((edges_num, ), dtype=bool)
    edge_ids: Dict[Edge, int] = {}
    incident: List[List[int]] = [[] for _ in range(graph.r * n)]

    for ix, (u, v) in enumerate(graph.edges):
        smaller[ix] = cell_index(u, n)
        larger[ix] = cell_index(v, n)
        horizontal[ix] = u[0] == v[0]
        edge_ids[(u, v)] = ix
        edge_ids[(v, u)] = ix
        incident[smaller[ix]].append(ix)
        incident[larger[ix]].append(ix)

    assert np.all(smaller < graph.r * n), 'smaller contains an edge without endpoint'
    assert np.all(larger < graph.r * n), 'larger contains an edge without endpoint'
    for table in (smaller, larger, horizontal):
        table.flags.writeable = False

    return EdgeTables(smaller=smaller,
                      larger=larger,
                      horizontal=horizontal,
                      edge_ids=edge_ids,
                      incident=tuple(tuple(ids) for ids in incident))


def to_networkx(graph: RectangularGraph) -> nx.Graph:
    '''Undirected networkx graph with (i, j) nodes.'''
    result = nx.Graph()
    result.add_nodes_from(graph.vertices())
    result.add_edges_from(graph.edges)
    return result


class Violation(NamedTuple):
    '''One broken invariant of a rectangle.

    kind is 'row' or 'column' (where = line number, symbol repeated in it),
    'range' (where = cell, symbol outside 0..n-1) or 'membership'
    (where = cell, symbol missing from the cell list).
    '''
    kind: str
    where: Union[int, Vertex]
    symbol: Symbol


class Verdict(NamedTuple):
    valid: bool
    violations: Tuple[Violation, ...]


def as_grid(entries: Iterable[Iterable]) -> Tuple[tuple, ...]:
    '''Tuple of row tuples; rejects ragged or empty arrays.'''
    try:
        grid = tuple(tuple(row) for row in entries)
    except TypeError as err:
        raise StructuralError('Rectangle should be a sequence of rows.') from err
    if not grid or not grid[0]:
        raise StructuralError('Rectangle should have at least one row and one column.')
    widths = {len(row) for row in grid}
    if len(widths) != 1:
        raise StructuralError(f'Rectangle is ragged, row lengths are {sorted(widths)}.')
    return tuple(tuple(_plain(x) for x in row) for row in grid)


def _plain(x):
    return int(x) if isinstance(x, np.integer) else x


def line_repeats(grid: Sequence[Sequence[Symbol]]) -> List[Violation]:
    '''Every (row, symbol) and (column, symbol) pair that repeats.'''
    violations = []
    for i, row in enumerate(grid, start=1):
        for symbol, count in collections.Counter(row).items():
            if count > 1:
                violations.append(Violation('row', i, symbol))
    for j, column in enumerate(zip(*grid), start=1):
        for symbol, count in collections.Counter(column).items():
            if count > 1:
                violations.append(Violation('column', j, symbol))
    return violations


def validate_latin_rectangle(entries: Iterable[Iterable[int]]) -> Verdict:
    '''Checks that rows and columns are repetition free over 0..n-1.'''
    grid = as_grid(entries)
    n = len(grid[0])
    violations = line_repeats(grid)
    for i, row in enumerate(grid, start=1):
        for j, x in enumerate(row, start=1):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                violations.append(Violation('range', (i, j), x))
    return Verdict(valid=not violations, violations=tuple(violations))


class LatinRectangle(NamedTuple):
    '''r x n array over 0..n-1 without repetitions in rows and columns.'''
    entries: Grid

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


def latin_rectangle(entries: Iterable[Iterable[int]]) -> LatinRectangle:
    '''Validated LatinRectangle; raises PreconditionError listing the violations.'''
    verdict = validate_latin_rectangle(entries)
    if not verdict.valid:
        raise PreconditionError(f'Not a latin rectangle: {list(verdict.violations)}')
    return LatinRectangle(as_grid(entries))


def random_latin_rectangle(r: int, n: int, seed: int) -> LatinRectangle:
    '''Circulant square with shuffled rows, columns and symbols, cut to r rows.'''
    if not 1 <= r <= n:
        raise PreconditionError(f'Expect 1 <= r <= n, got r={r} n={n}.')
    rng = np.random.default_rng(seed)
    square = np.add.outer(np.arange(n), np.arange(n)) % n
    square = square[rng.permutation(n)][:, rng.permutation(n)]
    square = rng.permutation(n)[square]
    return latin_rectangle(square[:r])


class OutDegreeTarget(NamedTuple):
    '''Required out-degree of every vertex, values[i - 1][j - 1] for (i, j).'''
    values: Grid

    @property
    def r(self) -> int:
        return len(self.values)

    @property
    def n(self) -> int:
        return len(self.values[0])

    def of(self, vertex: Vertex) -> int:
        i, j = vertex
        return self.values[i - 1][j - 1]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def is_realizable_sum(self) -> bool:
        '''Out-degrees of an orientation sum up to the number of edges.'''
        return int(self.as_array().sum()) == edge_count(self.r, self.n)


def out_degree_target(values: Iterable[Iterable[int]]) -> OutDegreeTarget:
    '''Validated OutDegreeTarget: 0 <= value < r + n - 1 everywhere.'''
    grid = as_grid(values)
    r, n = len(grid), len(grid[0])
    for i, row in enumerate(grid, start=1):
        for j, value in enumerate(row, start=1):
            if not isinstance(value, int) or not 0 <= value < r + n - 1:
                raise PreconditionError(
                    f'Out-degree of {(i, j)} should be in [0, {r + n - 2}], got {value}.')
    return OutDegreeTarget(grid)


class ListAssignment(NamedTuple):
    '''A list of allowed symbols for every cell.

    Symbols are interned: `lists` holds dense ids, `symbols[id]` is the
    external symbol. Ids follow the sorted order of the external symbols.
    '''
    lists: Tuple[Tuple[FrozenSet[int], ...], ...]
    symbols: Tuple[Symbol, ...]

    @property
    def r(self) -> int:
        return len(self.lists)

    @property
    def n(self) -> int:
        return len(self.lists[0])

    def external(self, vertex: Vertex) -> List[Symbol]:
        '''Sorted external symbols of the cell.'''
        i, j = vertex
        return [self.symbols[ix] for ix in sorted(self.lists[i - 1][j - 1])]

    def symbol_ids(self) -> Dict[Symbol, int]:
        return {symbol: ix for ix, symbol in enumerate(self.symbols)}

    def sizes(self) -> np.ndarray:
        return np.array([[len(cell) for cell in row] for row in self.lists], dtype=np.int64)

    def min_size(self) -> int:
        return int(self.sizes().min())

    def as_lists(self) -> List[List[List[Symbol]]]:
        '''External form: r x n nested lists of sorted symbols.'''
        return [[self.external((i, j)) for j in range(1, self.n + 1)]
                for i in range(1, self.r + 1)]


def list_assignment(lists: Iterable[Iterable[Iterable[Symbol]]]) -> ListAssignment:
    '''Interns an r x n array of symbol collections.

    Symbols are either all integers or all strings.
    '''
    grid = as_grid(lists)
    if any(isinstance(cell, (str, bytes)) for row in grid for cell in row):
        raise StructuralError('Every cell should hold a list of symbols, not a bare string.')
    try:
        cells = [[frozenset(_plain(s) for s in cell) for cell in row] for row in grid]
    except TypeError as err:
        raise StructuralError('Every cell should hold a list of symbols.') from err

    symbols = set()
    for i, row in enumerate(cells, start=1):
        for j, cell in enumerate(row, start=1):
            if not cell:
                raise StructuralError(f'List of the cell {(i, j)} is empty.')
            symbols.update(cell)
    kinds = {_symbol_kind(s) for s in symbols}
    if None in kinds or len(kinds) > 1:
        raise StructuralError('Symbols should be all integers or all strings.')

    table = tuple(sorted(symbols))
    ids = {symbol: ix for ix, symbol in enumerate(table)}
    interned = tuple(tuple(frozenset(ids[s] for s in cell) for cell in row) for row in cells)
    return ListAssignment(lists=interned, symbols=table)


def _symbol_kind(symbol) -> Optional[type]:
    if isinstance(symbol, bool):
        return None
    if isinstance(symbol, int):
        return int
    if isinstance(symbol, str):
        return str
    return None


def _check_dimensions(r: int, n: int):
    if not (isinstance(r, int) and isinstance(n, int)) or r < 1 or n < 1:
        raise StructuralError(f'Dimensions should be positive integers, got r={r} n={n}.')
