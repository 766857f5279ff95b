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
'''Orientations of rectangular graphs and per-orientation computations.

An orientation is one bit per canonical edge: the bit is set when the edge is
directed toward its order-smaller endpoint (an inverted edge). The parity of
the orientation is the parity of the popcount.
'''

import enum
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from latinrect.errors import PreconditionError, StructuralError
from latinrect.rectangular_graph import (LEX, LatinRectangle, RectangularGraph,
                                         Vertex, VertexOrdering, as_grid, line_repeats,
                                         rectangular_graph)

Triangle = Tuple[Vertex, Vertex, Vertex]


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1


class Orientation(NamedTuple):
    '''Direction of every edge of `graph`, packed into an integer.'''
    graph: RectangularGraph
    bits: int


def orientation(graph: RectangularGraph, bits: int) -> Orientation:
    '''Validated Orientation.'''
    if not 0 <= bits < (1 << len(graph.edges)):
        raise StructuralError(
            f'Orientation of {len(graph.edges)} edges got the bit pattern {bits:#x}.')
    return Orientation(graph=graph, bits=bits)


def from_arcs(graph: RectangularGraph, arcs_: Iterable[Tuple[Vertex, Vertex]]) -> Orientation:
    '''Orientation from (tail, head) pairs, every edge listed exactly once.'''
    bits = 0
    seen = set()
    for tail, head in arcs_:
        ix = graph.edge_id(tail, head)
        if ix in seen:
            raise StructuralError(f'Edge {tail}-{head} is directed twice.')
        seen.add(ix)
        if graph.edges[ix][0] == head:
            bits |= 1 << ix
    if len(seen) != len(graph.edges):
        raise StructuralError(f'Expect {len(graph.edges)} arcs, got {len(seen)}.')
    return Orientation(graph=graph, bits=bits)


def bit_vector(d: Orientation) -> np.ndarray:
    '''Boolean array with one entry per canonical edge.'''
    edges_num = len(d.graph.edges)
    raw = np.frombuffer(d.bits.to_bytes(max(1, (edges_num + 7) // 8), 'little'),
                        dtype=np.uint8)
    return np.unpackbits(raw, bitorder='little')[:edges_num].astype(bool)


def tails(d: Orientation) -> np.ndarray:
    '''Cell index of the tail of every edge.'''
    tables = d.graph.tables
    return np.where(bit_vector(d), tables.larger, tables.smaller)


def is_inverted(d: Orientation, edge_id: int) -> bool:
    return bool((d.bits >> edge_id) & 1)


def points_to(d: Orientation, u: Vertex, v: Vertex) -> bool:
    '''Is the edge between u and v directed u -> v?'''
    ix = d.graph.edge_id(u, v)
    tail = d.graph.edges[ix][1] if is_inverted(d, ix) else d.graph.edges[ix][0]
    return tail == u


def arcs(d: Orientation) -> List[Tuple[Vertex, Vertex]]:
    '''(tail, head) of every edge in canonical order.'''
    result = []
    for ix, (u, v) in enumerate(d.graph.edges):
        result.append((v, u) if is_inverted(d, ix) else (u, v))
    return result


def reverse_edges(d: Orientation, edge_ids: Iterable[int]) -> Orientation:
    '''Orientation with the given edges reversed.'''
    mask = 0
    for ix in edge_ids:
        mask ^= 1 << ix
    return Orientation(graph=d.graph, bits=d.bits ^ mask)


def to_digraph(d: Orientation) -> nx.DiGraph:
    result = nx.DiGraph()
    result.add_nodes_from(d.graph.vertices())
    result.add_edges_from(arcs(d))
    return result


def inversions(d: Orientation) -> int:
    '''Number of inverted edges.'''
    return bin(d.bits).count('1')


def parity(d: Orientation) -> Parity:
    return Parity(inversions(d) & 1)


class DegreeProfile(NamedTuple):
    '''Out-degrees as r x n arrays; horizontal counts only same-row edges.'''
    total: np.ndarray
    horizontal: np.ndarray


def degree_profile(d: Orientation) -> DegreeProfile:
    graph = d.graph
    size = graph.r * graph.n
    tail = tails(d)
    total = np.bincount(tail, minlength=size)
    horizontal = np.bincount(tail[graph.tables.horizontal], minlength=size)
    return DegreeProfile(total=total.reshape(graph.r, graph.n),
                         horizontal=horizontal.reshape(graph.r, graph.n))


class LineKind(enum.Enum):
    ROW = 'row'
    COLUMN = 'column'


class Line(NamedTuple):
    '''A row or a column; its vertices induce a complete subgraph.'''
    kind: LineKind
    index: int

    def vertices(self, r: int, n: int) -> List[Vertex]:
        '''Vertices of the line in position order.'''
        if self.kind is LineKind.ROW:
            if not 1 <= self.index <= r:
                raise StructuralError(f'Row {self.index} is out of 1..{r}.')
            return [(self.index, j) for j in range(1, n + 1)]
        if not 1 <= self.index <= n:
            raise StructuralError(f'Column {self.index} is out of 1..{n}.')
        return [(i, self.index) for i in range(1, r + 1)]


def lines(r: int, n: int) -> List[Line]:
    '''All lines, rows first.'''
    return ([Line(LineKind.ROW, i) for i in range(1, r + 1)] +
            [Line(LineKind.COLUMN, j) for j in range(1, n + 1)])


def line_through(u: Vertex, v: Vertex) -> Line:
    '''The line containing two adjacent vertices.'''
    if u[0] == v[0]:
        return Line(LineKind.ROW, u[0])
    if u[1] == v[1]:
        return Line(LineKind.COLUMN, u[1])
    raise StructuralError(f'{u} and {v} share no line.')


def line_out_degrees(d: Orientation, line: Line) -> Tuple[int, ...]:
    '''Out-degree of every line vertex inside the line's complete subgraph.'''
    line_vertices = line.vertices(d.graph.r, d.graph.n)
    degrees = [0] * len(line_vertices)
    for p, u in enumerate(line_vertices):
        for q in range(p + 1, len(line_vertices)):
            if points_to(d, u, line_vertices[q]):
                degrees[p] += 1
            else:
                degrees[q] += 1
    return tuple(degrees)


def associated_matrix(d: Orientation) -> np.ndarray:
    '''Horizontal out-degrees, for any orientation.'''
    return degree_profile(d).horizontal


def associated_orientation(rectangle: Union[LatinRectangle, Sequence[Sequence[int]]],
                           ordering: VertexOrdering = LEX) -> Orientation:
    '''Row edges go from the larger entry to the smaller one, column edges
    from the smaller entry to the larger one.

    Entries only need to be distinct along every row and column.
    '''
    entries = rectangle.entries if isinstance(rectangle, LatinRectangle) else as_grid(rectangle)
    if any(isinstance(x, bool) or not isinstance(x, int) for row in entries for x in row):
        raise StructuralError('Rectangle entries should be integers.')
    repeats = line_repeats(entries)
    if repeats:
        raise PreconditionError(f'Equal entries in a line leave an edge undirected: {repeats}')
    graph = rectangular_graph(len(entries), len(entries[0]), ordering)

    bits = 0
    for ix, (u, v) in enumerate(graph.edges):
        at_u = entries[u[0] - 1][u[1] - 1]
        at_v = entries[v[0] - 1][v[1] - 1]
        if u[0] == v[0]:
            u_is_tail = at_u > at_v
        else:
            u_is_tail = at_u < at_v
        if not u_is_tail:
            bits |= 1 << ix
    return Orientation(graph=graph, bits=bits)


class TriangleCheck(NamedTuple):
    '''found, and a directed 3-cycle u -> v -> w -> u when found.'''
    found: bool
    witness: Optional[Triangle]


def has_cyclic_triangle(d: Orientation) -> TriangleCheck:
    '''Looks for a cyclic triangle line by line.

    Cyclic triangles only live inside a row or a column, and a tournament has
    one iff two of its vertices share an out-degree. For the least line with a
    repeated out-degree, take the least such pair u -> v: u has more in-coming
    edges plus v out-going edges than there are other vertices, so some w has
    w -> u and v -> w.
    '''
    r, n = d.graph.r, d.graph.n
    for line in lines(r, n):
        pair = _first_repeat(line_out_degrees(d, line))
        if pair is None:
            continue
        line_vertices = line.vertices(r, n)
        u, v = line_vertices[pair[0]], line_vertices[pair[1]]
        if not points_to(d, u, v):
            u, v = v, u
        for w in line_vertices:
            if w not in (u, v) and points_to(d, v, w) and points_to(d, w, u):
                return TriangleCheck(found=True, witness=(u, v, w))
        raise AssertionError(f'Repeated out-degree in {line} without a cyclic triangle')
    return TriangleCheck(found=False, witness=None)


def _first_repeat(degrees: Sequence[int]) -> Optional[Tuple[int, int]]:
    '''Least position pair (p, q), p < q, with equal degrees.'''
    for p, degree in enumerate(degrees):
        for q in range(p + 1, len(degrees)):
            if degrees[q] == degree:
                return p, q
    return None
