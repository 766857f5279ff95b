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
'''Parity census of orientations with prescribed out-degrees.

DE(delta) and DO(delta) count the even and odd orientations of the r x n
rectangular graph with out-degree delta(v) at every vertex v. The orientations
with a cyclic triangle cancel out in pairs under an involution that flips an
odd number of edges, and for the delta of `delta_map` the only triangle-free
orientation is the one associated with the circulant rectangle, so
|DE - DO| = 1 whenever r < n. Given lists of size n, a nonzero DE - DO
guarantees a proper list coloring (Alon and Tarsi), i.e. a partial latin
rectangle.
'''

import functools
import itertools
import logging
import math
import multiprocessing
from typing import (Callable, Dict, FrozenSet, List, Mapping, NamedTuple,
                    Optional, Tuple)

import numpy as np

from latinrect import config
from latinrect.errors import PreconditionError, SizeGuardError, StructuralError
from latinrect.orientations import (Line, LineKind, Orientation, Parity,
                                    associated_orientation, degree_profile,
                                    has_cyclic_triangle, line_out_degrees, lines,
                                    parity, points_to, reverse_edges)
from latinrect.rectangular_graph import (LEX, LatinRectangle, OutDegreeTarget,
                                         RectangularGraph, Vertex, VertexOrdering,
                                         cell_index, edge_count, latin_rectangle,
                                         out_degree_target, rectangular_graph,
                                         vertex_ranks)

logger = logging.getLogger(__name__)


def delta_map(r: int, n: int) -> OutDegreeTarget:
    '''Out-degrees realized by the circulant rectangle and by nothing else
    triangle-free:

        delta(i, j) = r - 2 + j   for j <= n - r + 1,
                      n - 1       for n - r + 1 < j <= n - i + 1,
                      r - 1       for j > n - i + 1.
    '''
    if not 1 <= r < n:
        raise PreconditionError(f'delta map needs 1 <= r < n, got r={r} n={n}.')

    def value(i: int, j: int) -> int:
        if j <= n - r + 1:
            return r - 2 + j
        if j <= n - i + 1:
            return n - 1
        return r - 1

    return out_degree_target([[value(i, j) for j in range(1, n + 1)]
                              for i in range(1, r + 1)])


def circulant(r: int, n: int) -> LatinRectangle:
    '''The r x n rectangle with (i + j - 2) mod n at (i, j).'''
    if not 1 <= r <= n:
        raise PreconditionError(f'Circulant needs 1 <= r <= n, got r={r} n={n}.')
    return latin_rectangle(np.add.outer(np.arange(r), np.arange(n)) % n)


class ParityCensus(NamedTuple):
    '''Number of even (de) and odd (do_) orientations realizing a delta.'''
    de: int
    do_: int
    ordering: VertexOrdering

    @property
    def difference(self) -> int:
        return self.de - self.do_

    @property
    def gap(self) -> int:
        return abs(self.de - self.do_)

    @property
    def total(self) -> int:
        return self.de + self.do_


class TriangleSplit(NamedTuple):
    '''Census of the triangle-containing and of the triangle-free realizations.'''
    containing: ParityCensus
    free: ParityCensus


class _Plan(NamedTuple):
    '''Edge processing order of the search.

    Vertices are visited in lexicographic order and every vertex brings its
    edges to the vertices visited before, its column edges contiguously.
    `completes[k]` lists the lines whose last edge is the k-th processed one,
    as (is_row, cells).
    '''
    graph: RectangularGraph
    order: Tuple[int, ...]
    completes: Tuple[Tuple[Tuple[bool, Tuple[int, ...]], ...], ...]


@functools.lru_cache(maxsize=None)
def _plan(r: int, n: int, ordering: VertexOrdering) -> _Plan:
    graph = rectangular_graph(r, n, ordering)
    tables = graph.tables
    smaller, larger = tables.smaller.tolist(), tables.larger.tolist()
    horizontal = tables.horizontal.tolist()

    def key(ix):
        late, early = max(smaller[ix], larger[ix]), min(smaller[ix], larger[ix])
        return (late, not horizontal[ix], early)

    order = sorted(range(len(graph.edges)), key=key)
    position = {ix: k for k, ix in enumerate(order)}

    completes: List[List[Tuple[bool, Tuple[int, ...]]]] = [[] for _ in order]
    for line in lines(r, n):
        line_vertices = line.vertices(r, n)
        ids = [graph.edge_id(u, v) for u, v in itertools.combinations(line_vertices, 2)]
        if ids:
            cells = tuple(cell_index(v, n) for v in line_vertices)
            completes[max(position[ix] for ix in ids)].append(
                (line.kind is LineKind.ROW, cells))

    return _Plan(graph=graph,
                 order=tuple(order),
                 completes=tuple(tuple(items) for items in completes))


class _Search:
    '''Backtracking over edge directions with two-sided out-degree pruning.

    An edge may point from t to h only when t still misses out-going edges
    and h keeps enough undecided edges to reach its target afterwards.
    '''

    def __init__(self, plan: _Plan, delta: OutDegreeTarget):
        tables = plan.graph.tables
        self.plan = plan
        self.smaller = tables.smaller.tolist()
        self.larger = tables.larger.tolist()
        self.horizontal = tables.horizontal.tolist()
        self.target = [value for row in delta.values for value in row]
        self.out = [0] * len(self.target)
        self.row_out = [0] * len(self.target)
        self.column_out = [0] * len(self.target)
        self.remaining = [len(ids) for ids in tables.incident]
        self.bits = 0
        self.inverted = 0
        self.nodes = 0
        self._memo: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, int]] = {}

    def allowed(self, k: int) -> List[bool]:
        '''Feasible choices at step k: [not inverted, inverted].'''
        ix = self.plan.order[k]
        s, l = self.smaller[ix], self.larger[ix]
        return [self._can(s, l), self._can(l, s)]

    def _can(self, tail: int, head: int) -> bool:
        return (self.out[tail] < self.target[tail] and
                self.out[head] + self.remaining[head] - 1 >= self.target[head])

    def push(self, k: int, inverted: bool):
        ix = self.plan.order[k]
        s, l = self.smaller[ix], self.larger[ix]
        tail = l if inverted else s
        self.out[tail] += 1
        if self.horizontal[ix]:
            self.row_out[tail] += 1
        else:
            self.column_out[tail] += 1
        self.remaining[s] -= 1
        self.remaining[l] -= 1
        if inverted:
            self.bits |= 1 << ix
            self.inverted += 1

    def pop(self, k: int, inverted: bool):
        ix = self.plan.order[k]
        s, l = self.smaller[ix], self.larger[ix]
        tail = l if inverted else s
        self.out[tail] -= 1
        if self.horizontal[ix]:
            self.row_out[tail] -= 1
        else:
            self.column_out[tail] -= 1
        self.remaining[s] += 1
        self.remaining[l] += 1
        if inverted:
            self.bits &= ~(1 << ix)
            self.inverted -= 1

    def count(self, k: int) -> Tuple[int, int]:
        '''(even, odd) completions of the current partial orientation, relative
        to the parity of what is already decided.

        Memoized on the out-degree vector: the undecided edges are the same for
        every state at step k.
        '''
        if k == len(self.plan.order):
            return 1, 0
        key = (k, tuple(self.out))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self.nodes += 1

        even, odd = 0, 0
        for inverted, ok in enumerate(self.allowed(k)):
            if not ok:
                continue
            self.push(k, bool(inverted))
            sub_even, sub_odd = self.count(k + 1)
            self.pop(k, bool(inverted))
            if inverted:
                even, odd = even + sub_odd, odd + sub_even
            else:
                even, odd = even + sub_even, odd + sub_odd

        self._memo[key] = (even, odd)
        return even, odd

    def walk(self, k: int, visit: Callable[[int], None], triangle_free: bool = False):
        '''Calls visit(bits) for every realization below the current state.

        With triangle_free, a branch is cut as soon as a completed line has a
        repeated out-degree.
        '''
        self.nodes += 1
        if k == len(self.plan.order):
            visit(self.bits)
            return
        for inverted, ok in enumerate(self.allowed(k)):
            if not ok:
                continue
            self.push(k, bool(inverted))
            if not triangle_free or self._lines_transitive(k):
                self.walk(k + 1, visit, triangle_free)
            self.pop(k, bool(inverted))

    def _lines_transitive(self, k: int) -> bool:
        for is_row, cells in self.plan.completes[k]:
            degrees = self.row_out if is_row else self.column_out
            if len({degrees[c] for c in cells}) != len(cells):
                return False
        return True


def _guard(r: int, n: int, delta: OutDegreeTarget, max_edges: Optional[int]):
    if (delta.r, delta.n) != (r, n):
        raise StructuralError(f'delta is {delta.r}x{delta.n}, the graph is {r}x{n}.')
    limit = config.max_edges(max_edges)
    edges = edge_count(r, n)
    if edges > limit:
        raise SizeGuardError(edges=edges, limit=limit)


def parity_census(r: int,
                  n: int,
                  delta: OutDegreeTarget,
                  ordering: VertexOrdering = LEX,
                  max_edges: Optional[int] = None,
                  jobs: int = 1) -> ParityCensus:
    '''Exact DE(delta) and DO(delta).

    With jobs > 1 the search tree is split on the directions of the first few
    edges and the subtrees are counted in a process pool; the counts only add
    up, so the result does not depend on the split.
    '''
    _guard(r, n, delta, max_edges)
    if not delta.is_realizable_sum():
        return ParityCensus(de=0, do_=0, ordering=ordering)

    if jobs > 1:
        even, odd = _parallel_count(r, n, delta, ordering, jobs)
    else:
        search = _Search(_plan(r, n, ordering), delta)
        even, odd = search.count(0)
        logger.debug('Census %dx%d %s: %d nodes, %d states', r, n, ordering.name,
                     search.nodes, len(search._memo))
    return ParityCensus(de=even, do_=odd, ordering=ordering)


def _prefixes(search: _Search, depth: int) -> List[Tuple[bool, ...]]:
    '''Feasible direction choices of the first `depth` processed edges.'''
    found: List[Tuple[bool, ...]] = []
    chosen: List[bool] = []

    def descend(k: int):
        if k == depth:
            found.append(tuple(chosen))
            return
        for inverted, ok in enumerate(search.allowed(k)):
            if ok:
                search.push(k, bool(inverted))
                chosen.append(bool(inverted))
                descend(k + 1)
                chosen.pop()
                search.pop(k, bool(inverted))

    descend(0)
    return found


def _count_subtree(prefix: Tuple[bool, ...], r: int, n: int, values, ordering) -> Tuple[int, int]:
    search = _Search(_plan(r, n, ordering), OutDegreeTarget(values))
    for k, inverted in enumerate(prefix):
        search.push(k, inverted)
    even, odd = search.count(len(prefix))
    if search.inverted % 2:
        even, odd = odd, even
    return even, odd


def _parallel_count(r, n, delta, ordering, jobs) -> Tuple[int, int]:
    edges = edge_count(r, n)
    depth = min(edges, int(math.ceil(math.log2(jobs))) + 3)
    prefixes = _prefixes(_Search(_plan(r, n, ordering), delta), depth)
    logger.debug('Census %dx%d split into %d subtrees at depth %d', r, n, len(prefixes), depth)

    worker = functools.partial(_count_subtree, r=r, n=n, values=delta.values, ordering=ordering)
    even, odd = 0, 0
    with multiprocessing.Pool(processes=jobs) as pool:
        for sub_even, sub_odd in pool.imap_unordered(worker, prefixes, chunksize=1):
            even += sub_even
            odd += sub_odd
    return even, odd


def realizations(r: int,
                 n: int,
                 delta: OutDegreeTarget,
                 ordering: VertexOrdering = LEX,
                 max_edges: Optional[int] = None) -> List[Orientation]:
    '''Every orientation with out-degree delta(v) at every vertex v.'''
    return _collect(r, n, delta, ordering, max_edges, triangle_free=False)


def triangle_free_realizations(r: int,
                               n: int,
                               delta: OutDegreeTarget,
                               ordering: VertexOrdering = LEX,
                               max_edges: Optional[int] = None) -> List[Orientation]:
    '''Realizations of delta without a cyclic triangle.'''
    return _collect(r, n, delta, ordering, max_edges, triangle_free=True)


def _collect(r, n, delta, ordering, max_edges, triangle_free) -> List[Orientation]:
    _guard(r, n, delta, max_edges)
    if not delta.is_realizable_sum():
        return []
    plan = _plan(r, n, ordering)
    found: List[Orientation] = []
    search = _Search(plan, delta)
    search.walk(0, lambda bits: found.append(Orientation(graph=plan.graph, bits=bits)),
                triangle_free=triangle_free)
    logger.debug('Walk %dx%d: %d nodes, %d orientations', r, n, search.nodes, len(found))
    return sorted(found, key=lambda d: d.bits)


def triangle_split_census(r: int,
                          n: int,
                          delta: OutDegreeTarget,
                          ordering: VertexOrdering = LEX,
                          max_edges: Optional[int] = None) -> TriangleSplit:
    '''Census split by the presence of a cyclic triangle.'''
    total = parity_census(r, n, delta, ordering, max_edges)
    free_even, free_odd = 0, 0
    for d in triangle_free_realizations(r, n, delta, ordering, max_edges):
        if parity(d) is Parity.EVEN:
            free_even += 1
        else:
            free_odd += 1
    return TriangleSplit(
        containing=ParityCensus(de=total.de - free_even, do_=total.do_ - free_odd,
                                ordering=ordering),
        free=ParityCensus(de=free_even, do_=free_odd, ordering=ordering))


class InvolutionTrace(NamedTuple):
    '''What the involution did.

    pivot is the selected pair (v, w), v before w in the vertex order; tail and
    head are the same pair ordered by the direction of their edge. The other
    vertices u of the pivot line are split by the edges to tail and head:
    v_oo (tail -> u <- head), v_oi (tail -> u -> head), v_io (tail <- u <- head)
    and v_ii (tail <- u -> head).
    '''
    pivot: Tuple[Vertex, Vertex]
    line: Line
    tail: Vertex
    head: Vertex
    v_oo: FrozenSet[Vertex]
    v_oi: FrozenSet[Vertex]
    v_io: FrozenSet[Vertex]
    v_ii: FrozenSet[Vertex]
    flipped: int


def pivot_pair(d: Orientation) -> Optional[Tuple[Vertex, Vertex, Line]]:
    '''Least pair (v, w) of a common line with equal out-degree in that line.

    Pairs are compared as (v, w) under the graph's vertex order, rows and
    columns compete in one pool. None when the orientation is triangle-free.
    '''
    r, n = d.graph.r, d.graph.n
    rank = vertex_ranks(r, n, d.graph.ordering)
    best = None
    for line in lines(r, n):
        line_vertices = line.vertices(r, n)
        degrees = line_out_degrees(d, line)
        for p, q in itertools.combinations(range(len(line_vertices)), 2):
            if degrees[p] != degrees[q]:
                continue
            v, w = sorted((line_vertices[p], line_vertices[q]), key=rank.__getitem__)
            key = (rank[v], rank[w])
            if best is None or key < best[0]:
                best = (key, v, w, line)
    if best is None:
        return None
    _, v, w, line = best
    return v, w, line


def involution_phi(d: Orientation) -> Tuple[Orientation, InvolutionTrace]:
    '''Parity reversing involution on the triangle-containing realizations.

    Reverses the pivot edge and every edge between the pivot pair and the
    vertices of v_oi and v_io. Out-degrees stay the same and the number of
    reversed edges, 2 |v_oi + v_io| + 1, is odd.
    '''
    pivot = pivot_pair(d)
    if pivot is None:
        raise PreconditionError('Involution needs an orientation with a cyclic triangle.')
    v, w, line = pivot
    tail, head = (v, w) if points_to(d, v, w) else (w, v)

    groups: Dict[Tuple[bool, bool], List[Vertex]] = {
        (True, True): [], (True, False): [], (False, True): [], (False, False): []}
    for u in line.vertices(d.graph.r, d.graph.n):
        if u in (tail, head):
            continue
        groups[(points_to(d, tail, u), points_to(d, head, u))].append(u)
    v_oo, v_oi = groups[(True, True)], groups[(True, False)]
    v_io, v_ii = groups[(False, True)], groups[(False, False)]
    assert len(v_io) == len(v_oi) + 1, \
        f'Expect |V_io| = |V_oi| + 1 for the pivot {pivot}, got {len(v_io)} and {len(v_oi)}'

    graph = d.graph
    flip = [graph.edge_id(tail, head)]
    for u in v_oi + v_io:
        flip.append(graph.edge_id(tail, u))
        flip.append(graph.edge_id(head, u))

    trace = InvolutionTrace(pivot=(v, w),
                            line=line,
                            tail=tail,
                            head=head,
                            v_oo=frozenset(v_oo),
                            v_oi=frozenset(v_oi),
                            v_io=frozenset(v_io),
                            v_ii=frozenset(v_ii),
                            flipped=len(flip))
    return reverse_edges(d, flip), trace


INVOLUTION_PROPERTIES = ('involutive', 'parity_flips', 'degrees_preserved',
                         'triangle_retained', 'pivot_stable', 'odd_flip_count')


class SelfCheckReport(NamedTuple):
    '''Outcome of the exhaustive involution check.

    `results` maps every property to (passed, failed) counts, `containing`
    is the census of the triangle-containing realizations.
    '''
    realizations: int
    checked: int
    results: Mapping[str, Tuple[int, int]]
    containing: ParityCensus

    @property
    def ok(self) -> bool:
        return (all(failed == 0 for _, failed in self.results.values()) and
                self.containing.de == self.containing.do_)


def involution_selfcheck(r: int,
                         n: int,
                         delta: Optional[OutDegreeTarget] = None,
                         ordering: VertexOrdering = LEX,
                         max_edges: Optional[int] = None) -> SelfCheckReport:
    '''Applies the involution to every triangle-containing realization of
    delta (delta_map(r, n) by default) and checks its properties.
    '''
    if delta is None:
        delta = delta_map(r, n)
    results = {name: [0, 0] for name in INVOLUTION_PROPERTIES}
    all_realizations = realizations(r, n, delta, ordering, max_edges)
    even, odd, checked = 0, 0, 0

    def record(name: str, holds: bool):
        results[name][0 if holds else 1] += 1

    for d in all_realizations:
        if not has_cyclic_triangle(d).found:
            continue
        checked += 1
        if parity(d) is Parity.EVEN:
            even += 1
        else:
            odd += 1

        image, trace = involution_phi(d)
        back, image_trace = involution_phi(image)
        record('involutive', back == d)
        record('parity_flips', parity(image) is not parity(d))
        record('degrees_preserved',
               np.array_equal(degree_profile(image).total, degree_profile(d).total))
        record('triangle_retained', has_cyclic_triangle(image).found)
        record('pivot_stable', image_trace.pivot == trace.pivot and
               image_trace.v_oi | image_trace.v_io == trace.v_oi | trace.v_io)
        record('odd_flip_count', trace.flipped % 2 == 1 and
               trace.flipped == 2 * len(trace.v_oi | trace.v_io) + 1)

    report = SelfCheckReport(realizations=len(all_realizations),
                             checked=checked,
                             results={name: (passed, failed)
                                      for name, (passed, failed) in results.items()},
                             containing=ParityCensus(de=even, do_=odd, ordering=ordering))
    logger.debug('Involution check %dx%d: %s', r, n, report)
    return report


def circulant_orientation(r: int, n: int, ordering: VertexOrdering = LEX) -> Orientation:
    '''Orientation associated with circulant(r, n).'''
    return associated_orientation(circulant(r, n), ordering)
