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
'''Global test fixtures.'''

import itertools
import json

import networkx as nx
import pytest

from latinrect.orientations import Orientation, to_digraph


def latin_rectangles(r, n):
    '''Every r x n latin rectangle, row by row.'''
    def extend(rows):
        if len(rows) == r:
            yield [list(row) for row in rows]
            return
        for row in itertools.permutations(range(n)):
            if all(row[j] != other[j] for other in rows for j in range(n)):
                yield from extend(rows + [row])

    yield from extend([])


def directed_triangles(d: Orientation):
    '''Brute force cyclic triangles through networkx.'''
    digraph = to_digraph(d)
    return [(u, v, w)
            for u, v, w in itertools.permutations(digraph.nodes, 3)
            if digraph.has_edge(u, v) and digraph.has_edge(v, w) and digraph.has_edge(w, u)]


@pytest.fixture(name='all_latin_rectangles')
def fixture_all_latin_rectangles():
    return latin_rectangles


@pytest.fixture(name='triangles_oracle')
def fixture_triangles_oracle():
    return directed_triangles


@pytest.fixture(name='write_json')
def fixture_write_json(tmp_path):
    '''Writes a JSON document into the test directory and returns its path.'''
    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding='utf-8')
        return str(path)

    return _write


@pytest.fixture(name='line_graph_oracle')
def fixture_line_graph_oracle():
    '''The line graph of K_{r,n}, which is the r x n rectangular graph.'''
    def _oracle(r, n):
        return nx.line_graph(nx.complete_bipartite_graph(r, n))

    return _oracle
