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
'''Exceptions raised by latinrect.'''


class LatinRectError(Exception):
    '''Base class of all latinrect errors.'''


class StructuralError(LatinRectError, ValueError):
    '''Input has the wrong shape: ragged arrays, mismatched dimensions, bad files.'''


class PreconditionError(LatinRectError, ValueError):
    '''An operation was called outside of its precondition.'''


class SizeGuardError(LatinRectError):
    '''Exhaustive enumeration refused because the graph has too many edges.'''

    def __init__(self, edges: int, limit: int):
        super().__init__(
            f'Refuse to enumerate orientations of {edges} edges, the limit is {limit}. '
            'Pass a larger max_edges to override.')
        self.edges = edges
        self.limit = limit


class UnsatisfiableError(LatinRectError):
    '''The solver exhausted the search space without a solution.'''

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats
