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
'''Package level settings.

The only runtime knob is the size guard of the exhaustive orientation search,
it could be overridden with the LATINRECT_MAX_EDGES environment variable.
'''

import os
from typing import Optional

from latinrect.errors import StructuralError

# (3, 4) has 30 edges, (4, 5) already 70.
DEFAULT_MAX_EDGES = 36
MAX_EDGES_ENV = 'LATINRECT_MAX_EDGES'

# Version of the JSON documents written by the command line tool.
SCHEMA_VERSION = 1


def max_edges(override: Optional[int] = None) -> int:
    '''Returns the size guard: explicit override, environment or default.'''
    if override is not None:
        return override
    value = os.environ.get(MAX_EDGES_ENV)
    if value is None:
        return DEFAULT_MAX_EDGES
    try:
        return int(value)
    except ValueError as err:
        raise StructuralError(f'{MAX_EDGES_ENV} should be an integer, got {value!r}') from err
