#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Type hints used internally by this package"""

from typing import (
    Dict,
    Union,
    Any,
    List,
    TYPE_CHECKING,
    Tuple,
  )

import numpy as np
import numpy.typing as npt

if TYPE_CHECKING:
  # mypy cannot deal with recursive type definitions
  Jsonable = Union[str, int, float, bool, None, Dict[str, Any], List[Any]]
else:
  Jsonable = Union[str, int, float, bool, None, Dict[str, 'Jsonable'], List['Jsonable']]
"""A value that round-trips through json: manifests, label records, metrics, checkpoint headers"""

JsonableDict = Dict[str, Jsonable]
JsonableList = List[Jsonable]

FloatArray = npt.NDArray[np.float64]
"""A 64-bit float numpy array of any shape"""

BoolArray = npt.NDArray[np.bool_]
"""A boolean numpy array of any shape; True marks a valid (unpadded) step"""

Point = Tuple[float, float]
"""A 2-D coordinate in the unit-square workspace"""
