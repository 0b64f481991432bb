#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.numerics is a small dense-array compute core with
reverse-mode automatic differentiation, sized for the mistake detector.
"""

from .tensor import Tensor, TensorLike, Tape, as_tensor, parameter, backward, current_tape, MAX_AXES
from .ops import (
    MASK_FILL,
    add, sub, mul, div, scale, neg,
    sigmoid, tanh, exp, log, sqrt, abs_, relu,
    matmul, transpose, reshape, concat, slice_, sum_,
    row_softmax, row_log_softmax, layer_norm,
    mean_over_valid, topk_mean, topk_indices, max_over_valid,
  )
from .optim import AdamState, adam_step
