#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.train fits the mistake detector from video-level labels.
"""

from .config import TrainConfig
from .losses import mil_k, mil_pool, bce_loss, batch_bce, global_features, contrastive_loss, MIL_SEGMENT
from .loop import (
    Batch, BatchLoss, TrainResult,
    make_batch, batch_loss, epoch_batches, train_loop, periodic_checkpoint_path, progress_disabled,
  )
