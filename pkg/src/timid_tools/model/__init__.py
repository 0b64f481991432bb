#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.model is the mistake detector: prompt embeddings, the
temporal and semantic attention stages, the step classifier, and checkpoints.
"""

from .prompts import PromptEmbedding, embed_prompts, tokenize_prompt, token_vector
from .params import (
    ModelConfig, ModelParams, Checkpoint,
    init_params, load_checkpoint, checkpoint_from_bytes,
    VARIANTS, PARAM_NAMES, CHECKPOINT_FORMAT, CHECKPOINT_VERSION,
  )
from .network import (
    ForwardTrace, forward, positional_encoding, temporal_context,
    semantic_alignment, classify, attention_prior, squared_offsets,
    causal_mask, project_input,
  )
