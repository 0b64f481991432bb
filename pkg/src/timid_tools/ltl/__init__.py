#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.ltl parses LTL task and mistake specifications and evaluates
them over finite proposition traces.
"""

from .formula import (
    LtlFormula, PropositionState, Trace,
    TrueF, FalseF, Atom, Not, And, Or, Globally, Until,
    TRUE, FALSE,
    mk_not, mk_and, mk_or,
    conjunction, atoms_of, depth, is_constant, to_text,
  )
from .parser import parse_ltl, tokenize
from .monitor import (
    eval_finite, progress, resolve_at_end, monitor,
    MonitorStatus, MonitorVerdict,
  )
