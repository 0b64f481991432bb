#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Finite-trace (LTLf) semantics: direct evaluation, formula progression, and a
step-by-step runtime monitor.

Until is strong: an obligation `a U b` still open when the trace ends is a
violation. Globally obligations still open at the end are satisfied.
"""

from typing import List, Optional, Dict, Tuple
from dataclasses import dataclass
from enum import Enum

from ..exceptions import UnknownAtomError, EmptyTraceError
from .formula import (
    LtlFormula, PropositionState, Trace,
    TrueF, FalseF, Atom, Not, And, Or, Globally, Until,
    TRUE, FALSE, mk_not, mk_and, mk_or,
  )

def _lookup(state: PropositionState, name: str) -> bool:
  try:
    return bool(state[name])
  except KeyError:
    raise UnknownAtomError(f"Proposition {name!r} is not present in state {sorted(state)}") from None

def _truth_table(f: LtlFormula, trace: Trace, memo: Dict[LtlFormula, List[bool]]) -> List[bool]:
  """Truth of f at every position of trace, computed backwards from the end."""
  cached = memo.get(f)
  if cached is not None:
    return cached
  n = len(trace)
  result: List[bool]
  if isinstance(f, TrueF):
    result = [True] * n
  elif isinstance(f, FalseF):
    result = [False] * n
  elif isinstance(f, Atom):
    result = [_lookup(state, f.name) for state in trace]
  elif isinstance(f, Not):
    result = [not v for v in _truth_table(f.child, trace, memo)]
  elif isinstance(f, And):
    a = _truth_table(f.left, trace, memo)
    b = _truth_table(f.right, trace, memo)
    result = [x and y for x, y in zip(a, b)]
  elif isinstance(f, Or):
    a = _truth_table(f.left, trace, memo)
    b = _truth_table(f.right, trace, memo)
    result = [x or y for x, y in zip(a, b)]
  elif isinstance(f, Globally):
    a = _truth_table(f.child, trace, memo)
    result = [False] * n
    acc = True
    for i in range(n - 1, -1, -1):
      acc = acc and a[i]
      result[i] = acc
  elif isinstance(f, Until):
    a = _truth_table(f.left, trace, memo)
    b = _truth_table(f.right, trace, memo)
    result = [False] * n
    acc = False
    for i in range(n - 1, -1, -1):
      acc = b[i] or (a[i] and acc)
      result[i] = acc
  else:
    raise TypeError(f"Not an LTL formula: {f!r}")
  memo[f] = result
  return result

def eval_finite(formula: LtlFormula, trace: Trace) -> bool:
  """Truth of formula at position 0 of a nonempty finite trace."""
  if len(trace) == 0:
    raise EmptyTraceError("Cannot evaluate a formula over an empty trace")
  return _truth_table(formula, trace, {})[0]

def progress(formula: LtlFormula, state: PropositionState) -> LtlFormula:
  """Residual obligation on the rest of the trace after consuming one state.

  The result is simplified locally, so a discharged or violated obligation is
  syntactically TRUE or FALSE.
  """
  if isinstance(formula, (TrueF, FalseF)):
    return formula
  if isinstance(formula, Atom):
    return TRUE if _lookup(state, formula.name) else FALSE
  if isinstance(formula, Not):
    return mk_not(progress(formula.child, state))
  if isinstance(formula, And):
    return mk_and(progress(formula.left, state), progress(formula.right, state))
  if isinstance(formula, Or):
    return mk_or(progress(formula.left, state), progress(formula.right, state))
  if isinstance(formula, Globally):
    return mk_and(progress(formula.child, state), formula)
  if isinstance(formula, Until):
    return mk_or(
        progress(formula.right, state),
        mk_and(progress(formula.left, state), formula)
      )
  raise TypeError(f"Not an LTL formula: {formula!r}")

def resolve_at_end(residual: LtlFormula) -> bool:
  """Truth of a residual obligation over the empty remainder of a finished trace."""
  if isinstance(residual, TrueF):
    return True
  if isinstance(residual, FalseF):
    return False
  if isinstance(residual, Globally):
    return True
  if isinstance(residual, Until):
    return False
  if isinstance(residual, Not):
    return not resolve_at_end(residual.child)
  if isinstance(residual, And):
    return resolve_at_end(residual.left) and resolve_at_end(residual.right)
  if isinstance(residual, Or):
    return resolve_at_end(residual.left) or resolve_at_end(residual.right)
  # A bare atom only survives progression when nothing has been consumed yet.
  return False

class MonitorStatus(Enum):
  SATISFIED = 'satisfied'
  VIOLATED = 'violated'
  UNDETERMINED = 'undetermined'

@dataclass(frozen=True)
class MonitorVerdict:
  status: MonitorStatus
  first_violation_step: Optional[int]
  per_step_violation: Tuple[bool, ...]
  residual: LtlFormula

  @property
  def violated(self) -> bool:
    return self.status is MonitorStatus.VIOLATED

def monitor(formula: LtlFormula, trace: Trace, finalize: bool=True) -> MonitorVerdict:
  """Progresses formula through trace one state at a time.

  `status` and `first_violation_step` describe the whole trace:
  status is VIOLATED iff eval_finite(formula, trace) is False.

  `per_step_violation` localizes violations: after each violation the monitor
  restarts from the original formula at the next step, so every step at which
  a fresh obligation fails is marked. An obligation still open at the end
  marks the final step only if nothing earlier was marked.

  With finalize=False the trace is treated as a prefix: open obligations
  leave the status UNDETERMINED instead of being resolved.
  """
  n = len(trace)
  if n == 0:
    raise EmptyTraceError("Cannot monitor an empty trace")
  per_step = [False] * n
  status: Optional[MonitorStatus] = None
  first_violation: Optional[int] = None
  overall = formula
  local = formula
  local_done = False
  for t, state in enumerate(trace):
    if status is None:
      overall = progress(overall, state)
      if isinstance(overall, FalseF):
        status = MonitorStatus.VIOLATED
        first_violation = t
      elif isinstance(overall, TrueF):
        status = MonitorStatus.SATISFIED
    if status is MonitorStatus.SATISFIED:
      break
    if not local_done:
      local = progress(local, state)
      if isinstance(local, FalseF):
        per_step[t] = True
        local = formula
      elif isinstance(local, TrueF):
        local_done = True
  if status is None:
    if not finalize:
      status = MonitorStatus.UNDETERMINED
    elif resolve_at_end(overall):
      status = MonitorStatus.SATISFIED
    else:
      status = MonitorStatus.VIOLATED
      first_violation = n - 1
      if not any(per_step):
        per_step[n - 1] = True
  return MonitorVerdict(
      status=status,
      first_violation_step=first_violation,
      per_step_violation=tuple(per_step),
      residual=overall,
    )
