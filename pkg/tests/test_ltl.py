#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

import pytest

from timid_tools.exceptions import LtlSyntaxError, UnknownOperatorError, UnknownAtomError, EmptyTraceError
from timid_tools.ltl import (
    Atom, Not, And, Or, Globally, Until, TRUE, FALSE,
    parse_ltl, to_text, eval_finite, progress, monitor, resolve_at_end,
    MonitorStatus, atoms_of, depth, conjunction,
  )
from timid_tools.simgen import Task, label_steps

from .conftest import all_traces

L = Atom('Lion')
B = Atom('Ball')

MUTEX = 'G !(Lion & Ball)'
ORDER = '!Lion U Ball'

def state(lion: bool, ball: bool) -> dict:
  return {'Lion': lion, 'Ball': ball}

def test_parse_task_formulas():
  assert parse_ltl(MUTEX) == Globally(Not(And(L, B)))
  assert parse_ltl(ORDER) == Until(Not(L), B)

def test_parse_precedence_and_associativity():
  assert parse_ltl('Lion | Ball & Lion') == Or(L, And(B, L))
  assert parse_ltl('Lion & Ball & Lion') == And(And(L, B), L)
  assert parse_ltl('Lion U Ball U Lion') == Until(L, Until(B, L))
  assert parse_ltl('!Lion | Ball U Lion') == Until(Or(Not(L), B), L)
  assert parse_ltl('G Lion & Ball') == And(Globally(L), B)
  assert parse_ltl('true U false') == Until(TRUE, FALSE)

def test_printer_round_trip(formula_factory):
  for f in formula_factory(200, seed=1, max_depth=5):
    assert parse_ltl(to_text(f)) == f

def test_printer_uses_minimal_parentheses():
  assert to_text(parse_ltl('((G (!(Lion & Ball))))')) == MUTEX
  assert to_text(parse_ltl('(!Lion) U (Ball)')) == ORDER

@pytest.mark.parametrize('text, position', [
    ('X Lion', 0),
    ('F Ball', 0),
    ('Lion -> Ball', 5),
    ('Lion R Ball', 5),
    ('Lion <-> Ball', 5),
  ])
def test_unknown_operators(text, position):
  with pytest.raises(UnknownOperatorError) as info:
    parse_ltl(text)
  assert info.value.position == position
  assert isinstance(info.value, LtlSyntaxError)

@pytest.mark.parametrize('text', ['', '   ', 'Lion &', '(Lion', 'Lion Ball', ')', 'Lion $ Ball', 'G'])
def test_malformed_specifications(text):
  with pytest.raises(LtlSyntaxError):
    parse_ltl(text)

def test_syntax_error_reports_position():
  with pytest.raises(LtlSyntaxError) as info:
    parse_ltl('Lion & (Ball |')
  assert info.value.position == len('Lion & (Ball |')
  assert 'position' in str(info.value)

def test_atoms_and_depth():
  f = parse_ltl(MUTEX)
  assert atoms_of(f) == {'Lion', 'Ball'}
  assert depth(f) == 4

def test_eval_finite_examples():
  mutex = parse_ltl(MUTEX)
  order = parse_ltl(ORDER)
  assert eval_finite(mutex, [state(True, False), state(False, True)])
  assert not eval_finite(mutex, [state(False, False), state(True, True)])
  assert eval_finite(order, [state(False, False), state(False, True), state(True, False)])
  assert not eval_finite(order, [state(True, False), state(False, True)])
  # strong until: the ball must actually be reached
  assert not eval_finite(order, [state(False, False)] * 3)

def test_eval_finite_errors():
  with pytest.raises(EmptyTraceError):
    eval_finite(parse_ltl(MUTEX), [])
  with pytest.raises(UnknownAtomError):
    eval_finite(parse_ltl('Lion & Dog'), [state(True, False)])
  with pytest.raises(EmptyTraceError):
    monitor(parse_ltl(MUTEX), [])

def test_progress_examples():
  mutex = parse_ltl(MUTEX)
  assert progress(mutex, state(True, False)) == mutex
  assert progress(mutex, state(True, True)) == FALSE
  order = parse_ltl(ORDER)
  assert progress(order, state(False, True)) == TRUE
  assert progress(order, state(True, False)) == FALSE
  assert progress(order, state(False, False)) == order

def test_resolve_at_end():
  assert resolve_at_end(parse_ltl(MUTEX))
  assert not resolve_at_end(parse_ltl(ORDER))
  assert resolve_at_end(TRUE)
  assert not resolve_at_end(FALSE)

def test_monitor_verdicts():
  mutex = parse_ltl(MUTEX)
  v = monitor(mutex, [state(False, False), state(True, True), state(False, False), state(True, True)])
  assert v.status is MonitorStatus.VIOLATED
  assert v.violated
  assert v.first_violation_step == 1
  assert v.per_step_violation == (False, True, False, True)

  v = monitor(mutex, [state(True, False), state(False, True)])
  assert v.status is MonitorStatus.SATISFIED
  assert v.first_violation_step is None
  assert not any(v.per_step_violation)

def test_monitor_open_obligation():
  order = parse_ltl(ORDER)
  trace = [state(False, False)] * 4
  v = monitor(order, trace)
  assert v.status is MonitorStatus.VIOLATED
  assert v.first_violation_step == 3
  assert v.per_step_violation == (False, False, False, True)
  prefix = monitor(order, trace, finalize=False)
  assert prefix.status is MonitorStatus.UNDETERMINED
  assert prefix.residual == order

def test_monitor_matches_brute_force_on_all_short_traces(formula_factory):
  formulas = [parse_ltl(MUTEX), parse_ltl(ORDER)] + formula_factory(20, seed=42, max_depth=4)
  traces = list(all_traces(6))
  assert len(traces) == 5460
  for f in formulas:
    for trace in traces:
      assert monitor(f, trace).violated == (not eval_finite(f, trace)), (to_text(f), trace)

@pytest.mark.parametrize('task', [Task.MUTEX, Task.ORDERING])
def test_monitor_localization_matches_step_labels(task):
  formula = task.formula
  for trace in all_traces(5):
    verdict = monitor(formula, trace)
    labels = label_steps(task, trace)
    assert verdict.per_step_violation == tuple(labels)
    assert verdict.violated == any(labels)

def test_conjunction_holds_iff_every_conjunct_holds(formula_factory):
  pool = [parse_ltl(MUTEX), parse_ltl(ORDER)] + formula_factory(12, seed=7, max_depth=3)
  groups = [pool[:2], pool[2:5], pool[5:9], pool[1:3] + pool[9:]]
  for trace in all_traces(5):
    for group in groups:
      assert eval_finite(conjunction(group), trace) == all(eval_finite(f, trace) for f in group)
  assert eval_finite(conjunction([]), [state(True, True)])

def test_negation_flips_the_verdict(formula_factory):
  formulas = [parse_ltl(MUTEX), parse_ltl(ORDER)] + formula_factory(20, seed=43, max_depth=4)
  for f in formulas:
    for trace in all_traces(5):
      assert eval_finite(Not(f), trace) == (not eval_finite(f, trace)), (to_text(f), trace)
