#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Abstract syntax tree for finite-trace LTL formulas over named atomic propositions.

Nodes are frozen dataclasses, so formulas are immutable, hashable, and compare
structurally. The `mk_*` constructors apply the local simplifications used by
formula progression (constant folding, idempotence, double negation).
"""

from typing import Union, Iterator, Iterable, Set, Mapping, Sequence
from dataclasses import dataclass

PropositionState = Mapping[str, bool]
"""Truth value of every declared proposition at one time step"""

Trace = Sequence[PropositionState]

@dataclass(frozen=True)
class TrueF:
  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class FalseF:
  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class Atom:
  name: str

  def __post_init__(self):
    if not isinstance(self.name, str) or self.name == '':
      raise ValueError("Atom name must be a nonempty string")

  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class Not:
  child: 'LtlFormula'

  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class And:
  left: 'LtlFormula'
  right: 'LtlFormula'

  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class Or:
  left: 'LtlFormula'
  right: 'LtlFormula'

  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class Globally:
  child: 'LtlFormula'

  def __str__(self) -> str:
    return to_text(self)

@dataclass(frozen=True)
class Until:
  left: 'LtlFormula'
  right: 'LtlFormula'

  def __str__(self) -> str:
    return to_text(self)

LtlFormula = Union[TrueF, FalseF, Atom, Not, And, Or, Globally, Until]

TRUE = TrueF()
FALSE = FalseF()

def mk_not(child: LtlFormula) -> LtlFormula:
  if isinstance(child, TrueF):
    return FALSE
  if isinstance(child, FalseF):
    return TRUE
  if isinstance(child, Not):
    return child.child
  return Not(child)

def mk_and(left: LtlFormula, right: LtlFormula) -> LtlFormula:
  if isinstance(left, FalseF) or isinstance(right, FalseF):
    return FALSE
  if isinstance(left, TrueF):
    return right
  if isinstance(right, TrueF):
    return left
  if left == right:
    return left
  return And(left, right)

def mk_or(left: LtlFormula, right: LtlFormula) -> LtlFormula:
  if isinstance(left, TrueF) or isinstance(right, TrueF):
    return TRUE
  if isinstance(left, FalseF):
    return right
  if isinstance(right, FalseF):
    return left
  if left == right:
    return left
  return Or(left, right)

def conjunction(formulas: Iterable[LtlFormula]) -> LtlFormula:
  """Conjunction of a collection of formulas (a task specification); TRUE when empty."""
  result: LtlFormula = TRUE
  first = True
  for f in formulas:
    if first:
      result = f
      first = False
    else:
      result = And(result, f)
  return result

def is_constant(f: LtlFormula) -> bool:
  return isinstance(f, (TrueF, FalseF))

def children(f: LtlFormula) -> Iterator[LtlFormula]:
  if isinstance(f, (Not, Globally)):
    yield f.child
  elif isinstance(f, (And, Or, Until)):
    yield f.left
    yield f.right

def atoms_of(f: LtlFormula) -> Set[str]:
  """Returns the set of proposition names referenced by a formula."""
  result: Set[str] = set()
  stack = [f]
  while len(stack) > 0:
    node = stack.pop()
    if isinstance(node, Atom):
      result.add(node.name)
    else:
      stack.extend(children(node))
  return result

def depth(f: LtlFormula) -> int:
  sub = [depth(c) for c in children(f)]
  return 1 + (max(sub) if len(sub) > 0 else 0)

# Binding strength used by the printer; higher binds tighter.
_PREC_UNTIL = 0
_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3
_PREC_ATOM = 4

def _prec(f: LtlFormula) -> int:
  if isinstance(f, Until):
    return _PREC_UNTIL
  if isinstance(f, Or):
    return _PREC_OR
  if isinstance(f, And):
    return _PREC_AND
  if isinstance(f, (Not, Globally)):
    return _PREC_UNARY
  return _PREC_ATOM

def _wrap(f: LtlFormula, need_parens: bool) -> str:
  text = to_text(f)
  return f"({text})" if need_parens else text

def to_text(f: LtlFormula) -> str:
  """Prints a formula in the parser's grammar using the fewest parentheses
     that preserve its tree shape, so parse(to_text(f)) == f."""
  if isinstance(f, TrueF):
    return 'true'
  if isinstance(f, FalseF):
    return 'false'
  if isinstance(f, Atom):
    return f.name
  if isinstance(f, Not):
    return '!' + _wrap(f.child, _prec(f.child) < _PREC_UNARY)
  if isinstance(f, Globally):
    return 'G ' + _wrap(f.child, _prec(f.child) < _PREC_UNARY)
  if isinstance(f, And):
    # left-associative
    return _wrap(f.left, _prec(f.left) < _PREC_AND) + ' & ' + _wrap(f.right, _prec(f.right) <= _PREC_AND)
  if isinstance(f, Or):
    return _wrap(f.left, _prec(f.left) < _PREC_OR) + ' | ' + _wrap(f.right, _prec(f.right) <= _PREC_OR)
  if isinstance(f, Until):
    # right-associative
    return _wrap(f.left, _prec(f.left) <= _PREC_UNTIL) + ' U ' + _wrap(f.right, _prec(f.right) < _PREC_UNTIL)
  raise TypeError(f"Not an LTL formula: {f!r}")
