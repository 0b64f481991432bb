#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Recursive-descent parser for the LTL specification grammar

Grammar (highest binding first)::

    primary := IDENT | 'true' | 'false' | '(' until ')'
    unary   := '!' unary | 'G' unary | primary
    and     := unary ('&' unary)*          left-associative
    or      := and ('|' and)*              left-associative
    until   := or ('U' until)?             right-associative
"""

from typing import List, NamedTuple, Optional

import re

from ..exceptions import LtlSyntaxError, UnknownOperatorError
from .formula import LtlFormula, Atom, Not, And, Or, Globally, Until, TRUE, FALSE

class Token(NamedTuple):
  kind: str
  value: str
  position: int

_token_re = re.compile(r'\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|<->|[!&|()~^=<>+*/-])|(?P<bad>\S))')

_keyword_kinds = {
    'G': 'G',
    'U': 'U',
    'true': 'TRUE',
    'false': 'FALSE',
  }

# Operators from richer LTL dialects that this grammar deliberately does not accept.
_unsupported_words = {'X', 'F', 'R', 'W', 'M', 'N'}
_unsupported_ops = {'->', '<->', '~', '^', '=', '<', '>', '+', '*', '/', '-'}

_op_kinds = {
    '!': 'NOT',
    '&': 'AND',
    '|': 'OR',
    '(': 'LPAREN',
    ')': 'RPAREN',
  }

def tokenize(text: str) -> List[Token]:
  tokens: List[Token] = []
  pos = 0
  n = len(text)
  while pos < n:
    if text[pos:].strip() == '':
      break
    m = _token_re.match(text, pos)
    assert m is not None
    if m.group('ident') is not None:
      value = m.group('ident')
      start = m.start('ident')
      if value in _unsupported_words:
        raise UnknownOperatorError(f"Unsupported temporal operator {value!r}", text, start)
      tokens.append(Token(_keyword_kinds.get(value, 'IDENT'), value, start))
    elif m.group('op') is not None:
      value = m.group('op')
      start = m.start('op')
      if value in _unsupported_ops:
        raise UnknownOperatorError(f"Unknown operator {value!r}", text, start)
      tokens.append(Token(_op_kinds[value], value, start))
    else:
      raise LtlSyntaxError(f"Unexpected character {m.group('bad')!r}", text, m.start('bad'))
    pos = m.end()
  tokens.append(Token('EOF', '', n))
  return tokens

class _Parser:
  text: str
  tokens: List[Token]
  index: int

  def __init__(self, text: str):
    self.text = text
    self.tokens = tokenize(text)
    self.index = 0

  def peek(self) -> Token:
    return self.tokens[self.index]

  def advance(self) -> Token:
    tok = self.tokens[self.index]
    self.index += 1
    return tok

  def error(self, message: str, tok: Optional[Token]=None) -> LtlSyntaxError:
    if tok is None:
      tok = self.peek()
    return LtlSyntaxError(message, self.text, tok.position)

  def parse(self) -> LtlFormula:
    if self.peek().kind == 'EOF':
      raise self.error("Empty specification")
    result = self.parse_until()
    tok = self.peek()
    if tok.kind != 'EOF':
      raise self.error(f"Unexpected token {tok.value!r}", tok)
    return result

  def parse_until(self) -> LtlFormula:
    left = self.parse_or()
    if self.peek().kind == 'U':
      self.advance()
      right = self.parse_until()
      return Until(left, right)
    return left

  def parse_or(self) -> LtlFormula:
    result = self.parse_and()
    while self.peek().kind == 'OR':
      self.advance()
      result = Or(result, self.parse_and())
    return result

  def parse_and(self) -> LtlFormula:
    result = self.parse_unary()
    while self.peek().kind == 'AND':
      self.advance()
      result = And(result, self.parse_unary())
    return result

  def parse_unary(self) -> LtlFormula:
    tok = self.peek()
    if tok.kind == 'NOT':
      self.advance()
      return Not(self.parse_unary())
    if tok.kind == 'G':
      self.advance()
      return Globally(self.parse_unary())
    return self.parse_primary()

  def parse_primary(self) -> LtlFormula:
    tok = self.advance()
    if tok.kind == 'IDENT':
      return Atom(tok.value)
    if tok.kind == 'TRUE':
      return TRUE
    if tok.kind == 'FALSE':
      return FALSE
    if tok.kind == 'LPAREN':
      inner = self.parse_until()
      closing = self.advance()
      if closing.kind != 'RPAREN':
        raise self.error("Expected ')'", closing)
      return inner
    if tok.kind == 'EOF':
      raise self.error("Unexpected end of specification", tok)
    raise self.error(f"Unexpected token {tok.value!r}", tok)

def parse_ltl(text: str) -> LtlFormula:
  """Parses a specification string into an LtlFormula.

  Raises:
      LtlSyntaxError: malformed input; `position` locates the offending token.
      UnknownOperatorError: an operator outside the grammar (e.g., 'X', 'F', '->').
  """
  if not isinstance(text, str):
    raise TypeError(f"Specification must be a string, not {type(text).__name__}")
  return _Parser(text).parse()
