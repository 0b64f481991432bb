#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""timid commandline tool"""

from typing import Optional, Sequence, Tuple, List, Union, Protocol, Dict

import sys
import argparse

command_list: List[Union[str, Tuple[str, str]]] = [
    'gen',
    'train',
    'eval',
    'score',
    'plot',
]

command_help: Dict[str, str] = {
    'gen': 'Generate a labelled episode dataset',
    'train': 'Train the mistake detector',
    'eval': 'Score a dataset split and write metrics',
    'score': 'Score a single episode',
    'plot': 'Plot an episode score record as SVG',
  }

class CommandHandler(Protocol):
  def __call__(self, parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    ...

class CommandEntry(Protocol):
  def __call__(self, argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
    ...

class Command:
  name: str
  module_name: str
  func_name: str = 'main'
  func: CommandEntry

  def __init__(self, initializer: Union[str, Tuple[str, str]]):
    if isinstance(initializer, str):
      self.name = initializer
      short_module_name = initializer.replace('-', '_')
    else:
      assert isinstance(initializer, tuple)
      self.name, short_module_name = initializer
    self.module_name = f'timid_tools.command.{short_module_name}'
    imp_mod = __import__(self.module_name, fromlist=[self.func_name])
    self.func = getattr(imp_mod, self.func_name)

commands: Dict[str, Command] = {}
for _initializer in command_list:
  _command = Command(_initializer)
  commands[_command.name] = _command

def cmd_bare(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
  parser.print_help()
  return 1

def cmd_dispatch(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
  command = commands[args.command]
  prog = f'{parser.prog} {command.name}'
  command_args: List[str] = args.command_args
  return command.func(argv=command_args, prog=prog)

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Detect time-dependent mistakes in multi-robot episodes.')
  parser.set_defaults(func=cmd_bare)

  subparsers = parser.add_subparsers(dest='command', help='command help')
  for name, command in commands.items():
    sub = subparsers.add_parser(name, help=command_help[name], add_help=False)
    sub.add_argument('command_args', nargs=argparse.REMAINDER, help='Command arguments')
    sub.set_defaults(func=cmd_dispatch)

  arg_list = list(sys.argv[1:] if argv is None else argv)
  if len(arg_list) > 0 and arg_list[0] in commands:
    # argparse cannot hand an option-first remainder to a subparser
    args = argparse.Namespace(func=cmd_dispatch, command=arg_list[0], command_args=arg_list[1:])
  else:
    args = parser.parse_args(arg_list)
  func: Optional[CommandHandler] = args.func
  if func is None:
    parser.print_help()
    return 1
  return func(parser, args)

def main_script():
  rc = main(prog="timid")
  sys.exit(rc)

if __name__ == '__main__':
  main_script()
