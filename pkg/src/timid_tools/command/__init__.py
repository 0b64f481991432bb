#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Subcommands of the `timid` command-line tool; each module exposes main(argv, prog)."""
