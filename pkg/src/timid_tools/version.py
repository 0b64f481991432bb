#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Version information for this package"""

__version__ =  "0.1.0"

__all__ = [ '__version__' ]
