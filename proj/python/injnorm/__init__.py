"""Injective norms of random tensors: bounds, certificate estimators, and
generic-chaining experiments, backed by the C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
