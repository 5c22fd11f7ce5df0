"""Streaming symmetric Tucker decomposition of sample moment tensors."""

try:
    from ._symtuck import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _symtuck import *  # noqa: F401,F403  (in-tree build dir on sys.path)

__version__ = "0.1.0"
