"""Occlusion-aware layered blur model and blind video deblurring."""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core  # noqa: F401
except ImportError:  # plain CMake build puts _core next to the package on PYTHONPATH
    from _core import *  # noqa: F401,F403
    import _core  # noqa: F401

__all__ = [n for n in dir(_core) if not n.startswith("_")]
__version__ = "0.1.0"
