"""Real-time semantic background subtraction."""

try:
    from ._rtsbs import *  # noqa: F401,F403
    from ._rtsbs import __doc__  # noqa: F401
except ImportError:  # in-tree build: _rtsbs sits on PYTHONPATH
    from _rtsbs import *  # noqa: F401,F403

__version__ = "0.1.0"
