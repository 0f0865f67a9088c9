"""Phase factors for quantum signal processing circuits.

The native extension carries the full API; this package re-exports it so the
module works both installed as a wheel and straight out of a CMake build
tree.
"""

try:
    from ._qspphase import *  # noqa: F401,F403
    from ._qspphase import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _qspphase import *  # noqa: F401,F403
    from _qspphase import __version__  # noqa: F401
