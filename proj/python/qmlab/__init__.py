"""Finite-dimensional laboratory for quantum measurement schemes.

Couplings, reading scales, measured observables, state transformers,
correlation statistics, randomized theorem suites and a brute-force oracle.
The heavy lifting lives in the compiled extension; this package re-exports it.
"""

try:
    # Installed layout: the extension is built into the package directory.
    from ._qmlab import *  # noqa: F401,F403
    from . import _qmlab as _core
except ImportError:
    # In-tree layout: the extension sits on sys.path next to the build.
    from _qmlab import *  # noqa: F401,F403
    import _qmlab as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
