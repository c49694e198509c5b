"""Python bindings for the gradlab C++ core.

The extension module is built by CMake (optionally through scikit-build-core);
when running from a build tree it is importable from the build directory via
PYTHONPATH, when installed it lives inside this package.
"""

try:
    from ._gradlab import *  # noqa: F401,F403  (installed layout)
    from ._gradlab import __doc__ as _core_doc  # noqa: F401
except ImportError:
    from _gradlab import *  # noqa: F401,F403  (build-tree layout)
