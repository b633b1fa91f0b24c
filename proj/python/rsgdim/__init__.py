"""Julia sets, pressure, Hausdorff dimension and conformal measures for
finitely generated rational semigroups.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__ as _core_doc
except ImportError:  # developer tree: extension built next to the package
    from _core import *  # type: ignore # noqa: F401,F403
    from _core import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
__version__ = "0.1.0"
