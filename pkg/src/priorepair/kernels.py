"""Graph kernels used by the priority resolver.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python versions in ``_pykernels`` take over.  Set ``PRIOREPAIR_PURE=1``
to force the fallback.
"""

from __future__ import annotations

import os
from array import array

from . import _pykernels

BACKEND = "python"
_c = None
if os.environ.get("PRIOREPAIR_PURE", "") in ("", "0"):
    try:
        from . import _ckernels as _c  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _c = None


def _ints(xs) -> array:
    return xs if isinstance(xs, array) and xs.typecode == "i" else array("i", xs)


def scc_labels(n: int, src, dst, backend: str | None = None) -> list[int]:
    if (backend or BACKEND) == "cython" and _c is not None:
        return _c.scc_labels(n, _ints(src), _ints(dst))
    return _pykernels.scc_labels(n, src, dst)


def reachable(n: int, src, dst, origin: int, backend: str | None = None) -> bytearray:
    if (backend or BACKEND) == "cython" and _c is not None:
        return _c.reachable(n, _ints(src), _ints(dst), origin)
    return _pykernels.reachable(n, src, dst, origin)


def reach_pairs(n: int, src, dst, origins, goals, backend: str | None = None) -> bytearray:
    """Batched reachability queries over one graph."""
    if (backend or BACKEND) == "cython" and _c is not None:
        return _c.reach_pairs(n, _ints(src), _ints(dst), _ints(origins), _ints(goals))
    return _pykernels.reach_pairs(n, src, dst, origins, goals)
