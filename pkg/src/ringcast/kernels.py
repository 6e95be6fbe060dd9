"""Hot-loop dispatch: compiled ``_core`` when available, ``_purepy`` otherwise.

Set ``RINGCAST_PURE_PYTHON=1`` to force the fallback. Integer workloads whose
scaled values could overflow int64 are routed to the Python kernels, which
use unbounded ints, so results are exact on either path.
"""

from __future__ import annotations

import os
from typing import Sequence

from . import _purepy

_compiled = None
if not os.environ.get("RINGCAST_PURE_PYTHON"):
    try:
        from . import _core as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_INT64_HEADROOM = 1 << 62


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def _pick(backend: str | None, fits_int64: bool):
    if backend == "python":
        return _purepy
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        if not fits_int64:
            raise OverflowError("scaled values exceed int64; use the python backend")
        return _compiled
    if backend is not None:
        raise ValueError(f"unknown backend {backend!r}")
    if _compiled is not None and fits_int64:
        return _compiled
    return _purepy


def _fits(costs: Sequence[int], factor: int) -> bool:
    top = max((abs(c) for c in costs), default=0)
    return top * factor < _INT64_HEADROOM


def profile_table(costs: Sequence[int], n: int, backend: str | None = None):
    """Per-mask (social, potential, nash) lists for pre-scaled integer costs."""
    mod = _pick(backend, _fits(costs, (n + 2) * (n + 2)))
    social, pot, nash = mod.profile_table(list(costs), n)
    if mod is not _purepy:
        social, pot, nash = social.tolist(), pot.tolist(), [bool(x) for x in nash]
    return social, pot, nash


def sequential_play(costs: Sequence, order: Sequence[int], prefer_right: bool,
                    exact: bool = True, backend: str | None = None):
    fits = _fits(costs, len(costs) + 1) if exact else True
    mod = _pick(backend, fits)
    return mod.sequential_play(list(costs), list(order), prefer_right, exact)


def sequential_batch(costs: Sequence[int], orders: Sequence[Sequence[int]],
                     prefer_right: bool, backend: str | None = None) -> list[int]:
    mod = _pick(backend, _fits(costs, len(costs) + 1))
    orders = [list(o) for o in orders]
    if not orders:
        return []
    return mod.sequential_batch(list(costs), orders, prefer_right)
