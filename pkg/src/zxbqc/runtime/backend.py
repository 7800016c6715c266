"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``ZXBQC_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

KERNELS = {"python": _pykernel.run_shots}
if _compiled is not None:
    KERNELS["cython"] = _compiled.run_shots

_requested = os.environ.get("ZXBQC_BACKEND", "").strip().lower()
DEFAULT_BACKEND = _requested if _requested in KERNELS else ("cython" if "cython" in KERNELS else "python")


def get_kernel(name: str | None = None):
    name = name or DEFAULT_BACKEND
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(KERNELS)}") from None
