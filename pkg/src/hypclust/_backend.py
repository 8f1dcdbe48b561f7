"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise, or when
``HYPCLUST_BACKEND=python`` is set, the numpy implementations are used.
"""

from __future__ import annotations

import importlib
import os

from . import _pycore

_requested = os.environ.get("HYPCLUST_BACKEND", "auto").lower()

try:
    _compiled = importlib.import_module("hypclust._core")
except ImportError:
    if _requested == "cython":
        raise
    _compiled = None

if _requested == "python" or _compiled is None:
    default = _pycore
else:
    default = _compiled


def available() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get(name: str | None = None):
    """Return the kernel module called ``name`` (None means the import-time default)."""
    if name is None:
        return default
    if name == "python":
        return _pycore
    if name == "cython":
        if _compiled is None:
            raise ImportError("the compiled backend is not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
