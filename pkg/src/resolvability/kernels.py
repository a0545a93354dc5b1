"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy twins in ``_core_py`` take over.  Setting ``RESOLVABILITY_PURE=1``
forces the pure-Python backend (handy for benchmarking and cross-checks).
"""
from __future__ import annotations

import os

from . import _core_py

if os.environ.get("RESOLVABILITY_PURE", "") not in ("", "0"):
    _impl = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _core_py
        BACKEND = "python"

merge_sorted_atoms = _impl.merge_sorted_atoms
multinomial_atoms = _impl.multinomial_atoms
multiset_distances = _impl.multiset_distances


def get_backend(name: str):
    """Return the kernel module named ``"cython"`` or ``"python"``."""
    if name == "python":
        return _core_py
    if name == "cython":
        from . import _core  # type: ignore[attr-defined]

        return _core
    raise ValueError(f"unknown backend {name!r}")
