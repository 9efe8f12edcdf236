"""Eigensolver kernel selection: compiled core if present, Python fallback otherwise.

Set ``SPECLIM_KERNEL=python`` or ``SPECLIM_KERNEL=compiled`` to force a
backend (the benchmark uses this to compare both).
"""

import os


def load_backend(name):
    """Return the kernel module for ``name`` ("compiled" or "python")."""
    if name == "compiled":
        from . import _cyeigen

        return _cyeigen
    if name == "python":
        from . import _pyeigen

        return _pyeigen
    raise ValueError(f"unknown kernel backend {name!r}")


_forced = os.environ.get("SPECLIM_KERNEL", "").strip().lower()
if _forced:
    _impl = load_backend(_forced)
    BACKEND = _forced
else:
    try:
        from . import _cyeigen as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built; fall back
        from . import _pyeigen as _impl

        BACKEND = "python"

tridiagonalize = _impl.tridiagonalize
ql = _impl.ql
