"""Escape-kernel selection: compiled extension when built, else pure Python."""
from __future__ import annotations

from . import _escape_py

try:
    from . import _escape  # compiled at build time; optional at runtime
except ImportError:  # pragma: no cover - depends on build environment
    _escape = None

_active = _escape if _escape is not None else _escape_py

escape_many = _active.escape_many
python_escape_many = _escape_py.escape_many
compiled_escape_many = None if _escape is None else _escape.escape_many


def kernel_backend() -> str:
    """'compiled' when the extension is importable, else 'python'."""
    return _active.BACKEND
