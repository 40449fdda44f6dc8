"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
``HE2C_SIM_PURE_PYTHON=1`` (or any truthy value) in the environment forces
the pure-Python fallback. Both backends expose the same module-level
functions and are bit-for-bit interchangeable.
"""

from __future__ import annotations

import os

from . import pure

_TRUTHY = {"1", "true", "yes", "on"}


def _compiled_module():
    from . import _core  # noqa: PLC0415 - deferred so a missing build degrades cleanly

    return _core


def _select_default():
    if os.environ.get("HE2C_SIM_PURE_PYTHON", "").strip().lower() in _TRUTHY:
        return pure
    try:
        return _compiled_module()
    except ImportError:
        return pure


_active = _select_default()


def active():
    """The currently selected backend module."""
    return _active


def backend_name() -> str:
    return _active.BACKEND


def available_backends() -> tuple[str, ...]:
    try:
        _compiled_module()
    except ImportError:
        return ("python",)
    return ("python", "compiled")


def get_backend(name: str):
    if name == "python":
        return pure
    if name == "compiled":
        return _compiled_module()
    raise ValueError(f"unknown kernel backend '{name}' (use 'python' or 'compiled')")


def set_active(name: str) -> None:
    """Swap the backend; affects simulations constructed afterwards."""
    global _active
    _active = get_backend(name)
