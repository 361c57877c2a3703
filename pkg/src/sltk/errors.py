"""Toolkit-wide error type.

Every operational failure raises :class:`ToolkitError` carrying a stable
machine-readable ``code`` (``E_*``) plus a human-readable message.  Callers
(CLI, HTTP service, tests) dispatch on ``code``, never on message text.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Operational error with a stable error code."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


def fail(code: str, message: str = "") -> "ToolkitError":
    return ToolkitError(code, message)
