"""Wall-clock budget shared by long-running searches.

The CLI installs a deadline from ``RACG_BUDGET_MS``; library callers may use
:func:`deadline` directly.  Hot loops call :func:`check`.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
import time

from .errors import ResourceLimit

_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar(
    "racg_deadline", default=None
)


@contextlib.contextmanager
def deadline(ms: float | None):
    if ms is None:
        yield
        return
    token = _deadline.set(time.monotonic() + ms / 1000.0)
    try:
        yield
    finally:
        _deadline.reset(token)


def from_env() -> float | None:
    raw = os.environ.get("RACG_BUDGET_MS")
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"RACG_BUDGET_MS is not a number: {raw!r}") from None


def check() -> None:
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise ResourceLimit("compute budget exhausted (RACG_BUDGET_MS)")
