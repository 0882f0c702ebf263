"""Resource cap for enumeration sizes and LP dimensions.

Everything in this library is exact and in-core, so the only guard needed is
a hard ceiling on how many objects (types, grid atoms, LP variables or rows)
a single call may enumerate.  The default suits desk scale; the environment
variable ``EXCHKIT_CAP`` overrides it per process.
"""

from __future__ import annotations

import os

from .errors import CapacityError, InputError

DEFAULT_RESOURCE_CAP = 50_000

_ENV_VAR = "EXCHKIT_CAP"


def resource_cap() -> int:
    """Return the active cap (``EXCHKIT_CAP`` env var, else the default)."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_RESOURCE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"{_ENV_VAR}: not an integer: {raw!r}") from exc
    if cap <= 0:
        raise InputError(f"{_ENV_VAR}: must be positive, got {cap}")
    return cap


def ensure_within_cap(size: int, what: str) -> None:
    """Raise :class:`CapacityError` if ``size`` exceeds the active cap."""
    cap = resource_cap()
    if size > cap:
        raise CapacityError(f"{what}: size {size} exceeds resource cap {cap}")
