"""Runtime size caps for the number of extension legs."""

from __future__ import annotations

import os

_ENV_VAR = "SYMEXT_MAX_K"

FULL_SPACE_DEFAULT = 12
BLOCK_DEFAULT = 64


def full_space_cap() -> int:
    """Largest k allowed for operations that materialize 2^k-dimensional objects."""
    value = os.environ.get(_ENV_VAR)
    return int(value) if value else FULL_SPACE_DEFAULT


def block_cap() -> int:
    """Largest k allowed for operations that stay in per-sector block coordinates."""
    value = os.environ.get(_ENV_VAR)
    return int(value) if value else BLOCK_DEFAULT
