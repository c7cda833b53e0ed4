"""
Runtime settings read from the environment (a .env file is loaded by app.py).
Malformed values fall back to the defaults instead of failing at import time.
"""
from __future__ import annotations

import os


def _get_int_env(name: str, default: int) -> int:
    raw = os.environ.get(name, "")
    if not raw:
        return default
    try:
        return int(raw, 0)
    except ValueError:
        return default


def _get_str_env(name: str, default: str) -> str:
    return os.environ.get(name, "").strip() or default


# Largest number of subspaces a single enumeration or scan may visit.
ENUMERATION_CAP = _get_int_env("GFINV_CAP", 2**30)

# Default worker count for scan / classify.
DEFAULT_WORKERS = max(1, _get_int_env("GFINV_WORKERS", 1))

# Fields up to this many elements get full lookup tables (inverse, log/antilog, S-box
# fixed-point and two-cycle evaluation).
TABLE_CAP = _get_int_env("GFINV_TABLE_CAP", 2**16)

# Irreducibility testing is trial division; degrees above this are refused.
MAX_DEGREE = _get_int_env("GFINV_MAX_DEGREE", 16)

LOG_LEVEL = _get_str_env("GFINV_LOG_LEVEL", "WARNING").upper()
