"""
Environment-backed settings.

Values are read from the environment (and a local `.env`) each time they are
requested, so a test or a long-running server picks up changes without reloads.
"""

import os
import sys

from dotenv import load_dotenv

from core.errors import ConfigError

load_dotenv()

DEFAULT_MAX_ORDER = 100_000
DEFAULT_FULL_ASSOCIATIVITY_LIMIT = 512


def _positive_int(variable_name: str, default: int) -> int:
    raw = os.getenv(variable_name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(variable_name, extra_info=f"Got `{raw}`") from e
    if value <= 0:
        raise ConfigError(variable_name, extra_info=f"Got `{raw}`")
    return value


def get_max_order() -> int:
    """Bound on every breadth-first closure (groups, automorphism groups, precessions)."""
    return _positive_int("MOCKHYP_MAX_ORDER", DEFAULT_MAX_ORDER)


def get_full_associativity_limit() -> int:
    """Largest order whose Cayley table gets the exhaustive triple check."""
    return _positive_int("MOCKHYP_FULL_ASSOCIATIVITY_LIMIT", DEFAULT_FULL_ASSOCIATIVITY_LIMIT)


def print_debug_comments() -> bool:
    return os.getenv("PRINT_DEBUG_COMMENTS", "").strip().lower() in {"1", "true", "yes", "on"}


def debug(message: str, enabled: bool) -> None:
    """Print a debug banner to stderr (stdout is reserved for reports)."""
    if enabled:
        print(f"--- DEBUG, {message} ---", file=sys.stderr)
