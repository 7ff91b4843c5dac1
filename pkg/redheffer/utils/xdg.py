"""XDG Base Directory utilities.

This module provides helpers for locating the cache and log directories,
following the freedesktop.org Base Directory specification.
"""

import os
import re
from pathlib import Path
from typing import Optional

# Directory name used under the XDG base directories
APP_ID = "redheffer-spectral"

# Overrides the sieve table cache directory
CACHE_DIR_ENV = "REDHEFFER_CACHE_DIR"


def build_tables_filename(n: int) -> str:
    """Return the cache filename for sieve tables covering 1..n."""
    return f"tables_n{n}.rdhf"


_TABLES_FILENAME = re.compile(r"tables_n([1-9][0-9]*)\.rdhf")


def parse_tables_filename(name: str) -> Optional[int]:
    """Return the table bound encoded in a cache filename, or None."""
    match = _TABLES_FILENAME.fullmatch(name)
    return int(match.group(1)) if match else None


class XDGDirectories:
    """Provides access to XDG standard directories.

    Only the cache hierarchy is needed: sieve tables and log files.
    """

    @staticmethod
    def get_cache_dir() -> Path:
        """Get XDG cache directory for the application.

        Returns:
            Path to cache directory (creates if doesn't exist)
        """
        base = os.environ.get("XDG_CACHE_HOME")
        if not base:
            base = str(Path.home() / ".cache")

        cache_dir = Path(base) / APP_ID
        cache_dir.mkdir(parents=True, exist_ok=True)
        return cache_dir

    @classmethod
    def get_tables_dir(cls, override: Optional[Path] = None) -> Path:
        """Get directory holding cached sieve tables.

        Precedence: explicit override, then $REDHEFFER_CACHE_DIR, then
        the XDG cache directory.

        Args:
            override: Directory given on the command line (optional)

        Returns:
            Path to tables directory (creates if doesn't exist)
        """
        if override is not None:
            tables_dir = Path(override)
        else:
            env_value = os.environ.get(CACHE_DIR_ENV)
            if env_value:
                tables_dir = Path(env_value).expanduser()
            else:
                tables_dir = cls.get_cache_dir() / "tables"

        tables_dir.mkdir(parents=True, exist_ok=True)
        return tables_dir

    @classmethod
    def get_logs_dir(cls) -> Path:
        """Get directory for log files.

        Returns:
            Path to logs directory (creates if doesn't exist)
        """
        logs_dir = cls.get_cache_dir() / "logs"
        logs_dir.mkdir(parents=True, exist_ok=True)
        return logs_dir

    @classmethod
    def get_tables_path(cls, n: int, override: Optional[Path] = None) -> Path:
        """Get path of the cache file for tables of size n.

        Args:
            n: Table bound
            override: Optional cache directory

        Returns:
            Path to cache file
        """
        return cls.get_tables_dir(override) / build_tables_filename(n)
