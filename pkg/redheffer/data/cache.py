"""Binary cache for sieve tables.

File layout (little-endian): magic b"RDHF", format version u32, n u64,
followed by mu, sigma0, sigma1, phi and spf as int64 arrays of length n + 1.
Files written by another format version are ignored and rebuilt.
"""

import struct
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ..utils.logger import get_logger
from ..utils.xdg import XDGDirectories, parse_tables_filename
from .models import DivisorTables

logger = get_logger(__name__)

MAGIC = b"RDHF"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQ")
_FIELDS = ("mu", "sigma0", "sigma1", "phi", "spf")
_DTYPE = np.dtype("<i8")


class CacheError(Exception):
    """Raised when a cache file cannot be read or written."""

    pass


class TableCache:
    """Sieve table cache keyed by n.

    A request for n is served by the exact file for n or, failing that, by
    the smallest cached table with a larger bound. Writes replace files
    atomically.
    """

    def __init__(self, cache_dir: Optional[Path] = None) -> None:
        """Initialize cache.

        Args:
            cache_dir: Directory for cache files (default: XDG / env override)
        """
        self.cache_dir = XDGDirectories.get_tables_dir(cache_dir)
        logger.debug(f"TableCache initialized at {self.cache_dir}")

    def path_for(self, n: int) -> Path:
        """Cache file path for tables of size n."""
        return XDGDirectories.get_tables_path(n, self.cache_dir)

    def load(self, n: int) -> Optional[DivisorTables]:
        """Load tables for n.

        Args:
            n: Table bound

        Returns:
            DivisorTables, or None if no usable file exists

        Raises:
            CacheError: If the file is truncated or its header is corrupt
        """
        path = self.path_for(n)
        if not path.exists():
            return None

        try:
            raw = path.read_bytes()
        except OSError as e:
            raise CacheError(f"Cannot read cache file {path}: {e}") from e

        if len(raw) < _HEADER.size:
            raise CacheError(f"Cache file {path} is truncated")
        magic, version, stored_n = _HEADER.unpack_from(raw, 0)
        if magic != MAGIC:
            raise CacheError(f"Cache file {path} has bad magic {magic!r}")
        if version != FORMAT_VERSION:
            logger.info(f"Ignoring cache file {path} with format version {version}")
            return None
        if stored_n != n:
            raise CacheError(f"Cache file {path} holds n={stored_n}, expected {n}")

        expected = _HEADER.size + len(_FIELDS) * (n + 1) * _DTYPE.itemsize
        if len(raw) != expected:
            raise CacheError(f"Cache file {path} has {len(raw)} bytes, expected {expected}")

        arrays = {}
        offset = _HEADER.size
        for name in _FIELDS:
            data = np.frombuffer(raw, dtype=_DTYPE, count=n + 1, offset=offset)
            arrays[name] = data.astype(np.int64)
            offset += (n + 1) * _DTYPE.itemsize
        arrays["mu"] = arrays["mu"].astype(np.int8)

        return DivisorTables(n=n, **arrays)

    def save(self, tables: DivisorTables) -> Path:
        """Write tables to the cache.

        Args:
            tables: Tables to store

        Returns:
            Path of the written file

        Raises:
            CacheError: If writing fails
        """
        path = self.path_for(tables.n)
        temporary = path.with_suffix(path.suffix + ".tmp")
        try:
            with open(temporary, "wb") as f:
                f.write(_HEADER.pack(MAGIC, FORMAT_VERSION, tables.n))
                for name in _FIELDS:
                    f.write(np.asarray(getattr(tables, name), dtype=_DTYPE).tobytes())
            temporary.replace(path)
        except OSError as e:
            raise CacheError(f"Cannot write cache file {path}: {e}") from e

        logger.debug(f"Cached tables for n={tables.n} at {path}")
        return path

    def cached_sizes(self) -> list[int]:
        """Table bounds of the cache files present, ascending."""
        sizes = (parse_tables_filename(path.name) for path in self.cache_dir.glob("tables_n*.rdhf"))
        return sorted(size for size in sizes if size is not None)

    def load_covering(self, n: int) -> Optional[DivisorTables]:
        """Load the smallest cached table with bound above n.

        Unreadable files are logged and skipped.

        Args:
            n: Required table bound

        Returns:
            DivisorTables covering n, or None if no cached file does
        """
        for size in self.cached_sizes():
            if size <= n:
                continue
            try:
                tables = self.load(size)
            except CacheError as e:
                logger.warning(f"Skipping unusable cache file: {e}")
                continue
            if tables is not None:
                return tables
        return None

    def get_or_build(self, n: int, build: Callable[[int], DivisorTables]) -> DivisorTables:
        """Return cached tables covering n, building and storing them on a miss.

        The exact file for n is preferred, then the smallest larger one.
        A corrupt exact file is logged, rebuilt and overwritten.

        Args:
            n: Table bound
            build: Sieve function

        Returns:
            DivisorTables covering n
        """
        try:
            tables = self.load(n)
        except CacheError as e:
            logger.warning(f"Discarding unusable cache file: {e}")
            tables = None

        if tables is None:
            tables = self.load_covering(n)

        if tables is not None:
            logger.info(f"Sieve cache hit for n={n} (tables cover {tables.n})")
            return tables

        logger.info(f"Sieve cache miss for n={n}, sieving")
        tables = build(n)
        try:
            self.save(tables)
        except CacheError as e:
            logger.warning(f"Could not store sieve tables: {e}")
        return tables
