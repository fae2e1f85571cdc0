"""Append-only on-disk store for the chromatic-polynomial memo.

The file starts with a version line; each further line is ``graph6<TAB>c0,c1,...``
(coefficients in ascending degree).  A header from another version discards
the file.  A torn or corrupt line ends the usable prefix: the file is
truncated there on load, so a crash mid-append costs at most one entry.
"""

from __future__ import annotations

import logging
import os
import threading

from .chromatic import IntPolynomial, PolynomialCache

CACHE_VERSION = "chromafun-cache v1"

log = logging.getLogger(__name__)


def _parse_line(line: bytes):
    key, sep, coeffs = line.decode("ascii").partition("\t")
    if not sep or not key:
        raise ValueError("missing field")
    values = [int(c) for c in coeffs.split(",")] if coeffs else []
    return key, IntPolynomial(tuple(values))


def _format_line(key: str, poly: IntPolynomial) -> str:
    return key + "\t" + ",".join(str(c) for c in poly.coeffs) + "\n"


class PersistentCache(PolynomialCache):
    """A PolynomialCache backed by a log file; ``flush`` appends new entries."""

    def __init__(self, path: str | os.PathLike):
        super().__init__()
        self.path = os.fspath(path)
        self._pending: dict[str, IntPolynomial] = {}
        self._file_lock = threading.Lock()
        self.truncated_at: int | None = None
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            self._rewrite_header()
            return
        with open(self.path, "rb") as fh:
            data = fh.read()
        header = (CACHE_VERSION + "\n").encode()
        if not data.startswith(header):
            log.warning("cache %s has another version; starting over", self.path)
            self._rewrite_header()
            return
        offset = len(header)
        entries = {}
        while offset < len(data):
            end = data.find(b"\n", offset)
            if end == -1:
                break
            try:
                key, poly = _parse_line(data[offset:end])
            except (ValueError, UnicodeDecodeError):
                break
            entries[key] = poly
            offset = end + 1
        if offset < len(data):
            log.warning("cache %s: corrupt tail dropped at byte %d", self.path, offset)
            self.truncated_at = offset
            with open(self.path, "r+b") as fh:
                fh.truncate(offset)
        for key, poly in entries.items():
            super().__setitem__(key, poly)

    def _rewrite_header(self) -> None:
        with open(self.path, "w", encoding="ascii") as fh:
            fh.write(CACHE_VERSION + "\n")

    def __setitem__(self, key: str, value: IntPolynomial) -> None:
        if key not in self:
            with self._file_lock:
                self._pending[key] = value
        super().__setitem__(key, value)

    def flush(self) -> int:
        with self._file_lock:
            pending, self._pending = self._pending, {}
        if not pending:
            return 0
        with open(self.path, "a", encoding="ascii") as fh:
            fh.write("".join(_format_line(k, p) for k, p in pending.items()))
            fh.flush()
            os.fsync(fh.fileno())
        return len(pending)
