"""Period sequence databases (JSON Lines) and prefix matching.

Each line is ``{"name": str, "coeffs": [int, ...]}``.  A database can be a
local path or an http(s) URL; fetched content is cached on disk under its
sha256 digest, with a small index from URL to digest.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class DatabaseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class FetchError(OSError):
    pass


@dataclass(frozen=True)
class PeriodRecord:
    name: str
    coeffs: tuple[int, ...]
    source: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "coeffs": list(self.coeffs)}


def parse_records(lines: Iterable[str], source: str = "") -> Iterator[PeriodRecord]:
    """Stream records, skipping blank lines; malformed lines raise DatabaseError."""
    for no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatabaseError(f"invalid JSON ({exc.msg})", no) from None
        if not isinstance(data, dict) or not isinstance(data.get("name"), str):
            raise DatabaseError("record needs a string 'name'", no)
        coeffs = data.get("coeffs")
        if (not isinstance(coeffs, list) or not coeffs
                or not all(isinstance(c, int) and not isinstance(c, bool) for c in coeffs)):
            raise DatabaseError("'coeffs' must be a non-empty list of integers", no)
        if coeffs[0] != 1:
            raise DatabaseError("period sequences start with 1", no)
        yield PeriodRecord(data["name"], tuple(coeffs), source)


def dumps_records(records: Iterable[PeriodRecord]) -> str:
    return "".join(json.dumps(r.to_json(), separators=(",", ":")) + "\n" for r in records)


def cache_dir() -> Path:
    base = os.environ.get("LF_CACHE_DIR")
    return Path(base) if base else Path.home() / ".cache" / "laurent_inversion"


def _is_url(location: str) -> bool:
    return location.startswith(("http://", "https://", "file://"))


def fetch(url: str, refresh: bool = False, timeout: float = 30.0) -> str:
    """Text at ``url``, served from the cache when present."""
    root = cache_dir()
    index_path = root / "index.json"
    index = json.loads(index_path.read_text()) if index_path.exists() else {}
    digest = index.get(url)
    if digest and not refresh and (root / "objects" / digest).exists():
        return (root / "objects" / digest).read_text()
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            body = resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise FetchError(f"cannot fetch {url}: {exc}") from exc
    digest = hashlib.sha256(body).hexdigest()
    (root / "objects").mkdir(parents=True, exist_ok=True)
    (root / "objects" / digest).write_bytes(body)
    index[url] = digest
    index_path.write_text(json.dumps(index, indent=1, sort_keys=True))
    return body.decode("utf-8")


def load_database(location: str, refresh: bool = False) -> list[PeriodRecord]:
    if _is_url(location):
        return list(parse_records(fetch(location, refresh).splitlines(), location))
    with open(location, encoding="utf-8") as fh:
        return list(parse_records(fh, location))


@dataclass(frozen=True)
class Match:
    record: PeriodRecord
    overlap: int

    def to_json(self) -> dict:
        return {"name": self.record.name, "overlap": self.overlap, "source": self.record.source}


def match_period(period: Sequence[int], records: Iterable[PeriodRecord],
                 min_overlap: int = 8) -> list[Match]:
    """Records agreeing with ``period`` on their common prefix of length >= min_overlap."""
    out = []
    for rec in records:
        n = min(len(period), len(rec.coeffs))
        if n >= min_overlap and tuple(period[:n]) == rec.coeffs[:n]:
            out.append(Match(rec, n))
    return out
