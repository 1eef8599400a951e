"""Run the bundled ``.pv`` corpus against its manifest.

Each entry is checked in its own session, so entries are independent of
each other and of the order they are run in.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .driver import FileReport, Session
from .reduction import DEFAULT_FLAGS, ReductionFlags

CORPUS_DIR = Path(__file__).parent / "corpus"
MANIFEST = CORPUS_DIR / "manifest.json"


@dataclass(frozen=True)
class Status:
    """``AllOk`` when ``command`` is None, else ``FailsAt(command, error)``."""

    command: Optional[str] = None
    error: Optional[str] = None

    @property
    def all_ok(self) -> bool:
        return self.error is None

    def __str__(self) -> str:
        return "AllOk" if self.all_ok else f"FailsAt({self.command}, {self.error})"


ALL_OK = Status()


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    expected: Status
    description: str = ""

    @classmethod
    def from_json(cls, obj: dict, base: Path) -> "CorpusEntry":
        kind = obj["expected_status"]
        if kind == "AllOk":
            expected = ALL_OK
        elif kind == "FailsAt":
            expected = Status(obj["fails_at"]["command"], obj["fails_at"]["error"])
        else:
            raise ValueError(f"unknown expected_status {kind!r}")
        return cls(base / obj["path"], expected, obj.get("description", ""))


@dataclass(frozen=True)
class EntryResult:
    entry: CorpusEntry
    observed: Status
    report: FileReport

    @property
    def passed(self) -> bool:
        return self.observed == self.entry.expected


def load_manifest(path: Path = MANIFEST) -> list:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return [CorpusEntry.from_json(obj, path.parent) for obj in json.load(fh)]


def status_of(report: FileReport) -> Status:
    if report.error is not None:
        return Status(None, report.error["kind"])
    failed = report.first_error
    if failed is None:
        return ALL_OK
    return Status(failed.name, failed.error["kind"])


def run_entry(entry: CorpusEntry, flags: ReductionFlags = DEFAULT_FLAGS) -> EntryResult:
    report = Session(flags=flags).check_file(str(entry.path))
    return EntryResult(entry, status_of(report), report)


def run_manifest(entries=None, jobs: int = 1, flags: ReductionFlags = DEFAULT_FLAGS) -> list:
    entries = load_manifest() if entries is None else entries
    if jobs <= 1:
        return [run_entry(e, flags) for e in entries]
    with ThreadPoolExecutor(jobs) as pool:
        return list(pool.map(lambda e: run_entry(e, flags), entries))
