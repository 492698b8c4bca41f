"""Walks a corpus of stored program revisions.

Layout (shared with the IDE's revision store)::

    <root>/<account>/<file>/<NNN>.js

Each ``NNN.js`` is one revision of one logical program file; numbering
starts at 001 and a new revision is stored only when the text changed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Revision:
    account: str
    file: str
    number: int
    path: Path
    source: str
    timestamp: float = 0.0  # file mtime: when the revision was stored

    @property
    def label(self) -> str:
        return f"{self.account}/{self.file}/{self.number:03d}"


def scan_corpus(root: str | Path) -> list[Revision]:
    """Collect every revision under ``root``, sorted by account/file/number."""
    base = Path(root)
    if not base.is_dir():
        raise FileNotFoundError(f"corpus root not found: {base}")
    revisions: list[Revision] = []
    for account_dir in sorted(p for p in base.iterdir() if p.is_dir()):
        for file_dir in sorted(p for p in account_dir.iterdir() if p.is_dir()):
            for path in sorted(file_dir.glob("*.js")):
                if not path.stem.isdigit():
                    continue
                revisions.append(
                    Revision(
                        account=account_dir.name,
                        file=file_dir.name,
                        number=int(path.stem),
                        path=path,
                        source=path.read_text(encoding="utf-8"),
                        timestamp=path.stat().st_mtime,
                    )
                )
    return revisions
