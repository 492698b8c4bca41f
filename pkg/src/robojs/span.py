"""Source positions for tokens, syntax nodes, and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based, inclusive region of a source file."""

    file_id: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span ends before it starts: {self}")

    def contains(self, other: SourceSpan) -> bool:
        return (
            (self.start_line, self.start_col) <= (other.start_line, other.start_col)
            and (self.end_line, self.end_col) >= (other.end_line, other.end_col)
        )

    def merge(self, other: SourceSpan) -> SourceSpan:
        start = min(
            (self.start_line, self.start_col), (other.start_line, other.start_col)
        )
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return SourceSpan(self.file_id, start[0], start[1], end[0], end[1])

    def position(self) -> tuple[int, int, int, int]:
        """The location without the file id, for span comparisons across files."""
        return (self.start_line, self.start_col, self.end_line, self.end_col)

    def __str__(self) -> str:
        return f"{self.file_id}:{self.start_line}:{self.start_col}"
