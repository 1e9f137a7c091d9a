"""Find and extract a delimited table inside free-form model output.

Handles fenced code blocks, markdown pipe tables, and bare CSV-like runs
(comma, semicolon, or tab delimited). Returns raw string cells; numeric
validation happens in the caller.
"""

from __future__ import annotations

import csv
import re

from .errors import HeaderMismatch, NoTableFound

_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.S)
_PIPE_SEPARATOR = re.compile(r":?-{2,}:?")
_NUMERIC = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENTIFIER = re.compile(r"[A-Za-z_][\w .%/-]*")


def _split_line(line: str) -> list[str]:
    stripped = line.strip()
    if "|" in stripped:
        cells = [c.strip() for c in stripped.strip("|").split("|")]
        if all(_PIPE_SEPARATOR.fullmatch(c) for c in cells if c):
            return []  # markdown separator row
        return cells
    for delim in (",", ";", "\t"):
        if delim in stripped:
            return [c.strip() for c in next(csv.reader([stripped],
                                                       delimiter=delim))]
    return [stripped] if stripped else []


def _is_numeric_row(cells: list[str]) -> bool:
    return bool(cells) and all(
        c == "" or _NUMERIC.fullmatch(c) for c in cells
    )


def _is_header_row(cells: list[str]) -> bool:
    return (
        bool(cells)
        and all(c and _IDENTIFIER.fullmatch(c) for c in cells)
        and not any(_NUMERIC.fullmatch(c) for c in cells)
    )


def _collect_rows(parsed: list[list[str]], start: int, k: int
                  ) -> list[list[str]]:
    rows = []
    for cells in parsed[start:]:
        if len(cells) != k:
            break
        if k == 1 and not _is_numeric_row(cells):
            break
        rows.append(cells)
    return rows


def _scan_block(block: str, expected_header: list[str] | None
                ) -> tuple[list[str], list[list[str]]] | None:
    parsed = [_split_line(line) for line in block.splitlines()]
    parsed = [cells for cells in parsed if cells]

    if expected_header is not None:
        k = len(expected_header)
        want = sorted(expected_header)
        for idx, cells in enumerate(parsed):
            if len(cells) == k and sorted(cells) == want:
                rows = _collect_rows(parsed, idx + 1, k)
                if rows:
                    return cells, rows
        return None

    for idx, cells in enumerate(parsed):
        if _is_header_row(cells):
            rows = _collect_rows(parsed, idx + 1, len(cells))
            if rows and _is_numeric_row(rows[0]):
                return cells, rows
    # headerless numeric grid with at least two columns and two rows
    for idx, cells in enumerate(parsed[:-1]):
        if len(cells) >= 2 and _is_numeric_row(cells):
            rows = _collect_rows(parsed, idx, len(cells))
            if len(rows) >= 2 and all(_is_numeric_row(r) for r in rows):
                header = [f"col{i}" for i in range(1, len(cells) + 1)]
                return header, rows
    return None


def _header_candidates(text: str) -> list[list[str]]:
    found = []
    for block in [*_FENCE.findall(text), text]:
        for line in block.splitlines():
            cells = _split_line(line)
            if len(cells) >= 2 and _is_header_row(cells):
                found.append(cells)
    return found


def extract_table(text: str, expected_header: list[str] | None = None
                  ) -> tuple[list[str], list[list[str]]]:
    """Return (header, data rows) for the first usable table in ``text``.

    With ``expected_header``, the table header must be a permutation of
    those names; a table-like header with other names raises HeaderMismatch,
    no table at all raises NoTableFound.
    """
    blocks = [*_FENCE.findall(text), text]
    for block in blocks:
        result = _scan_block(block, expected_header)
        if result is not None:
            return result
    if expected_header is not None:
        candidates = _header_candidates(text)
        if candidates:
            raise HeaderMismatch(
                f"expected columns {expected_header}, found {candidates[0]}"
            )
    raise NoTableFound("no tabular content found in response")
