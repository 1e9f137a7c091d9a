"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` so the CLI can emit
single-line, parseable failures.
"""


class SynthtabError(Exception):
    code = "error"


class EmptyFile(SynthtabError):
    code = "empty-file"


class MissingColumn(SynthtabError):
    code = "missing-column"


class UnknownColumn(SynthtabError):
    code = "unknown-column"


class DuplicateName(SynthtabError):
    code = "duplicate-name"


class NonNumericCell(SynthtabError):
    code = "non-numeric-cell"

    def __init__(self, row, column, value=""):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"non-numeric cell at row {row}, column {column!r}: {value!r}")


class MissingValue(SynthtabError):
    code = "missing-value"

    def __init__(self, row, column):
        self.row = row
        self.column = column
        super().__init__(f"missing value at row {row}, column {column!r}")


class LevelViolation(SynthtabError):
    """A cell of an ordinal column is not one of the allowed levels."""

    code = "level-violation"

    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"value {value!r} at row {row} is not an allowed level of column {column!r}"
        )


class TooFewRows(SynthtabError):
    code = "too-few-rows"


class ZeroVariance(SynthtabError):
    code = "zero-variance"

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} has zero variance")


class LengthMismatch(SynthtabError):
    code = "length-mismatch"


class EmptyProfile(SynthtabError):
    code = "empty-profile"


class InvalidProfile(SynthtabError):
    code = "invalid-profile"


class NotRepairable(SynthtabError):
    code = "not-repairable"


class NetworkError(SynthtabError):
    code = "network-error"


class AuthError(SynthtabError):
    code = "auth-error"


class Timeout(SynthtabError):
    code = "timeout"


class RefusalDetected(SynthtabError):
    code = "refusal-detected"


class NoTableFound(SynthtabError):
    code = "no-table-found"


class HeaderMismatch(SynthtabError):
    code = "header-mismatch"


class SchemaMismatch(SynthtabError):
    code = "schema-mismatch"


class EmptyDataset(SynthtabError):
    code = "empty-dataset"
