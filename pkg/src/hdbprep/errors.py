"""Typed errors with stable codes, split by process exit semantics.

``DataError`` (exit code 1) marks a problem in the survey content itself,
for example a bad token or misaligned columns. ``ConfigError`` (exit code 2)
marks a problem with the configuration or the environment. Errors carry an
optional source file, line number and pipeline stage so the CLI can point
at the offending input.
"""

from __future__ import annotations


class HdbError(Exception):
    """Base class for all toolkit errors."""

    code: str = "ERROR"
    exit_code: int = 1

    def __init__(self, message: str, *, source=None, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line
        self.stage: str | None = None

    def at(self, *, source=None, line: int | None = None, stage: str | None = None):
        """Attach location or stage info if not already set; returns self."""
        if self.source is None and source is not None:
            self.source = source
        if self.line is None and line is not None:
            self.line = line
        if self.stage is None and stage is not None:
            self.stage = stage
        return self

    def location(self) -> str:
        if self.source is not None and self.line is not None:
            return f"{self.source}:{self.line}"
        if self.source is not None:
            return str(self.source)
        if self.line is not None:
            return f"line {self.line}"
        return ""

    def __str__(self) -> str:
        parts = []
        if self.stage:
            parts.append(f"[{self.stage}]")
        parts.append(self.code)
        loc = self.location()
        if loc:
            parts.append(f"({loc})")
        return " ".join(parts) + f": {self.message}"


class DataError(HdbError):
    """Problem located in the input data. Exit code 1."""

    exit_code = 1


class ConfigError(HdbError):
    """Problem with configuration, parameters or I/O. Exit code 2."""

    exit_code = 2


class IoError(ConfigError):
    code = "IO_ERROR"


class EmptyFileError(DataError):
    code = "EMPTY_FILE"


class BlankLineError(DataError):
    code = "BLANK_LINE"


class EmptyTokenError(DataError):
    code = "EMPTY_TOKEN"


class BadStrataTokenError(DataError):
    code = "BAD_STRATA_TOKEN"


class LengthMismatchError(DataError):
    code = "LENGTH_MISMATCH"

    def __init__(self, variable, expected: int, actual: int, **kw):
        super().__init__(
            f"column '{variable}' has {actual} tokens, expected {expected}", **kw
        )
        self.variable = variable
        self.expected = expected
        self.actual = actual


class MissingColumnError(DataError):
    code = "MISSING_COLUMN"

    def __init__(self, column_name: str, **kw):
        super().__init__(f"column '{column_name}' not found in header row", **kw)
        self.column_name = column_name


class RowArityMismatchError(DataError):
    code = "ROW_ARITY_MISMATCH"

    def __init__(self, expected: int, actual: int, **kw):
        super().__init__(f"row has {actual} fields, header has {expected}", **kw)
        self.expected = expected
        self.actual = actual


class BadAgeTokenError(DataError):
    code = "BAD_AGE_TOKEN"

    def __init__(self, token: str, **kw):
        super().__init__(f"cannot read {token!r} as an age", **kw)
        self.token = token


class BadGenderTokenError(DataError):
    code = "BAD_GENDER_TOKEN"

    def __init__(self, token: str, encoding, **kw):
        super().__init__(
            f"gender code {token!r} is not valid under encoding {encoding}", **kw
        )
        self.token = token
        self.encoding = encoding


class BadIncomeTokenError(DataError):
    code = "BAD_INCOME_TOKEN"

    def __init__(self, token: str, **kw):
        super().__init__(f"cannot read {token!r} as an income amount", **kw)
        self.token = token


class BadEncodingError(ConfigError):
    code = "BAD_ENCODING"


class PrefixCollisionError(DataError):
    code = "PREFIX_COLLISION"

    def __init__(self, token: str, letter: str, **kw):
        super().__init__(
            f"token {token!r} contains prefix letter {letter!r}; "
            "the identifier would not parse back", **kw
        )
        self.token = token
        self.letter = letter


class MalformedKeyError(DataError):
    code = "MALFORMED_KEY"

    def __init__(self, canonical: str, **kw):
        super().__init__(f"cannot parse household key {canonical!r}", **kw)
        self.canonical = canonical


class NonConsecutiveKeyError(DataError):
    code = "NON_CONSECUTIVE_KEY"

    def __init__(self, canonical: str, line: int, **kw):
        super().__init__(
            f"household {canonical!r} reappears after a different household; "
            "input is not grouped (use an explicit sort)", line=line, **kw
        )
        self.canonical = canonical


class MissingIncomeError(DataError):
    code = "MISSING_INCOME"


class UnknownIncomeCodeError(DataError):
    code = "UNKNOWN_INCOME_CODE"

    def __init__(self, token: str, **kw):
        super().__init__(f"income code {token!r} is not in the range map", **kw)
        self.token = token


class DmpParamOutOfRangeError(ConfigError):
    code = "DMP_PARAM_OUT_OF_RANGE"


class EmptyHouseholdError(DataError):
    code = "EMPTY_HOUSEHOLD"


class ZeroScaleError(DataError):
    code = "ZERO_SCALE"
