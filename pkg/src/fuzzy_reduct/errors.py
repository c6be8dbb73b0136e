"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FuzzyReductError(Exception):
    exit_code = 3


class DatasetError(FuzzyReductError, ValueError):
    """Malformed or unloadable input table."""

    exit_code = 1


class UnsatisfiableError(FuzzyReductError):
    """A clause set that no feature subset can satisfy (or a degenerate run)."""

    exit_code = 2


class InvariantError(FuzzyReductError, AssertionError):
    exit_code = 3
