"""Error types shared across the package, mapped to CLI exit codes."""


class MinecastError(Exception):
    """Base class; exit_code drives the CLI's process exit status."""

    exit_code = 1


class ConfigError(MinecastError):
    """Bad or inconsistent configuration (exit code 1)."""

    exit_code = 1


class DatasetError(MinecastError):
    """Unreadable or invalid input dataset (exit code 2)."""

    exit_code = 2


class NumericError(MinecastError):
    """Computation cannot proceed on the given inputs (exit code 3)."""

    exit_code = 3
