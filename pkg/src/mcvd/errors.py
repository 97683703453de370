"""Exception types shared across the package.

The CLI maps these onto its exit codes: ConfigError -> 2, OutputError -> 3,
anything else unexpected -> 4.
"""


class McvdError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(McvdError):
    """Invalid parameter, configuration value, or resource limit breach.

    The message always names the offending key so the CLI can surface it.
    """


class OutputError(McvdError):
    """Failure writing results (CSV, manifest) to disk."""
