class TomlNotValid(Exception):
    """Toml not valid.

    Exception raised when a Toml File is not valid.

    """


class TomlNotFound(Exception):
    """Toml not found.

    Exception raised when a configuration TOML file is not found.
    """


class SearchConfigNotFound(Exception):
    """Search config not found.

    Exception raised when the [tool.search] section is missing from a TOML file.
    """


class OracleConfigNotFound(Exception):
    """Oracle config not found.

    Exception raised when the [tool.oracle] section is missing from a TOML file.
    """


class OutputConfigNotFound(Exception):
    """Output config not found.

    Exception raised when the [tool.output] section is missing from a TOML file.
    """


class InvalidParameter(Exception):
    """Invalid parameter.

    Exception raised when a configuration value has the wrong type or range.
    """
