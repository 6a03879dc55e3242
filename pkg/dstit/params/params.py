from dataclasses import dataclass, field
from pathlib import Path

import toml

from .exceptions import (
    InvalidParameter,
    OracleConfigNotFound,
    OutputConfigNotFound,
    SearchConfigNotFound,
    TomlNotFound,
    TomlNotValid,
)

OUTPUT_MODES = ("human", "structured")


def _natural(obj: dict, key: str, default: int) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InvalidParameter(f"'{key}' must be a natural number, got {value!r}.")
    return value


def _flag(obj: dict, key: str, default: bool) -> bool:
    value = obj.get(key, default)
    if not isinstance(value, bool):
        raise InvalidParameter(f"'{key}' must be true or false, got {value!r}.")
    return value


@dataclass
class SearchParams:
    """A data class to represent proof-search parameters.

    Attributes:
        label_cap (int): Largest number of labels a thread may hold.
        loop_check (bool): Whether blocking is in force. Turning it off is
            only meant for reproducing divergent runs.
        step_budget (int): Largest number of rule applications, 0 for none.
        trim_proofs (bool): Whether found derivations are trimmed.
        expand_ioa (bool): Whether IoaOp macro steps are expanded into (IOA)
            steps.
    """

    label_cap: int = 10000
    loop_check: bool = True
    step_budget: int = 0
    trim_proofs: bool = True
    expand_ioa: bool = False

    @staticmethod
    def from_dict(obj: dict) -> "SearchParams":
        """Create a SearchParams instance from a dictionary.

        Raises:
            InvalidParameter: If a value has the wrong type or range.
        """
        label_cap = _natural(obj, "label-cap", 10000)
        if label_cap == 0:
            raise InvalidParameter("'label-cap' must be positive.")
        return SearchParams(
            label_cap=label_cap,
            loop_check=_flag(obj, "loop-check", True),
            step_budget=_natural(obj, "step-budget", 0),
            trim_proofs=_flag(obj, "trim-proofs", True),
            expand_ioa=_flag(obj, "expand-ioa", False),
        )


@dataclass
class OracleParams:
    """Bounded model finder settings.

    Attributes:
        bound (int): World bound of the cross-check run after each verdict,
            0 to skip it.
        max_worlds (int): World bound of stand-alone oracle queries.
    """

    bound: int = 0
    max_worlds: int = 4

    @staticmethod
    def from_dict(obj: dict) -> "OracleParams":
        return OracleParams(
            bound=_natural(obj, "bound", 0),
            max_worlds=_natural(obj, "max-worlds", 4),
        )


@dataclass
class OutputParams:
    mode: str = "human"
    color: bool = True

    @staticmethod
    def from_dict(obj: dict) -> "OutputParams":
        mode = obj.get("mode", "human")
        if mode not in OUTPUT_MODES:
            raise InvalidParameter(
                f"'mode' must be one of {', '.join(OUTPUT_MODES)}, got {mode!r}."
            )
        return OutputParams(mode=mode, color=_flag(obj, "color", True))


@dataclass
class Params:
    """A class to hold the parameters of every dstit command.

    Attributes:
        search (SearchParams): Holds proof-search parameters.
        oracle (OracleParams): Holds bounded model finder parameters.
        output (OutputParams): Holds report formatting parameters.
    """

    search: SearchParams = field(default_factory=SearchParams)
    oracle: OracleParams = field(default_factory=OracleParams)
    output: OutputParams = field(default_factory=OutputParams)

    @staticmethod
    def from_toml(toml_path: Path) -> "Params":
        """Create Params instance from a TOML file.

        Args:
            toml_path (Path): Path to the TOML file.

        Returns:
            Params: An instance of Params class.

        Raises:
            TomlNotFound: If the TOML file does not exist.
            TomlNotValid: If the TOML file is not valid.
            SearchConfigNotFound: If 'search' configuration is missing in the TOML file.
            OracleConfigNotFound: If 'oracle' configuration is missing in the TOML file.
            OutputConfigNotFound: If 'output' configuration is missing in the TOML file.
            InvalidParameter: If a value has the wrong type or range.
        """
        try:
            data = toml.load(toml_path)
        except FileNotFoundError:
            raise TomlNotFound(f"{toml_path} does not exist.")
        except toml.decoder.TomlDecodeError:
            raise TomlNotValid(f"{toml_path} is not a valid parameter file.")

        data = data.get("tool", {})

        if "search" not in data.keys():
            raise SearchConfigNotFound(
                f"{toml_path} does not contain search configurations."
            )
        if "oracle" not in data.keys():
            raise OracleConfigNotFound(
                f"{toml_path} does not contain oracle configurations."
            )
        if "output" not in data.keys():
            raise OutputConfigNotFound(
                f"{toml_path} does not contain output configurations."
            )

        return Params(
            search=SearchParams.from_dict(data["search"]),
            oracle=OracleParams.from_dict(data["oracle"]),
            output=OutputParams.from_dict(data["output"]),
        )
