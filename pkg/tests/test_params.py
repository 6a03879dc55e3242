from pathlib import Path

import pytest

import dstit
from dstit.params.exceptions import (
    InvalidParameter,
    OracleConfigNotFound,
    SearchConfigNotFound,
    TomlNotFound,
    TomlNotValid,
)
from dstit.params.params import Params, SearchParams

PACKAGED = Path(dstit.__file__).parent / "config.toml"

SECTIONS = "[tool.search]\n{search}\n[tool.oracle]\n{oracle}\n[tool.output]\n{output}\n"


def write_config(tmp_path, search="", oracle="", output="") -> Path:
    path = tmp_path / "config.toml"
    path.write_text(SECTIONS.format(search=search, oracle=oracle, output=output))
    return path


def test_packaged_defaults():
    params = Params.from_toml(PACKAGED)
    assert params.search == SearchParams()
    assert params.oracle.bound == 0
    assert params.oracle.max_worlds == 4
    assert params.output.mode == "human"
    assert params.output.color


def test_values_are_read(tmp_path):
    path = write_config(
        tmp_path,
        search="label-cap = 50\nloop-check = false\nstep-budget = 100",
        oracle="bound = 2",
        output='mode = "structured"\ncolor = false',
    )
    params = Params.from_toml(path)
    assert params.search.label_cap == 50
    assert not params.search.loop_check
    assert params.search.step_budget == 100
    assert params.search.trim_proofs
    assert params.oracle.bound == 2
    assert params.output.mode == "structured"
    assert not params.output.color


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(TomlNotFound):
        Params.from_toml(tmp_path / "missing.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("[tool.search\n")
    with pytest.raises(TomlNotValid):
        Params.from_toml(broken)


def test_missing_sections(tmp_path):
    path = tmp_path / "partial.toml"
    path.write_text("[tool.oracle]\n[tool.output]\n")
    with pytest.raises(SearchConfigNotFound):
        Params.from_toml(path)
    path.write_text("[tool.search]\n[tool.output]\n")
    with pytest.raises(OracleConfigNotFound):
        Params.from_toml(path)


@pytest.mark.parametrize(
    "search, output",
    [
        ("label-cap = 0", ""),
        ("label-cap = -3", ""),
        ('loop-check = "no"', ""),
        ("step-budget = true", ""),
        ("", 'mode = "xml"'),
    ],
)
def test_invalid_values(tmp_path, search, output):
    with pytest.raises(InvalidParameter):
        Params.from_toml(write_config(tmp_path, search=search, output=output))
