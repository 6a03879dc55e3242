import json

import pytest

from dstit.command_line import main
from dstit.utils.text_styling_utils import Styler

OUGHT_IMPLIES_CAN = "O[0] p -> dia [0] p"


def run(capsys, *argv) -> tuple[int, str, str]:
    with pytest.raises(SystemExit) as info:
        main([*argv, "--no-color"])
    captured = capsys.readouterr()
    return info.value.code, captured.out, captured.err


def test_prove_valid(capsys):
    code, out, _ = run(capsys, "prove", OUGHT_IMPLIES_CAN)
    assert code == 0
    assert out.startswith("VALID (P[0] ~p | dia [0] p)")
    assert "rules: " in out


def test_prove_invalid(capsys):
    code, out, _ = run(capsys, "prove", "p")
    assert code == 1
    assert out.startswith("INVALID p")
    assert "worlds: {w0" in out


def test_structured_output(capsys):
    code, out, _ = run(capsys, "prove", "[0] p -> box p", "--choices", "1", "--out", "structured")
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "prove"
    assert report["verdict"] == "valid"
    assert report["choices"] == 1
    assert "APC" in report["proof"]["rules"]
    assert report["stats"]["threads"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("prove", "p &"),
        ("prove", "[1] p"),
        ("prove", "p", "--agents", "0"),
        ("prove", "p", "--label-cap", "0"),
        ("duty", "missing.kb", "--formula", "p"),
    ],
)
def test_input_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out.startswith("Error: ")


def test_bad_config(capsys, tmp_path):
    config = tmp_path / "config.toml"
    config.write_text("[tool.search]\n")
    code, out, _ = run(capsys, "prove", "p", "--config", str(config))
    assert code == 2


def test_proof_certificate_round_trip(capsys, tmp_path):
    cert = tmp_path / "proof.json"
    code, out, _ = run(capsys, "prove", OUGHT_IMPLIES_CAN, "--cert", str(cert))
    assert code == 0
    assert f"certificate: {cert}" in out
    code, out, _ = run(capsys, "check-proof", str(cert))
    assert code == 0
    assert out.startswith("VERIFIED")
    code, _, _ = run(capsys, "check-proof", str(cert), "--expand-genid")
    assert code == 0


def test_tampered_certificates_are_rejected(capsys, tmp_path):
    cert = tmp_path / "proof.json"
    run(capsys, "prove", OUGHT_IMPLIES_CAN, "--cert", str(cert))
    data = json.loads(cert.read_text())

    data["formula"] = "dia [0] p"
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-proof", str(cert))
    assert code == 1
    assert "does not match" in out

    data["formula"] = "(P[0] ~p | dia [0] p)"
    data["nodes"][-1]["rule"]["name"] = "Cut"
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-proof", str(cert))
    assert code == 1
    assert out.startswith("REJECTED")


def test_countermodel_certificate_round_trip(capsys, tmp_path):
    model = tmp_path / "model.toml"
    dot = tmp_path / "model.dot"
    code, _, _ = run(capsys, "prove", "dia [0] p -> dia [1] p", "--agents", "2",
                     "--cert", str(model), "--dot", str(dot))
    assert code == 1
    assert dot.read_text().startswith("graph model {")
    code, out, _ = run(capsys, "check-model", str(model))
    assert code == 0
    assert out.startswith("VERIFIED")


def test_check_model_on_the_bicycle_model(capsys, fixtures_dir):
    path = str(fixtures_dir / "bicycle_model.toml")
    code, out, _ = run(capsys, "check-model", path, "--world", "w")
    assert code == 0
    assert "C2: ok" in out
    code, _, _ = run(capsys, "check-model", path, "--formula", "O[0] n")
    assert code == 1


def test_model_checking(capsys, fixtures_dir):
    path = str(fixtures_dir / "bicycle_model.toml")
    code, out, _ = run(capsys, "mc", path, "--formula", "O[0] n", "--world", "u")
    assert (code, out.strip()) == (0, "true")
    code, out, _ = run(capsys, "mc", path, "--formula", "P[0] f", "--world", "u")
    assert (code, out.strip()) == (1, "false")
    code, out, _ = run(capsys, "mc", path, "--formula", "n", "--world", "x")
    assert code == 2


def test_duty(capsys, fixtures_dir):
    path = str(fixtures_dir / "bicycle.kb")
    code, out, _ = run(capsys, "duty", path, "--formula", "f")
    assert code == 1
    assert "O[0] f is not a duty" in out
    code, out, _ = run(capsys, "duty", path, "--formula", "n")
    assert code == 0
    assert "O[0] n is a duty" in out
    code, _, _ = run(capsys, "duty", path)
    assert code == 2
    code, _, _ = run(capsys, "duty", path, "--formula", "n", "--agent", "1")
    assert code == 2


def test_comply(capsys, fixtures_dir):
    code, out, _ = run(capsys, "comply", str(fixtures_dir / "car.kb"), "--formula", "car")
    assert code == 0
    assert "car by agent 0 is compliant" in out
    code, _, _ = run(capsys, "comply", str(fixtures_dir / "lanes.kb"), "--formula", "right")
    assert code == 1


def test_fulfill(capsys, fixtures_dir):
    code, out, _ = run(capsys, "fulfill", str(fixtures_dir / "conflict.kb"))
    assert code == 1
    assert "is not jointly fulfillable" in out
    code, _, _ = run(capsys, "fulfill", str(fixtures_dir / "empty.kb"), "--oracle-bound", "2")
    assert code == 0


def test_oracle_cross_check(capsys):
    code, _, _ = run(capsys, "prove", "p", "--oracle-bound", "2")
    assert code == 1
    code, _, _ = run(capsys, "prove", OUGHT_IMPLIES_CAN, "--oracle-bound", "2")
    assert code == 0


def test_trace_goes_to_stderr(capsys):
    code, _, err = run(capsys, "prove", OUGHT_IMPLIES_CAN, "--trace")
    assert code == 0
    assert "step 1: Ref(0) principal=- fresh=-" in err


def test_divergence_without_loop_check(capsys):
    code, out, _ = run(
        capsys, "prove", "dia [0] p | dia [1] q", "--agents", "2", "--choices", "2",
        "--no-loopcheck", "--budget", "300",
    )
    assert code == 3
    assert out.startswith("Internal error: ")


def test_styler():
    styler = Styler()
    assert styler.verdict("VALID", True) == "\033[92;1mVALID\033[0m"
    assert styler.formula("p") == "\033[1mp\033[0m"
    assert Styler(enabled=False).path("proof.json") == "proof.json"
