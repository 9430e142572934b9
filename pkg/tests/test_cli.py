import json
import subprocess
import sys

import pytest

from qcext.cli import main


def test_verify_writes_deterministic_json(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = [
        "verify",
        "--builtin",
        "example2",
        "--theorem",
        "t2",
        "--grid",
        "24x24",
        "--no-timestamp",
    ]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["schema"] == 1 and doc["overall"] is True


def test_verify_text_format(capsys):
    code = main(
        [
            "verify",
            "--map",
            "z",
            "--theorem",
            "t2",
            "--grid",
            "16x16",
            "--format",
            "text",
            "--no-timestamp",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "overall: pass" in out


def test_exit_codes(capsys, tmp_path):
    # precondition violated: second coefficient is 2, not 0
    assert main(["verify", "--builtin", "koebe", "--theorem", "t2"]) == 2
    # bad expression text
    assert main(["verify", "--map", "z/((", "--theorem", "t2"]) == 2
    # malformed --param
    assert main(["verify", "--builtin", "example2", "--param", "lambda"]) == 2
    # verification failure
    assert (
        main(
            [
                "verify",
                "--builtin",
                "koebe",
                "--theorem",
                "t1",
                "--grid",
                "48x48",
                "--no-timestamp",
                "--out",
                str(tmp_path / "k.json"),
            ]
        )
        == 1
    )
    capsys.readouterr()


def test_chain_command(tmp_path, capsys):
    out = tmp_path / "chain.json"
    code = main(
        [
            "chain",
            "--builtin",
            "krzyz",
            "--param",
            "k=0.5",
            "--chain",
            "krzyz",
            "--grid",
            "16x16",
            "--no-timestamp",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["loewner"]["dk_radius_sup"] <= 0.5 + 1e-9
    capsys.readouterr()


def test_render_smoke_file_size(tmp_path):
    target = tmp_path / "id.ppm"
    code = main(
        [
            "render",
            "--map",
            "z",
            "--style",
            "grid",
            "--resolution",
            "16",
            "--image",
            str(target),
        ]
    )
    assert code == 0
    data = target.read_bytes()
    assert len(data) == len(b"P6\n16 16\n255\n") + 16 * 16 * 3


def test_render_reruns_byte_identical(tmp_path):
    a = tmp_path / "a.ppm"
    b = tmp_path / "b.ppm"
    for target in (a, b):
        args = [
            "render",
            "--builtin",
            "koebe",
            "--style",
            "domaincolor",
            "--resolution",
            "64",
            "--image",
            str(target),
        ]
        assert main(args) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_optional_image(tmp_path, capsys):
    img = tmp_path / "ext.ppm"
    code = main(
        [
            "verify",
            "--builtin",
            "mobius",
            "--grid",
            "16x16",
            "--no-timestamp",
            "--image",
            str(img),
            "--out",
            str(tmp_path / "m.json"),
        ]
    )
    assert code == 0
    assert img.read_bytes().startswith(b"P6\n")


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "qcext",
            "verify",
            "--builtin",
            "identity",
            "--grid",
            "16x16",
            "--no-timestamp",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["overall"] is True


def test_unknown_builtin_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--builtin", "warp"])
    assert exc.value.code == 2
