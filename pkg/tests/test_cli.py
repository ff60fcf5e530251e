import json

import pytest

from k3verify.cli import main


def test_dims_exit_zero(capsys):
    assert main(["dims", "--max-weight", "80"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out


def test_dims_json_schema(capsys):
    assert main(["dims", "--max-weight", "40", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    for key in ("suite", "checks", "seed", "runtime_ms", "constants"):
        assert key in report
    assert report["suite"] == "dims"
    assert all(c["status"] in ("pass", "fail", "inconclusive") for c in report["checks"])


def test_fibers_single_point(capsys):
    assert main(["fibers", "--t", "1,1,1,1,2"]) == 0
    out = capsys.readouterr().out
    assert "II*" in out and "IV*" in out


def test_fibers_fixture_suite(capsys):
    assert main(["fibers", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["suite"] == "fibers"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_fibers_bad_point_exit_two():
    assert main(["fibers", "--t", "1,2"]) == 2
    assert main(["fibers", "--t", "1,1,banana,1,2"]) == 2


def test_unknown_subcommand_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cd_suite(capsys):
    assert main(["cd", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["constants"]["c_prime"] == "544195584"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_disc_factor_pit(capsys):
    assert main(["disc-factor", "--pit", "--trials", "12", "--seed", "3", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["constants"]["c"] == "2176782336"
    assert report["seed"] == 3


def test_lattices_user_file_failure(tmp_path, capsys):
    # a lattice that fails the verification conditions yields exit code 1
    bad = tmp_path / "lat.json"
    gram = [
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 2, 0, 0],
        [0, 0, 2, 0, 0, 0],
        [0, 0, 0, 0, 0, 2],
        [0, 0, 0, 0, 2, 0],
    ]
    bad.write_text(json.dumps({"label": "user", "gram": gram}))
    assert main(["lattices", "--lattice", str(bad)]) == 1


def test_lattices_user_file_missing():
    assert main(["lattices", "--lattice", "/nonexistent/lat.json"]) == 2
