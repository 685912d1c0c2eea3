import json

import pytest

import fps_toolkit

XI_2_4 = "{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }"


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(
        "seed: 0\n"
        "output:\n"
        f"  directory: \"{tmp_path / 'saved'}\"\n"
        "  formats:\n"
        "    json: true\n"
        "    text: true\n"
        "    markdown: false\n"
        "logging:\n"
        "  level: \"WARNING\"\n"
        f"  file: \"{tmp_path / 'fps.log'}\"\n"
        "  max_size_mb: 1\n"
        "  backup_count: 1\n"
    )
    return str(path)


def run(capsys, config_file, *argv):
    code = fps_toolkit.main([*argv, "--config", config_file])
    out = capsys.readouterr().out
    return code, out


def test_is_fps(capsys, config_file):
    code, out = run(capsys, config_file, "is-fps", "--p", "2", "--q", "2", XI_2_4)
    assert code == 0
    report = json.loads(out)
    assert report["fixed_point_set"] is True
    assert report["np"] == 1


def test_json_output_is_stable(capsys, config_file):
    first = run(capsys, config_file, "is-fps", "--p", "2", XI_2_4)
    second = run(capsys, config_file, "is-fps", "--p", "2", XI_2_4)
    assert first == second


def test_text_and_json_agree(capsys, config_file):
    _, out_json = run(capsys, config_file, "is-fps", "--p", "3", XI_2_4)
    _, out_text = run(capsys, config_file, "is-fps", "--p", "3", "--format", "text", XI_2_4)
    verdict = json.loads(out_json)["fixed_point_set"]
    assert f"fixed_point_set: {str(verdict).lower()}" in out_text


def test_factor(capsys, config_file):
    code, out = run(capsys, config_file, "factor", "{(1 2)(3 4)}")
    assert code == 0
    result = json.loads(out)
    assert len(result["factors"]) == 2
    assert result["multiplicities"] == [{"factor": "{ (1 2) }", "degree": 2, "exponent": 2}]


def test_factor_with_orbit_factorization(capsys, config_file):
    code, out = run(capsys, config_file, "factor", "--p", "2",
                    "{(1 2)(3 4)(5 6), (1 3)(2 4)(5 6), (1 4)(2 3)(5 6)}")
    assert code == 0
    assert json.loads(out)["orbit_factorization"]["orbits"] == [[1, 2, 3, 4], [5, 6]]


def test_closure(capsys, config_file):
    code, out = run(capsys, config_file, "closure", "--p", "3", "--q", "2", "{(1 2)(3 4)}")
    assert code == 0
    result = json.loads(out)
    assert result["closure_size"] == 3
    assert result["closed"] is False


def test_kappa(capsys, config_file):
    code, out = run(capsys, config_file, "kappa", "--p", "2", "{(1 2)}")
    assert code == 0
    result = json.loads(out)
    assert result["kappa"] == 2
    assert result["trajectory"] == [{"u": 1, "np": 1}, {"u": 2, "np": 0}]
    assert result["downward_closed"]


def test_input_file(capsys, config_file, tmp_path):
    path = tmp_path / "sets.txt"
    path.write_text("# two sets\n{(1 2)}\n\n" + XI_2_4 + "\n")
    code, out = run(capsys, config_file, "is-fps", "--p", "2", "--input", str(path))
    assert code == 0
    assert [r["size"] for r in json.loads(out)["results"]] == [1, 3]


def test_verify(capsys, config_file):
    code, out = run(capsys, config_file, "verify", "--p", "2", "--q", "2", "--n", "2")
    assert code == 0
    assert json.loads(out)["verdict"] == "AGREE"


def test_oracle_json(capsys, config_file):
    code, out = run(capsys, config_file, "oracle", "--p", "3", "--q", "3", "--n", "1")
    assert code == 0
    result = json.loads(out)
    assert [e["set"] for e in result["kept"]] == ["{ (1 2 3), (1 3 2) }"]
    assert result["ledger"]["ok"]


def test_saved_reports(capsys, config_file, tmp_path):
    code, _ = run(capsys, config_file, "classify", "--p", "2", "--q", "2", "--max-degree", "4",
                  "--output-dir", str(tmp_path / "out"))
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["classify-p2-q2.json", "classify-p2-q2.txt"]


@pytest.mark.parametrize("argv, code", [
    (["is-fps", "--p", "2", "{(1 2}"], 2),
    (["is-fps", "{(1 2)}"], 2),
    (["is-fps", "--p", "4", "{(1 2)}"], 2),
    (["is-fps", "--p", "2", "{(1 2), (1 2 3)}"], 2),
    (["oracle", "--p", "2", "--q", "2", "--n", "5"], 3),
    (["closure", "--p", "2", "--group-cap", "10", "{(1 2)(3 4)(5 6)}"], 3),
])
def test_exit_codes(capsys, config_file, argv, code):
    assert run(capsys, config_file, *argv)[0] == code
