import json

import pytest

from stokes_cluster.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stokes_airy(capsys):
    code, out, _ = run(capsys, "stokes", "--n", "0")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["w"]) == 3 and doc["method"] == "wronskian"


def test_stokes_with_coeffs_and_hbar(capsys):
    code, out, _ = run(capsys, "stokes", "--coeffs", "[[-1, 0]]", "--hbar", "0.5")
    assert code == 0 and len(json.loads(out)["w"]) == 4


def test_chart_square(capsys):
    code, out, _ = run(capsys, "chart", "--coeffs", "[[-1, 0]]", "--hbar", "0.25")
    doc = json.loads(out)
    assert code == 0 and doc["saddle_free"] and len(doc["chart"]["X"]) == 1


def test_malformed_json_is_usage_error(capsys):
    code, _, err = run(capsys, "stokes", "--coeffs", "[[1, 0")
    assert code == 2 and "error:" in err


def test_double_root_is_input_error(capsys):
    code, _, err = run(capsys, "stokes", "--coeffs", "[[0, 0]]")
    assert code == 2 and "DiscriminantViolation" in err


def test_missing_subcommand(capsys):
    assert main([]) != 0


def test_numerical_failure_exit_code(capsys):
    code, out, err = run(capsys, "sweep", "--coeffs", "[[0, -1]]")
    assert code == 3 and "NotSaddleFree" in err and out == ""


def test_sweep_is_deterministic(capsys):
    _, a, _ = run(capsys, "sweep", "--coeffs", "[[-1, 0]]", "--samples", "3")
    _, b, _ = run(capsys, "sweep", "--coeffs", "[[-1, 0]]", "--samples", "3")
    assert a == b
    lines = a.strip().splitlines()
    assert lines[0] == "hbar_re,hbar_im,arc,X_re,X_im,log_abs_X" and len(lines) == 4


def test_random_seed_is_deterministic(capsys):
    _, a, _ = run(capsys, "stokes", "--n", "2", "--seed", "11")
    _, b, _ = run(capsys, "stokes", "--n", "2", "--seed", "11")
    _, c, _ = run(capsys, "stokes", "--n", "2", "--seed", "12")
    assert a == b and a != c


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "flip-coherence", "--samples", "50")
    assert code == 0 and out.startswith("PASS flip-coherence")


def test_exchange_graph(capsys, tmp_path):
    code, out, _ = run(capsys, "exchange-graph", "--n", "2")
    assert code == 0 and out.startswith("graph") and out.count("--") == 5
    target = tmp_path / "g.dot"
    assert main(["exchange-graph", "--n", "1", "--dot", str(target)]) == 0
    assert target.read_text().count("--") == 1
    code, _, _ = run(capsys, "exchange-graph", "--n", "9")
    assert code == 2


def test_trajectories_svg(capsys, tmp_path):
    svg = tmp_path / "f.svg"
    code, out, _ = run(capsys, "trajectories", "--coeffs", "[[-1, 0]]", "--svg", str(svg))
    doc = json.loads(out)
    assert code == 0 and doc["wkb_triangulation"] is not None
    assert svg.read_text().startswith("<?xml")


def test_trajectories_on_a_wall(capsys):
    code, out, _ = run(capsys, "trajectories", "--coeffs", "[[0, -1]]")
    doc = json.loads(out)
    assert code == 0 and doc["saddle_free"] is False and doc["wkb_triangulation"] is None


@pytest.mark.parametrize("n", ["-1", "7"])
def test_bad_rank(capsys, n):
    code, _, _ = run(capsys, "stokes", "--n", n)
    assert code == 2
