import json
import math
import re

import pytest

from locusconf.arrangement import Arrangement
from locusconf.cli import main
from locusconf.svg import render_svg

TWO_PI = 2 * math.pi


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_solve_equal(capsys):
    code, out, _ = run(capsys, "solve", "1", "1", "1")
    assert code == 0
    data = json.loads(out)
    assert data["thetas"] == pytest.approx([0.0, 2.0944, 4.1888], abs=1e-4)
    assert data["multiplicities"] == [1, 1, 1]
    assert data["gradient_inf_norm"] <= 1e-12
    assert {"iterations", "potential"} <= set(data)


def test_solve_verify_locus_family(capsys):
    code, out, _ = run(capsys, "solve", "2", "1", "1", "--verify")
    assert code == 0
    assert json.loads(out)["locus_report"]["all_locus_pass"] is True


def test_solve_verify_probe(capsys):
    code, out, _ = run(capsys, "solve", "2", "3", "1", "1", "--verify")
    assert code == 0
    report = json.loads(out)["locus_report"]
    assert report["first_locus_pass"] is True
    assert isinstance(report["all_locus_pass"], bool)


@pytest.mark.parametrize("argv", [["solve", "0", "1"], ["solve", "3"], ["solve", "x"], ["solve"], ["bogus"]])
def test_solve_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_solve_non_convergence(capsys):
    code, out, _ = run(capsys, "solve", "5", "1", "1", "--max-iters", "1")
    assert code == 2
    assert json.loads(out)["error"] == "non-convergence"


def test_solve_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "3", "1", "2", "1", "-o", str(path))
    assert code == 0
    written = json.loads(path.read_text())
    assert written == json.loads(out)
    a = Arrangement.from_dict(written)
    assert list(a.thetas) == written["thetas"]
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert json.loads(out)["all_locus_pass"] is True


def test_verify_coxeter(capsys, tmp_path):
    p = write(tmp_path, "cox.json", {"multiplicities": [2, 1, 2, 1], "thetas": [0.0, math.pi / 2, math.pi, 1.5 * math.pi]})
    code, out, _ = run(capsys, "verify", p)
    assert code == 0
    report = json.loads(out)
    assert report["coarsely_coxeter"] is True
    assert [line["multiplicity"] for line in report["lines"]] == [2, 1, 2, 1]
    assert set(report["lines"][0]) >= {"index", "multiplicity", "residuals", "relative", "reflection_invariant"}


def test_verify_perturbed(capsys, tmp_path):
    thetas = [0.0, TWO_PI / 3 + 0.1, 2 * TWO_PI / 3]
    p = write(tmp_path, "bad.json", {"multiplicities": [1, 1, 1], "thetas": thetas})
    code, out, _ = run(capsys, "verify", p)
    assert code != 0
    report = json.loads(out)
    assert report["all_locus_pass"] is False
    assert max(abs(line["residuals"][0]) for line in report["lines"]) > 0.1


@pytest.mark.parametrize(
    "content",
    ["not json", json.dumps({"thetas": [0.0]}), json.dumps({"multiplicities": [1, 1], "thetas": [0.0, 9.0]})],
)
def test_verify_schema_errors(capsys, tmp_path, content):
    p = tmp_path / "x.json"
    p.write_text(content)
    code, _, err = run(capsys, "verify", str(p))
    assert code == 1
    assert "error" in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert code == 1


def test_verify_collision(capsys, tmp_path):
    p = write(tmp_path, "c.json", {"multiplicities": [1, 1, 1], "thetas": [0.0, 1e-13, 3.0]})
    code, out, _ = run(capsys, "verify", p)
    assert code == 2
    data = json.loads(out)
    assert data["error"] == "collision"
    assert any("error" in line for line in data["lines"])


def test_coarse(capsys):
    code, out, _ = run(capsys, "coarse", "4", "1", "2", "1")
    assert code == 0 and json.loads(out)["coarsely_symmetric"] is True
    code, out, _ = run(capsys, "coarse", "2", "3", "1", "1")
    assert code == 2 and json.loads(out)["coarsely_symmetric"] is False


def _line_angles(svg):
    angles = []
    for x1, y1, x2, y2 in re.findall(r'<line [^>]*x1="([-\d.]+)" y1="([-\d.]+)" x2="([-\d.]+)" y2="([-\d.]+)"', svg):
        dx, dy = float(x2) - float(x1), -(float(y2) - float(y1))
        angles.append(math.degrees(math.atan2(dy, dx)) % 180)
    return angles


def test_svg_lines_at_half_angles():
    a = Arrangement.from_angles([0.0, TWO_PI / 3, 2 * TWO_PI / 3], (1, 1, 1))
    svg = render_svg(a)
    assert svg.count("<line ") == 3
    assert _line_angles(svg) == pytest.approx([0.0, 60.0, 120.0], abs=1e-2)
    assert svg.count('<circle id="particle') == 3


def test_svg_stroke_widths():
    a = Arrangement.from_angles([0.0, 2.3, 4.0], (2, 1, 1))
    widths = [float(w) for w in re.findall(r'stroke-width="([\d.]+)"', render_svg(a))]
    assert widths[0] == 2 * widths[1] == 2 * widths[2]
    assert ">6</text>" in render_svg(a)


def test_plot_deterministic(capsys, tmp_path):
    p = write(tmp_path, "a.json", {"multiplicities": [2, 1, 1], "thetas": [0.0, 2.3, 4.0]})
    outs = []
    for name in ("one.svg", "two.svg"):
        code, _, _ = run(capsys, "plot", p, "-o", str(tmp_path / name), "--style", "mono")
        assert code == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"<?xml")


@pytest.mark.parametrize("suite", ["gradients", "families", "uniqueness"])
def test_check_suites(capsys, suite):
    code, out, err = run(capsys, "check", suite)
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True and data["rows"]
    assert "PASS" in err and "FAIL" not in err
