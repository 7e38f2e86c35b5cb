"""Tests for the command line interface: subcommands, exit codes, output
formats, and configuration precedence."""

import json
import math
import os

import pytest

from diastolic.cli import main, read_off, render_csv, render_json

TETRA_OFF = """\
OFF
4 4 0
0 0 0
1 1 0
1 0 1
0 1 1
3 0 1 2
3 0 1 3
3 0 2 3
3 1 2 3
"""

TETRA_JSON = {"triangles": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}


def write_tetra_off(tmp_path):
    path = tmp_path / "tetra.off"
    path.write_text(TETRA_OFF)
    return str(path)


def write_tetra_json(tmp_path):
    path = tmp_path / "tetra.json"
    path.write_text(json.dumps(TETRA_JSON))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_read_off_parses_counts_and_comments():
    pts, tris = read_off(
        "OFF # header comment\n4 4 0\n" + TETRA_OFF.split("\n", 2)[2])
    assert len(pts) == 4
    assert len(tris) == 4
    # counts may sit on the line after the header keyword
    pts2, tris2 = read_off(TETRA_OFF)
    assert tris2 == tris


def test_read_off_rejects_malformed():
    with pytest.raises(ValueError):
        read_off("not an off file")
    with pytest.raises(ValueError):
        read_off("OFF\n4 4 0\n0 0 0\n")  # truncated
    with pytest.raises(ValueError):
        read_off(TETRA_OFF.replace("3 0 1 2", "4 0 1 2 3"))  # quad face


def test_render_json_is_canonical():
    doc = {"b": 1.0, "a": [1, 2], "c": {"y": True, "x": None}}
    text = render_json(doc)
    assert text == (
        '{\n  "a": [1, 2],\n  "b": 1,\n  "c": {\n    "x": null,\n'
        '    "y": true\n  }\n}\n'
    )
    assert render_json({"v": 1 / 3}) == '{\n  "v": 0.333333333333\n}\n'


def test_render_csv():
    assert render_csv([0, 3, 4, 3, 0]) == \
        "step,mass\n0,0\n1,3\n2,4\n3,3\n4,0\n"


def test_analyze_off(tmp_path, capsys):
    code, out = run(capsys, ["analyze", write_tetra_off(tmp_path)])
    assert code == 0
    doc = json.loads(out)
    assert doc["format"] == "dias-report/1"
    assert doc["command"] == "analyze"
    assert doc["surface"]["triangles"] == 4
    assert doc["surface"]["genus"] == 0
    assert doc["surface"]["area"] == pytest.approx(4 * math.sqrt(3) / 4)
    assert doc["cheegerConstant"] == 96
    assert doc["cheegerBound"] == pytest.approx(
        math.sqrt(96 * math.pi / doc["surface"]["area"]), rel=1e-9)


def test_analyze_json_input(tmp_path, capsys):
    code, out = run(capsys, ["analyze", write_tetra_json(tmp_path)])
    assert code == 0
    assert json.loads(out)["surface"]["eulerCharacteristic"] == 2


def test_sweep_tetrahedron(tmp_path, capsys):
    path = write_tetra_json(tmp_path)
    profile = tmp_path / "profile.csv"
    svg = tmp_path / "mass.svg"
    emitted = tmp_path / "sweep.json"
    code, out = run(capsys, [
        "sweep", path, "--profile", str(profile), "--svg", str(svg),
        "--emit-sweep", str(emitted),
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["maxMass"] == 4
    assert doc["report"]["bound6C0Pass"] is True
    assert doc["steps"] == 5
    assert profile.read_text() == "step,mass\n0,0\n1,3\n2,4\n3,3\n4,0\n"
    svg_text = svg.read_text()
    assert svg_text.startswith("<svg")
    assert "polyline" in svg_text
    sweep_doc = json.loads(emitted.read_text())
    assert sweep_doc["format"] == "dias-sweep/1"
    assert len(sweep_doc["steps"]) == 5
    assert len(sweep_doc["certificates"]) == 4


def test_sweep_deterministic(tmp_path, capsys):
    path = write_tetra_json(tmp_path)
    _, out1 = run(capsys, ["sweep", path])
    _, out2 = run(capsys, ["sweep", path])
    assert out1 == out2


def test_out_flag_duplicates_stdout(tmp_path, capsys):
    path = write_tetra_json(tmp_path)
    saved = tmp_path / "report.json"
    code, out = run(capsys, ["analyze", path, "--out", str(saved)])
    assert code == 0
    assert saved.read_text() == out


def test_bisect_tetrahedron(tmp_path, capsys):
    code, out = run(capsys, ["bisect", write_tetra_json(tmp_path)])
    assert code == 0
    doc = json.loads(out)
    assert doc["sweepMaxMass"] == 4
    b = doc["bisection"]
    assert b["length"] == 4
    assert len(b["domain1"]) == 2 and len(b["domain2"]) == 2
    assert b["area1"] == pytest.approx(b["area2"])
    assert b["bound6C0Pass"] is True


def test_equilateralize_scaled_tetra(tmp_path, capsys):
    # vertices of a regular tetrahedron with side 2*sqrt(2)
    path = tmp_path / "reg.off"
    path.write_text(
        "OFF\n4 4 0\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n"
        "3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n")
    code, out = run(capsys, ["equilateralize", str(path)])
    assert code == 0
    doc = json.loads(out)
    side = 2.0 * math.sqrt(2.0)
    assert doc["distortion"]["globalK"] == pytest.approx(side)
    assert doc["distortion"]["scaledGlobalK"] == pytest.approx(1.0)
    assert doc["distortion"]["areaRatio"] == pytest.approx(1.0 / side ** 2)
    # equilateralize carries the full combinatorial surface in its report
    assert len(doc["surface"]["triangles"]) == 4


def test_oracle_subcommand(tmp_path, capsys):
    path = write_tetra_json(tmp_path)
    code, out = run(capsys, ["oracle", path])
    assert code == 0
    doc = json.loads(out)
    assert doc["cheeger"]["value"] == pytest.approx(8 / math.sqrt(3))
    assert doc["cheeger"]["cutLength"] == 4
    assert doc["cheeger"]["smallSide"] == 2
    assert doc["sweep"]["optimum"] == 4
    code, out = run(capsys, ["oracle", path, "--which", "cheeger"])
    doc = json.loads(out)
    assert "sweep" not in doc


def test_exit_code_unreadable(tmp_path, capsys):
    code, _ = run(capsys, ["analyze", str(tmp_path / "nope.off")])
    assert code == 2
    bad = tmp_path / "bad.off"
    bad.write_text("not an off file\n")
    code, _ = run(capsys, ["analyze", str(bad)])
    assert code == 2
    nolist = tmp_path / "nolist.json"
    nolist.write_text('{"vertices": 4}')
    code, _ = run(capsys, ["analyze", str(nolist)])
    assert code == 2


def test_exit_code_invalid_surface(tmp_path, capsys):
    nonman = tmp_path / "nonman.json"
    nonman.write_text(json.dumps(
        {"triangles": [[0, 1, 2], [0, 1, 3], [0, 1, 4], [2, 3, 4],
                       [0, 2, 3], [1, 2, 4], [1, 3, 4], [0, 2, 4]]}))
    code, _ = run(capsys, ["analyze", str(nonman)])
    assert code == 3


def test_exit_code_bound_failure(tmp_path, capsys, monkeypatch):
    import diastolic.cli as cli

    def boom(args):
        raise cli.BoundCheckFailed("maxMass 999 > bound 4")

    monkeypatch.setattr(cli, "cmd_sweep", boom)
    code, _ = run(capsys, ["sweep", write_tetra_json(tmp_path)])
    assert code == 4


def test_env_configuration(tmp_path, capsys, monkeypatch):
    path = write_tetra_json(tmp_path)
    monkeypatch.setenv("DIAS_CHEEGER_CONSTANT", "32")
    code, out = run(capsys, ["analyze", path])
    assert code == 0
    doc = json.loads(out)
    assert doc["cheegerConstant"] == 32
    assert doc["cheegerBound"] == pytest.approx(
        math.sqrt(32 * math.pi / doc["surface"]["area"]), rel=1e-9)
    # an explicit flag beats the environment
    code, out = run(capsys, ["analyze", path, "--cheeger-constant", "96"])
    doc = json.loads(out)
    assert doc["cheegerConstant"] == 96


def test_env_rejects_bad_values(tmp_path, capsys, monkeypatch):
    path = write_tetra_json(tmp_path)
    monkeypatch.setenv("DIAS_CHEEGER_CONSTANT", "48")
    code, _ = run(capsys, ["analyze", path])
    assert code == 2


def test_check_single_mesh(tmp_path, capsys):
    path = write_tetra_json(tmp_path)
    code, out = run(capsys, ["check", path])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert len(doc["meshes"]) == 1
    row = doc["meshes"][0]
    assert row["maxMass"] == 4
    assert row["bound6C0Pass"] is True
    assert row["cheegerPass"] is True
    assert row["oraclePass"] is True


def test_check_directory_byte_identical(tmp_path, capsys):
    # reports go to a sibling directory so the suite scan only sees meshes
    meshes = tmp_path / "meshes"
    meshes.mkdir()
    write_tetra_json(meshes)
    (meshes / "tetra2.off").write_text(TETRA_OFF)
    out1_path = tmp_path / "r1.json"
    out2_path = tmp_path / "r2.json"
    code, _ = run(capsys, ["check", "--suite", str(meshes),
                           "--out", str(out1_path)])
    assert code == 0
    code, _ = run(capsys, ["check", "--suite", str(meshes),
                           "--out", str(out2_path)])
    assert code == 0
    assert out1_path.read_bytes() == out2_path.read_bytes()
    doc = json.loads(out1_path.read_text())
    assert [m["name"] for m in doc["meshes"]] == sorted(
        m["name"] for m in doc["meshes"])
    assert len(doc["meshes"]) == 2


def test_nonorientable_genus_flag(tmp_path, capsys):
    from diastolic import corpus

    path = tmp_path / "klein.json"
    path.write_text(json.dumps(
        {"triangles": [list(t) for t in corpus.mesh("klein_bottle").triangles]}))
    code, out = run(capsys, ["analyze", str(path)])
    assert json.loads(out)["surface"]["genus"] == 1
    code, out = run(capsys, ["analyze", str(path),
                             "--nonorientable-genus", "crosscap"])
    assert json.loads(out)["surface"]["genus"] == 2
