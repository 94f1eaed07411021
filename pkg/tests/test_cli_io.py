import json
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcpp.cli import main, run_batch
from mcpp.config import SolverConfig
from mcpp.formats import ParseError, parse_instance, write_instance, write_solution
from mcpp.generate import generate_instance, splitmix64
from mcpp.geometry import GeneralPositionViolation, validate_general_position
from mcpp.render import render_svg
from mcpp.search import solve

from .conftest import SQUARE, TRIANGLE, point_sets

SVG = "{http://www.w3.org/2000/svg}"


def test_parse_text():
    ps = parse_instance(b"3\n0 0\n4 0\n1 3\n")
    assert ps.points == ((0, 0), (4, 0), (1, 3))


def test_parse_json_square():
    doc = {"name": "sq", "points": [{"i": i, "x": x, "y": y} for i, (x, y) in enumerate(SQUARE)]}
    assert parse_instance(json.dumps(doc).encode()).points == tuple(SQUARE)


def test_parse_collinear():
    with pytest.raises(GeneralPositionViolation):
        parse_instance(b"3\n0 0\n1 1\n2 2\n")


@pytest.mark.parametrize("blob, line", [
    (b"3\n0 0\n4 0\n", 4),
    (b"x\n", 1),
    (b"3\n0 0\n4 0 7\n1 3\n", 3),
    (b"3\n0 0\n4 a\n1 3\n", 3),
])
def test_parse_errors_carry_line(blob, line):
    with pytest.raises(ParseError) as exc:
        parse_instance(blob)
    assert exc.value.line == line


def test_floats_rejected_unless_rounded():
    doc = b'{"points": [{"i": 0, "x": 0.0, "y": 0}, {"i": 1, "x": 4, "y": 0}, {"i": 2, "x": 1.4, "y": 3}]}'
    with pytest.raises(ParseError):
        parse_instance(doc)
    assert parse_instance(doc, round_floats=True).points == ((0, 0), (4, 0), (1, 3))
    with pytest.raises(ParseError):
        parse_instance(b"3\n0 0\n4.5 0\n1 3\n")


@given(point_sets(max_n=10, bound=10**6), st.sampled_from(["text", "json"]))
def test_instance_round_trip(ps, fmt):
    once = parse_instance(write_instance(ps, fmt))
    assert once == ps
    assert parse_instance(write_instance(once, fmt)) == once


def test_write_solution(triangle, square):
    doc = json.loads(write_solution(triangle, solve(triangle)))
    assert list(doc) == ["value", "bound", "status", "polygons", "edges", "stats"]
    assert doc["value"] == 1 and doc["polygons"] == [[0, 1, 2]]
    assert list(doc["stats"]) == ["nodes", "pricing_rounds", "columns", "cuts", "seconds"]
    assert doc["stats"]["seconds"] >= 0
    sq = json.loads(write_solution(square, solve(square)))
    assert sq["polygons"] == [[0, 1, 2, 3]]
    assert sq["edges"] == [[0, 1], [0, 3], [1, 2], [2, 3]]


def _svg_counts(blob):
    root = ET.fromstring(blob)
    return (len(root.findall(f".//{SVG}polygon")), len(root.findall(f".//{SVG}line")),
            len(root.findall(f".//{SVG}circle")))


def test_svg(triangle, square):
    assert _svg_counts(render_svg(triangle, [(0, 1, 2)])) == (1, 3, 3)
    assert _svg_counts(render_svg(square, [(0, 1, 2, 3)])) == (1, 4, 4)
    assert _svg_counts(render_svg(square)) == (0, 0, 4)


def test_svg_viewbox(square):
    root = ET.fromstring(render_svg(square))
    assert [float(v) for v in root.get("viewBox").split()] == [-0.5, -0.5, 11.0, 11.0]


@given(point_sets(max_n=9))
def test_svg_faces_match_value(ps):
    res = solve(ps)
    blob = render_svg(ps, [p.vertices for p in res.incumbent.partition])
    assert _svg_counts(blob)[0] == res.value


def test_splitmix64_reference():
    # first outputs from state 0, as published with the algorithm
    out, s = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF
    assert splitmix64(s)[0] == 0x6E789E6AA1B965F4


@given(st.integers(0, 2**63), st.integers(3, 25))
def test_generate(seed, n):
    a = generate_instance(seed, n)
    assert a == generate_instance(seed, n)
    assert a.n == n and validate_general_position(a.points) is None
    assert all(0 <= c <= 1000 for p in a.points for c in p)


def test_generate_triangle():
    assert len(generate_instance(1, 3).hull) == 3


def test_batch(tmp_path):
    assert list(run_batch(tmp_path, SolverConfig())) == []
    (tmp_path / "tri.txt").write_bytes(write_instance(parse_instance(b"3\n0 0\n4 0\n1 3\n")))
    recs = list(run_batch(tmp_path, SolverConfig()))
    assert len(recs) == 1 and recs[0]["value"] == 1 and recs[0]["name"] == "tri"
    assert list(recs[0]) == ["name", "n", "mode", "value", "bound", "status", "nodes", "pricing_rounds",
                             "columns", "cuts", "peak_mem_bytes", "seconds"]
    (tmp_path / "bad.txt").write_bytes(b"3\n0 0\n1 1\n2 2\n")
    recs = list(run_batch(tmp_path, SolverConfig()))
    assert [r["status"] for r in recs] == ["Error", "Optimal"]


def test_batch_modes_agree(tmp_path):
    from mcpp.oracle import brute_force_optimum
    for s in range(4):
        ps = generate_instance(s, 8 + s)
        (tmp_path / f"i{s}.json").write_bytes(write_instance(ps, "json", f"i{s}"))
    cg = list(run_batch(tmp_path, SolverConfig(mode="cg")))
    full = list(run_batch(tmp_path, SolverConfig(mode="full"), jobs=2))
    assert [r["value"] for r in cg] == [r["value"] for r in full]
    assert [r["value"] for r in cg] == [brute_force_optimum(generate_instance(s, 8 + s))[0] for s in range(4)]


def test_cli_commands(tmp_path, capsys):
    inst = tmp_path / "a.txt"
    assert main(["gen", "--n", "10", "--seed", "4", "-o", str(inst)]) == 0
    out, svg = tmp_path / "a.json", tmp_path / "a.svg"
    assert main(["solve", str(inst), "--json", str(out), "--svg", str(svg)]) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "Optimal"
    assert _svg_counts(svg.read_bytes())[0] == doc["value"]
    assert main(["solve", str(inst), "--mode", "compact", "--lambda", "0.3"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == doc["value"]
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.txt").write_bytes(inst.read_bytes())
    (corpus / "b.txt").write_bytes(b"3\n0 0\n1 1\n2 2\n")
    stats = tmp_path / "s.jsonl"
    assert main(["batch", str(corpus), "--mode", "cg", "-o", str(stats)]) == 0
    lines = [json.loads(ln) for ln in stats.read_text().splitlines()]
    assert [r["name"] for r in lines] == ["a", "b"]
    assert lines[0]["value"] == doc["value"] and lines[1]["status"] == "Error"


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"3\n0 0\n1 1\n2 2\n")
    assert main(["solve", str(bad)]) == 1
    assert main(["solve", str(tmp_path / "missing.txt")]) == 1
    big = tmp_path / "big.txt"
    big.write_bytes(write_instance(generate_instance(8, 30)))
    assert main(["solve", str(big), "--time-limit", "0", "--json", str(tmp_path / "o.json")]) == 2
    assert main(["bogus"]) == 1
