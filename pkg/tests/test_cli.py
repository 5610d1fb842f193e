import json
import os
from pathlib import Path

import pytest

from plurihull import cli
from plurihull import obstruction as ob
from plurihull.polyalg import parse_poly as P

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def test_minimal_problem_defaults():
    p = cli.parse_problem("domain = torus\ng = z1, f = 0\n")
    assert p.domain == "torus"
    assert p.generators == [(P("z1"), P("0"))]
    assert p.degrees == (2, 4, 6, 8, 10, 12) and p.resolution == 32


def test_missing_domain():
    with pytest.raises(cli.ProblemError, match="missing domain"):
        cli.parse_problem("g = z1\n")


def test_gaussian_coefficient_generator():
    p = cli.parse_problem("domain = bidisk\ng = (1,1) z1^1 z2^1\n")
    (g, f), = p.generators
    assert g == P("(1,1) z1 z2") and f.is_zero()


def test_f_lines():
    p = cli.parse_problem("domain = bidisk\ng = z1\nf = z2^2\nf = z1 z2\n")
    assert p.generators == [(P("z1"), P("z2^2")), (P("0"), P("z1 z2"))]


def test_errors_carry_positions():
    with pytest.raises(cli.ProblemError) as e:
        cli.parse_problem("domain = bidisk\ncolour = red\n")
    assert e.value.line == 2 and "unknown key" in str(e.value)
    with pytest.raises(cli.ProblemError) as e:
        cli.parse_problem("domain = bidisk\ng = z1 + $\n")
    assert e.value.line == 2 and e.value.column == 10
    with pytest.raises(cli.ProblemError) as e:
        cli.parse_problem("domain = bidisk\njust words\n")
    assert e.value.line == 2
    with pytest.raises(cli.ProblemError):
        cli.parse_problem("domain = plane\ng = z1\n")
    with pytest.raises(cli.ProblemError):
        cli.parse_problem("domain = disk\ng = z2\n")


def test_round_trip_on_corpus():
    for path in sorted(PROBLEMS.glob("*.txt")):
        p = cli.parse_problem(path.read_text())
        text = cli.serialize_problem(p)
        assert cli.parse_problem(text) == p
        assert cli.serialize_problem(cli.parse_problem(text)) == text


def run(tmp_path, sub, name, *extra):
    out = tmp_path / sub
    code = cli.main([sub, "--problem", str(PROBLEMS / name), "--out", str(out), *extra])
    return code, out


def test_analyze_generic_line(tmp_path):
    code, out = run(tmp_path, "analyze", "line_generic_torus.txt")
    assert code == 0
    assert json.loads((out / "verdict.json").read_text())["kind"] == "Dense"


def test_analyze_fiber_family(tmp_path):
    code, out = run(tmp_path, "analyze", "fiber_bidisk.txt")
    assert code == 0
    v = json.loads((out / "verdict.json").read_text())
    assert v["kind"] == "LeafFamily" and v["witness"]["curve"] == P("z1").to_text()


def test_analyze_inconclusive_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(ob, "analyze", lambda *a: ob.Verdict("Inconclusive", notes=["forced"]))
    code, _ = run(tmp_path, "analyze", "fiber_bidisk.txt")
    assert code == 2


def test_density_outputs_and_cap(tmp_path):
    code, out = run(tmp_path, "density", "fiber_bidisk.txt", "--degrees", "2..4:2", "--resolution", "16")
    assert code == 0
    rows = (out / "density.csv").read_text().strip().splitlines()
    assert rows[0] == "target,degree,train_residual,sup_residual" and len(rows) == 3
    assert json.loads((out / "density.json").read_text())["degrees"] == [2, 4]
    code, _ = run(tmp_path, "density", "fiber_bidisk.txt", "--degrees", "2..40:2")
    assert code == 1


def test_track_certify_stratify(tmp_path):
    code, out = run(tmp_path, "track-zeros", "square_root_track.txt")
    assert code == 0
    assert len((out / "zeros.csv").read_text().strip().splitlines()) == 102
    code, out = run(tmp_path, "certify", "squares_bidisk.txt")
    assert code == 0
    q = json.loads((out / "certificates.json").read_text())["queries"]
    assert [e["status"] for e in q] == ["certificate", "none"]
    code, out = run(tmp_path, "stratify", "squares_bidisk.txt")
    assert code == 0
    s = json.loads((out / "strata.json").read_text())
    assert s["aborted"] is None and [lv["level"] for lv in s["levels"]][:3] == [2, 1, 0]
    code, out = run(tmp_path, "stratify", "interior_bidisk.txt")
    assert json.loads((out / "strata.json").read_text())["component"] == P("z1").to_text()


def test_certify_outside_torus(tmp_path):
    code, out = run(tmp_path, "certify", "line_generic_torus.txt")
    q = json.loads((out / "certificates.json").read_text())["queries"]
    assert code == 0 and [e["status"] for e in q] == ["certificate", "none"]


def test_track_without_polynomial(tmp_path):
    code, _ = run(tmp_path, "track-zeros", "fiber_bidisk.txt")
    assert code == 1


def test_reports_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}"
        for sub in ("analyze", "stratify", "certify"):
            assert cli.main([sub, "--problem", str(PROBLEMS / "squares_bidisk.txt"), "--out", str(out)]) == 0
        outs.append({f: (out / f).read_bytes() for f in os.listdir(out)})
    assert outs[0] == outs[1]


from hypothesis import given, settings, strategies as st


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["bidisk", "torus"]),
       st.lists(st.sampled_from(["z1", "z2^2", "(1/2,1/3) z1 z2", "z1 - 3/4"]), min_size=1, max_size=3),
       st.integers(8, 40))
def test_problem_round_trip_property(domain, gens, res):
    text = f"domain = {domain}\n" + "".join(f"g = {g}\n" for g in gens) + f"resolution = {res}\n"
    p = cli.parse_problem(text)
    assert cli.parse_problem(cli.serialize_problem(p)) == p
