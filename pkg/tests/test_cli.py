"""JSON document parsing, command output, exit codes, and determinism."""
import json
import subprocess
import sys
from pathlib import Path

import pytest

from helpers import parallel_edges, triangle_cycle
from snckit import resolve_to_simplicial
from snckit.cli import (
    InputDocument,
    MissingBlockError,
    RunOptions,
    SchemaError,
    UnknownIdError,
    VersionError,
    document_json,
    main,
    parse_document,
    parse_input,
    run,
)

FIXTURES = Path(__file__).parent / "fixtures"
TRIANGLE = FIXTURES / "triangle_cycle.json"
PARALLEL = FIXTURES / "parallel_edges.json"
SPHERE4 = FIXTURES / "sphere4.json"


def load(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def write_doc(tmp_path: Path, data: dict, name: str = "doc.json") -> str:
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


# ---------------------------------------------------------------------------
# parsing


def test_parse_triangle_fixture():
    doc = parse_input(str(TRIANGLE))
    assert doc.version == "1"
    assert doc.divisor == triangle_cycle()
    assert doc.picard is not None
    assert [lv.p for lv in doc.picard.levels] == [0, 1]
    assert doc.dubois is not None and doc.dubois.get(0, 2) == 2
    assert doc.field_mode == "algebraically_closed"


def test_parse_parallel_fixture_defaults():
    doc = parse_input(str(PARALLEL))
    assert doc.divisor == parallel_edges()
    assert doc.picard is None
    assert doc.dubois is None
    assert doc.field_mode == "algebraically_closed"


def test_parse_sphere_fixture():
    doc = parse_input(str(SPHERE4))
    assert doc.divisor.n == 4
    assert len(doc.divisor.components) == 5
    assert len(doc.divisor.strata) == 25
    assert doc.picard is not None and len(doc.picard.levels) == 3


def test_document_round_trip():
    for path in (TRIANGLE, PARALLEL, SPHERE4):
        doc = parse_input(str(path))
        assert parse_document(document_json(doc)) == doc


def test_hyphenated_field_mode_is_accepted(tmp_path):
    data = load(TRIANGLE)
    data["field_mode"] = "algebraically-closed"
    doc = parse_input(write_doc(tmp_path, data))
    assert doc.field_mode == "algebraically_closed"


def test_numeric_version_is_tolerated(tmp_path):
    data = load(PARALLEL)
    data["version"] = 1
    assert parse_input(write_doc(tmp_path, data)).version == "1"


# ---------------------------------------------------------------------------
# schema rejection, with field paths


def test_rejects_unknown_and_missing_keys():
    with pytest.raises(SchemaError) as err:
        parse_document({"version": "1", "divisor": {"n": 3, "components": ["A"]},
                        "extra": 1})
    assert err.value.path == "document.extra"
    with pytest.raises(SchemaError) as err:
        parse_document({"version": "1"})
    assert err.value.path == "document"
    with pytest.raises(VersionError):
        parse_document({"version": "2",
                        "divisor": {"n": 3, "components": ["A"]}})


def test_rejects_bad_divisor_blocks():
    base = load(PARALLEL)
    base["divisor"]["strata"][0]["subset"] = [0, 9]
    with pytest.raises(UnknownIdError) as err:
        parse_document(base)
    assert err.value.path == "divisor.strata[0].subset[1]"

    base = load(PARALLEL)
    base["divisor"]["strata"][0]["subset"] = [0, 0]
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "divisor.strata[0].subset"

    base = load(PARALLEL)
    del base["divisor"]["strata"][0]["components"]
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "divisor.strata[0]"


def test_rejects_bad_parent_references():
    base = load(TRIANGLE)
    base["divisor"]["strata"][0]["components"][0]["parents"] = {"E1": "c23"}
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert "not a component index" in str(err.value)

    base = load(TRIANGLE)
    base["divisor"]["strata"][0]["components"][0]["parents"] = {"2": "c23"}
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert "not in the subset" in str(err.value)

    base = load(TRIANGLE)
    base["divisor"]["strata"][0]["components"][0]["parents"] = {"0": "ghost"}
    with pytest.raises(UnknownIdError) as err:
        parse_document(base)
    assert "unknown parent 'ghost'" in str(err.value)


def test_rejects_bad_picard_blocks():
    base = load(TRIANGLE)
    base["picard"]["levels"][0]["ns_torsion"] = [2, 3]
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "picard.levels[0].torsion"

    base = load(TRIANGLE)
    base["picard"]["levels"][0]["ns_torsion"] = [1]
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "picard.levels[0].torsion[0]"

    base = load(TRIANGLE)
    base["picard"]["ns_maps"] = []
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "picard.ns_maps"

    base = load(TRIANGLE)
    base["picard"]["ns_maps"] = [[[1, -1], [1, 0], [0, 1]]]
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "picard.ns_maps[0]"


def test_rejects_bad_dubois_and_field_mode():
    base = load(TRIANGLE)
    base["dubois"]["entries"].append({"p": 0, "q": 2, "b": 1})
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "dubois.entries[1]"

    base = load(TRIANGLE)
    base["dubois"]["isolated"] = "yes"
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "dubois.isolated"

    base = load(TRIANGLE)
    base["field_mode"] = "finite"
    with pytest.raises(SchemaError) as err:
        parse_document(base)
    assert err.value.path == "field_mode"


# ---------------------------------------------------------------------------
# command output


def test_validate_and_cohomology_text():
    doc = parse_input(str(TRIANGLE))
    text, machine = run("validate", doc)
    assert "ok: divisor with 3 component(s) and 3 stratum component(s)" in text
    assert machine["ok"] is True and machine["picard"] is True

    text, machine = run("cohomology", doc)
    assert text.splitlines() == ["H^0 = Z", "H^1 = Z", "H^2 = 0"]
    assert machine["groups"][1] == {"degree": 1, "str": "Z",
                                    "free_rank": 1, "torsion": []}


def test_check_simplicial_text():
    text, machine = run("check-simplicial", parse_input(str(PARALLEL)))
    assert text == "not simplicial; bad: {1,2} × 2"
    assert machine["is_simplicial"] is False
    assert machine["bad"] == [{"subset": ["1", "2"], "count": 2}]

    text, machine = run("check-simplicial", parse_input(str(TRIANGLE)))
    assert text == "simplicial"
    assert machine["bad"] == []


def test_dual_complex_text():
    text, _ = run("dual-complex", parse_input(str(PARALLEL)))
    assert text.splitlines() == [
        "dimension 0: 2 cell(s): 1, 2",
        "dimension 1: 2 cell(s): ca, cb",
    ]


def test_resolve_machine_document_reparses_to_the_resolved_divisor():
    doc = parse_input(str(PARALLEL))
    text, machine = run("resolve", doc)
    assert text.splitlines()[0] == "blowups: 1"
    assert machine["is_simplicial"] is True
    expected, records = resolve_to_simplicial(doc.divisor)
    assert [r["center"] for r in machine["blowups"]] == [r.center for r in records]
    reparsed = parse_document(machine["document"])
    assert reparsed.divisor == expected
    assert run("cohomology", reparsed) == run(
        "cohomology", InputDocument(doc.version, expected, None, None,
                                    doc.field_mode))


def test_kh_report_text_lines():
    text, machine = run("kh-report", parse_input(str(TRIANGLE)))
    lines = text.splitlines()
    assert lines[0] == "kh report: n = 3, field mode algebraically_closed"
    assert lines[1] == "KH_-3(X) = H^2(D(E),Z) = 0"
    assert "  value: Z^2 (exact; split: free quotient)" in lines
    assert "n3 exact: yes" in lines
    assert machine["kh_value"]["total"]["group"]["str"] == "Z^2"
    assert machine["n3_exact"] is True


def test_k_report_text_and_machine():
    text, machine = run("k-report", parse_input(str(TRIANGLE)))
    assert "  b^{0,2} = 2" in text
    assert "  NK_-2(U) = 2-dim V ⊗ tQ[t]" in text
    assert "  K_-2(X) = extension of KH_-2(X) by a 2-dim k-vector space" in text
    assert machine["v_dim"] == 2
    assert machine["k_equals_kh"] is False
    assert machine["kh"]["n"] == 3


def test_run_rejects_unknown_command():
    with pytest.raises(ValueError):
        run("explode", parse_input(str(PARALLEL)))


# ---------------------------------------------------------------------------
# exit codes


def test_exit_zero_on_success(capsys):
    assert main(["--input", str(TRIANGLE), "--command", "validate"]) == 0
    out = capsys.readouterr()
    assert out.out.startswith("ok:")
    assert out.err == ""


def test_exit_two_when_a_block_is_missing(capsys, tmp_path):
    assert main(["--input", str(PARALLEL), "--command", "kh-report"]) == 2
    assert "needs the 'picard' block" in capsys.readouterr().err

    data = load(TRIANGLE)
    del data["dubois"]
    assert main(["--input", write_doc(tmp_path, data),
                 "--command", "k-report"]) == 2
    assert "needs the 'dubois' block" in capsys.readouterr().err


def test_exit_one_on_bad_input(capsys, tmp_path):
    assert main(["--input", str(tmp_path / "absent.json"),
                 "--command", "validate"]) == 1
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["--input", str(bad), "--command", "validate"]) == 1

    data = load(PARALLEL)
    data["version"] = "2"
    assert main(["--input", write_doc(tmp_path, data),
                 "--command", "validate"]) == 1
    assert "version" in capsys.readouterr().err


def test_exit_one_when_an_entry_is_missing_inside_a_block(capsys, tmp_path):
    # the block is present, so this is a data error rather than exit 2
    data = load(TRIANGLE)
    data["dubois"]["entries"] = [{"p": 0, "q": 1, "b": 1}]
    assert main(["--input", write_doc(tmp_path, data),
                 "--command", "k-report"]) == 1
    assert "no entry (0, 2)" in capsys.readouterr().err

    data = load(TRIANGLE)
    data["dubois"]["isolated"] = False
    assert main(["--input", write_doc(tmp_path, data),
                 "--command", "k-report"]) == 1
    assert "isolated" in capsys.readouterr().err


def test_exit_one_when_the_blowup_cap_is_hit(capsys):
    assert main(["--input", str(PARALLEL), "--command", "resolve",
                 "--max-blowups", "0"]) == 1
    assert "blowup" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# emission modes and determinism


def test_emit_json_and_both(capsys):
    assert main(["--input", str(PARALLEL), "--command", "check-simplicial",
                 "--emit", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["command"] == "check-simplicial"

    assert main(["--input", str(PARALLEL), "--command", "check-simplicial",
                 "--emit", "both"]) == 0
    out = capsys.readouterr().out
    text, _, rest = out.partition("\n")
    assert text == "not simplicial; bad: {1,2} × 2"
    assert json.loads(rest)["is_simplicial"] is False


CASES = [(TRIANGLE, c) for c in ("validate", "dual-complex", "cohomology",
                                 "check-simplicial", "resolve", "kh-report",
                                 "k-report")]
CASES += [(PARALLEL, c) for c in ("validate", "dual-complex", "cohomology",
                                  "check-simplicial", "resolve")]
CASES += [(SPHERE4, c) for c in ("validate", "cohomology", "check-simplicial",
                                 "resolve", "kh-report", "k-report")]


@pytest.mark.parametrize("fixture,command", CASES,
                         ids=[f"{p.stem}-{c}" for p, c in CASES])
def test_output_is_byte_identical_across_runs(capsys, fixture, command):
    argv = ["--input", str(fixture), "--command", command, "--emit", "both"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert first.strip()


def test_subprocess_runs_are_byte_identical():
    cmd = [sys.executable, "-m", "snckit.cli", "--input", str(PARALLEL),
           "--command", "resolve", "--emit", "both"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert first.stdout.startswith(b"blowups: 1")
