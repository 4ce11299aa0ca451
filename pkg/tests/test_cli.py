import json
import re
import subprocess
import sys

import pytest

from mvframes.cli import EXIT_BOUND, EXIT_INPUT, EXIT_OK, EXIT_PROPERTY, main
from mvframes.core import Signature
from mvframes.morphisms import diagonal_embedding, doubling_embedding, hom_to_json

L3 = {"blocks": [{"kind": "chain", "n": 3, "mult": 1}]}
L3_L4 = {"blocks": [{"kind": "chain", "n": 3, "mult": 1}, {"kind": "chain", "n": 4, "mult": 1}]}
L2_OMEGA = {"blocks": [{"kind": "chain", "n": 2, "mult": "inf"}]}
L3_OMEGA = {"blocks": [{"kind": "chain", "n": 3, "mult": "inf"}]}
UNIT = {"blocks": [{"kind": "interval", "mult": 1}]}
L3_POWER_5 = {"blocks": [{"kind": "chain", "n": 3, "mult": 5}]}


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("inputs")
    contents = {
        "l3.json": L3,
        "l3l4.json": L3_L4,
        "l2w.json": L2_OMEGA,
        "l3w.json": {"signature": L3_OMEGA},
        "u.json": UNIT,
        "l3p5.json": L3_POWER_5,
        "cofinite.json": {"exceptions": {}, "defaults": ["1"]},
        "finite.json": {"exceptions": {"0.4": "1/2"}, "defaults": ["0"]},
        "z8.json": {"factors": [{"p": 2, "k": 3}]},
        "z8z9.json": "Z/8 x Z/9",
        "z2.json": {"blocks": [{"unit": 2, "mult": 1}]},
        "z2w.json": {"blocks": [{"unit": 2, "mult": "inf"}]},
        "diagonal.json": hom_to_json(diagonal_embedding(3)),
        "doubling.json": hom_to_json(doubling_embedding()),
        "swap.json": {"kind": "table", "name": "swap", "table": [
            {"from": {"exceptions": {}}, "to": {"exceptions": {"0.0": "1"}}},
            {"from": {"exceptions": {"0.0": "1/2"}}, "to": {"exceptions": {"0.0": "1/2"}}},
            {"from": {"exceptions": {"0.0": "1"}}, "to": {"exceptions": {}}},
        ]},
    }
    for name, obj in contents.items():
        (d / name).write_text(json.dumps(obj), encoding="utf-8")
    (d / "broken.json").write_text("{ not json", encoding="utf-8")
    (d / "wrong.json").write_text(json.dumps({"blocks": [{"kind": "ring", "n": 3}]}), encoding="utf-8")
    return d


def run(*argv):
    proc = subprocess.run([sys.executable, "-m", "mvframes", *map(str, argv)], capture_output=True)
    return proc.returncode, proc.stdout


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def commands(d):
    return [
        ["classify", d / "l3l4.json"],
        ["classify", d / "l2w.json"],
        ["compact", d / "l3w.json", d / "cofinite.json"],
        ["compact", d / "l3w.json", d / "finite.json"],
        ["nucleus", d / "u.json", "ceiling"],
        ["nucleus", d / "l3l4.json", "double_pc", "--algebra"],
        ["ring", d / "z8.json", "--radical", "--mv-check"],
        ["gamma", d / "z2w.json"],
        ["phi", d / "l3l4.json"],
        ["hom", d / "doubling.json"],
        ["hasse", d / "l3.json"],
    ]


def test_every_command_is_byte_identical_across_runs(files):
    for argv in commands(files):
        first = run("--seed", 7, *argv)
        second = run("--seed", 7, *argv)
        assert first == second, argv
        assert first[0] == EXIT_OK, argv
        assert first[1]


def test_reports_round_trip_canonically(files, capsys):
    for argv in commands(files)[:-1]:
        _, text = call(capsys, *argv)
        assert json.dumps(json.loads(text), sort_keys=True, indent=2, ensure_ascii=False) + "\n" == text
        _, compact = call(capsys, *argv, "--json")
        assert "\n" not in compact.rstrip("\n")
        assert json.loads(compact) == json.loads(text)


def test_classify_reports(files, capsys):
    code, text = call(capsys, "classify", files / "l3l4.json")
    report = json.loads(text)
    assert code == EXIT_OK
    assert (report["algebraic"], report["coherent"], report["regular"]) == (True, True, False)
    report = json.loads(call(capsys, "classify", files / "l2w.json")[1])
    assert report["regular"] and report["isPowersetAlgebra"] and not report["coherent"]


def test_compact_reports_witness(files, capsys):
    code, text = call(capsys, "compact", files / "l3w.json", files / "cofinite.json", "--witness-prefix", 16)
    report = json.loads(text)
    assert code == EXIT_OK and report["compact"] is False
    assert report["witnessCheck"]["ok"] and report["witnessCheck"]["checkedTerms"] == 16
    report = json.loads(call(capsys, "compact", files / "l3w.json", files / "finite.json")[1])
    assert report["compact"] is True


def test_nucleus_reports(files, capsys):
    code, text = call(capsys, "nucleus", files / "u.json", "ceiling")
    report = json.loads(text)
    assert code == EXIT_OK
    assert (report["isNucleus"], report["isDense"], report["isInductive"], report["isMVType"]) == (
        True, True, False, True)
    code, text = call(capsys, "nucleus", files / "l3.json", "threshold:t0=1/2", "--algebra")
    report = json.loads(text)
    assert code == EXIT_OK and report["nuclearAlgebra"]["failed"] == ["isMVType"]
    code, text = call(capsys, "nucleus", files / "l3.json", files / "swap.json")
    assert code == EXIT_PROPERTY and json.loads(text)["isNucleus"] is False


def test_ring_radical_table(files, capsys):
    code, text = call(capsys, "ring", files / "z8.json", "--radical")
    report = json.loads(text)
    assert code == EXIT_OK
    zero_row = next(r for r in report["radical"] if r["ideal"] == "(0)")
    assert zero_row["radical"] == "(2)" and zero_row["radicalValue"] == "2/3"
    assert all(report["nucleus"]["checks"].values())
    code, text = call(capsys, "ring", files / "z8z9.json", "--mv-check")
    assert code == EXIT_OK and all(json.loads(text)["mvCheck"].values())


def test_gamma_and_phi(files, capsys):
    code, text = call(capsys, "gamma", files / "z2.json")
    report = json.loads(text)
    assert code == EXIT_OK and report["str"] == "L3" and all(report["checks"].values())
    code, text = call(capsys, "phi", files / "l3l4.json")
    report = json.loads(text)
    assert code == EXIT_OK and report["str"] == "Z[u=2] x Z[u=3]" and report["roundTrip"]


def test_hom_reports(files, capsys):
    report = json.loads(call(capsys, "hom", files / "diagonal.json")[1])
    assert (report["coherent"], report["complete"] and report["preservesMaximalCompact"]) == (False, False)
    report = json.loads(call(capsys, "hom", files / "doubling.json")[1])
    assert report["coherent"] and report["preservesMaximalCompact"] and report["equivalent"]


def test_hasse_diagram(files, capsys, tmp_path):
    code, text = call(capsys, "hasse", files / "l3.json")
    assert code == EXIT_OK and text.startswith("digraph")
    assert len(re.findall(r"\[label=", text)) == 3
    assert len(re.findall(r"->", text)) == 2
    assert 'label="1/2"' in text
    out = tmp_path / "l3l4.dot"
    assert call(capsys, "hasse", files / "l3l4.json", "--out", out)[0] == EXIT_OK
    dot = out.read_text(encoding="utf-8")
    # covering edges only: one per single-step raise of one coordinate
    assert len(re.findall(r"\[label=", dot)) == 12
    assert len(re.findall(r"->", dot)) == 2 * 4 + 3 * 3


def test_hasse_edges_are_covers(files, capsys):
    from mvframes.cli import hasse_dot, upper_covers
    from mvframes.core import enumerate_carrier, leq

    sig = Signature.parse("L3 x L3")
    elems = list(enumerate_carrier(sig))
    for x in elems:
        expected = {y for y in elems if leq(x, y) and x != y and not any(
            leq(x, z) and leq(z, y) and z not in (x, y) for z in elems)}
        assert set(upper_covers(x)) == expected
    assert hasse_dot(sig).count("->") == 12


@pytest.mark.parametrize("argv,code", [
    (["classify", "broken.json"], EXIT_INPUT),
    (["classify", "wrong.json"], EXIT_INPUT),
    (["classify", "missing.json"], EXIT_INPUT),
    (["phi", "u.json"], EXIT_INPUT),
    (["nucleus", "l3.json", "threshold:t0=1/3"], EXIT_INPUT),
    (["nucleus", "l3.json", "sideways"], EXIT_INPUT),
    (["ring", "broken.json"], EXIT_INPUT),
    (["hasse", "u.json"], EXIT_BOUND),
    (["hasse", "l2w.json"], EXIT_BOUND),
    (["hasse", "l3p5.json"], EXIT_BOUND),
    (["classify", "l3.json", "--bound", "0"], EXIT_INPUT),
    (["nosuchcommand"], EXIT_INPUT),
])
def test_exit_codes(files, capsys, argv, code):
    resolved = [str(files / a) if a.endswith(".json") else a for a in argv]
    assert call(capsys, *resolved)[0] == code


def test_exit_codes_from_a_subprocess(files):
    assert run("classify", files / "broken.json")[0] == EXIT_INPUT
    assert run("hasse", files / "l3p5.json")[0] == EXIT_BOUND
    assert run("nucleus", files / "l3.json", files / "swap.json")[0] == EXIT_PROPERTY


def test_flags_before_and_after_the_command(files, capsys):
    a = call(capsys, "--json", "classify", files / "l3.json")
    b = call(capsys, "classify", files / "l3.json", "--json")
    assert a == b
