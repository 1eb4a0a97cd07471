import json
import subprocess
import sys

import pytest

from hnnembed.cli import main
from hnnembed.parsing import parse_hnn, parse_presentation


X1 = "gens: a b c\nrel: b c a b c b c\n"
X2 = "gens: a b c\nrel: a b c\nrel: a b c c\n"
SURFACE = "gens: a b c d\nrel: a b a' b' c d c' d'\n"
INTRO = "hnn: t; ascending: a b; free: c\nmap a: ( a b c )^8\nmap b: ( a c )^9 b\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [
        ("x1", X1),
        ("x2", X2),
        ("surface", SURFACE),
        ("intro", INTRO),
        ("subgroup", "gens: a b\nrel: a b a'\nrel: b b\n"),
        ("broken", "gens: a\nrel: a a'\n"),
    ]:
        p = tmp_path / f"{name}.pres"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert err == ""
    # canonical form: re-serializing is byte-identical
    data = json.loads(out)
    assert json.dumps(data, sort_keys=True, indent=2) + "\n" == out
    return code, data


def test_parse_describes_both_kinds(files, capsys):
    code, out, _ = run(capsys, "parse", files["x1"])
    assert code == 0 and "b c a b c b c" in out
    code, out, _ = run(capsys, "parse", files["intro"])
    assert code == 0 and "stable t" in out and "ascending a b" in out


def test_parse_emit_round_trips(files, capsys):
    code, out, _ = run(capsys, "parse", files["intro"], "--emit")
    assert code == 0
    assert parse_hnn(out) == parse_hnn(INTRO)
    code, out, _ = run(capsys, "parse", files["x2"], "--emit")
    assert parse_presentation(out) == parse_presentation(X2)


def test_parse_error_exits_2_with_line(files, capsys):
    code, _, err = run(capsys, "parse", files["broken"])
    assert code == 2
    assert "line 2" in err and "not cyclically reduced" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "parse", "/nonexistent/nope.pres")
    assert code == 2 and "error:" in err


def test_pieces_reports_shared_subword(files, capsys):
    code, data = run_json(capsys, "pieces", files["x2"])
    assert code == 0
    rows = {r["name"]: r for r in data["relators"]}
    assert rows["r1"]["max_piece"] == 3
    assert rows["r2"]["max_piece"] == 3
    words = {p["word"] for r in rows.values() for p in r["maximal_pieces"]}
    assert "a b c" in words


def test_check_smallcancel_verdicts(files, capsys):
    code, data = run_json(capsys, "check-smallcancel", files["surface"], "--cp", "7")
    assert code == 0
    assert data["cprime"]["holds"] and data["cp"]["holds"]
    code, data = run_json(capsys, "check-smallcancel", files["x2"])
    assert code == 1 and not data["cprime"]["holds"]


def test_quotient_projection(files, capsys):
    code, data = run_json(capsys, "quotient", files["x1"], "--kill", "a")
    assert code == 0
    assert data["generators"] == ["b", "c"]
    assert data["projected"] == [{"source": "r1", "word": "b c b c b c"}]
    assert data["dropped"] == []


def test_check_rel_flags_power_jump(files, capsys):
    code, data = run_json(capsys, "check-rel", files["x1"], "--kill", "a")
    assert code == 1
    assert not data["no_extra_powers"]["verdict"]
    (violation,) = data["no_extra_powers"]["violations"]
    assert violation["relator"] == "r1"
    assert (violation["before"], violation["after"]) == (1, 3)
    code, data = run_json(capsys, "check-rel", files["x1"], "--kill", "c")
    assert code == 0
    assert data["no_extra_powers"]["verdict"] and data["no_duplicates"]["verdict"]


def test_check_rel_flags_duplicates(files, capsys):
    code, data = run_json(capsys, "check-rel", files["x2"], "--kill", "c")
    assert code == 1
    assert data["no_duplicates"]["collisions"] == [["r1", "r2"]]


def test_fold_membership_exit_codes(files, capsys):
    code, data = run_json(capsys, "fold", files["subgroup"])
    assert code == 0
    assert data["rank"] == 2 and data["vertices"] == 3
    code, data = run_json(capsys, "fold", files["subgroup"], "--word", "b b b b")
    assert code == 0 and data["member"]
    code, data = run_json(capsys, "fold", files["subgroup"], "--word", "a")
    assert code == 1 and not data["member"]


def test_embed_writes_files_and_certifies(files, tmp_path, capsys):
    out_pres = str(tmp_path / "g.pres")
    cert_path = str(tmp_path / "cert.json")
    code, out, _ = run(
        capsys, "embed", "--in", files["intro"], "--out", out_pres, "--cert", cert_path
    )
    assert code == 0 and "c1, c2" in out
    group = parse_hnn(open(out_pres).read())
    assert group.free == ()
    assert group.ascending == ("a", "b", "c", "c1", "c2")
    cert = json.loads(open(cert_path).read())
    assert cert["all_true"] and cert["construction"] == "plain"
    assert cert["new_generators"] == ["c1", "c2"]
    assert len(cert["quotient"]["words"]) == 3
    # stored file is canonical too
    raw = open(cert_path).read()
    assert json.dumps(json.loads(raw), sort_keys=True, indent=2) + "\n" == raw

    code, out, _ = run(
        capsys,
        "certify", "--in", files["intro"], "--g", out_pres, "--cert", cert_path,
    )
    assert code == 0 and "verified" in out


def test_embed_irreducible_certifies(files, tmp_path, capsys):
    out_pres = str(tmp_path / "gi.pres")
    cert_path = str(tmp_path / "certi.json")
    code, _, _ = run(
        capsys,
        "embed", "--in", files["intro"], "--out", out_pres, "--cert", cert_path,
        "--irreducible",
    )
    assert code == 0
    cert = json.loads(open(cert_path).read())
    assert cert["construction"] == "irreducible"
    irr = cert["checks"]["irreducible"]
    assert irr["wedge_check"] and irr["core_matches_wedge"]
    assert irr["basepoint_degree"] <= irr["degree_bound"]
    code, _, _ = run(
        capsys,
        "certify", "--in", files["intro"], "--g", out_pres, "--cert", cert_path,
    )
    assert code == 0


def test_certify_rejects_tampering(files, tmp_path, capsys):
    out_pres = str(tmp_path / "g.pres")
    cert_path = str(tmp_path / "cert.json")
    run(capsys, "embed", "--in", files["intro"], "--out", out_pres, "--cert", cert_path)
    cert = json.loads(open(cert_path).read())
    cert["checks"]["monomorphism"] = False
    tampered = str(tmp_path / "tampered.json")
    open(tampered, "w").write(json.dumps(cert, sort_keys=True, indent=2) + "\n")
    code, _, err = run(
        capsys, "certify", "--in", files["intro"], "--g", out_pres, "--cert", tampered
    )
    assert code == 1 and "mismatch" in err


def test_certify_rejects_wrong_group_file(files, tmp_path, capsys):
    out_pres = str(tmp_path / "g.pres")
    cert_path = str(tmp_path / "cert.json")
    run(capsys, "embed", "--in", files["intro"], "--out", out_pres, "--cert", cert_path)
    other_pres = str(tmp_path / "gi.pres")
    other_cert = str(tmp_path / "certi.json")
    run(
        capsys,
        "embed", "--in", files["intro"], "--out", other_pres, "--cert", other_cert,
        "--irreducible",
    )
    code, _, err = run(
        capsys, "certify", "--in", files["intro"], "--g", other_pres, "--cert", cert_path
    )
    assert code == 1 and "does not match" in err


def test_embed_rejects_unusable_input(tmp_path, capsys):
    bad = tmp_path / "bad.pres"
    bad.write_text("hnn: t; ascending: a; free:\nmap a: t a t'\n")
    code, _, err = run(
        capsys,
        "embed", "--in", str(bad), "--out", str(tmp_path / "g.pres"),
        "--cert", str(tmp_path / "c.json"),
    )
    assert code == 2 and "stable letter" in err


def test_word_solve_exit_codes(files, capsys):
    code, data = run_json(
        capsys,
        "word-solve", "--pres", files["surface"],
        "--word", "c ( a b a' b' c d c' d' ) c'",
    )
    assert code == 0 and data["trivial"] and data["area"] == 1
    assert data["steps"][0]["relator"] == "r1"
    code, data = run_json(
        capsys, "word-solve", "--pres", files["surface"], "--word", "a b"
    )
    assert code == 1 and not data["trivial"] and data["residue"] == "a b"


def test_word_solve_requires_metric_presentation(files, capsys):
    code, _, err = run(
        capsys, "word-solve", "--pres", files["x2"], "--word", "a b c"
    )
    assert code == 2 and "metric small cancellation" in err


def test_isoperimetry_ratios_are_exact(files, capsys):
    code, data = run_json(
        capsys,
        "isoperimetry", "--pres", files["surface"],
        "--samples", "6", "--max-conj", "2", "--seed", "5",
    )
    assert code == 0
    assert len(data["samples"]) == 6
    for row in data["samples"]:
        assert row["area"] <= row["pieces"]
        if row["ratio"] is not None:
            assert set(row["ratio"]) == {"num", "den"}
    assert data["max_ratio"]["num"] * 1 <= data["max_ratio"]["den"]


def test_isoperimetry_is_deterministic(files, capsys):
    args = ("isoperimetry", "--pres", files["surface"], "--samples", "4")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "hnnembed", "parse", files["x1"]],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "b c a b c b c" in proc.stdout
