import json

import pytest

from confalg.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sp2(tmp_path, capsys):
    path = tmp_path / "sp2.lcs"
    assert run(capsys, "gen", "sp", "--n", 2, "--out", path)[0] == 0
    return path


def corrupt(path, tmp_path):
    lines = path.read_text().splitlines()
    lines = [("bracket L_0 W_1 = (p*D + 2*p*x)*W_1" if ln.startswith("bracket L_0 W_1 =") else ln) for ln in lines]
    bad = tmp_path / "bad.lcs"
    bad.write_text("\n".join(lines) + "\n")
    return bad


def test_check_algebra_passes(sp2, capsys):
    code, out, _ = run(capsys, "check-algebra", sp2)
    assert code == 0
    assert out.rstrip().endswith("OVERALL PASS")


def test_corrupted_algebra_fails(sp2, tmp_path, capsys):
    code, out, _ = run(capsys, "check-algebra", corrupt(sp2, tmp_path))
    assert code == 1
    assert "FAIL jacobi" in out
    assert "W_1" in out


def test_json_matches_text(sp2, tmp_path, capsys):
    bad = corrupt(sp2, tmp_path)
    _, text, _ = run(capsys, "check-algebra", bad)
    code, js, _ = run(capsys, "check-algebra", bad, "--json")
    assert code == 1
    records = [json.loads(ln) for ln in js.splitlines()]
    items = [r for r in records if r["type"] == "item"]
    text_items = [ln for ln in text.splitlines() if ln.startswith(("PASS ", "FAIL "))]
    assert len(items) == len(text_items)
    for rec, ln in zip(items, text_items):
        status = "PASS" if rec["pass"] else "FAIL"
        assert ln == f"{status} {rec['kind']} {' '.join(rec['subject'])}: {rec['residual']}"
    residuals = [r for r in items if not r["kind"].endswith("-summary")]
    assert records[-1] == {"type": "summary", "pass": False, "failures": sum(not r["pass"] for r in residuals)}


def test_specialize_exit_codes(sp2, tmp_path, capsys):
    out = tmp_path / "sp2_0.lcs"
    assert run(capsys, "specialize", sp2, "--set", "p=0", "--out", out)[0] == 0
    assert "params\n" in out.read_text()
    inv = tmp_path / "inv.lcs"
    inv.write_text("algebra t\nparams p\ngen L even\nbracket L L = (1/p*D + 2/p*x)*L\n")
    code, _, err = run(capsys, "specialize", inv, "--set", "p=0")
    assert code == 2 and "error" in err
    assert run(capsys, "specialize", inv, "--set", "p=2")[0] == 0


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "check-algebra", tmp_path / "missing.lcs")[0] == 2
    assert run(capsys, "gen", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    bad = tmp_path / "syntax.lcs"
    bad.write_text("algebra t\nparams\ngen L even\nbracket L L = (D +\n")
    code, _, err = run(capsys, "check-algebra", bad)
    assert code == 2 and "line 4" in err


def test_check_module(tmp_path, capsys):
    path = tmp_path / "sigma.lcs"
    assert run(capsys, "gen", "sigma", "--n", 1, "--out", path)[0] == 0
    assert run(capsys, "check-module", path, path)[0] == 0


def test_morphism(tmp_path, capsys):
    files = {}
    for name in ("sh-N2", "sh", "N2"):
        files[name] = tmp_path / f"{name}.lcs"
        assert run(capsys, "gen", name, "--out", files[name])[0] == 0
    assert run(capsys, "morphism", files["sh-N2"], files["sh"], files["N2"])[0] == 0
    text = files["sh-N2"].read_text().splitlines()
    text = [("map W = 2*J" if ln.startswith("map W =") else ln) for ln in text]
    bad = tmp_path / "bad-map.lcs"
    bad.write_text("\n".join(text) + "\n")
    code, out, _ = run(capsys, "morphism", bad, files["sh"], files["N2"])
    assert code == 1 and "W G" in out


def test_kth(sp2, capsys):
    code, out, _ = run(capsys, "kth", sp2, "--max-k", 1)
    assert code == 0
    assert "L_1_(1) L_1 = (2*p + 2)*L_2" in out


def test_ann_ptn(tmp_path, capsys):
    path = tmp_path / "sp2.lcs"
    run(capsys, "gen", "sp", "--n", 4, "--out", path)
    code, out, _ = run(capsys, "ann", path, "--t", 2, "--modes", 2, "--p", 1, "--ptn")
    assert code == 0
    assert "dimension 27" in out and "Phi0 (1,1) (2,2)" in out
    assert run(capsys, "ann", path, "--t", 1, "--modes", 1, "--check-closed-forms")[0] == 0


def test_submodule(tmp_path, capsys):
    mod = tmp_path / "sigma.lcs"
    run(capsys, "gen", "sigma", "--n", 1, "--set", "a=0", "--set", "d=0", "--out", mod)
    name = [ln.split(" ", 1)[1] for ln in mod.read_text().splitlines() if ln.startswith("module ")][0]
    gens = tmp_path / "gens.lcs"
    gens.write_text(f"elements g\nover {name}\nparams p b sigma\nelem u0 = (D + b)*v0\nelem u1 = v1\n")
    out = tmp_path / "sub.lcs"
    assert run(capsys, "submodule", mod, "--gens", gens, "--out", out)[0] == 0
    assert "vector u0 even" in out.read_text()
    gens.write_text(f"elements g\nover {name}\nparams p b sigma\nelem u0 = D*v0\nelem u1 = v1\n")
    assert run(capsys, "submodule", mod, "--gens", gens)[0] == 1
