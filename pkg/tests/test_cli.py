import io
import subprocess
import sys

import pytest

from amalgam.cli import run_command
from amalgam.instances import spec_text


def run(argv):
    out = io.StringIO()
    code = run_command(argv, out)
    return code, out.getvalue()


def test_normalize_identity():
    code, out = run(["normalize", "--instance", "z4_z2_z6", "--word", "a(2)*c(3)"])
    assert code == 0
    assert out.strip() == "NF head=e syllables=[]"


def test_mul_and_inv():
    code, out = run(["mul", "--instance", "z_2z_z", "--left", "a(1)", "--right", "a(1)"])
    assert code == 0 and out.strip() == "NF head=1 syllables=[]"
    code, out = run(["inv", "--instance", "z_2z_z", "--word", "a(1)*c(1)"])
    assert code == 0 and out.strip() == "NF head=-2 syllables=[c:1,a:1]"  # b central, c(-1) = b^-1 c(1)


def test_check_eq21_header():
    code, out = run(["check", "eq21", "--instance", "z4_z2_z6"])
    assert code == 0
    assert out.splitlines()[0] == "CHECK eq21 PASS window=10"
    assert out.splitlines()[1].startswith("  EVIDENCE")


def test_check_open_exit_codes():
    assert run(["check", "open", "--instance", "z_2z_z", "--set", "side(a)"])[0] == 0
    assert run(["check", "open", "--instance", "z_2z_z", "--set", "{e}"])[0] == 1
    assert run(["check", "open", "--instance", "z_2z_z", "--set", "~({e})"])[0] == 2
    code, out = run(["check", "open", "--instance", "z_2z_z", "--set", "{e}", "--lift"])
    assert code == 1 and "NOTOPEN" in out


def test_hypothesis_not_met_is_unknown_exit():
    code, out = run(["check", "embedding", "--instance", "z_free_z"])
    assert code == 2
    assert out.startswith("CHECK embedding HYPOTHESIS_NOT_MET")


def test_usage_errors_exit_3(capsys):
    assert run([])[0] == 3
    assert run(["check", "nope", "--instance", "z_2z_z"])[0] == 3
    assert run(["normalize", "--instance", "z_2z_z", "--word", "a(1"])[0] == 3
    assert run(["check", "open", "--instance", "z_2z_z", "--set", "side(a)", "--len", "0"])[0] == 3


def test_spec_errors_exit_3(tmp_path, capsys):
    bad = spec_text("z4_z2_z6").replace("images = 0, 2", "images = 0, 1", 1)
    p = tmp_path / "bad.spec"
    p.write_text(bad)
    assert run(["normalize", "--spec", str(p), "--word", "e"])[0] == 3
    err = capsys.readouterr().err
    assert err.startswith("ERROR InvariantViolation line=")


def test_extend_hom():
    code, out = run(["extend-hom", "--instance", "z4_z2_z6", "--pair", "mod2_triv",
                     "--word", "a(1)*c(1)*a(1)", "--samples", "50"])
    assert code == 0
    assert out.splitlines()[-1].endswith("value=0")
    code, out = run(["extend-hom", "--instance", "z4_z2_z6", "--pair", "mod2_mod2"])
    assert code == 1 and "WITNESS b=1" in out


def test_seed_is_reproducible(monkeypatch):
    monkeypatch.setenv("AMALGAM_SEED", "7")
    a = run(["extend-hom", "--instance", "z_2z_z", "--pair", "parity", "--samples", "20"])
    b = run(["extend-hom", "--instance", "z_2z_z", "--pair", "parity", "--samples", "20"])
    assert a == b and "seed=7" in a[1]


@pytest.mark.parametrize("key,code", [("z4_z2_z6", 2), ("z2_free_z3", 0)])
def test_report_all(key, code):
    got, out = run(["report", "--all", "--instance", key])
    assert got == code
    names = [line.split()[1] for line in out.splitlines() if line.startswith("CHECK")]
    assert names == sorted(names)
    assert {"eq21", "lemma26", "prop29", "thm25"} <= set(names)


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "amalgam.cli", "normalize", "--instance",
                          "z4_z2_z6", "--word", "a(1)*c(1)*c(5)"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "NF head=e syllables=[a:1]"
