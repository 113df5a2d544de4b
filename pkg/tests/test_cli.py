import json
import subprocess
import sys
from importlib import resources

import pytest

from mipcert.cli import RunConfig, main, parse_config, run
from mipcert.gf2 import Gf2Matrix
from mipcert.mipverify import IsoCertificate

DATA = resources.files("mipcert") / "data"


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_success(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3", "--seed", "17")
    report = json.loads(out)
    assert code == 0
    assert report["schema"] == "mip-report/1"
    assert report["seed"] == 17 and report["ok"] and report["failed"] == []
    assert all(s["status"] == "verified" for s in report["steps"])
    cert = next(s for s in report["steps"] if s["name"] == "certificate")
    assert cert["witness"]["multiplicative"]["mode"] == "exhaustive"


def test_verify_output_deterministic(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        assert invoke(capsys, "verify", "--n", "4", "--m", "3", "--out", str(tmp_path / name))[0] == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_verify_sampled_override(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3", "--exhaustive-mult", "false", "--timings")
    report = json.loads(out)
    cert = next(s for s in report["steps"] if s["name"] == "certificate")
    assert code == 0
    assert cert["witness"]["multiplicative"]["mode"] == "sampled"
    assert cert["witness"]["multiplicative"]["pairs"] >= 10_000
    assert "seconds" in cert


@pytest.mark.parametrize("argv", [
    ["verify", "--n", "3", "--m", "3"],
    ["verify", "--n", "4", "--m", "2"],
    ["verify", "--n", "4"],
    ["certify", "--n", "4", "--m", "3", "--exhaustive-mult", "maybe"],
    ["verify", "--n", "4", "--m", "3", "--seed", "-1"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_verify_sabotaged_ytilde(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3", "--ytilde", "b(a+b+ab)")
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    assert "relation.z_conj_y" in report["failed"]


def test_verify_ytilde_replaced_by_b(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3", "--ytilde", "b")
    report = json.loads(out)
    assert code == 1 and "certificate" in report["failed"]


def test_verify_corrupt_g_presentation(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3",
                          "--g-presentation", str(DATA / "G_4_3_broken.pres"))
    report = json.loads(out)
    assert code == 1
    groups = report["steps"][0]
    assert groups["name"] == "groups" and groups["status"] == "failed"
    assert groups["witness"]["G"]["failures"]


def test_verify_text_format(capsys):
    code, out, _ = invoke(capsys, "verify", "--n", "4", "--m", "3", "--format", "text")
    assert code == 0
    assert out.splitlines()[0].startswith("G(4,3) vs H(4,3)")
    assert out.strip().endswith("all steps verified")


def test_certify_and_check(capsys, tmp_path):
    path = tmp_path / "cert.txt"
    code, out, _ = invoke(capsys, "certify", "--n", "4", "--m", "3", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("mipcert v1 n=4 m=3 order=512\n")
    code, out, _ = invoke(capsys, "check-cert", str(path))
    assert code == 0 and json.loads(out)["ok"]

    cert = IsoCertificate.from_text(path.read_text())
    bits = cert.matrix.to_bits()
    bits[3, 9] ^= True
    tampered = tmp_path / "tampered.txt"
    tampered.write_text(IsoCertificate(4, 3, Gf2Matrix.from_bits(bits)).to_text())
    code, out, _ = invoke(capsys, "check-cert", str(tampered), "--format", "text")
    assert code == 1 and "REJECTED" in out

    stale = tmp_path / "stale.txt"
    lines = path.read_text().splitlines()
    row = lines[3]
    lines[3] = ("1" if row[0] == "0" else "0") + row[1:]
    stale.write_text("\n".join(lines) + "\n")
    code, out, _ = invoke(capsys, "check-cert", str(stale))
    assert code == 1 and "checksum" in json.loads(out)["reasons"][0]


def test_certify_to_stdout(capsys):
    code, out, _ = invoke(capsys, "certify", "--n", "4", "--m", "3")
    assert code == 0 and out.startswith("mipcert v1")


def test_check_cert_missing_file(capsys, tmp_path):
    code, _, err = invoke(capsys, "check-cert", str(tmp_path / "nope.txt"))
    assert code == 1 and "nope.txt" in err


def test_groups(capsys):
    code, out, _ = invoke(capsys, "groups", "--n", "4", "--m", "3")
    d = json.loads(out)
    assert code == 0
    assert d["nonisomorphism"]["witness"]["exponent_G"] == 16
    assert d["nonisomorphism"]["witness"]["exponent_H"] == 8
    assert d["G"]["center_dim"] == d["G"]["class_count"] == 224


def test_groups_presentation_file(capsys):
    code, out, _ = invoke(capsys, "groups", "--presentation", str(DATA / "H_4_3.pres"))
    assert code == 0 and json.loads(out)["fingerprint"]["order"] == 512
    code, _, err = invoke(capsys, "groups", "--presentation", str(DATA / "G_4_3_broken.pres"))
    assert code == 1 and "inconsistent presentation" in err


def test_jennings(capsys):
    code, out, _ = invoke(capsys, "jennings", "--n", "4", "--m", "3")
    d = json.loads(out)
    assert code == 0
    assert d["G"]["quotient_dims"] == d["H"]["quotient_dims"]
    assert d["G"]["nilpotency_index"] == 28
    assert d["H"]["dimension_subgroup_orders"][:2] == [512, 128]


def test_eval(capsys):
    code, out, _ = invoke(capsys, "eval", "--n", "4", "--m", "3", "b(a+b+ab)c", "--format", "text")
    assert code == 0 and out.strip() == "b^2*c + a*b*c^2 + a*b^2*c^2"
    code, out, _ = invoke(capsys, "eval", "--n", "4", "--m", "3", "--group", "G", "x+x")
    assert code == 0 and json.loads(out)["support"] == []
    code, _, err = invoke(capsys, "eval", "--n", "4", "--m", "3", "a+q")
    assert code == 1 and "column 3" in err


def test_oracle_self(capsys):
    code, out, _ = invoke(capsys, "oracle-iso", "--n", "4", "--m", "3", "--self")
    d = json.loads(out)
    assert code == 0 and not d["exhausted"] and d["isomorphism"] == ["x", "y"]


def test_oracle_too_large(capsys):
    code, _, err = invoke(capsys, "oracle-iso", "--n", "5", "--m", "4")
    assert code == 2 and "limit" in err


def test_run_config_direct(capsys):
    cfg = parse_config(["eval", "--n", "4", "--m", "3", "1+a"])
    assert isinstance(cfg, RunConfig) and cfg.expr == "1+a" and cfg.seed == 0
    assert run(cfg) == 0
    assert json.loads(capsys.readouterr().out)["support"] == ["1", "a"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mipcert", "eval", "--n", "4", "--m", "3", "a+a", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "0"
