import json
from fractions import Fraction as F

import pytest

from interpolab.cli import main
from interpolab.separability import separability_1d
from interpolab.store import CertificateStore, canonical_json, verify_artifact, verify_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_separate_prints_and_stores(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("INTERPOLAB_STORE", str(tmp_path / "store"))
    out = tmp_path / "sep.json"
    code, text = run(capsys, "separate", "--A", "4,16", "--B", "2,8", "--eps", "1/4", "--out", str(out), "--store")
    assert code == 0 and "achieved=1/3" in text
    data = json.loads(out.read_text())
    assert data["alpha"] == ["1/6"] and data["config"]["eps"] == "1/4"
    stored = CertificateStore().entries()
    assert len(stored) == 1 and CertificateStore().load(stored[0]) == data
    meta = json.loads(stored[0].with_suffix(".meta.json").read_text())
    assert "stored_at" in meta and "stored_at" not in data


def test_require_certificate_exit_codes(capsys):
    assert run(capsys, "separate", "--A", "1,2,3", "--B", "4", "--eps", "1/3", "--require-certificate")[0] == 1
    assert run(capsys, "separate", "--A", "1,2,3", "--B", "4", "--eps", "1/3")[0] == 0


@pytest.mark.parametrize("argv", [
    ["separate", "--A", "1", "--B", "2", "--eps", "0.3"],
    ["separate", "--A", "1,2", "--B", "2", "--eps", "1/4"],
    ["separate", "--A", "1", "--B", "2", "--eps", "3/4"],
    ["orbit", "--n-max", "0"],
    ["riesz", "--delta", "1/8"],
    ["nosuchcommand"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_orbit_csv(tmp_path, capsys):
    csv = tmp_path / "orbit.csv"
    code, _ = run(capsys, "orbit", "--n-max", "64", "--csv", str(csv))
    lines = csv.read_text().splitlines()
    assert code == 0 and lines[0] == "n,value,verdict"
    assert len(lines) == 65 and all(line.endswith(",outside") for line in lines[1:])


def test_riesz_table(capsys):
    code, text = run(capsys, "riesz", "--n-max", "10")
    rows = [line.split(",") for line in text.splitlines() if line[:1].isdigit()]
    assert code == 0 and len(rows) == 10
    assert all(F(r[3]) >= F(1, 4) for r in rows)


def test_interpolate_eval_verify(tmp_path, capsys):
    path = tmp_path / "psi.json"
    assert run(capsys, "interpolate", "--E", "2,4,8,16", "--b", "1/2,0,1/2,0", "--K", "1", "--out", str(path))[0] == 0
    code, text = run(capsys, "eval", "--interpolant", str(path), "--n", "2,4,8,16")
    assert code == 0 and [line.split(",")[1] for line in text.split()] == ["1/2", "0/1", "1/2", "0/1"]
    assert run(capsys, "verify", str(path))[0] == 0


def test_interpolate_separation_failure(capsys):
    argv = ["interpolate", "--E", "1,2,3,4", "--b", "0,1/2,1/2,1/2", "--K", "1", "--eps-floor", "1/3", "--nd-dim", "1"]
    assert main(argv) == 1


def test_tampered_certificate_fails_verify(tmp_path, capsys):
    path = tmp_path / "sep.json"
    run(capsys, "separate", "--A", "4,16", "--B", "2,8", "--eps", "1/4", "--out", str(path))
    data = json.loads(path.read_text())
    data["achieved"] = "2/5"
    path.write_text(json.dumps(data))
    assert run(capsys, "verify", str(path))[0] == 1
    assert not verify_path(path).ok


def test_witness_round_trip(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert run(capsys, "construct-2step", "--ell", "1/10", "--N", "3", "--out", str(path))[0] == 0
    assert verify_path(path).ok
    data = json.loads(path.read_text())
    data["alpha"] = "1/3"
    assert not verify_artifact(data).ok


def test_foreign_schema(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"schema": "someone-else@9"}))
    assert main(["verify", str(path)]) == 2
    with pytest.raises(ValueError):
        verify_artifact({"no": "schema"})
    assert main(["verify", str(tmp_path / "missing.json")]) == 2


def test_malformed_artifact_is_a_failure():
    data = separability_1d([1], [2], F(1, 4)).to_json()
    del data["alpha"]
    assert not verify_artifact(data).ok


def test_artifacts_are_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"p{k}.json"
        run(capsys, "partition", "--R", "1..200", "--schedule", "1,1/2,1/3", "--out", str(p))
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert "config" in data and canonical_json(data).encode() == outs[0]
    assert verify_path(tmp_path / "p0.json").ok


@pytest.mark.parametrize("argv, needle", [
    (["gen", "--family", "power", "-N", "4"], "2 4 8 16"),
    (["recur", "--R", "2..40", "--eps", "1/10"], "N=19"),
    (["nice-count", "--F", "1,2,4,8", "--eps", "1/4"], "1536"),
])
def test_summaries(capsys, argv, needle):
    code, text = run(capsys, *argv)
    assert code == 0 and needle in text


def test_recur_not_reached_exit(capsys):
    assert main(["recur", "--R", "2,4,8,16,32", "--eps", "1/5", "--require-threshold"]) == 1


def test_int_list_from_file(tmp_path, capsys):
    f = tmp_path / "E.json"
    f.write_text(json.dumps({"elements": ["1", "2"], "tag": ""}))
    code, text = run(capsys, "separate", "--A", f"@{f}", "--B", "5", "--eps", "1/4")
    assert code == 0 and "certificate" in text


def test_acceptance_subcommand(capsys):
    code, text = run(capsys, "acceptance", "--only", "1,4")
    assert code == 0 and text.count("PASS") == 2
