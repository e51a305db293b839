import csv
import json
import math

import numpy as np
import pytest

from cosserat_soliton import cli
from cosserat_soliton.params import fixture, fixture_path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def write_params(tmp_path, **changes):
    data = fixture("type_a").to_dict()
    data.update(changes)
    path = tmp_path / "params.json"
    path.write_text(json.dumps(data))
    return path


def test_derive_type_c(capsys):
    code, out, _ = run(capsys, "derive", "--params", fixture_path("type_c"))
    assert code == 0
    rep = json.loads(out)
    assert rep["derived"]["roots"]["v4"] == pytest.approx(4.47214, abs=1e-5)
    assert rep["derived"]["roots"]["v3"] == pytest.approx(3.51188, abs=1e-5)
    assert rep["config"]["params"].endswith("type_c.json")
    assert set(rep["params"]) == set(fixture("type_c").to_dict())


def test_derive_type_d_and_mu_c_zero(capsys):
    _, out, _ = run(capsys, "derive", "--params", fixture_path("type_d"))
    roots = json.loads(out)["derived"]["roots"]
    for key in ("v3", "v4"):
        assert roots[key] == pytest.approx(4.47214, abs=1e-5)
    _, out, _ = run(capsys, "derive", "--params", fixture_path("mu_c_zero"))
    assert json.loads(out)["derived"]["v0"] == "infinity"


def test_derive_writes_out_file(capsys, tmp_path):
    out_file = tmp_path / "d.json"
    code, out, _ = run(capsys, "derive", "--params", fixture_path("type_a"), "--out", out_file)
    assert code == 0 and out_file.read_text() == out


@pytest.mark.parametrize("change,needle", [({"mu": -1.0}, "mu > 0"),
                                           ({"rho": 0.0}, "rho > 0"),
                                           ({"mu_c": -0.1}, "mu_c >= 0")])
def test_invalid_params_exit_2(capsys, tmp_path, change, needle):
    code, _, err = run(capsys, "derive", "--params", write_params(tmp_path, **change))
    assert code == 2 and needle in err


def test_missing_key_and_bad_json(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"mu": 1.0}))
    code, _, err = run(capsys, "classify", "--params", path)
    assert code == 2 and "missing keys" in err
    path.write_text("{not json")
    code, _, _ = run(capsys, "classify", "--params", path)
    assert code == 2


def test_dispersion_sweep(capsys, tmp_path):
    out = tmp_path / "k.csv"
    code, _, _ = run(capsys, "dispersion", "--params", fixture_path("type_a"),
                     "--v-min", 0, "--v-max", 8, "--steps", 801, "--out", out)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 801
    assert list(rows[0]) == ["v", "k", "b", "m2_plus_b", "defined"]
    v = np.array([float(r["v"]) for r in rows])
    k = np.array([float(r["k"]) if r["k"] else np.nan for r in rows])
    v0 = 7.30297
    near = np.argmin(np.abs(v - v0))
    assert k[near] == pytest.approx(0.0, abs=0.1)
    assert np.nanargmin(np.abs(k[v > 6])) + np.sum(v <= 6) == near
    v3, v4 = 3.1846, 4.7176
    inside = [r for r in rows if v3 + 1e-3 < float(r["v"]) < v4 - 1e-3]
    assert inside and all(r["defined"] == "0" and r["k"] == "" for r in inside)


def test_dispersion_minimal_and_bad_range(capsys, tmp_path):
    out = tmp_path / "k.csv"
    code, _, _ = run(capsys, "dispersion", "--params", fixture_path("type_a"),
                     "--v-min", 0, "--v-max", 1, "--steps", 2, "--out", out)
    assert code == 0
    assert len(out.read_text().splitlines()) == 3
    code, _, _ = run(capsys, "dispersion", "--params", fixture_path("type_a"),
                     "--v-min", 2, "--v-max", 1, "--steps", 5, "--out", out)
    assert code == 2


@pytest.mark.parametrize("name,regime", [("type_a", "a"), ("type_c", "c"), ("type_d", "d")])
def test_classify(capsys, name, regime):
    code, out, _ = run(capsys, "classify", "--params", fixture_path(name))
    assert code == 0 and json.loads(out)["regime"] == regime


def test_soliton_exact(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "soliton", "--params", fixture_path("type_a"), "--v", 0.1,
                          "--z-min", -30, "--z-max", 30, "--n", 601, "--out", out)
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["z", "phi", "psi", "phi_z", "psi_z", "branch", "psi_closed",
                             "psi_closed_defined"]
    assert float(rows[0]["phi"]) == pytest.approx(0.0, abs=1e-6)
    assert float(rows[-1]["phi"]) == pytest.approx(2 * math.pi, abs=1e-6)
    assert all(r["psi_closed"] == "" and r["psi_closed_defined"] == "0" for r in rows)
    assert "b =" in json.loads(stdout)["psi_closed_form"]["reason"]


def test_soliton_branch_form_crosses_at_switch(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "soliton", "--params", fixture_path("type_a"), "--v", 0.1,
                          "--form", "paper", "--t", 7.0, "--n", 2001, "--out", out)
    assert code == 0
    sol = json.loads(stdout)["solution"]
    assert sol["switch_point"] == pytest.approx(math.log(4) / (2 * sol["k"]) + 0.7, rel=1e-14)
    rows = read_csv(out)
    branch = np.array([int(r["branch"]) for r in rows])
    z = np.array([float(r["z"]) for r in rows])
    assert set(branch) == {1, -1}
    switch = np.nonzero(np.diff(branch))[0][0]
    assert z[switch] <= sol["switch_point"] <= z[switch + 1]


def test_soliton_linearised_matches_exact_in_limit(capsys, tmp_path):
    params = write_params(tmp_path, **{"lambda": 1e-12, "mu": 1e-12})
    cols = {}
    for form in ("exact", "linearised"):
        out = tmp_path / f"{form}.csv"
        code, _, _ = run(capsys, "soliton", "--params", params, "--v", 3.0, "--form", form,
                         "--out", out)
        assert code == 0
        cols[form] = read_csv(out)
    for a, b in zip(cols["exact"], cols["linearised"]):
        for key in ("phi", "psi", "phi_z", "psi_z"):
            assert float(a[key]) == pytest.approx(float(b[key]), abs=1e-10)


def test_soliton_forbidden_speed_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "soliton", "--params", fixture_path("type_a"), "--v", 4.0,
                       "--out", tmp_path / "s.csv")
    assert code == 3 and "forbidden interval (3.18" in err


def test_simulate_zero_duration(capsys, tmp_path):
    code, stdout, _ = run(capsys, "simulate", "--params", fixture_path("type_a"), "--v", 0.1,
                          "--n", 512, "--t-end", 0, "--out-dir", tmp_path)
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["fields_0.csv", "metrics.json"]
    text = (tmp_path / "fields_0.csv").read_text().splitlines()
    assert text[0] == "# t=0" and text[1] == "z,phi,psi,phi_t,psi_t"
    assert json.loads(stdout)["config"]["t_end"] == 0.0


def test_simulate_short_run(capsys, tmp_path):
    code, stdout, _ = run(capsys, "simulate", "--params", fixture_path("type_a"), "--v", 0.1,
                          "--n", 1024, "--t-end", 2, "--snapshots", 3, "--out-dir", tmp_path)
    assert code == 0
    rep = json.loads(stdout)
    assert len(rep["outputs"]) == 4
    assert abs(rep["metrics"]["measured_speed"] - 0.1) / 0.1 < 0.01
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert metrics == rep["metrics"]


def test_simulate_unstable_exit_4(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--params", fixture_path("type_a"), "--v", 0.1,
                       "--n", 512, "--dt", 0.5, "--out-dir", tmp_path)
    assert code == 4 and "step" in err


def test_verify_suite_passes_and_is_stable(capsys):
    code, first, _ = run(capsys, "verify", "--suite", "tensor")
    assert code == 0
    _, second, _ = run(capsys, "verify", "--suite", "tensor")
    assert first == second
    rep = json.loads(first)
    assert rep["passed"] and rep["config"]["suite"] == "tensor"
    assert any(f["id"] == "curl_ramp_sign" for f in rep["findings"])


def test_verify_tampered_tolerance_exit_1(capsys, tmp_path):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"tensor.polar_roundtrip": 0.0}))
    code, out, _ = run(capsys, "verify", "--suite", "tensor", "--tolerances", tol)
    assert code == 1
    assert json.loads(out)["failed"] == ["tensor.polar_roundtrip"]


def test_verify_unknown_tolerance_exit_2(capsys, tmp_path):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"no.such.check": 1.0}))
    code, _, err = run(capsys, "verify", "--suite", "tensor", "--tolerances", tol)
    assert code == 2 and "no.such.check" in err


def test_soliton_findings_include_sign_note(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "soliton")
    assert code == 0
    ids = {f["id"] for f in json.loads(out)["findings"]}
    assert "klein_gordon_sign" in ids


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 2.0**-40, 123456.789, -7.0):
        assert float(cli.fmt(x)) == x
    assert cli.fmt(None) == ""
    assert cli.fmt(True) == "1"


def test_usage_errors(capsys):
    assert cli.main([]) == 2
    assert cli.main(["nope"]) == 2
    capsys.readouterr()
