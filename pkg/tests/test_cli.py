import csv
import io
import json
import math

import numpy as np
import pytest

from quasiprob import oracles
from quasiprob.cli import ConfigError, load_config, main


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("QUASIPROB_CONFIG", raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_halfcoin_rows_and_determinism(capsys):
    code, a, _ = run(capsys, "halfcoin", "--order", "16")
    assert code == 0
    r = rows(a)
    assert r[0] == ["index", "coefficient"] and len(r) == 18
    assert float(r[1][1]) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    _, b, _ = run(capsys, "emit", "halfcoin", "--order", "16")
    assert a == b


def test_halfcoin_json(capsys):
    code, out, _ = run(capsys, "halfcoin", "--order", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["index"] == [0, 1, 2, 3, 4]
    assert sum(doc["coefficient"]) < 1


def test_feynman_json(capsys):
    code, out, _ = run(capsys, "feynman", "--format", "json")
    doc = json.loads(out)
    assert doc["state"] == [1, 2, 3]
    assert doc["probability"] == pytest.approx([0.09, 0.78, 0.13], abs=1e-15)


def test_verify_suite_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "quasibayes")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    feyn = next(r for r in recs if r["check"] == "feynman_marginals")
    assert feyn["pass"] is True
    assert set(feyn) == {"check", "lhs", "rhs", "abs_err", "tol", "pass"}


def test_verify_tight_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mixtures", "--tol", "1e-15")
    assert code == 1
    assert any(not json.loads(line)["pass"] for line in out.splitlines())


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "--suite", "nope"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    assert run(capsys, "dual", "--family", "cauchy")[0] == 2
    assert run(capsys, "linnik", "--alpha", "3")[0] == 2
    assert run(capsys, "halfcoin", "--tol", "-1")[0] == 2
    assert run(capsys, "wigner", "--state", "coherent")[0] == 2


def test_config_file_and_precedence(capsys, isolated):
    (isolated / "quasiprob.json").write_text(json.dumps({"series_order": 5}))
    assert load_config()["series_order"] == 5
    _, out, _ = run(capsys, "halfcoin")
    assert len(rows(out)) == 7
    _, out, _ = run(capsys, "halfcoin", "--order", "3")
    assert len(rows(out)) == 5


def test_config_env_and_explicit(capsys, isolated, monkeypatch):
    other = isolated / "other.json"
    other.write_text(json.dumps({"series_order": 2, "mass_tol": 1e-6}))
    monkeypatch.setenv("QUASIPROB_CONFIG", str(other))
    assert load_config()["mass_tol"] == 1e-6
    _, out, _ = run(capsys, "halfcoin")
    assert len(rows(out)) == 4
    monkeypatch.setenv("QUASIPROB_CONFIG", str(isolated / "missing.json"))
    assert run(capsys, "halfcoin")[0] == 2
    monkeypatch.delenv("QUASIPROB_CONFIG")
    assert run(capsys, "halfcoin", "--config", "missing.json")[0] == 2


@pytest.mark.parametrize("doc", [{"bogus": 1}, {"grid_points": 0}, {"series_order": 2.5},
                                 {"mass_tol": -1}, [1, 2]])
def test_bad_config_exits_2(capsys, isolated, doc):
    (isolated / "quasiprob.json").write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_config()
    code, _, err = run(capsys, "halfcoin")
    assert code == 2 and "quasiprob:" in err


def test_out_file_and_unwritable(capsys, isolated):
    assert run(capsys, "feynman", "--out", "f.csv")[0] == 0
    assert rows((isolated / "f.csv").read_text())[1][0] == "1"
    assert run(capsys, "feynman", "--out", str(isolated / "no" / "dir" / "f.csv"))[0] == 2


def test_dual_laplace_is_cauchy(capsys):
    code, out, _ = run(capsys, "dual", "--family", "laplace", "--format", "json")
    doc = json.loads(out)
    x, v = np.array(doc["abscissa"]), np.array(doc["value"])
    assert code == 0 and np.abs(x).max() <= 8.0
    assert np.max(np.abs(v - oracles.cauchy_density(x))) < 1e-6


def test_wigner_hermite1_negative(capsys):
    code, out, _ = run(capsys, "wigner", "--state", "hermite1", "--grid", "256")
    r = rows(out)
    assert code == 0 and r[0][0] == "x\\p" and len(r) == 257
    vals = np.array([[float(c) for c in row[1:]] for row in r[1:]])
    assert vals.min() == pytest.approx(-1 / math.pi, abs=1e-8)


def test_linnik_and_diffusion(capsys):
    code, out, _ = run(capsys, "linnik", "--alpha", "2", "--grid", "41", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    x = np.array(doc["abscissa"])
    assert np.allclose(doc["value"], oracles.laplace_density(x), atol=1e-7)
    code, out, _ = run(capsys, "diffusion", "--init", "sine", "--t", "1", "--grid", "5")
    got = np.array([[float(c) for c in row] for row in rows(out)[1:]])
    assert np.allclose(got[:, 1], np.sin(got[:, 0]) * math.exp(-1.0), atol=1e-15)
    assert run(capsys, "diffusion", "--t", "-1")[0] == 2


@pytest.mark.parametrize("fn,code", [("exp", 0), ("exp_sqrt", 0), ("rational", 0), ("laplace", 0),
                                     ("gaussian", 1), ("quartic", 1), ("nope", 2)])
def test_cmtest(capsys, fn, code):
    got, out, _ = run(capsys, "cmtest", "--fn", fn, "--order", "8")
    assert got == code
    if code < 2:
        doc = json.loads(out)
        assert doc["pass"] is (code == 0)
        if code:
            assert doc["first_violation"]["difference_order"] == 2


def test_dual_from_file(capsys, isolated):
    from quasiprob.core import GridDensity, uniform_grid

    x = uniform_grid(40.0, 40001)
    GridDensity(x, oracles.laplace_density(x)).to_csv(isolated / "p.csv")
    assert run(capsys, "dual", "--in", "p.csv", "--out", "phat.csv")[0] == 0
    r = rows((isolated / "phat.csv").read_text())
    assert r[0] == ["abscissa", "value"]
    d = np.array(r[1:], dtype=float)
    sel = np.abs(d[:, 0]) <= 8
    assert np.max(np.abs(d[sel, 1] - oracles.cauchy_density(d[sel, 0]))) < 1e-6
    (isolated / "bad.csv").write_text("abscissa,value\n0,1\n1,0.5\n3,0.1\n")
    assert run(capsys, "dual", "--in", "bad.csv")[0] == 2
    assert run(capsys, "dual", "--in", "missing.csv")[0] == 2
