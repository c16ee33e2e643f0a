import csv
import io
import json

import pytest

from walshdecay.cli import RunConfig, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCommands:
    def test_expand(self, capsys):
        code, out, _ = run(capsys, "expand", "--b", "3", "--k", "7")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [(int(r["kappa"]), int(r["a"])) for r in rows] == [(2, 2), (1, 1)]

    def test_coeff(self, capsys):
        code, out, _ = run(capsys, "coeff", "--b", "2", "--k", "1", "--f", "bernoulli:1")
        row = next(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert float(row["re"]) == -0.25

    def test_coeff_methods_agree(self, capsys):
        vals = []
        for extra in ([], ["--method", "formula", "--n", "1"], ["--method", "higher-order", "--r", "2"],
                      ["--method", "sobolev", "--alpha", "2"]):
            _, out, _ = run(capsys, "coeff", "--b", "3", "--k", "5", "--f", "exp:1", *extra)
            row = next(csv.DictReader(io.StringIO(out)))
            vals.append(complex(float(row["re"]), float(row["im"])))
        assert max(abs(v - vals[0]) for v in vals) <= 1e-12

    def test_wal_and_wfun(self, capsys):
        code, out, _ = run(capsys, "wal", "--b", "2", "--k", "1", "--x", "0.25", "0.75")
        assert code == 0
        assert [float(r["re"]) for r in csv.DictReader(io.StringIO(out))] == [1.0, -1.0]
        code, out, _ = run(capsys, "wfun", "--b", "2", "--k", "1", "--grid", "4", "--format", "json")
        doc = json.loads(out)
        assert [r["re"] for r in doc["rows"]] == [0.0, 0.25, 0.5, 0.25]
        assert doc["rows"][0]["integral_re"] == 0.25

    def test_bernoulli_check(self, capsys):
        code, out, _ = run(capsys, "bernoulli", "--b", "3", "--r", "4", "--kmax", "27", "--check")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 26
        assert max(float(r["oracle_error"]) for r in rows) <= 1e-14

    def test_verify_bernoulli(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "bernoulli", "--b", "2", "--kmax", "1024", "--rmax", "8")
        assert code == 0
        assert json.loads(out)["pass"] is True

    def test_verify_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setenv("WALSHDECAY_RATIO_TOL", "-0.9")
        code, out, _ = run(capsys, "verify", "--theorem", "smooth", "--b", "2", "--kmax", "4")
        assert code == 1
        assert json.loads(out)["pass"] is False

    def test_decay_table_columns(self, capsys):
        code, out, _ = run(capsys, "decay-table", "--theorem", "smooth", "--b", "2", "--kmax", "8",
                           "--alpha", "2", "--f", "exp:1")
        header = out.splitlines()[0].split(",")
        assert code == 0
        assert header == ["b", "k", "v", "mu", "mu_alpha", "mu_per", "coeff_re", "coeff_im", "abs", "bound",
                          "ratio", "theorem"]
        assert len(out.splitlines()) == 9


class TestErrors:
    def test_bad_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["expand", "--b", "1", "--k", "3"])
        assert exc.value.code == 2

    def test_non_dyadic_p(self, capsys):
        code, _, err = run(capsys, "verify", "--theorem", "smooth", "--b", "3", "--p", "2")
        assert code == 2
        assert "L1 norm only" in err

    def test_bad_family(self, capsys):
        code, _, err = run(capsys, "coeff", "--b", "2", "--k", "1", "--f", "cosh:1")
        assert code == 2 and "unknown function family" in err

    def test_decay_table_needs_single_alpha(self, capsys):
        code, _, _ = run(capsys, "decay-table", "--theorem", "smooth", "--alpha", "1", "2")
        assert code == 2


class TestDeterminism:
    def test_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            run(capsys, "verify", "--theorem", "sobolev", "--b", "3", "--kmax", "27", "--f", "exp:1", "sin:1,1",
                "--workers", "3", "--out", str(p))
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_config_round_trip(self, tmp_path, capsys):
        cfg_path = tmp_path / "run.json"
        out1 = tmp_path / "one.csv"
        run(capsys, "decay-table", "--theorem", "periodic", "--b", "3", "--kmin", "1", "--kmax", "27", "--alpha", "2",
            "--f", "bernoulli:2", "--save-config", str(cfg_path), "--out", str(out1))
        cfg = RunConfig.from_json(cfg_path.read_text())
        assert cfg.theorem == "periodic" and cfg.alphas == [2]
        out2 = tmp_path / "two.csv"
        run(capsys, "decay-table", "--config", str(cfg_path), "--out", str(out2))
        assert out1.read_bytes() == out2.read_bytes()

    def test_unknown_config_key(self):
        with pytest.raises(ValueError):
            RunConfig.from_json('{"theorem": "smooth", "colour": 1}')

    def test_number_format(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert fmt(True) == "true"
        assert fmt((1, 2)) == "1;2"
