import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quatsp import cli, io


@pytest.fixture
def ref_csv():
    return str(io.fixture_path())


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, io.REPORT_SCHEMA)
    return doc


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestSignalFiles:
    @settings(max_examples=50)
    @given(arrays(np.float64, st.tuples(st.integers(1, 6), st.just(4)),
                  elements=st.floats(allow_nan=False, allow_infinity=False)))
    def test_roundtrip_exact(self, q):
        parsed = io.parse_signal(io.format_signal(q))
        np.testing.assert_array_equal(parsed.q, q)
        np.testing.assert_array_equal(parsed.n, np.arange(q.shape[0]))

    def test_fixture(self):
        sig = io.read_signal(io.fixture_path())
        np.testing.assert_array_equal(sig.q[0], [-1, -10, 1, -1])
        assert len(sig) == 3
        assert len(sig.digest) == 64

    @pytest.mark.parametrize("text", [
        "",
        "n,r,i,j,k\n",
        "n,r,i,j\n0,1,2,3\n",
        "n,r,i,j,k\n0,1,2,3\n",
        "n,r,i,j,k\n0,1,2,3,x\n",
        "n,r,i,j,k\n0,1,2,3,nan\n",
        "n,r,i,j,k\n1,1,2,3,4\n1,1,2,3,4\n",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(io.SignalFormatError):
            io.parse_signal(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(io.SignalFormatError):
            io.read_signal(tmp_path / "absent.csv")

    def test_report_floats_roundtrip(self):
        x = 0.1 + 0.2
        doc = io.build_report("rotate", {}, {"x": x, "q": [[1.0, 2.0, 3.0, 1 / 3]]}, {"r": 1e-300}, None)
        back = json.loads(io.dumps_report(doc))
        assert back["results"]["x"] == x
        assert back["results"]["q"][0][3] == 1 / 3

    def test_report_schema_rejects(self):
        with pytest.raises(jsonschema.ValidationError):
            io.build_report("plot", {}, {}, {}, None)
        with pytest.raises(ValueError):
            io.dumps_report({"x": math.inf})


class TestStatsCommands:
    def test_autocorr_c(self, ref_csv, capsys):
        doc = report(["autocorr", ref_csv, "--kind", "c"], capsys)
        lag0 = doc["results"]["lags"].index(0)
        np.testing.assert_allclose(doc["results"]["sequences"]["c"][lag0], [73, 0, 0, 0], atol=1e-12)

    def test_autocorr_pure_p(self, ref_csv, capsys):
        doc = report(["autocorr", ref_csv, "--kind", "p", "--pure"], capsys)
        lag0 = doc["results"]["lags"].index(0)
        np.testing.assert_allclose(doc["results"]["sequences"]["p"][lag0], [-66, 0, 0, 0], atol=1e-12)

    def test_autocorr_all_dependency(self, ref_csv, capsys):
        doc = report(["autocorr", ref_csv, "--kind", "all", "--lags", "1"], capsys)
        assert doc["results"]["lags"] == [-1, 0, 1]
        assert doc["residuals"]["dependency"] < 1e-12
        assert set(doc["results"]["sequences"]) == {"c", "i", "j", "k", "p"}

    def test_autocorr_table_with_out(self, ref_csv, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, stdout, _ = run(["autocorr", ref_csv, "--out", str(out)], capsys)
        assert code == 0
        assert "73" in stdout
        jsonschema.validate(json.loads(out.read_text()), io.REPORT_SCHEMA)

    def test_empty_file(self, tmp_path, capsys):
        code, _, err = run(["autocorr", write(tmp_path, "e.csv", "")], capsys)
        assert code == 2
        assert "empty" in err

    def test_bad_flag(self, ref_csv, capsys):
        assert run(["autocorr", ref_csv, "--kind", "x"], capsys)[0] == 3
        assert run(["autocorr", ref_csv, "--lags", "7"], capsys)[0] == 3
        assert run(["nosuch"], capsys)[0] == 3

    def test_matrices(self, ref_csv, capsys):
        doc = report(["matrices", ref_csv, "--L", "2"], capsys)
        assert np.array(doc["results"]["R_c"]).shape == (3, 3, 4)
        assert max(doc["residuals"].values()) < 1e-12

    def test_duality(self, ref_csv, capsys):
        doc = report(["duality", ref_csv], capsys)
        rr = np.array(doc["results"]["R_rr"])
        np.testing.assert_allclose(np.diag(rr), [7.0, 7.0, 7.0], atol=0.01)
        assert doc["residuals"]["max_deviation_from_direct"] < 1e-12

    @pytest.mark.parametrize("eta", ["i", "j", "k"])
    def test_takagi(self, ref_csv, capsys, eta):
        doc = report(["takagi", ref_csv, "--eta", eta], capsys)
        assert doc["residuals"]["reconstruction"] < 1e-8
        assert doc["residuals"]["unitarity"] < 1e-10

    def test_takagi_L_too_large(self, ref_csv, capsys):
        assert run(["takagi", ref_csv, "--L", "3"], capsys)[0] == 3

    def test_takagi_degenerate(self, tmp_path, capsys):
        # this R_ȷ has two equal singular values
        path = write(tmp_path, "d.csv", "n,r,i,j,k\n0,0,0,0,0\n1,1,0,0,0\n2,0,1,0,0\n")
        code, _, err = run(["takagi", path, "--L", "1", "--eta", "j"], capsys)
        assert code == 4
        assert "degenerate" in err

    def test_deterministic_bytes(self, ref_csv, tmp_path, capsys):
        outs = []
        for idx in range(2):
            path = tmp_path / f"{idx}.json"
            assert cli.main(["takagi", ref_csv, "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]


class TestFilterCommands:
    def test_qlms_fixture(self, capsys, tmp_path):
        trace = tmp_path / "t.csv"
        doc = report(["qlms", str(io.fixture_path("wl_input.csv")), "--target",
                      str(io.fixture_path("wl_target.csv")), "--taps", "2", "--gain", "0.05",
                      "--trace", str(trace)], capsys)
        assert doc["results"]["final_window_mse"] < 1e-6
        truth = io.read_signal(io.fixture_path("wl_weights.csv")).q
        np.testing.assert_allclose(doc["results"]["weights"], truth, atol=1e-3)
        assert trace.read_text().splitlines()[0] == "n,err_sq"

    def test_gain_zero(self, capsys):
        doc = report(["qlms", str(io.fixture_path("wl_input.csv")), "--target",
                      str(io.fixture_path("wl_target.csv")), "--taps", "2", "--gain", "0"], capsys)
        np.testing.assert_array_equal(doc["results"]["weights"], 0.0)
        target = io.read_signal(io.fixture_path("wl_target.csv")).q
        power = np.sum(target ** 2, axis=1)
        np.testing.assert_allclose(np.mean(doc["results"]["squared_errors"]), power.mean(), rtol=1e-12)
        np.testing.assert_allclose(doc["residuals"]["target_power"], power.mean(), rtol=1e-12)

    def test_row_mismatch(self, ref_csv, tmp_path, capsys):
        target = write(tmp_path, "t.csv", "n,r,i,j,k\n0,1,0,0,0\n")
        assert run(["qlms", ref_csv, "--target", target], capsys)[0] == 2

    def test_divergence(self, ref_csv, tmp_path, capsys):
        x = 3.0 * np.random.default_rng(0).normal(size=(300, 4))
        path = tmp_path / "x.csv"
        io.write_signal(path, x)
        assert run(["qlms", str(path), "--target", str(path), "--taps", "2", "--gain", "5"], capsys)[0] == 5

    def test_nlqlms_runs(self, ref_csv, capsys):
        doc = report(["nlqlms", ref_csv, "--target", ref_csv, "--gain", "0.001"], capsys)
        assert doc["command"] == "nlqlms"
        assert doc["parameters"]["activation"] == "tanh"

    def test_bad_taps(self, ref_csv, capsys):
        assert run(["qlms", ref_csv, "--target", ref_csv, "--taps", "0"], capsys)[0] == 3
        assert run(["qlms", ref_csv], capsys)[0] == 3


class TestGradcheckCommand:
    @pytest.mark.parametrize("name", ["norm_sq", "square"])
    def test_passes(self, name, capsys):
        doc = report(["gradcheck", "--function", name, "--trials", "1000"], capsys)
        assert doc["results"]["passed"] is True

    def test_unknown(self, capsys):
        assert run(["gradcheck", "--function", "tan"], capsys)[0] == 3


class TestRotateCommand:
    def test_quarter_turn(self, tmp_path, capsys):
        src = write(tmp_path, "v.csv", "n,r,i,j,k\n0,0,1,0,0\n")
        out_csv = tmp_path / "o.csv"
        doc = report(["rotate", src, "--axis", "0,0,1", "--angle", str(math.pi / 2), "--csv", str(out_csv)], capsys)
        np.testing.assert_allclose(doc["results"]["rotated"][0], [0, 0, 1, 0], atol=1e-12)
        np.testing.assert_allclose(io.read_signal(out_csv).q[0], [0, 0, 1, 0], atol=1e-12)

    def test_full_turn(self, tmp_path, capsys):
        q = np.random.default_rng(1).normal(size=(5, 4))
        q[:, 0] = 0.0
        src = tmp_path / "v.csv"
        io.write_signal(src, q)
        doc = report(["rotate", str(src), "--axis", "1,2,3", "--angle", str(2 * math.pi)], capsys)
        np.testing.assert_allclose(doc["results"]["rotated"], q, atol=1e-12)
        assert doc["residuals"]["max_norm_change"] < 1e-12

    def test_zero_axis(self, tmp_path, capsys):
        src = write(tmp_path, "v.csv", "n,r,i,j,k\n0,0,1,0,0\n")
        assert run(["rotate", src, "--axis", "0,0,0", "--angle", "1"], capsys)[0] == 3
        assert run(["rotate", src, "--axis", "0,1", "--angle", "1"], capsys)[0] == 3

    def test_non_pure(self, ref_csv, capsys):
        assert run(["rotate", ref_csv, "--axis", "0,0,1", "--angle", "1"], capsys)[0] == 3
