import csv
import io
import json
import math

import numpy as np
import pytest

from hardylab import cli
from hardylab.families import GaussianSum, laplace_family, save_families
from hardylab.grid import Grid
from hardylab.oscillator import vemuri_R


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_gain_final_row(capsys):
    code, out, _ = invoke(capsys, "gain", "--depth", "2", "--stages", "60", "--format", "csv")
    assert code == 0
    last = table(out)[-1]
    assert abs(float(last["theta_0_float"]) - 7 / 8) < 1e-12
    assert last["stage"] == "60"


def test_frft_zero_angle_is_identity(capsys):
    code, out, _ = invoke(capsys, "frft", "--beta", "0", "--gaussian", "1.0")
    assert code == 0
    source = GaussianSum(np.array([1.0 + 0j]), np.array([1.0])).sample(Grid())
    assert out == source.to_csv()


def test_vemuri_minimum(capsys):
    code, out, _ = invoke(capsys, "vemuri", "--a", "0.6", "--eps", "1e-6", "--t-min", "0",
                          "--t-max", "0.16", "--points", "400")
    assert code == 0
    rows = table(out)
    assert len(rows) == 400
    t = np.array([float(r["t"]) for r in rows])
    om = np.array([float(r["omega"]) for r in rows])
    i = int(np.argmin(om))
    assert i == int(np.argmin(np.abs(t - 1 / (4 * math.pi))))
    assert abs(float(rows[i]["pi_R"]) - math.pi * vemuri_R(0.6, 1e-6)) < 1e-9
    # the sampled minimum sits just above pi R, the exact value at t = 1/(4 pi)
    assert 0 <= om[i] - math.pi * vemuri_R(0.6, 1e-6) < 1e-5


@pytest.mark.parametrize("argv", [
    ["gain", "--depth", "-1"],
    ["gain", "--stages", "-4"],
    ["gain", "--bogus"],
    ["frft", "--gaussian", "1"],
    ["frft", "--beta", "0.3", "--gaussian", "-1"],
    ["frft", "--beta", "0.3", "--n", "7"],
    ["frft", "--beta", "0.3", "--chirp", "1.5"],
    ["vemuri", "--a", "1.2"],
    ["vemuri", "--eps", "-1"],
    ["vemuri", "--points", "1"],
    ["apriori", "--a", "0.5"],
    ["apriori", "--a", "0.9", "--gaussian", "0.5"],
    ["family-check", "--a", "0.5", "--gaussian", "1+1j"],
    ["decay", "--hermite", "x"],
    ["family-check", "--a", "0.5", "--hermite", "2"],
    [],
])
def test_validation_errors_exit_one(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == cli.EXIT_INVALID
    assert out == ""
    assert err.startswith("error:") and err.count("\n") == 1


def test_unreadable_family_file(capsys, tmp_path):
    code, _, err = invoke(capsys, "decay", "--family", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, _, err = invoke(capsys, "frft", "--beta", "1", "--family", str(bad))
    assert code == 1 and "JSON" in err


def test_family_index_out_of_range(capsys, tmp_path):
    path = tmp_path / "f.json"
    save_families([laplace_family([(1, 1)])], path)
    code, _, err = invoke(capsys, "decay", "--family", str(path), "--index", "3")
    assert code == 1 and "out of range" in err


def test_unwritable_output(capsys, tmp_path):
    code, _, err = invoke(capsys, "eigen", "-o", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("argv", [
    ["gain", "--depth", "3", "--stages", "30"],
    ["eigen", "--depth", "4"],
    ["decay", "--hermite", "5", "--n", "1024"],
    ["frft", "--beta", "0.7", "--n", "1024"],
    ["evolve", "--n", "512", "--times", "0.1", "0.25"],
    ["vemuri", "--points", "50"],
    ["apriori", "--a", "0.4", "--chirp", "0.5", "--max-order", "3", "--n", "2048", "--extent", "24"],
])
def test_verify_passes(capsys, argv):
    code, _, err = invoke(capsys, *argv, "--verify")
    assert code == 0
    assert "verify PASS" in err and "FAIL" not in err


def test_verify_injected_failure(capsys, monkeypatch):
    monkeypatch.setitem(cli.VERIFIERS, "eigen", [lambda a, c: (True, "fine"), lambda a, c: (False, "broken")])
    code, out, err = invoke(capsys, "eigen", "--verify")
    assert code == cli.EXIT_VERIFY
    assert out  # the table is still written
    assert "verify PASS: fine" in err and "verify FAIL: broken" in err
    # without --verify the checks do not run
    assert invoke(capsys, "eigen")[0] == 0


def test_repeated_runs_identical(capsys):
    argv = ["family-check", "--a", "0.3", "--chirp", "0.5", "--sweep", "4", "--n", "1024", "--extent", "24"]
    first = invoke(capsys, *argv)
    assert first[0] == 0 and invoke(capsys, *argv) == first


def test_jobs_do_not_change_output(capsys):
    base = ["evolve", "--n", "256", "--times", "0", "0.05", "0.1", "0.2", "--format", "json"]
    one = invoke(capsys, *base, "--jobs", "1")[1]
    four = invoke(capsys, *base, "--jobs", "4")[1]
    assert one == four
    fc = ["family-check", "--a", "0.3", "--chirp", "0.5", "--sweep", "6", "--n", "1024", "--extent", "24"]
    assert invoke(capsys, *fc, "--jobs", "1")[1] == invoke(capsys, *fc, "--jobs", "3")[1]


def test_floats_use_seventeen_digits():
    text = cli.rows_to_csv(["v"], [[1 / 3]])
    assert text.splitlines()[1] == "0.33333333333333331"
    assert float(text.splitlines()[1]) == 1 / 3


def test_json_safe_values():
    from fractions import Fraction
    d = json.loads(cli.dump_json({"q": Fraction(7, 8), "inf": math.inf, "arr": np.array([1.5, np.nan])}))
    assert d == {"q": "7/8", "inf": "inf", "arr": [1.5, "nan"]}


def test_decay_json_report(capsys):
    code, out, _ = invoke(capsys, "decay", "--gaussian", "1.5", "--a", "0.5", "--n", "1024")
    assert code == 0
    rep = json.loads(out)
    assert isinstance(rep, dict) and rep


def test_family_check_json(capsys, tmp_path):
    path = tmp_path / "fam.json"
    save_families([laplace_family([(0.7, 1), (1.2, 0.5)])], path)
    code, out, _ = invoke(capsys, "family-check", "--family", str(path), "--a", "0.6",
                          "--betas", "0.4", "1.5707963267948966", "--extent", "24", "--verify")
    assert code == 0
    rep = json.loads(out)
    assert rep["in_E2"] is True and len(rep["angles"]) == 2


def test_apriori_from_norms(capsys):
    code, out, _ = invoke(capsys, "apriori", "--a", "0.5", "--c2f", "1", "--c2fhat", "1", "--max-order", "2")
    assert code == 0
    rows = table(out)
    assert [r["order"] for r in rows] == ["0", "1", "2"]
    assert "measured_l2" not in rows[0]


def test_output_file_and_plot(capsys, tmp_path):
    out_path, png = tmp_path / "v.csv", tmp_path / "v.png"
    code, out, _ = invoke(capsys, "vemuri", "--points", "20", "-o", str(out_path), "--plot", str(png))
    assert code == 0 and out == ""
    assert out_path.read_text().startswith("t,omega,pi_R,exceptional")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("argv", [
    ["gain", "--stages", "10"],
    ["decay", "--n", "512"],
    ["frft", "--beta", "0.4", "--n", "512"],
])
def test_plot_writes_png(capsys, tmp_path, argv):
    png = tmp_path / "fig.png"
    assert invoke(capsys, *argv, "--plot", str(png))[0] == 0
    assert png.stat().st_size > 1000


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["--version"])
    assert exc.value.code == 0
    assert "hardylab" in capsys.readouterr().out
