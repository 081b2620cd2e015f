import io
import math
import subprocess
import sys

import numpy as np
import pytest

from tplproc.cli import EXIT_RUNTIME, EXIT_VALIDATION, EXIT_VERIFY, main, read_config, render_svg
from tplproc.verify import read_report


def run(argv, monkeypatch=None):
    buf = io.StringIO()
    code = main(argv, stdout=buf)
    return code, buf.getvalue()


# ---------------------------------------------------------------- eval


def test_eval_mittag_leffler_e():
    code, out = run(["eval", "mittag-leffler", "--a", "1", "--z", "1"])
    assert code == 0
    assert float(out) == pytest.approx(math.e, rel=1e-15)
    assert out.startswith("2.718281828")


def test_eval_cumulant_reference_set():
    code, out = run(["eval", "tpl-cumulant", "--n", "1", "--gamma", "0.5", "--lam", "1", "--delta", "2", "--theta", "1"])
    assert code == 0 and float(out) == pytest.approx(1.0, abs=1e-12)


def test_eval_grid_csv():
    code, out = run(["eval", "tpl-laplace", "--gamma=-1", "--lam", "1", "--delta", "1", "--theta", "1", "--s", "0,1,3"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "s,value"
    # L(s) = (1 + 1 - 1/(1+s))^-1
    assert [float(r.split(",")[1]) for r in lines[1:]] == pytest.approx([1.0, 2 / 3, 4 / 7], rel=1e-15)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "no-such-function"],
        ["eval", "mittag-leffler", "--gamma", "1"],
        ["eval", "mittag-leffler", "--z", "abc"],
        ["sample", "tpl", "--bogus", "1"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = run(argv)
    assert code == EXIT_VALIDATION
    assert "error" in capsys.readouterr().err


def test_eval_domain_error_exit_code():
    # PLUS cumulants need theta > 0
    code, _ = run(["eval", "tpl-cumulant", "--theta", "0"])
    assert code == EXIT_VALIDATION


def test_eval_tml_cdf_exponential():
    code, out = run(["eval", "tml-cdf", "--a", "1", "--c", "1", "--theta", "0.5", "--x", "2"])
    assert float(out) == pytest.approx(1 - math.exp(-3.0), rel=1e-12)


# ---------------------------------------------------------------- sample


def test_sample_byte_deterministic(tmp_path):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(["sample", "tpl", "--n", "50", "--seed", "9", "--out", str(a)]) == 0
    assert main(["sample", "tpl", "--n", "50", "--seed", "9", "--out", str(b)]) == 0
    assert main(["sample", "tpl", "--n", "50", "--seed", "10", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    vals = np.loadtxt(a, skiprows=1)
    assert vals.shape == (50,) and np.all(vals > 0)


def test_sample_zero_rows():
    code, out = run(["sample", "gamma", "--n", "0"])
    assert code == 0 and out == "x\n"


def test_sample_invalid_params_names_invariant(capsys):
    code, _ = run(["sample", "lml", "--a", "2.2", "--c", "0.4", "--theta", "0.5"])
    assert code == EXIT_VALIDATION
    assert "|c| < theta**a" in capsys.readouterr().err


def test_sample_round_trip_precision():
    code, out = run(["sample", "tml", "--n", "20", "--seed", "4"])
    vals = [float(v) for v in out.splitlines()[1:]]
    assert all(f"{v:.17g}" == s for v, s in zip(vals, out.splitlines()[1:]))


def test_env_seed(monkeypatch):
    monkeypatch.setenv("TPL_SEED", "77")
    _, a = run(["sample", "gamma", "--n", "3"])
    monkeypatch.delenv("TPL_SEED")
    _, b = run(["sample", "gamma", "--n", "3", "--seed", "77"])
    _, c = run(["sample", "gamma", "--n", "3"])
    assert a == b != c


def test_env_seed_invalid(monkeypatch):
    monkeypatch.setenv("TPL_SEED", "x")
    assert run(["sample", "gamma"])[0] == EXIT_VALIDATION


def test_sample_resource_error_exit_code():
    # lam theta^gamma far beyond the rejection budget
    code, _ = run(["sample", "tps", "--gamma", "0.5", "--lam", "1e6", "--theta", "100", "--n", "1"])
    assert code == EXIT_RUNTIME


# ---------------------------------------------------------------- config


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\n\ngamma = 0.3\nn = 4\nseed=5\n")
    _, from_file = run(["sample", "tpl", "--config", str(cfg)])
    _, explicit = run(["sample", "tpl", "--gamma", "0.3", "--n", "4", "--seed", "5"])
    assert from_file == explicit
    _, overridden = run(["sample", "tpl", "--config", str(cfg), "--gamma", "0.6"])
    _, explicit2 = run(["sample", "tpl", "--gamma", "0.6", "--n", "4", "--seed", "5"])
    assert overridden == explicit2 != from_file


def test_config_bool_and_dash_keys(tmp_path):
    cfg = tmp_path / "ou.cfg"
    cfg.write_text("euler = true\nt-max = 0.5\nsteps = 5\nou_alpha = 2\n")
    _, a = run(["simulate", "ou", "--config", str(cfg), "--seed", "1"])
    _, b = run(["simulate", "ou", "--euler", "--t-max", "0.5", "--steps", "5", "--ou-alpha", "2", "--seed", "1"])
    assert a == b


@pytest.mark.parametrize("text", ["bogus = 1\n", "no equals sign\n", "gamma = 1\ngamma = 0.5\n", "euler = maybe\n"])
def test_config_errors(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert run(["simulate", "ou", "--config", str(cfg)])[0] == EXIT_VALIDATION


def test_read_config_grammar(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("a-b = 1 = 2\n  c =x\n")
    assert read_config(cfg) == {"a_b": "1 = 2", "c": "x"}


# ---------------------------------------------------------------- simulate


def test_fig1_preset(tmp_path):
    out, svg = tmp_path / "f1.csv", tmp_path / "f1.svg"
    assert main(["simulate", "ou", "--preset", "fig1", "--seed", "2", "--out", str(out), "--svg", str(svg)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,gamma_0.7,gamma_1" and len(lines) == 1002
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert np.all(np.isfinite(data)) and np.all(data[:, 1:] > 0)
    assert data[-1, 0] == 1.0
    text = svg.read_text()
    assert 'width="800" height="600"' in text and text.count("<polyline") == 2
    out2 = tmp_path / "f1b.csv"
    main(["simulate", "ou", "--preset", "fig1", "--seed", "2", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_fig2_preset(tmp_path):
    out, svg = tmp_path / "f2.csv", tmp_path / "f2.svg"
    assert main(["simulate", "mv", "--preset", "fig2", "--seed", "3", "--out", str(out), "--svg", str(svg)]) == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (5000, 2)
    assert np.corrcoef(data.T)[0, 1] > 0
    assert svg.read_text().count("<circle") == 5000


@pytest.mark.parametrize("rep", ["gamma-tps", "cpp-lml", "nb-gamma"])
def test_simulate_tpl_levy(rep):
    code, out = run(["simulate", "tpl-levy", "--gamma=-1", "--representation", rep, "--steps", "4", "--n-paths", "3"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,path0,path1,path2" and len(lines) == 6
    vals = np.array([[float(v) for v in r.split(",")] for r in lines[1:]])
    assert np.all(np.diff(vals[:, 1:], axis=0) >= 0)


def test_simulate_nb_and_sato():
    code, out = run(["simulate", "nb", "--steps", "3"])
    assert code == 0 and out.splitlines()[0] == "t,path0"
    code, out = run(["simulate", "sato", "--steps", "5", "--t-max", "2", "--H", "0.7"])
    assert code == 0 and len(out.splitlines()) == 7


def test_simulate_sato_eps_too_large(capsys):
    code, _ = run(["simulate", "sato", "--eps", "5", "--steps", "10", "--t-max", "2"])
    assert code == EXIT_VALIDATION
    assert "eps" in capsys.readouterr().err


def test_simulate_mv_custom():
    code, out = run(["simulate", "mv", "--gammas=0.5,-1,0.7", "--lams", "1,2,1", "--thetas", "1,1,2", "--n", "10"])
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "x1,x2,x3" and len(rows) == 11


def test_simulate_mv_length_mismatch():
    assert run(["simulate", "mv", "--gammas", "0.5", "--lams", "1,2"])[0] == EXIT_VALIDATION


def test_simulate_ou_bad_x0():
    assert run(["simulate", "ou", "--x0", "abc"])[0] == EXIT_VALIDATION


def test_render_svg_degenerate_series():
    text = render_svg([(np.zeros(3), np.zeros(3), "flat")], "scatter")
    assert text.startswith("<svg") and text.count("<circle") == 3


# ---------------------------------------------------------------- verify


def test_verify_quick(tmp_path):
    rep = tmp_path / "r.tsv"
    assert main(["verify", "--quick", "--report", str(rep)]) == 0
    rows = read_report(rep)
    assert len(rows) > 50 and all(r.passed for r in rows if not r.name.startswith("control/"))
    assert any(not r.passed for r in rows if r.name.startswith("control/"))


def test_verify_planted_defect():
    assert run(["verify", "--quick", "--plant-defect"])[0] == EXIT_VERIFY


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "tplproc.cli", "eval", "mittag-leffler", "--a", "1", "--z", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and res.stdout == "1\n"
