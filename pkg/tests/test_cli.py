import io
import json
import math
import subprocess
import sys

import pytest

from qrbench import cli

import frozen


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text) if text else None


def test_bound_amplifier_exact():
    code, rep = run_json("bound", "amp", "--g", "2", "--nbar", "0")
    assert code == 0
    assert rep["exact"] == 1.0 and rep["lower"] == 1.0 and rep["upper"] == 1.0
    assert set(rep) >= {"lower", "upper", "exact", "eb", "method"}


def test_bound_erasure_and_dephasing_d():
    code, rep = run_json("bound", "erasure", "--p", "0.25")
    assert code == 0 and rep["exact"] == 0.75
    code, rep = run_json("bound", "dephasing-d", "--d", "4", "--p", "0.1")
    assert code == 0 and rep["exact"] == pytest.approx(frozen.DEPHASING_D4_P01, abs=1e-11)


def test_infinity_is_a_string():
    code, rep = run_json("bound", "identity")
    assert code == 0 and rep["upper"] == "inf"
    code, rep = run_json("bound", "b1")
    assert rep["upper"] == "inf" and rep["lower"] == 0.0


def test_finite_mu_option():
    code, rep = run_json("bound", "amp", "--g", "2", "--finite-mu", "100,1000")
    assert code == 0
    assert set(rep["meta"]["finite_mu"]) == {"100", "1000"}


@pytest.mark.parametrize(
    "argv",
    [
        ("bound",),
        ("bound", "warp", "--g", "2"),
        ("bound", "amp", "--g", "two"),
        ("bound", "amp", "--gain", "2"),
        ("frobnicate",),
        ("sweep", "loss", "--param", "g", "--start", "0.1", "--stop", "0.9"),
        ("sweep", "loss", "--param", "q", "--start", "0.1", "--stop", "0.9", "--steps", "3"),
        ("compose", "amp --g 2"),
        ("bound", "depol", "--p", "0.1", "--finite-mu", "10"),
    ],
)
def test_parse_errors_exit_2(argv, capsys):
    assert run(*argv)[0] == 2
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ("bound", "amp", "--g", "0.5"),
        ("bound", "loss", "--g", "1.5"),
        ("bound", "depol", "--p", "1.2"),
        ("bound", "additive", "--xi", "-1"),
        ("sweep", "loss", "--param", "g", "--start", "0.1", "--stop", "0.9", "--steps", "1"),
        ("sweep", "loss", "--param", "g", "--start", "0.1", "--stop", "1.9", "--steps", "3"),
        ("stretch-verify", "loss", "--g", "0.5"),
    ],
)
def test_domain_errors_exit_3(argv):
    assert run(*argv)[0] == 3


def test_sweep_csv_header_and_rows():
    code, text = run("sweep", "loss", "--nbar", "1", "--param", "g", "--start", "0.1", "--stop", "0.9", "--steps", "5")
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "param,lower,upper,exact,eb"
    assert len(lines) == 6


def test_sweep_finite_mu_columns():
    text = cli.run_sweep(["amp"], "g", 1.5, 3.0, 3, finite_mu=[100.0, 1000.0])
    assert text.split("\n")[0] == "param,lower,upper,exact,eb,finite_mu_100,finite_mu_1000"


def test_sweep_is_deterministic_and_parallel_matches_serial():
    tokens = ["additive"]
    serial = cli.run_sweep(tokens, "xi", 0.05, 2.0, 40)
    assert cli.run_sweep(tokens, "xi", 0.05, 2.0, 40) == serial
    assert cli.run_sweep(tokens, "xi", 0.05, 2.0, 40, jobs=3) == serial


def test_sweep_inf_token():
    text = cli.run_sweep(["loss", "--nbar", "0"], "g", 0.5, 1.0, 2)
    assert text.strip().split("\n")[-1].split(",")[2] == "inf"


def test_worker_cap(monkeypatch):
    monkeypatch.setenv(cli.WORKERS_ENV, "2")
    assert cli.max_workers(8) == 2
    monkeypatch.setenv(cli.WORKERS_ENV, "x")
    with pytest.raises(cli.CLIParseError):
        cli.max_workers(8)
    monkeypatch.delenv(cli.WORKERS_ENV)
    assert cli.max_workers(8) == 8


def test_sweep_output_file(tmp_path):
    out = tmp_path / "s.csv"
    code, text = run("sweep", "amp", "--param", "g", "--start", "1.5", "--stop", "3", "--steps", "3", "--output", str(out))
    assert code == 0 and text == ""
    assert out.read_text().startswith("param,")


def test_stretch_verify_bundled():
    code, rep = run_json("stretch-verify", "dephasing", "--p", "0.3")
    assert code == 0 and rep["pass"] is True
    code, rep = run_json("stretch-verify", "identity", "--d", "2")
    assert code == 0 and rep["pass"] is True


def test_stretch_verify_not_stretchable():
    code, rep = run_json("stretch-verify", "amp-damp", "--gamma", "0.5")
    assert code == 5
    assert rep["status"] == "not stretchable"


def test_stretch_verify_batch_seeded():
    a = run_json("stretch-verify", "depol", "--p", "0.2", "--random", "3", "--n", "1", "--seed", "9")
    b = run_json("stretch-verify", "depol", "--p", "0.2", "--random", "3", "--n", "1", "--seed", "9")
    assert a == b and a[0] == 0 and a[1]["protocols"] == 3


def test_stretch_verify_bad_protocol_file(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("d: [\n")
    assert run("stretch-verify", "dephasing", "--p", "0.3", "--protocol", str(p))[0] == 2
    assert run("stretch-verify", "dephasing", "--p", "0.3", "--protocol", str(tmp_path / "none.yaml"))[0] == 2


def test_compose_examples():
    code, rep = run_json("compose", "amp --g 2 --nbar 0", "loss --g 0.5 --nbar 0")
    assert code == 0 and rep["composite"] == "additive(xi=0.5)"
    assert rep["report"]["upper"] == pytest.approx(frozen.ADDITIVE_XI_HALF_UPPER, abs=1e-11)
    code, rep = run_json("compose", "identity", "loss --g 0.7")
    assert rep["composite"].startswith("loss(g=0.7")
    code, rep = run_json("compose", "loss --g 0.8", "loss --g 0.5")
    assert rep["report"]["upper"] == pytest.approx(-math.log2(0.6), abs=1e-11)


def test_compose_unclassified():
    code, rep = run_json("compose", "amp --g 2", "b1")
    assert code == 6
    assert rep["composite"] == "unclassified" and "G" in rep


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qrbench", "bound", "amp", "--g", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exact"] == 1.0
