import math
import os

import numpy as np
import pytest

from softhard import cli
from softhard import equilibrium as eq
from softhard.report import CsvArtifact, ReportError, TextArtifact, emit_report, fmt_number


def test_parse_config_with_comments():
    text = "# experiment\nalpha = 0.5  # hard-edge exponent\nnlist=10,20\nwindow = 0.5, 3\n\n"
    vals = cli.parse_config_text(text)
    assert vals == {"alpha": 0.5, "nlist": (10, 20), "window": (0.5, 3.0)}


@pytest.mark.parametrize("text", ["alpha", "beta = 1", "grid = x", "window = 1"])
def test_parse_config_errors(text):
    with pytest.raises(cli.ConfigError):
        cli.parse_config_text(text)


def test_flags_override_file():
    cfg = cli.build_config({"alpha": 0.5, "c": 1.0}, {"alpha": 0.0, "c": None})
    assert cfg.alpha == 0.0 and cfg.c == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(alpha=-1.0), dict(c=0.0), dict(window=(0.0, 4.0)), dict(window=(3.0, 2.0)),
     dict(n_list=(40, 20)), dict(n_list=()), dict(grid=1), dict(tol=0.0)],
)
def test_config_validation(kwargs):
    with pytest.raises(cli.ConfigError):
        cli.ExperimentConfig(**kwargs)


def test_derived_quantities_L0():
    cfg = cli.ExperimentConfig()
    assert cfg.N_of(20) == 20.0 and cfg.N_of(40) == 40.0
    assert cfg.s() == 0.0
    assert abs(cfg.scale(20) - 10 ** (2 / 3)) <= 1e-13


def test_derived_quantities_L1():
    cfg = cli.ExperimentConfig(L=1.0)
    assert abs(cfg.s() - 2 ** (1 / 3)) <= 1e-15
    assert abs(cfg.N_of(8) - 8 / 1.25) <= 1e-14


def test_s_undefined_off_regime():
    with pytest.raises(cli.ConfigError):
        cli.ExperimentConfig(c=1.2, L=1.0).s()


def test_resolved_echo_contains_derived():
    text = cli.config_text(cli.ExperimentConfig(L=1.0, n_list=(8,)))
    keys = [line.split(" = ")[0] for line in text.splitlines()]
    for k in ("alpha", "c", "L", "nlist", "window", "grid", "tol", "out", "c1", "c2", "s", "N(8)", "scale(8)"):
        assert k in keys


def test_fmt_number_17_digits():
    assert fmt_number(0.1) == "0.10000000000000001"
    assert fmt_number(3) == "3"
    assert fmt_number(None) == ""


def test_csv_lf_and_header():
    text = CsvArtifact("t.csv", ["a", "b"], [(1, 0.5)]).render()
    assert text == "a,b\n1,0.5\n"


def test_emit_rejects_duplicates(tmp_path):
    arts = [TextArtifact("a.txt", "x"), TextArtifact("a.txt", "y")]
    with pytest.raises(ReportError):
        emit_report(arts, str(tmp_path))


def test_unwritable_directory_no_partial_writes(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    out = blocker / "sub"
    with pytest.raises(ReportError):
        emit_report([TextArtifact("a.txt", "x")], str(out))
    assert not out.exists()
    assert cli.main(["eqdensity", "--out", str(out)]) == 2


def test_eqdensity_three_csvs(tmp_path):
    out = tmp_path / "eq"
    assert cli.main(["eqdensity", "--out", str(out)]) == 0
    csvs = sorted(p.name for p in out.iterdir() if p.suffix == ".csv")
    assert csvs == sorted(["eqdensity_c0.7.csv", "eqdensity_c1.csv", "eqdensity_c1.2.csv"])
    for c in (0.7, 1.0, 1.2):
        assert abs(eq.equilibrium_vc(c).integrate() - 1.0) <= 1e-10
    text = (out / "eqdensity_c1.csv").read_text()
    assert text.startswith("x,psi\n") and "\r" not in text
    assert (out / "eqdensity.svg").read_text().startswith("<svg")


def _tree(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


@pytest.mark.parametrize("cmd", ["eqdensity", "recurrence", "kernel", "limitkernel"])
def test_byte_identical_reruns(tmp_path, cmd):
    argv = [cmd, "--nlist", "4,8", "--grid", "5", "--out", str(tmp_path / "a")]
    assert cli.main(argv) == 0
    first = _tree(tmp_path / "a")
    for p in (tmp_path / "a").iterdir():
        p.unlink()
    assert cli.main(argv) == 0
    assert _tree(tmp_path / "a") == first


def test_manifest_lists_each_file_once(tmp_path, capsys):
    out = tmp_path / "m"
    assert cli.main(["kernel", "--nlist", "4,8", "--grid", "5", "--out", str(out)]) == 0
    printed = capsys.readouterr().out.split()
    assert len(printed) == len(set(printed))
    assert sorted(printed) == sorted(os.listdir(out))
    report = (out / "report.txt").read_text()
    manifest = report.split("[manifest]\n")[1].split()
    assert sorted(manifest) == sorted(printed)


def test_report_embeds_config(tmp_path):
    out = tmp_path / "r"
    assert cli.main(["limitkernel", "--L", "1", "--grid", "4", "--out", str(out)]) == 0
    report = (out / "report.txt").read_text()
    assert "L = 1" in report
    assert f"s = {fmt_number(2 ** (1 / 3))}" in report


def test_config_file_and_flags(tmp_path):
    conf = tmp_path / "exp.conf"
    conf.write_text("alpha = 0.5\nnlist = 3,6\ngrid = 4\n")
    out = tmp_path / "o"
    assert cli.main(["recurrence", "--config", str(conf), "--alpha", "0", "--out", str(out)]) == 0
    assert "alpha = 0\n" in (out / "report.txt").read_text()
    assert (out / "recurrence_n6.csv").exists()


def test_exit_codes(tmp_path):
    assert cli.main(["eqdensity", "--window", "4,1", "--out", str(tmp_path / "x")]) == 2
    assert cli.main(["eqdensity", "--config", str(tmp_path / "missing.conf")]) == 2
    assert cli.main(["fredholm", "--alpha", "0.5", "--out", str(tmp_path / "y")]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["nosuchcommand"])
    assert exc.value.code == 2


def test_converge_small_n_decreases():
    cfg = cli.ExperimentConfig(n_list=(20, 40), grid=9)
    rows = cli.run_converge(cfg)
    assert all(r.available for r in rows)
    assert rows[1].error < rows[0].error
    assert rows[0].N == 20.0 and rows[0].s == 0.0


def test_converge_L1_uses_c2_shift():
    cfg = cli.ExperimentConfig(L=1.0, n_list=(20,), grid=5)
    (row,) = cli.run_converge(cfg)
    assert abs(row.s - 2 ** (1 / 3)) <= 1e-15
    assert abs(row.N - 20 / (1 + 20 ** (-2 / 3))) <= 1e-12
    assert row.available and math.isfinite(row.error)


def test_empirical_rate():
    rows = [cli.ConvergeRow(n, n, 0, 1, n ** -1.0, True) for n in (10, 20, 40)]
    assert abs(cli.empirical_rate(rows) + 1.0) <= 1e-12


def test_fredholm_command_writes_both_tables(tmp_path):
    out = tmp_path / "f"
    assert cli.main(["fredholm", "--window", "0.5,2", "--grid", "3", "--out", str(out)]) == 0
    scaled = (out / "fredholm_scaled.csv").read_text().splitlines()
    assert scaled[0] == "x,gap,tw_ratio,abs_diff"
    assert all(float(line.split(",")[3]) <= 1e-8 for line in scaled[1:])
