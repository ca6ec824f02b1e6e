"""CLI behavior: flags, exit codes, output formats, determinism."""
import json
import subprocess
import sys

import numpy as np
import pytest

from vilenkin.cli import RunConfig, config_from_args, main, _build_parser
from vilenkin.group import build_group_spec
from vilenkin.serialize import doc_to_function, dumps_canonical, function_to_doc
from vilenkin.transform import CylinderFunction, Spectrum, sup_abs


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def ones_file(tmp_path):
    g = build_group_spec([2] * 8)
    f = CylinderFunction(g, np.ones(g.size, dtype=np.complex128))
    path = tmp_path / "ones.json"
    path.write_text(dumps_canonical(function_to_doc(f)), encoding="utf-8")
    return str(path)


def test_transform_ones_gives_delta_spectrum(ones_file, tmp_path, capsys):
    out = tmp_path / "spec.json"
    assert run_cli("transform", "--group", "const:2^8", "--input", ones_file, "--out", str(out)) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    s = doc_to_function(doc)
    assert isinstance(s, Spectrum)
    assert abs(s.coeffs[0] - 1.0) < 1e-12
    assert sup_abs(s.coeffs[1:]) < 1e-12


def test_transform_spectrum_input_reconstructs(ones_file, tmp_path):
    out = tmp_path / "spec.json"
    run_cli("transform", "--input", ones_file, "--out", str(out))
    back = tmp_path / "back.json"
    assert run_cli("transform", "--input", str(out), "--out", str(back)) == 0
    f = doc_to_function(json.loads(back.read_text(encoding="utf-8")))
    assert isinstance(f, CylinderFunction)
    assert sup_abs(f.values - 1.0) < 1e-12


def test_transform_random_with_oracle_check(capsys):
    assert run_cli("transform", "--group", "2,3,2,4", "--random", "--seed", "7", "--check-oracle") == 0
    out = capsys.readouterr().out
    assert "max relative error" in out and "ok" in out


def test_transform_malformed_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "malformed.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run_cli("transform", "--group", "const:2^8", "--input", str(bad)) == 2
    assert "error" in capsys.readouterr().err


def test_transform_group_mismatch_exits_2(ones_file, capsys):
    assert run_cli("transform", "--group", "const:3^4", "--input", ones_file) == 2


def test_transform_random_needs_group(capsys):
    assert run_cli("transform", "--random") == 2


def test_transform_csv_format(tmp_path):
    out = tmp_path / "f.csv"
    assert run_cli(
        "transform", "--group", "2,3", "--random", "--seed", "1", "--out", str(out), "--format", "csv"
    ) == 0
    lines = out.read_text(encoding="utf-8").strip().split("\n")
    assert lines[0] == "index,re,im"
    assert len(lines) == 7


def test_kernel_dirichlet_self_check_and_values(tmp_path, capsys):
    out = tmp_path / "d6.json"
    assert run_cli(
        "kernel", "--kind", "dirichlet", "--n", "6", "--group", "2,3,2", "--resolution", "3", "--out", str(out)
    ) == 0
    assert "D_6(0) = 6" in capsys.readouterr().out
    kern = doc_to_function(json.loads(out.read_text(encoding="utf-8")))
    want = np.zeros(12)
    want[[0, 6]] = 6.0  # M_2 * indicator of I_2
    assert sup_abs(kern.values - want) < 1e-10


def test_kernel_fejer_n1_is_zero(tmp_path, capsys):
    out = tmp_path / "k1.json"
    assert run_cli("kernel", "--kind", "fejer", "--n", "1", "--group", "const:2^4", "--out", str(out)) == 0
    kern = doc_to_function(json.loads(out.read_text(encoding="utf-8")))
    assert sup_abs(kern.values) < 1e-12


def test_kernel_fejer_check_zero(capsys):
    assert run_cli("kernel", "--kind", "fejer", "--n", "21", "--group", "const:2^6", "--check-zero") == 0
    assert "K_21(0) = 10" in capsys.readouterr().out


def test_kernel_bad_index_exits_2(capsys):
    assert run_cli("kernel", "--kind", "dirichlet", "--n", "-3", "--group", "const:2^4") == 2
    assert run_cli("kernel", "--kind", "fejer", "--n", "0", "--group", "const:2^4") == 2


def test_lemma2_report_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "l2.json"
    assert run_cli("lemma2", "--group", "const:2", "--A", "4", "--out", str(out)) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["passed"] is True
    assert doc["global_min_ratio"] >= 0.25
    assert run_cli("lemma2", "--group", "const:3", "--A", "3") == 0
    capsys.readouterr()
    assert run_cli("lemma2", "--group", "const:2", "--A", "2") == 2
    assert run_cli("lemma2", "--group", "const:2", "--A", "6", "--cap", "100") == 3


def test_counterexample_eight_rows(capsys):
    assert run_cli("counterexample", "--group", "const:2", "--alpha0", "6", "--kmax", "8") == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 9
    assert lines[0].startswith("k,alpha_k,q_alpha_k")
    row0 = lines[1].split(",")
    assert row0[0] == "0" and row0[2] == "5461" and row0[5] != ""


def test_counterexample_low_alpha0_exits_2(capsys):
    assert run_cli("counterexample", "--group", "const:2", "--alpha0", "4", "--kmax", "1") == 2


def test_counterexample_plot_data(tmp_path, capsys):
    plot = tmp_path / "plot.csv"
    assert run_cli(
        "counterexample", "--group", "const:2", "--kmax", "3", "--emit-plot-data", str(plot)
    ) == 0
    lines = plot.read_text(encoding="utf-8").strip().split("\n")
    assert lines[0] == "k,sqrt_alpha_k,lb_squared"
    assert len(lines) == 4
    capsys.readouterr()
    # bare flag: plot data replaces the summary on stdout
    assert run_cli("counterexample", "--group", "const:2", "--kmax", "2", "--emit-plot-data") == 0
    out = capsys.readouterr().out
    assert out.startswith("k,sqrt_alpha_k,lb_squared")


def test_counterexample_json_report(capsys):
    assert run_cli("counterexample", "--group", "const:2", "--kmax", "2", "--json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True
    assert len(doc["ledgers"]) == 2


def test_counterexample_deterministic_output(capsys):
    assert run_cli("counterexample", "--group", "const:2", "--kmax", "4") == 0
    first = capsys.readouterr().out
    assert run_cli("counterexample", "--group", "const:2", "--kmax", "4") == 0
    second = capsys.readouterr().out
    assert first == second


def test_selftest_passes(capsys):
    assert run_cli("selftest") == 0
    out = capsys.readouterr().out
    assert out.count("ok - ") >= 8
    assert "fail" not in out


def test_threads_flag_accepted(capsys):
    assert run_cli("--threads", "2", "selftest") == 0
    assert run_cli("--threads", "0", "selftest") == 2


def test_run_config_round_trips_through_serialization():
    parser = _build_parser()
    args = parser.parse_args(
        ["counterexample", "--group", "const:2", "--alpha0", "6", "--kmax", "8", "--emit-plot-data", "p.csv"]
    )
    cfg = config_from_args(args)
    back = RunConfig.from_doc(json.loads(dumps_canonical(cfg.to_doc())))
    assert back == cfg
    args = parser.parse_args(["transform", "--group", "2,3", "--random", "--seed", "5"])
    cfg = config_from_args(args)
    assert RunConfig.from_doc(json.loads(dumps_canonical(cfg.to_doc()))) == cfg


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "vilenkin.cli", "kernel", "--kind", "fejer", "--n", "21",
         "--group", "const:2^6", "--check-zero"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "K_21(0) = 10" in proc.stdout
    assert proc.stderr == ""
