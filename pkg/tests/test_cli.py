"""End-to-end command line checks driving main() in process."""

import csv
import io
import subprocess
import sys
from types import SimpleNamespace

import numpy as np
import pytest

from civec import container, datasets
from civec.cli import CSV_COLUMNS, main
from civec.metering import PerfCounters, PowercapEnergy


def run_cli(*argv):
    return main([str(a) for a in argv])


def test_gen_synthetic_kinds(tmp_path, capsys):
    for kind, ref in (
        ("sorted", datasets.gen_sorted(200, 999, seed=7)),
        ("uniform", datasets.gen_uniform(200, 999, seed=7)),
        ("runs", datasets.gen_runs(200, 999, seed=7, mean_run=4)),
    ):
        out = tmp_path / f"{kind}.ivec"
        assert run_cli("gen", kind, "--n", 200, "--max-value", 999,
                       "--seed", 7, "--mean-run", 4, "--out", out) == 0
        assert f"wrote 200 values to {out}" in capsys.readouterr().out
        assert np.array_equal(container.read_ivec(out), np.asarray(ref))


def test_gen_text_transforms(tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"banana")
    t = datasets.TextInput(b"banana")
    sa = datasets.suffix_array(t)
    for kind, fn in (("bwt", datasets.bwt), ("lcp", datasets.lcp),
                     ("psi", datasets.psi)):
        out = tmp_path / f"{kind}.ivec"
        assert run_cli("gen", kind, "--text", src, "--out", out) == 0
        assert np.array_equal(container.read_ivec(out), np.asarray(fn(t, sa)))


def test_gen_text_limit(tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"banana")
    out = tmp_path / "o.ivec"
    assert run_cli("gen", "bwt", "--text", src, "--limit", 3,
                   "--out", out) == 0
    t = datasets.TextInput(b"ban")
    want = datasets.bwt(t, datasets.suffix_array(t))
    assert np.array_equal(container.read_ivec(out), np.asarray(want))


def test_gen_text_kind_requires_text_flag(tmp_path):
    with pytest.raises(SystemExit) as ei:
        run_cli("gen", "psi", "--out", tmp_path / "x.ivec")
    assert ei.value.code == 2


def test_encode_decode_roundtrip(tmp_path, capsys):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "runs", "--n", 300, "--max-value", 500, "--seed", 3,
            "--out", raw)
    capsys.readouterr()
    civ = tmp_path / "d.civ"
    assert run_cli("encode", raw, civ, "--codec", "dac",
                   "--sampling", 64) == 0
    out = capsys.readouterr().out
    assert out.startswith("codec dac: n=300 ")
    assert "% of plain)" in out
    back = tmp_path / "back.ivec"
    assert run_cli("decode", civ, back) == 0
    assert f"decoded 300 values (dac) to {back}" in capsys.readouterr().out
    assert np.array_equal(container.read_ivec(back), container.read_ivec(raw))


def test_encode_rejects_unknown_codec(tmp_path):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "uniform", "--n", 10, "--out", raw)
    with pytest.raises(SystemExit) as ei:
        run_cli("encode", raw, tmp_path / "d.civ", "--codec", "huffman")
    assert ei.value.code == 2


def test_stats_prints_dataset_summary(tmp_path, capsys):
    raw = tmp_path / "d.ivec"
    container.write_ivec(raw, [1, 3, 3, 7])
    st = datasets.stats([1, 3, 3, 7])
    assert run_cli("stats", raw) == 0
    assert capsys.readouterr().out == (
        f"n {st.n}\nmax value {st.max_value}\navg value {st.avg_value}\n"
        f"max diff {st.max_diff}\nruns {st.runs}\n")


def test_missing_input_is_runtime_error(tmp_path, capsys):
    assert run_cli("stats", tmp_path / "absent.ivec") == 1
    assert "civec: error:" in capsys.readouterr().err


def test_bench_csv(tmp_path):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "uniform", "--n", 400, "--max-value", 10**6, "--seed", 5,
            "--out", raw)
    out = tmp_path / "bench.csv"
    assert run_cli("bench", raw, "--codec", "plain,gamma,fv", "--ops", "0,64",
                   "--reps", 2, "--seed", 9, "--out", out) == 0
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert len(rows) == 6  # 3 codecs x 2 op counts
    counters_on = bool(PerfCounters().available)
    energy_on = PowercapEnergy().available
    sums = set()
    for r in rows:
        assert r["dataset"] == "d.ivec"
        assert r["workload"] == "randsum"
        assert int(r["size_bytes"]) > 0
        assert int(r["time_ns"]) > 0
        if not counters_on:
            assert r["instructions"] == "" and r["cycles"] == ""
        if not energy_on:
            assert r["energy_pkg_uj"] == ""
        if r["ops"] == "0":
            assert r["checksum"] == ""  # container-load row
        else:
            sums.add(r["checksum"])
    assert len(sums) == 1  # every codec agreed on the workload checksum


def test_bench_stdout_and_unknown_codec(tmp_path, capsys):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "uniform", "--n", 50, "--out", raw)
    capsys.readouterr()
    assert run_cli("bench", raw, "--codec", "rl", "--ops", "10",
                   "--reps", 1) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["codec"] == "rl"

    assert run_cli("bench", raw, "--codec", "rl,zeta", "--ops", "10",
                   "--reps", 1) == 1
    assert "unknown codec 'zeta'" in capsys.readouterr().err


def test_bench_aborts_on_checksum_mismatch(tmp_path, capsys, monkeypatch):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "uniform", "--n", 30, "--out", raw)

    def lying_run(name, vec, ops, seed, target_max=None):
        bad = 1 if vec.codec_id == "delta" else 0
        return SimpleNamespace(name=name, ops=ops, checksum=bad)

    monkeypatch.setattr("civec.workloads.run", lying_run)
    assert run_cli("bench", raw, "--codec", "plain,gamma,delta",
                   "--ops", "5", "--reps", 1) == 1
    err = capsys.readouterr().err
    assert "checksum mismatch for codec delta" in err


def test_report_table(tmp_path, capsys):
    raw = tmp_path / "d.ivec"
    run_cli("gen", "sorted", "--n", 200, "--out", raw)
    bench = tmp_path / "b.csv"
    run_cli("bench", raw, "--codec", "plain,rl", "--workload", "binsearch",
            "--ops", "0,32", "--reps", 1, "--out", bench)
    capsys.readouterr()
    assert run_cli("report", bench) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["codec", "0", "32"]
    assert [ln.split()[0] for ln in lines[1:]] == ["plain", "rl"]
    for ln in lines[1:]:
        for cell in ln.split()[1:]:
            assert cell == "-" or int(cell) > 0

    table = tmp_path / "t.txt"
    assert run_cli("report", bench, "--metric", "energy_pkg_uj",
                   "--out", table) == 0
    assert table.read_text().splitlines()[0].split() == ["codec", "0", "32"]
    with pytest.raises(SystemExit) as ei:
        run_cli("report", bench, "--metric", "size_bytes")
    assert ei.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "civec.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "encode" in proc.stdout and "bench" in proc.stdout
