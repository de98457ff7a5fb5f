import csv
import json
import subprocess
import sys

import pytest

from netexpand.graph import generate_er, write_edge_list
from netexpand.harness.cli import main


def test_signature_clique_threshold(tmp_path, capsys):
    out = tmp_path / "sig.csv"
    assert main(["signature", "--generator", "complete:n=20", "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert "0.050000" in err
    assert out.read_text().startswith("k,fraction,max_expansion,max_quality,min_expansion,min_quality\n")
    assert json.loads((tmp_path / "sig.csv.json").read_text())["command"] == "signature"


def test_signature_needs_exactly_one_network(capsys):
    assert main(["signature", "--generator", "complete:n=5", "--generator", "complete:n=6"]) == 2


def test_stats_to_stdout(capsys):
    assert main(["stats", "--generator", "er:n=10000,p=0.0005", "--path-samples", "5"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["network", "N", "E", "D", "PL", "CC", "AD"]
    assert rows[1][0] == "er:n=10000,p=0.0005"
    assert float(rows[1][3]) == pytest.approx(0.0005, rel=0.05)


def test_failed_network_sets_exit_code(tmp_path, capsys):
    g = generate_er(60, 0.1, seed=1)
    p = tmp_path / "g.txt"
    write_edge_list(g, p)
    code = main(["stats", "--network", f"file:{p}", "--network", "file:/does/not/exist"])
    cap = capsys.readouterr()
    assert code == 1
    assert "FAILED file:/does/not/exist" in cap.err
    assert len(cap.out.splitlines()) == 2


def test_search_table_is_reproducible(tmp_path):
    args = ["search-table", "--generator", "ba:n=600,m=2", "--trials", "4", "--seed", "3", "--targets", "0.2,0.35"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 4 * 2
    meta = json.loads((tmp_path / "a.csv.json").read_text())
    assert meta["seed"] == 3 and meta["trials"] == 4 and meta["failures"] == {}


def test_greedy_vs_xs_command(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["greedy-vs-xs", "--generator", "ba:n=500,m=2", "--steps", "50", "--trials", "3",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 51


def test_fetch_unknown_and_unreachable(tmp_path, capsys, monkeypatch):
    from netexpand.harness import datasets

    monkeypatch.setitem(datasets.REGISTRY, "dead", datasets.DatasetSpec("dead", "http://127.0.0.1:9/dead.txt"))
    code = main(["fetch", "--network", "dead", "--network", "bogus", "--cache-dir", str(tmp_path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "FAILED dead" in err and "127.0.0.1:9/dead.txt" in err
    assert "FAILED bogus" in err


def test_console_module_runs():
    proc = subprocess.run([sys.executable, "-m", "netexpand.harness.cli", "signature", "--generator", "complete:n=10"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("1,0.100000,9.000000,1.000000")
