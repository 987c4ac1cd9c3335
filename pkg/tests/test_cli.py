import subprocess
import sys

import pytest

from csspapr.cli import main
from csspapr.svsets import parse_sv_file


@pytest.fixture
def sets_dir(tmp_path):
    (tmp_path / "good.txt").write_text("n=128,v=4\n0,0,0,0\n0,1,2,3\n0,2,4,6\n0,3,6,9\n")
    (tmp_path / "dotted_int.txt").write_text("n=128,v=4\n0,0,0,0\n0,8,16,24\n0,16,32,48\n0,24,48,72\n")
    (tmp_path / "dotted_rand.txt").write_text("n=128,v=4\n0,0,0,0\n0,4,8,12\n0,16,20,24\n0,28,32,36\n")
    return tmp_path


def test_check_exit_codes(sets_dir, capsys):
    assert main(["check-svsets", "--file", str(sets_dir / "good.txt"), "--n", "128", "--v", "4",
                 "--criterion", "2"]) == 0
    assert main(["check-svsets", "--file", str(sets_dir / "dotted_int.txt"), "--criterion", "2"]) == 1
    assert main(["check-svsets", "--file", str(sets_dir / "dotted_int.txt"), "--criterion", "1"]) == 0
    assert main(["check-svsets", "--file", str(sets_dir / "dotted_rand.txt"), "--criterion", "1"]) == 1
    assert main(["check-svsets", "--file", str(sets_dir / "good.txt"), "--criterion", "3"]) == 1
    out = capsys.readouterr().out
    assert "min_circular_gap=1" in out
    assert "undefined" in out


def test_check_config_errors(sets_dir):
    assert main(["check-svsets", "--file", str(sets_dir / "good.txt"), "--n", "64"]) == 2
    assert main(["check-svsets", "--file", str(sets_dir / "missing.txt")]) == 2


def test_search_writes_valid_file(tmp_path):
    out = tmp_path / "found.txt"
    argv = ["search-svsets", "--n", "128", "--v", "4", "--u", "4", "--partition", "adjacent",
            "--seed", "3", "--iterations", "500", "--out", str(out)]
    assert main(argv) == 0
    c = parse_sv_file(out.read_text())
    assert c.u_count == 4 and c.has_identity_first
    assert main(["check-svsets", "--file", str(out), "--criterion", "1"]) == 0
    assert main(["search-svsets", "--n", "4", "--v", "4", "--u", "2", "--partition",
                 "interleaved", "--iterations", "10"]) == 1


def test_acf_csv(tmp_path):
    out = tmp_path / "acf.csv"
    assert main(["acf", "--n", "32", "--v", "2", "--partition", "adjacent", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,numeric,closed_form,deviation"
    assert len(lines) == 33
    assert all(float(ln.split(",")[3]) < 1e-9 for ln in lines[1:])
    assert main(["acf", "--n", "12", "--v", "2", "--partition", "adjacent"]) == 2


def test_simulate_deterministic(tmp_path):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("n=64\nv=4\nu=4\npartition=random\nsv_sets=0,0,0,0;0,8,16,24;0,16,32,48;0,24,48,8\n"
                   "trials=300\nchunk_size=50\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["simulate", "--config", str(cfg), "--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["simulate", "--config", str(cfg), "--out", str(b), "--trials", "301"]) == 0
    assert "# trials=301" in b.read_text()
    assert main(["simulate", "--config", str(cfg), "--scheme", "slm"]) == 2


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "csspapr", "acf", "--n", "8", "--v", "2",
                        "--partition", "interleaved"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[1].startswith("0,1.414")
