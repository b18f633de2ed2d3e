import json
import re

import pytest

from discrimlab.cli import main

G1_SPEC = '{"free_rank": 2, "stages": [{"u": "g1", "rank": 1}]}'
TOWER_SPEC = '{"free_rank": 2, "stages": [{"u": "g1", "rank": 1}, {"u": "g2", "rank": 1}]}'


@pytest.fixture
def g1_spec(tmp_path):
    p = tmp_path / "g1.json"
    p.write_text(G1_SPEC)
    return str(p)


@pytest.fixture
def tower_spec(tmp_path):
    p = tmp_path / "tower.json"
    p.write_text(TOWER_SPEC)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def strip_wall(text):
    """Drop wall-clock fields for byte-comparison of reruns."""
    return re.sub(r"[\d.]+\s*$", "", text, flags=re.M)


class TestZn:
    def test_rows_and_sandwich(self, capsys):
        code, out = run(capsys, "zn", "--n", "2", "--rmax", "6")
        assert code == 0
        rows = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert rows[0].startswith("n,R,")
        assert len(rows) == 8  # header + R = 0..6
        for row in rows[1:]:
            n, R, lbn, lbd, exact, upper, _ = row.split(",")
            assert int(lbn) / int(lbd) <= int(exact) <= int(upper)

    def test_n1_constant(self, capsys):
        code, out = run(capsys, "zn", "--n", "1", "--rmax", "5")
        assert code == 0
        for row in out.splitlines():
            if row and not row.startswith(("#", "n,")):
                assert row.split(",")[4] == "1"

    def test_jsonl(self, capsys):
        code, out = run(capsys, "zn", "--n", "2", "--rmax", "2", "--format", "jsonl")
        assert code == 0
        lines = out.strip().splitlines()
        meta = json.loads(lines[0])["meta"]
        assert meta["command"] == "zn" and meta["version"]
        assert all(json.loads(l)["exact_min"] >= 1 for l in lines[1:])


class TestBigpowers:
    def test_frozen_example(self, capsys):
        code, out = run(
            capsys, "bigpowers", "--u", "g1", "--g", "g1 g1 g1 g2 G1 G1",
            "--samples", "50",
        )
        assert code == 0
        data = [l for l in out.splitlines() if not l.startswith("#")]
        assert data[1].split(",")[0] == "3"  # threshold
        assert "pass" in data[1]

    def test_invalid_g_exits_2(self, capsys):
        code, _ = run(capsys, "bigpowers", "--u", "g1", "--g", "g1 g1")
        assert code == 2


class TestCurve:
    def test_single_stage(self, capsys, g1_spec):
        code, out = run(capsys, "curve", "--spec", g1_spec, "--rmax", "4")
        assert code == 0
        rows = [l for l in out.splitlines() if l and not l.startswith(("#", "R,"))]
        assert len(rows) == 5
        complexities = [int(r.split(",")[2]) for r in rows]
        assert complexities == sorted(complexities)

    def test_tower_emits_composite(self, capsys, tower_spec):
        code, out = run(capsys, "curve", "--spec", tower_spec, "--rmax", "2")
        assert code == 0
        assert "composite_complexity" in out and "composite_bound" in out

    def test_missing_spec_exits_2(self, capsys, tmp_path):
        code, _ = run(capsys, "curve", "--spec", str(tmp_path / "nope.json"), "--rmax", "1")
        assert code == 2


class TestBall:
    def test_sizes(self, capsys, g1_spec):
        code, out = run(capsys, "ball", "--spec", g1_spec, "--rmax", "2")
        assert code == 0
        sizes = [
            int(l.split(",")[1])
            for l in out.splitlines()
            if l and not l.startswith(("#", "R,"))
        ]
        assert sizes == [1, 7, 33]

    def test_budget_exits_3(self, capsys, g1_spec):
        code, _ = run(capsys, "ball", "--spec", g1_spec, "--rmax", "8", "--cap", "50")
        assert code == 3


class TestCrosscheck:
    def test_agreement(self, capsys, g1_spec):
        code, out = run(capsys, "crosscheck", "--spec", g1_spec, "--r", "3")
        assert code == 0
        assert "agreement,pass" in out

    def test_corrupted_p_detected(self, capsys, g1_spec):
        code, _ = run(
            capsys, "crosscheck", "--spec", g1_spec, "--r", "2", "--force-p", "1"
        )
        assert code == 1


class TestOutput:
    def test_atomic_file_write(self, capsys, tmp_path):
        out_path = tmp_path / "zn.csv"
        code, _ = run(capsys, "zn", "--n", "2", "--rmax", "2", "--out", str(out_path))
        assert code == 0
        text = out_path.read_text()
        assert text.startswith("# tool=discrimlab")
        assert not list(tmp_path.glob(".tmp-*"))

    def test_rerun_identical_modulo_wallclock(self, capsys):
        _, out1 = run(capsys, "zn", "--n", "2", "--rmax", "3")
        _, out2 = run(capsys, "zn", "--n", "2", "--rmax", "3")
        assert strip_wall(out1) == strip_wall(out2)

    def test_meta_has_version_and_seed(self, capsys, g1_spec):
        _, out = run(capsys, "crosscheck", "--spec", g1_spec, "--r", "1")
        assert "# version=" in out and "# seed=0" in out

    def test_bad_subcommand_exits_2(self, capsys):
        assert main(["frobnicate"]) == 2
