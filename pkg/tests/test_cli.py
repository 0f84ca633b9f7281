import json

import pytest

from actsim.cli import main

XES_DOC = """<?xml version="1.0" encoding="UTF-8"?>
<log xmlns="http://www.xes-standard.org/">
  <trace>
    <string key="concept:name" value="1"/>
    <event><string key="concept:name" value="a"/></event>
    <event><string key="concept:name" value="b"/></event>
  </trace>
  <trace>
    <string key="concept:name" value="2"/>
    <event><string key="concept:name" value="b"/></event>
    <event><string key="concept:name" value="a"/></event>
  </trace>
</log>
"""


@pytest.fixture
def worked_csv(tmp_path):
    rows = ["case,activity"]
    for case in range(1, 6):
        rows += [f"{case},{act}" for act in "abcde"]
    rows += [f"6,{act}" for act in ["a", "d", "d", "b", "e"]]
    path = tmp_path / "log.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def run(argv):
    return main([str(part) for part in argv])


class TestStats:
    def test_outputs(self, worked_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert run(["stats", "--input", worked_csv, "--out-dir", out]) == 0
        lines = (out / "stats.csv").read_text().splitlines()
        assert lines[0] == "rank,activity,frequency,relative_frequency"
        assert lines[1].startswith("1,d,7,")
        # Frequency ties resolve by activity id: a, b, e before c.
        assert [line.split(",")[1] for line in lines[1:]] == ["d", "a", "b", "e", "c"]
        summary = json.loads((out / "stats.json").read_text())
        assert summary["trace_count"] == 6
        assert summary["activity_count"] == 5
        assert summary["variant_count"] == 2
        assert summary["variant_ratio"] == pytest.approx(1 / 3)
        assert summary["avg_trace_length"] == 5.0
        assert summary["total_events"] == 30
        assert "6 traces, 5 activities" in capsys.readouterr().out

    def test_xes_auto_detected(self, tmp_path):
        source = tmp_path / "tiny.xes"
        source.write_text(XES_DOC)
        out = tmp_path / "out"
        assert run(["stats", "--input", source, "--out-dir", out]) == 0
        summary = json.loads((out / "stats.json").read_text())
        assert summary["trace_count"] == 2 and summary["activity_count"] == 2


class TestEmbed:
    def test_ac_multiset_csv(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "embed", "--input", worked_csv, "--out-dir", out,
            "--method", "ac", "--window", "3",
        ])
        assert code == 0
        lines = (out / "embedding.csv").read_text().splitlines()
        assert lines[0] == 'activity,"{__PAD__,b}","{a,c}","{b,d}","{c,e}","{__PAD__,d}","{a,d}","{d,e}"'
        assert lines[1] == "a,5,0,0,0,1,0,0"
        meta = json.loads((out / "embedding.meta.json").read_text())
        assert meta["method"] == "ac" and meta["context"] == "mset"
        assert meta["rows"] == 5 and meta["columns"] == 7

    def test_substitution_defaults_to_sequences(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "embed", "--input", worked_csv, "--out-dir", out,
            "--method", "substitution",
        ])
        assert code == 0
        lines = (out / "embedding.csv").read_text().splitlines()
        assert lines[0] == "activity,a,b,c,d,e"
        meta = json.loads((out / "embedding.meta.json").read_text())
        assert meta["flavor"] == "substitution"
        assert meta["cells"] == "score"

    def test_substitution_over_multisets_fails(self, worked_csv, tmp_path, capsys):
        code = run([
            "embed", "--input", worked_csv, "--out-dir", tmp_path / "out",
            "--method", "substitution", "--context", "mset",
        ])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_weighted_embed(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "embed", "--input", worked_csv, "--out-dir", out,
            "--method", "ac", "--weight", "ppmi", "--context", "seq",
        ])
        assert code == 0
        meta = json.loads((out / "embedding.meta.json").read_text())
        assert meta["weighting"] == "ppmi" and meta["columns"] == 10


class TestDistances:
    def test_cosine_csv_and_sidecar(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "distances", "--input", worked_csv, "--out-dir", out,
            "--method", "ac",
        ])
        assert code == 0
        lines = (out / "distances.csv").read_text().splitlines()
        assert lines[0] == "activity,a,b,c,d,e"
        c_row = lines[3].split(",")
        assert c_row[0] == "c"
        assert float(c_row[4]) == pytest.approx(0.8075499102701247, abs=1e-12)
        meta = json.loads((out / "distances.meta.json").read_text())
        assert meta["flavor"] == "cosine" and meta["cells"] == "distance"
        assert meta["activities"] == ["a", "b", "c", "d", "e"]

    def test_substitution_distances_are_scores(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "distances", "--input", worked_csv, "--out-dir", out,
            "--method", "substitution",
        ])
        assert code == 0
        meta = json.loads((out / "distances.meta.json").read_text())
        assert meta["cells"] == "score"


class TestIntrinsic:
    def test_small_run(self, tmp_path):
        rows = ["case,activity"]
        for case in range(1, 13):
            rows += [f"{case},{act}" for act in ["a", "b", "c", "b"]]
        source = tmp_path / "log.csv"
        source.write_text("\n".join(rows) + "\n")
        out = tmp_path / "out"
        code = run([
            "intrinsic", "--input", source, "--out-dir", out,
            "--method", "aa", "--context", "mset", "--weight", "none",
            "--samples", "2", "--seed", "1",
        ])
        assert code == 0
        scores = json.loads((out / "intrinsic_scores.json").read_text())
        # samples=2 keeps 2 subsets for r=1 and r=2, and the single r=3 subset.
        assert len(scores) == (2 + 2 + 1) * 4
        assert set(scores[0]) == {
            "method", "context", "weighting", "window",
            "r", "w", "sample", "i_comp", "i_nn", "i_prec", "i_tri",
        }
        agg = (out / "intrinsic_aggregate.csv").read_text().splitlines()
        assert agg[0].startswith("method,context,weighting,window,")
        assert len(agg) == 2
        assert not (out / "intrinsic_failures.json").exists()

    def test_invalid_single_config_rejected(self, worked_csv, tmp_path, capsys):
        code = run([
            "intrinsic", "--input", worked_csv, "--out-dir", tmp_path / "out",
            "--method", "substitution", "--context", "mset", "--weight", "none",
        ])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_grid_value(self, worked_csv, tmp_path, capsys):
        code = run([
            "intrinsic", "--input", worked_csv, "--out-dir", tmp_path / "out",
            "--method", "word2vec",
        ])
        assert code == 2
        assert "word2vec" in capsys.readouterr().err


class TestBench:
    def test_grid_report(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "bench", "--input", worked_csv, "--out-dir", out,
            "--method", "aa,ac", "--context", "mset", "--weight", "none,pmi",
            "--window", "2,3", "--reps", "1",
        ])
        assert code == 0
        payload = json.loads((out / "bench_report.json").read_text())
        assert payload["repetitions"] == 1
        assert len(payload["records"]) == 8

    def test_invalid_single_config_becomes_error_record(self, worked_csv, tmp_path):
        out = tmp_path / "out"
        code = run([
            "bench", "--input", worked_csv, "--out-dir", out,
            "--method", "substitution", "--context", "mset", "--weight", "none",
            "--reps", "1",
        ])
        assert code == 1
        payload = json.loads((out / "bench_report.json").read_text())
        assert len(payload["records"]) == 1
        assert "error" in payload["records"][0]


class TestUsage:
    def test_missing_input_flag(self, capsys):
        assert run(["stats"]) == 2
        capsys.readouterr()

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2
        capsys.readouterr()

    def test_empty_log_file(self, tmp_path, capsys):
        source = tmp_path / "empty.csv"
        source.write_text("case,activity\n")
        code = run(["stats", "--input", source, "--out-dir", tmp_path / "out"])
        assert code == 2
        assert "empty" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        code = run(["stats", "--input", tmp_path / "nope.csv", "--out-dir", tmp_path])
        assert code == 2
        capsys.readouterr()
