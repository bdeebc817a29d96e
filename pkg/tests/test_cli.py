import json

import pytest

from simprank.cli import main
from simprank.data import parse_selection_file

from support import TOY_CANDIDATES

TOY = str(TOY_CANDIDATES)


def run(*argv) -> int:
    return main(list(argv))


class TestSelectionCommands:
    @pytest.mark.parametrize("command,method", [
        ("firstbeam", "first-beam"),
        ("oracle", "oracle"),
        ("cosine", "cosine"),
    ])
    def test_selection_commands_write_parseable_files(self, tmp_path, command, method):
        out = tmp_path / "sel.jsonl"
        assert run(command, "--input", TOY, "--output", str(out)) == 0
        sels = parse_selection_file(str(out))
        assert len(sels) == 20
        assert all(s.method == method for s in sels)

    def test_rerank_with_lambdas(self, tmp_path):
        out = tmp_path / "sel.jsonl"
        assert run("rerank", "--input", TOY, "--lambdas", "0.5,0.0,0.1,0.6", "--output", str(out)) == 0
        sels = parse_selection_file(str(out))
        assert all(s.method == "noisy-channel" for s in sels)

    def test_rerank_rejects_bad_lambdas(self, tmp_path, capsys):
        out = tmp_path / "sel.jsonl"
        assert run("rerank", "--input", TOY, "--lambdas", "1,2,3", "--output", str(out)) == 1
        assert "lambdas" in capsys.readouterr().err

    def test_rerank_rejects_negative_lambda(self, tmp_path):
        out = tmp_path / "sel.jsonl"
        assert run("rerank", "--input", TOY, "--lambdas", "1,0,0,-1", "--output", str(out)) == 1

    def test_missing_input_is_io_error(self, tmp_path):
        out = tmp_path / "sel.jsonl"
        assert run("firstbeam", "--input", str(tmp_path / "nope.jsonl"), "--output", str(out)) == 2

    def test_invalid_candidate_file_is_validation_error(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "x"}\n', encoding="utf-8")
        out = tmp_path / "sel.jsonl"
        assert run("firstbeam", "--input", str(bad), "--output", str(out)) == 1


class TestGridsearchCommand:
    def test_writes_result_and_table(self, tmp_path, capsys):
        res = tmp_path / "grid.json"
        table = tmp_path / "grid.tsv"
        code = run(
            "gridsearch", "--input", TOY,
            "--grid-min", "0", "--grid-max", "1", "--grid-step", "0.5",
            "--output", str(res), "--full-table", str(table),
        )
        assert code == 0
        obj = json.loads(res.read_text(encoding="utf-8"))
        assert obj["n_evaluated"] == 3**4
        assert len(obj["best_lambda"]) == 4
        assert len(table.read_text(encoding="utf-8").splitlines()) == 1 + 3**4
        assert "best lambda" in capsys.readouterr().out


class TestEvaluateCommand:
    def test_report_with_deltas(self, tmp_path, capsys):
        base = tmp_path / "base.jsonl"
        nc = tmp_path / "nc.jsonl"
        assert run("firstbeam", "--input", TOY, "--output", str(base)) == 0
        assert run("rerank", "--input", TOY, "--lambdas", "0.5,0.0,0.1,0.6", "--output", str(nc)) == 0
        report = tmp_path / "report.json"
        code = run(
            "evaluate", "--candidates", TOY,
            "--selections", f"base={base}", f"nc={nc}",
            "--baseline", "base", "--output", str(report),
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "(+" in out or "(-" in out
        obj = json.loads(report.read_text(encoding="utf-8"))
        assert obj["baseline"] == "base"
        assert {s["system"] for s in obj["systems"]} == {"base", "nc"}

    def test_duplicate_system_name_rejected(self, tmp_path):
        base = tmp_path / "base.jsonl"
        assert run("firstbeam", "--input", TOY, "--output", str(base)) == 0
        report = tmp_path / "report.json"
        assert run(
            "evaluate", "--candidates", TOY,
            "--selections", f"x={base}", f"x={base}",
            "--output", str(report),
        ) == 1


class TestAbCommands:
    def test_absample_then_tally_round_trip(self, tmp_path, capsys):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        assert run("rerank", "--input", TOY, "--lambdas", "0.5,0.0,0.1,0.6", "--output", str(a)) == 0
        assert run("firstbeam", "--input", TOY, "--output", str(b)) == 0
        sample = tmp_path / "sample.json"
        key = tmp_path / "key.json"
        code = run(
            "absample", "--candidates", TOY,
            "--a", f"nc={a}", "--b", f"base={b}",
            "--n", "8", "--seed", "13",
            "--sample", str(sample), "--key", str(key),
        )
        assert code == 0
        sample_obj = json.loads(sample.read_text(encoding="utf-8"))
        assert len(sample_obj["items"]) == 8

        judgments = tmp_path / "j.jsonl"
        with judgments.open("w", encoding="utf-8") as fh:
            for i, item in enumerate(sample_obj["items"]):
                choice = ("left", "right", "equal")[i % 3]
                fh.write(json.dumps({"id": item["id"], "choice": choice}) + "\n")
        capsys.readouterr()
        assert run("tally", "--judgments", str(judgments), "--key", str(key)) == 0
        out = capsys.readouterr().out
        assert "Total" in out and "Equal" in out

    def test_tally_pools_multiple_files(self, tmp_path, capsys):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        run("rerank", "--input", TOY, "--lambdas", "0.5,0.0,0.1,0.6", "--output", str(a))
        run("firstbeam", "--input", TOY, "--output", str(b))
        sample, key = tmp_path / "s.json", tmp_path / "k.json"
        run("absample", "--candidates", TOY, "--a", str(a), "--b", str(b),
            "--n", "4", "--seed", "5", "--sample", str(sample), "--key", str(key))
        items = json.loads(sample.read_text(encoding="utf-8"))["items"]
        j1, j2 = tmp_path / "j1.jsonl", tmp_path / "j2.jsonl"
        j1.write_text("".join(json.dumps({"id": it["id"], "choice": "left"}) + "\n" for it in items))
        j2.write_text("".join(json.dumps({"id": it["id"], "choice": "right"}) + "\n" for it in items))
        pooled_json = tmp_path / "pooled.json"
        capsys.readouterr()
        assert run("tally", "--judgments", str(j1), str(j2), "--key", str(key),
                   "--output", str(pooled_json)) == 0
        out = capsys.readouterr().out
        assert "pooled" in out
        obj = json.loads(pooled_json.read_text(encoding="utf-8"))
        totals = {row["label"]: row["total"] for row in obj["rows"]}
        # every item judged once per side across the two files
        assert sum(totals.values()) == 2 * len(items)

    def test_absample_insufficient_pool_fails_cleanly(self, tmp_path):
        a = tmp_path / "a.jsonl"
        run("firstbeam", "--input", TOY, "--output", str(a))
        sample, key = tmp_path / "s.json", tmp_path / "k.json"
        # identical systems leave no differing outputs
        assert run("absample", "--candidates", TOY, "--a", str(a), "--b", str(a),
                   "--n", "4", "--seed", "1", "--sample", str(sample), "--key", str(key)) == 1
