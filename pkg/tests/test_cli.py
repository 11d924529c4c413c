import json

import numpy as np
import pytest

from dea_rts import cli
from dea_rts.errors import DataError
from dea_rts.report import efficiency_rows, parse_report_csv, render_report, result_to_dict
from dea_rts.rts import classify_all
from dea_rts.tables import TABLE1_CSV, dataset_to_csv, parse_csv, table1


@pytest.fixture
def table1_file(tmp_path):
    path = tmp_path / "table1.csv"
    path.write_text(TABLE1_CSV)
    return str(path)


def run(*argv, env=None):
    return cli.run_command(list(argv), environ=env or {})


class TestParseCsv:
    def test_table1(self):
        d = parse_csv(TABLE1_CSV)
        assert (d.n, d.m, d.s) == (6, 2, 1)
        assert d.input_labels == ("x1", "x2") and d.output_labels == ("y",)
        np.testing.assert_array_equal(d.X[:, 3], [9, 1.5])

    def test_column_order_is_free(self):
        d = parse_csv("dmu,out:y,in:x\nA,2,1\nB,3,4\n")
        np.testing.assert_array_equal(d.X, [[1, 4]])
        np.testing.assert_array_equal(d.Y, [[2, 3]])

    @pytest.mark.parametrize("text, fragment", [
        ("dmu,in:x,out:y\n", "empty dataset"),
        ("", "empty file"),
        ("dmu,in:x,out:y\nA,-1,2\n", "row 2, column 2"),
        ("dmu,in:x,out:y\nA,abc,2\n", "not a number"),
        ("dmu,in:x,y\nA,1,2\n", "prefix"),
        ("name,in:x,out:y\nA,1,2\n", "'dmu'"),
        ("dmu,in:x,out:y\nA,1,2\nA,2,3\n", "duplicate"),
        ("dmu,in:x,out:y\nA,1\n", "cells"),
        ("dmu,in:x,in:z\nA,1,2\n", "at least one"),
        ("dmu,in:x,out:y\nA,nan,2\n", "non-finite"),
    ])
    def test_errors(self, text, fragment):
        with pytest.raises(DataError, match=fragment):
            parse_csv(text)

    def test_round_trip_fixture(self):
        d = table1()
        again = parse_csv(dataset_to_csv(d))
        assert again.names == d.names
        np.testing.assert_array_equal(again.X, d.X)
        np.testing.assert_array_equal(again.Y, d.Y)
        assert dataset_to_csv(d) == TABLE1_CSV


class TestRender:
    def test_table_shows_four_decimals(self, t1):
        text = render_report(classify_all(t1))
        row_d = next(l for l in text.splitlines() if l.startswith("D "))
        assert "0.6667" in row_d

    def test_empty_csv(self):
        assert render_report([], "csv").strip().split(",")[0] == "dmu"
        assert len(render_report([], "csv").strip().splitlines()) == 1

    def test_json_grs(self, t1):
        doc = json.loads(render_report(classify_all(t1), "json"))
        e = next(r for r in doc["results"] if r["dmu"] == "E")
        assert [list(x) for x in e["grs"]] == [["A"], ["B"]]
        weights = [next(iter(x.values())) for x in e["grs"]]
        assert all(w > 0 for w in weights) and sum(weights) == pytest.approx(1)
        assert set(doc["results"][0]) == {"dmu", "group", "theta_bcc", "theta_ccr", "lambda_sum",
                                           "rts", "grs", "projection", "nearest_mpss", "diagnostics"}

    def test_csv_round_trip(self, t1):
        results = classify_all(t1, with_mpss=True)
        assert parse_report_csv(render_report(results, "csv")) == [result_to_dict(r) for r in results]

    def test_formats_agree(self, t1):
        results = classify_all(t1)
        table = {l.split()[0]: l.split()[1] for l in render_report(results).splitlines()[2:] if l}
        js = {r["dmu"]: r["rts"] for r in json.loads(render_report(results, "json"))["results"]}
        cs = {r["dmu"]: r["rts"] for r in parse_report_csv(render_report(results, "csv"))}
        assert table == js == cs

    def test_efficiency_formats(self, t1):
        rows = efficiency_rows(t1, "bcc")
        doc = json.loads(render_report(rows, "json"))
        assert [r["dmu"] for r in doc["results"]] == list("ABCDEF")
        assert "0.6667" in render_report(rows)
        assert render_report(rows, "csv").startswith("dmu,model,theta")

    def test_unknown_format(self, t1):
        with pytest.raises(ValueError):
            render_report([], "xml")


class TestRunCommand:
    def test_rts(self, table1_file):
        code, out, _ = run("rts", "--input", table1_file)
        assert code == 0
        rows = [l.split()[:2] for l in out.splitlines()[2:] if l]
        assert rows == [["A", "I"], ["B", "C"], ["C", "C"], ["D", "C"], ["E", "I"], ["F", "I"]]

    def test_rts_filter_and_mpss(self, table1_file):
        code, out, _ = run("rts", "--input", table1_file, "--with-mpss", "--dmu", "A", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and [r["dmu"] for r in doc["results"]] == ["A"]
        assert doc["results"][0]["nearest_mpss"]["outputs"] == [pytest.approx(8 / 3)]

    def test_demo_json(self):
        code, out, _ = run("demo", "--format", "json")
        assert code == 0
        assert len(json.loads(out)["results"]) == 6

    def test_demo_table(self):
        code, out, _ = run("demo")
        assert code == 0 and "BCC model" in out and "Returns to scale" in out

    def test_grs(self, table1_file):
        code, out, _ = run("grs", "--input", table1_file, "--dmu", "E")
        assert code == 0 and out.splitlines()[0] == "E: {A, B}"

    def test_grs_json(self, table1_file):
        code, out, _ = run("grs", "--input", table1_file, "--dmu", "F", "--format", "json")
        assert [list(x)[0] for x in json.loads(out)["grs"]] == ["A", "C"]

    def test_mpss(self, table1_file):
        code, out, _ = run("mpss", "--input", table1_file, "--dmu", "A")
        assert code == 0 and "5.3333" in out and "2.6667" in out

    def test_efficiency(self, table1_file):
        code, out, _ = run("efficiency", "--model", "ccr", "--input", table1_file, "--format", "csv")
        assert code == 0 and out.splitlines()[1].startswith("A,ccr,0.5")

    def test_unknown_subcommand(self):
        code, _, err = run("frobnicate")
        assert code == 1 and "usage" in err

    def test_unknown_flag(self, table1_file):
        code, _, err = run("rts", "--input", table1_file, "--bogus")
        assert code == 1 and "usage" in err

    def test_bad_data_never_reaches_solver(self, tmp_path, monkeypatch):
        import dea_rts.lp

        def boom(*a, **k):
            raise AssertionError("solver called")

        monkeypatch.setattr(dea_rts.lp, "solve", boom)
        path = tmp_path / "bad.csv"
        path.write_text("dmu,in:x,out:y\nA,-1,2\n")
        code, _, err = run("rts", "--input", str(path))
        assert code == 1 and "negative" in err

    def test_missing_file(self, tmp_path):
        code, _, err = run("rts", "--input", str(tmp_path / "nope.csv"))
        assert code == 1 and "cannot read" in err

    def test_unknown_dmu(self, table1_file):
        code, _, err = run("grs", "--input", table1_file, "--dmu", "Z")
        assert code == 1 and "unknown DMU" in err

    def test_tolerance_env(self, table1_file):
        code, out, _ = run("rts", "--input", table1_file, env={"DEA_TOLERANCE": "1e-4"})
        assert code == 0
        code, _, err = run("rts", "--input", table1_file, env={"DEA_TOLERANCE": "-1"})
        assert code == 1 and "DEA_TOLERANCE" in err

    def test_diagnostic_exit_code(self, table1_file, monkeypatch):
        from dea_rts import rts
        from dea_rts.errors import AmbiguousClassificationError

        def fail(*a, **k):
            raise AmbiguousClassificationError("forced")

        monkeypatch.setattr(rts, "classify_at_point", fail)
        code, out, _ = run("rts", "--input", table1_file)
        assert code == 2 and "forced" in out

    def test_main_writes_output(self, capsys):
        assert cli.main(["demo", "--format", "csv"]) == 0
        assert capsys.readouterr().out.startswith("dmu,group")
