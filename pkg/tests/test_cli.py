"""End-to-end CLI tests against the bundled data files."""

import pytest

from qamlab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


ARCHS = ["table1_none", "table1_merge", "table1_merge_u2", "table1_merge_u2_u4"]


class TestExplore:
    def args(self, *extra):
        return ["explore", str(cli.data_path("qam.design"))] + [
            str(cli.data_path(f"{a}.arch")) for a in ARCHS
        ] + list(extra)

    def test_table(self, capsys):
        code, out, err = run(capsys, *self.args())
        assert code == cli.EXIT_OK
        lines = out.splitlines()
        assert lines[0].split() == [
            "config_id", "latency_cycles", "latency_ns", "mbaud", "mbps",
            "rel_area", "goal30",
        ]
        assert len(lines) == 5
        assert lines[1].split()[0:3] == ["table1_none", "69", "690"]
        assert lines[4].split()[1] == "15"
        assert lines[4].split()[-1] == "yes"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, *self.args("--format", "csv"))
        assert code == cli.EXIT_OK
        rows = [l.split(",") for l in out.splitlines()]
        assert rows[0][0] == "config_id"
        assert [r[1] for r in rows[1:]] == ["69", "35", "19", "15"]
        assert [r[-1] for r in rows[1:]] == ["no", "no", "yes", "yes"]

    def test_clock_override(self, capsys):
        code, out, _ = run(capsys, *self.args("--clock", "5", "--format", "csv"))
        assert code == cli.EXIT_OK
        row = out.splitlines()[1].split(",")
        assert row[2] == "345"          # 69 cycles at 5 ns

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.csv"
        code, out, _ = run(capsys, *self.args("--format", "csv", "--out", str(target)))
        assert code == cli.EXIT_OK
        assert out == ""
        assert target.read_text().startswith("config_id,")

    def test_missing_file_is_input_error(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "explore", str(tmp_path / "nope.design"),
            str(cli.data_path("table1_none.arch")),
        )
        assert code == cli.EXIT_INPUT
        assert "error:" in err

    def test_bad_arch_is_input_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.arch"
        bad.write_text("unroll ghost 2\n")
        code, _, err = run(
            capsys, "explore", str(cli.data_path("qam.design")), str(bad)
        )
        assert code == cli.EXIT_INPUT
        assert "ghost" in err


class TestSimulate:
    def test_bundled_scenario_converges(self, capsys):
        code, out, err = run(
            capsys, "simulate", str(cli.data_path("scenario_s.trial"))
        )
        assert code == cli.EXIT_OK
        assert err == ""
        assert "converged=yes" in out
        assert "errors=0" in out

    def test_csv_format(self, capsys):
        code, out, _ = run(
            capsys, "simulate", str(cli.data_path("scenario_s.trial")),
            "--format", "csv",
        )
        assert code == cli.EXIT_OK
        assert out.startswith("block_index,mse,cumulative_errors\n")

    def test_unconverged_demand_fails(self, capsys, tmp_path):
        trial = tmp_path / "hopeless.trial"
        trial.write_text(
            "taps 1.05,0; 1.05,0\n"
            "seed 5\n"
            "train 0\n"          # no training: cold start cannot meet ser 0
            "measure 256\n"
            "block 64\n"
            "require_converged true\n"
        )
        code, out, err = run(capsys, "simulate", str(trial))
        assert code == cli.EXIT_NOT_CONVERGED
        assert "converged=no" in out
        assert "error:" in err

    def test_parse_error(self, capsys, tmp_path):
        trial = tmp_path / "bad.trial"
        trial.write_text("taps 1,0\nwibble 3\n")
        code, _, err = run(capsys, "simulate", str(trial))
        assert code == cli.EXIT_INPUT
        assert "wibble" in err


class TestWidths:
    def test_counter(self, capsys):
        code, out, _ = run(
            capsys, "widths", str(cli.data_path("counter_n1024.expr"))
        )
        assert code == cli.EXIT_OK
        assert out == "leaf range=[0,1023] width=10 unsigned\n"

    def test_cast17(self, capsys):
        code, out, _ = run(capsys, "widths", str(cli.data_path("cast17.expr")))
        assert code == cli.EXIT_OK
        assert out.splitlines()[0].startswith("cast[s17]")
        assert "width=17" in out.splitlines()[0]

    def test_bad_expr(self, capsys, tmp_path):
        expr = tmp_path / "bad.expr"
        expr.write_text("(frob 1 2)")
        code, _, err = run(capsys, "widths", str(expr))
        assert code == cli.EXIT_INPUT
        assert "error:" in err


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["discombobulate"])
    assert exc.value.code == 2
