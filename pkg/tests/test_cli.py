"""Command-line behavior: output shape, exit codes, full-precision parsing."""

import pytest

from mproots.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_cli_expect_usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as ei:
        main(list(argv))
    assert ei.value.code == 2
    return capsys.readouterr().err


class TestRunCommand:
    def test_trace_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--method", "newton", "--problem", "f1",
            "--digits", "100", "--iters", "3",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("method=newton problem=f1")
        assert len(lines) == 2 + 4  # header + columns + x0..x3

    def test_x0_parsed_at_full_precision(self, capsys):
        # 40 significant digits survive into the trace, which a binary float
        # round-trip could not provide
        x0 = "0.3500000000000000000000000000000000000001"
        code, out, _ = run_cli(
            capsys, "run", "--method", "newton", "--problem", "f1",
            "--digits", "100", "--iters", "1", "--x0", x0,
        )
        assert code == 0
        assert "+0.3500000000000000000000000000000000000001e0" in out

    def test_unknown_method_rejected_before_compute(self, capsys):
        err = run_cli_expect_usage_error(
            capsys, "run", "--method", "9.9", "--problem", "f1", "--digits", "60"
        )
        assert "unknown method id" in err

    def test_multiple_methods_rejected(self, capsys):
        err = run_cli_expect_usage_error(
            capsys, "run", "--method", "2.14,2.16", "--problem", "f1",
            "--digits", "60",
        )
        assert "exactly one method" in err


class TestTableCommand:
    def test_markdown_table(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "table", "--problem", "f1", "--digits", "200",
            "--iters", "1", "--methods", "2.14,3.5",
        )
        assert code == 0
        assert "| M | W-F |" in out
        assert "| (2.14) | (2.13) |" in out
        assert "| (3.5) | (3.6) |" in out

    def test_csv_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "table", "--problem", "f4", "--digits", "200",
            "--iters", "2", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 7  # header + six method rows
        assert lines[0].startswith("method,weight,err1_mant")

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run_cli(
            capsys, "table", "--problem", "f1", "--digits", "150", "--iters", "1",
            "--format", "csv", "--output", str(target),
        )
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("method,weight")

    def test_unknown_problem(self, capsys):
        err = run_cli_expect_usage_error(
            capsys, "table", "--problem", "f9", "--digits", "60"
        )
        assert "unknown problem id" in err

    def test_digits_below_minimum(self, capsys):
        err = run_cli_expect_usage_error(
            capsys, "table", "--problem", "f1", "--digits", "10"
        )
        assert "digits" in err


class TestVerifyTheorem:
    def test_default_conditions_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorem")
        assert code == 0
        assert "R4 = 0" in out and "R7 = 0" in out
        assert "c2 cubed" in out
        assert "sub-eighth coefficients vanish" in out

    def test_broken_value_condition(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorem", "--h0", "0", "--h1", "2")
        assert code == 1
        assert "R4 = 4*c2^3 - c2*c3" in out

    def test_broken_slope_condition(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorem", "--h0", "1", "--h1", "0")
        assert code == 1
        assert "R4 = 0" in out
        assert "R7 = " in out and "R7 = 0" not in out

    def test_rational_arguments(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorem", "--h0", "1/2", "--h1", "2")
        assert code == 1

    def test_bad_fraction(self, capsys):
        run_cli_expect_usage_error(capsys, "verify-theorem", "--h0", "abc")


class TestVerifyOrder:
    def test_newton_order_two(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-order", "--methods", "newton", "--problems", "f1",
            "--iters", "6", "--digits", "300",
        )
        assert code == 0
        assert "vs order 2 -- ok" in out

    def test_maheshwari_order_four(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-order", "--methods", "2.1", "--problems", "f2",
            "--iters", "5", "--digits", "600",
        )
        assert code == 0
        assert "vs order 4 -- ok" in out

    def test_nonoptimal_order_eight(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-order", "--methods", "2.2", "--problems", "f2",
            "--iters", "4", "--digits", "2000",
        )
        assert code == 0
        assert "vs order 8 -- ok" in out

    def test_documented_skip(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-order", "--methods", "3.1", "--problems", "f2",
            "--digits", "7000",
        )
        assert code == 0
        assert "skipped" in out


class TestValidateWeights:
    def test_builtin_weights_pass(self, capsys):
        code, out, _ = run_cli(capsys, "validate-weights", "--digits", "150")
        assert code == 0
        assert out.count("pass") == 3

    def test_unknown_weight(self, capsys):
        run_cli_expect_usage_error(
            capsys, "validate-weights", "--weights", "w9", "--digits", "60"
        )


class TestDeterminism:
    def test_repeated_invocations_are_byte_identical(self, capsys):
        outs = []
        for _ in range(2):
            code, out, _ = run_cli(
                capsys, "table", "--problem", "f3", "--digits", "300",
                "--iters", "2", "--format", "csv",
            )
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]


class TestEnvironment:
    def test_digits_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("MPROOTS_DIGITS", "60")
        code, out, _ = run_cli(
            capsys, "run", "--method", "newton", "--problem", "f1", "--iters", "1"
        )
        assert code == 0
        assert "digits=60" in out

    def test_backend_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--method", "newton", "--problem", "f1",
            "--digits", "60", "--iters", "1", "--backend", "decimal",
        )
        assert code == 0

    def test_unknown_backend(self, capsys):
        err = run_cli_expect_usage_error(
            capsys, "run", "--method", "newton", "--problem", "f1",
            "--digits", "60", "--backend", "sympy",
        )
        assert "backend" in err
