import json
import os
import subprocess
import sys

import pytest

from charprime.cli import main

CLI = [sys.executable, "-m", "charprime.cli"]


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("CHARPRIME_WORKING_DIGITS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + list(args), capture_output=True, text=True, env=env)


def test_compute_w1(capsys):
    assert main(["compute", "W", "1", "--digits", "7"]) == 0
    out = capsys.readouterr().out
    assert "W(1) = 0.3349813" in out
    assert "method: log-assembly" in out
    assert "rigorous: yes" in out


def test_compute_beta3(capsys):
    assert main(["compute", "beta", "3", "--digits", "7"]) == 0
    out = capsys.readouterr().out
    assert "beta(3) = 0.9689461" in out
    assert "method: closed-form" in out


def test_compute_w13(capsys):
    assert main(["compute", "W", "13"]) == 0
    out = capsys.readouterr().out
    assert "W(13) = 0.0000006" in out
    assert "method: beta-complement" in out


def test_compute_w3_euler_comma(capsys):
    assert main(["compute", "W", "3", "--digits", "7",
                 "--decimal-style", "euler-comma"]) == 0
    assert "W(3) = 0,0322525" in capsys.readouterr().out


def test_compute_uncertifiable_exits_nonzero(capsys):
    code = main(["compute", "W", "3", "--digits", "25", "--primes", "50",
                 "--working-digits", "60"])
    assert code == 2
    assert "cannot certify" in capsys.readouterr().err


def test_compute_rejects_even_exponent(capsys):
    assert main(["compute", "W", "4"]) == 2
    assert main(["compute", "beta", "2"]) == 2


def test_guard_digit_validation(capsys):
    assert main(["compute", "W", "3", "--digits", "45"]) == 2
    assert "guard" in capsys.readouterr().err


def test_reproduce_single_table_exit_zero():
    proc = run_cli("reproduce", "--table", "s13")
    assert proc.returncode == 0
    assert "erratum" in proc.stdout


def test_reproduce_all_json_deterministic():
    a = run_cli("reproduce", "--table", "all", "--format", "json")
    b = run_cli("reproduce", "--table", "all", "--format", "json")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    payload = json.loads(a.stdout)
    assert [t["table_id"] for t in payload] == ["s12", "s13", "s21", "s23_26", "s28"]


def test_reproduce_csv(capsys):
    assert main(["reproduce", "--table", "s21", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("label,printed,recomputed,delta,verdict")


def test_env_var_sets_working_digits():
    proc = run_cli("compute", "beta", "3", "--digits", "12",
                   env_extra={"CHARPRIME_WORKING_DIGITS": "25"})
    assert proc.returncode == 0
    proc = run_cli("compute", "beta", "3", "--digits", "12",
                   env_extra={"CHARPRIME_WORKING_DIGITS": "20"})
    assert proc.returncode == 2      # 20 leaves no guard margin for 12 digits
    proc = run_cli("compute", "beta", "3", "--digits", "12",
                   env_extra={"CHARPRIME_WORKING_DIGITS": "twenty"})
    assert proc.returncode != 0


def test_cli_flag_overrides_env():
    proc = run_cli("compute", "beta", "3", "--digits", "12", "--working-digits", "30",
                   env_extra={"CHARPRIME_WORKING_DIGITS": "20"})
    assert proc.returncode == 0


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "error-bound-soundness: PASS" in out
    assert "verify: all groups pass" in out


def test_verify_small_working_digits(capsys):
    assert main(["verify", "--working-digits", "15"]) == 0
    assert "all groups pass" in capsys.readouterr().out


def test_verify_shallow_primes(capsys):
    assert main(["verify", "--primes", "1"]) == 0
    out = capsys.readouterr().out
    assert "sieved-tail-oracle: PASS" in out


def test_verify_json(capsys):
    assert main(["verify", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_passed"] is True
    assert {g["group"] for g in payload["groups"]} >= {
        "error-bound-soundness", "character-multiplicativity", "master-identity"}


def test_scan_default_value_finds_nothing(capsys):
    assert main(["scan"]) == 0
    assert "no candidate found" in capsys.readouterr().out


def test_scan_constructed_value(capsys):
    # ln(pi) - ln(2) to 20 places.
    assert main(["scan", "--value", "0.45158270528945486473",
                 "--max-den", "10", "--tol", "1e-9"]) == 0
    out = capsys.readouterr().out
    assert "N = 2/1" in out


def test_scan_bad_tol(capsys):
    assert run_cli("scan", "--tol", "nope").returncode != 0


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.strip()


def test_usage_error_on_missing_command():
    proc = run_cli()
    assert proc.returncode == 2
