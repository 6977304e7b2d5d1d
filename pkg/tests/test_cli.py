"""Command-line interface: output bytes, exit codes, and their faithfulness."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from longcycle import cli
from longcycle.cli import main
from longcycle.formulas import bicolored_tree_count

SIX_POINT = [
    "--pi1", "4,5|1,2,3,6",
    "--pi2", "1,3,4,5|2,6",
    "--pi3", "2|5|1,3,4,6",
    "--alpha1", "(1 2 3 6)",
    "--alpha2", "(1 5 3)",
]

TEN_POINT = [
    "--pi1", "3,4,6,7|1,2,5,8,9,10",
    "--pi2", "6,8|3,9|1,2,4,5,7,10",
    "--pi3", "1|2|3|4|5|6|7|8|9|10",
    "--alpha1", "(1 8 9 10)(2 5)(3 4 6 7)",
    "--alpha2", "(1 5 4 2 7)",
]


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCoeff:
    def test_both_modes_match(self, capsys):
        code, out, _ = run(
            capsys, "coeff", "--kind", "k3", "--lambda", "2,1,1,1",
            "--mu", "2,2,1", "--nu", "2,1,1,1", "--mode", "both",
        )
        assert (code, out) == (0, "25 25 MATCH\n")

    def test_closed_two_factor(self, capsys):
        code, out, _ = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "2,1",
            "--mu", "2,1", "--mode", "closed",
        )
        assert (code, out) == (0, "3\n")

    def test_default_mode_is_brute(self, capsys):
        code, out, _ = run(
            capsys, "coeff", "--kind", "k3", "--lambda", "1", "--mu", "1",
            "--nu", "1",
        )
        assert (code, out) == (0, "1\n")

    def test_json_output(self, capsys):
        code, out, _ = run(
            capsys, "coeff", "--kind", "c3", "--lambda", "2", "--mu", "2",
            "--nu", "2", "--mode", "both", "--json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload == {
            "brute": 4,
            "closed": 4,
            "kind": "c3",
            "lambda": [2],
            "match": True,
            "mode": "both",
            "mu": [2],
            "nu": [2],
        }
        assert list(payload) == sorted(payload)

    def test_mismatch_reported_and_exit_1(self, capsys, monkeypatch):
        # a known-bad closed form must surface as MISMATCH, not silence
        monkeypatch.setattr(cli, "c3_closed", lambda lam, mu, nu: 999)
        code, out, _ = run(
            capsys, "coeff", "--kind", "c3", "--lambda", "2", "--mu", "2",
            "--nu", "2", "--mode", "both",
        )
        assert (code, out) == (1, "4 999 MISMATCH\n")

    def test_no_closed_form_for_k2(self, capsys):
        code, _, err = run(
            capsys, "coeff", "--kind", "k2", "--lambda", "2,1", "--mu", "3",
            "--mode", "closed",
        )
        assert code == 2
        assert "k2" in err

    def test_bad_partition_syntax(self, capsys):
        code, _, err = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "2,x", "--mu", "2,1",
        )
        assert code == 2
        assert "error:" in err

    def test_unequal_weights(self, capsys):
        code, _, _ = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "3", "--mu", "2",
        )
        assert code == 2

    def test_missing_nu_for_three_factor(self, capsys):
        code, _, _ = run(
            capsys, "coeff", "--kind", "c3", "--lambda", "2", "--mu", "2",
        )
        assert code == 2

    def test_nu_rejected_for_two_factor(self, capsys):
        code, _, _ = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "2", "--mu", "2",
            "--nu", "2",
        )
        assert code == 2

    def test_nonplanar_closed_three_factor_rejected(self, capsys):
        code, _, err = run(
            capsys, "coeff", "--kind", "k3", "--lambda", "2,1", "--mu", "2,1",
            "--nu", "2,1", "--mode", "closed",
        )
        assert code == 2
        assert "genus" in err

    def test_guard_exceeded(self, capsys):
        code, _, err = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "5,4", "--mu", "5,4",
        )
        assert code == 3
        assert "guard" in err

    def test_force_lifts_guard(self, capsys):
        code, out, _ = run(
            capsys, "coeff", "--kind", "c2", "--lambda", "5,4", "--mu", "5,4",
            "--force",
        )
        assert (code, out) == (0, "317520\n")

    def test_argparse_failure_is_exit_2(self, capsys):
        assert main(["coeff", "--kind", "zzz", "--lambda", "1", "--mu", "1"]) == 2
        capsys.readouterr()


class TestVerify:
    def test_thm1_tallies_and_final_line(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "thm1", "--nmax", "3")
        assert code == 0
        assert out == (
            "n=1: 1/1 triples pass\n"
            "n=2: 8/8 triples pass\n"
            "n=3: 27/27 triples pass\n"
            "all triples pass\n"
        )

    def test_bijection_final_line(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "bijection", "--nmax", "2")
        assert code == 0
        assert out.endswith("injective + counts match\n")

    @pytest.mark.parametrize(
        "suite,nmax,final",
        [
            ("cor1", "3", "all pairs pass"),
            ("prop2", "3", "all tuples pass"),
            ("prop3", "3", "all identities pass"),
            ("series", "2", "all coefficients match"),
            ("reduce5", "3", "all reductions pass"),
        ],
    )
    def test_small_sweeps_pass(self, capsys, suite, nmax, final):
        code, out, _ = run(capsys, "verify", "--suite", suite, "--nmax", nmax)
        assert code == 0
        assert out.endswith(final + "\n")

    def test_injected_bad_formula_fails_thm1(self, capsys, monkeypatch):
        # exit codes must track suite outcomes, proven with a sabotaged build
        monkeypatch.setattr(cli, "m_coeff", lambda n, l1, l2, l3: 10**9)
        code, out, _ = run(capsys, "verify", "--suite", "thm1", "--nmax", "2")
        assert code == 1
        assert "FAIL: thm1 n=1 lam=1 mu=1 nu=1:" in out

    def test_injected_bad_identity_fails_prop3(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "prop3_identity", lambda n, l1, l2, l3: False)
        code, out, _ = run(capsys, "verify", "--suite", "prop3", "--nmax", "2")
        assert code == 1
        assert "FAIL: prop3 n=1 l1=1 l2=1 l3=1: sums differ" in out
        assert "n=1: 0/1 identities pass" in out

    def test_injected_bad_count_fails_bijection(self, capsys, monkeypatch):
        monkeypatch.setattr(
            cli, "count_thorn_cactus_trees_box",
            lambda lam, mu, nu: {(0, 0, 0): 7},
        )
        code, out, _ = run(capsys, "verify", "--suite", "bijection", "--nmax", "1")
        assert code == 1
        assert "FAIL: bijection" in out

    def test_json_report(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "cor1", "--nmax", "2", "--json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload == {
            "failure": None,
            "lines": ["n=1: 1/1 pairs pass", "n=2: 4/4 pairs pass"],
            "nmax": 2,
            "pass": True,
            "suite": "cor1",
        }

    def test_nmax_above_ceiling_is_guarded(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "reduce5", "--nmax", "8")
        assert code == 3
        assert "--force" in err

    def test_nmax_must_be_positive(self, capsys):
        code, _, _ = run(capsys, "verify", "--suite", "thm1", "--nmax", "0")
        assert code == 2


class TestTheta:
    def test_six_point_reference(self, capsys):
        code, out, _ = run(capsys, "theta", *SIX_POINT)
        assert code == 0
        payload = json.loads(out)
        assert payload["chi"] == [3]
        assert payload["sigma1"] == [2, 3, 1]
        assert payload["sigma2"] == [2, 1]
        assert payload["params"] == {
            "b": 1, "g": 0, "lambda": [4, 2], "mu": [4, 2], "n": 6,
            "nu": [4, 1, 1], "w": 1,
        }
        assert set(payload) == {"chi", "params", "sigma1", "sigma2", "tree"}

    def test_minimal_input(self, capsys):
        code, out, _ = run(
            capsys, "theta", "--pi1", "1", "--pi2", "1", "--pi3", "1",
            "--alpha1", "[1]", "--alpha2", "[1]",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["chi"] == [] and payload["sigma1"] == []
        assert payload["tree"]["color"] == "white"

    def test_pc_json_equivalent_and_deterministic(self, capsys):
        code, out_flags, _ = run(capsys, "theta", *SIX_POINT)
        assert code == 0
        pc_json = json.dumps(
            {
                "pi1": "4,5|1,2,3,6",
                "pi2": "1,3,4,5|2,6",
                "pi3": "2|5|1,3,4,6",
                "alpha1": "(1 2 3 6)",
                "alpha2": "(1 5 3)",
            }
        )
        code, out_json, _ = run(capsys, "theta", "--pc-json", pc_json)
        assert code == 0
        assert out_json == out_flags
        code, out_again, _ = run(capsys, "theta", *SIX_POINT)
        assert (code, out_again) == (0, out_flags)

    def test_block_list_form(self, capsys):
        pc_json = json.dumps(
            {
                "pi1": [[4, 5], [1, 2, 3, 6]],
                "pi2": [[1, 3, 4, 5], [2, 6]],
                "pi3": [[2], [5], [1, 3, 4, 6]],
                "alpha1": "(1 2 3 6)",
                "alpha2": [5, 2, 1, 4, 3, 6],
            }
        )
        code, out, _ = run(capsys, "theta", "--pc-json", pc_json)
        assert code == 0
        assert json.loads(out)["chi"] == [3]

    def test_invalid_input_is_exit_2(self, capsys):
        # pi1 splits the 2-cycle of alpha1 across two blocks
        code, _, err = run(
            capsys, "theta", "--pi1", "2|1", "--pi2", "1,2", "--pi3", "1,2",
            "--alpha1", "[2,1]", "--alpha2", "[2,1]",
        )
        assert code == 2
        assert "error:" in err

    def test_flags_and_pc_json_conflict(self, capsys):
        code, _, _ = run(
            capsys, "theta", "--pi1", "1", "--pc-json", "{}",
        )
        assert code == 2

    def test_missing_flags(self, capsys):
        code, _, err = run(capsys, "theta", "--pi1", "1")
        assert code == 2
        assert "--pi2" in err

    def test_bad_json_payload(self, capsys):
        code, _, _ = run(capsys, "theta", "--pc-json", "{nope")
        assert code == 2


class TestReduce:
    def test_ten_point_reference(self, capsys):
        code, out, _ = run(capsys, "reduce", *TEN_POINT)
        assert code == 0
        payload = json.loads(out)
        assert payload["sigma"] == [3, 1, 6, 5, 2, 4]
        assert set(payload) == {"sigma", "tree"}
        assert payload["tree"]["color"] == "white"

    def test_rejects_nontrivial_grey_blocks(self, capsys):
        code, _, err = run(capsys, "reduce", *SIX_POINT)
        assert code == 2
        assert "error:" in err


class TestTrees:
    def test_stream_matches_count(self, capsys):
        code, out, _ = run(
            capsys, "trees", "--lambda", "2,1", "--mu", "2,1", "--nu", "1,1,1",
            "--g", "0", "--w", "2", "--b", "1",
        )
        assert code == 0
        lines = out.splitlines()
        assert all(json.loads(line)["color"] == "white" for line in lines)
        code, out, _ = run(
            capsys, "trees", "--lambda", "2,1", "--mu", "2,1", "--nu", "1,1,1",
            "--g", "0", "--w", "2", "--b", "1", "--count",
        )
        assert (code, out) == (0, f"{len(lines)}\n")

    def test_bicolored_count_matches_formula(self, capsys):
        code, out, _ = run(
            capsys, "trees", "--kind", "bicolored", "--lambda", "2,1",
            "--mu", "2,1", "--count",
        )
        assert (code, out) == (0, f"{bicolored_tree_count((2, 1), (2, 1))}\n")

    def test_cactus_needs_full_tuple(self, capsys):
        code, _, _ = run(capsys, "trees", "--lambda", "2", "--mu", "2")
        assert code == 2

    def test_bicolored_rejects_tuple_flags(self, capsys):
        code, _, _ = run(
            capsys, "trees", "--kind", "bicolored", "--lambda", "2",
            "--mu", "2", "--g", "0",
        )
        assert code == 2

    def test_enumeration_guard(self, capsys):
        code, _, err = run(
            capsys, "trees", "--lambda", "7", "--mu", "7", "--nu", "7",
            "--g", "0", "--w", "1", "--b", "0",
        )
        assert code == 3
        assert "guard" in err


class TestEntryPoint:
    def test_module_invocation_bytes(self):
        proc = subprocess.run(
            [sys.executable, "-m", "longcycle.cli", "coeff", "--kind", "k3",
             "--lambda", "2,1,1,1", "--mu", "2,2,1", "--nu", "2,1,1,1",
             "--mode", "both"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == "25 25 MATCH\n"

    def test_no_color_and_no_ansi_when_piped(self):
        proc = subprocess.run(
            [sys.executable, "-m", "longcycle.cli", "verify", "--suite",
             "cor1", "--nmax", "2"],
            capture_output=True, text=True, env={"NO_COLOR": "1", "PATH": ""},
        )
        assert proc.returncode == 0
        assert "\x1b" not in proc.stdout
        assert proc.stdout.endswith("all pairs pass\n")
