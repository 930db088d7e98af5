import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from multipolar.cli import main
from multipolar.verify import IDENTITIES
from multipolar.serialize import loads

FIXTURES = Path(__file__).parent / "fixtures"


def fx(name):
    return str(FIXTURES / name)


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args])

    return invoke


def test_counterexample(run):
    result = run("counterexample")
    assert result.exit_code == 0, result.output
    assert "entire_polarization_rhs(0, e1, e2) = 1/6 (expected 1/6) ok" in result.output
    assert "remainder(e1, e2) = 16" in result.output
    assert "in_image_psi = false" in result.output
    assert result.output.rstrip().endswith("result: PASS")


def test_counterexample_json(run):
    result = run("counterexample", "--format", "json")
    data = json.loads(result.output)
    assert data["result"] == "PASS"
    assert [v["computed"] for v in data["values"]] == ["0", "1/6", "16", "0", "false"]


def test_verify_multipolarization(run):
    result = run("verify", "multipolarization", "--m", 2, "--n", 2, "--dim", 2, "--trials", 25, "--seed", 7)
    assert result.exit_code == 0, result.output
    assert "trials run: 25" in result.output
    assert "failures: 0" in result.output


def test_verify_remainder_n1(run):
    result = run("verify", "remainder-n1", "--m", 3, "--dim", 2)
    assert result.exit_code == 0, result.output


@pytest.mark.parametrize("identity", IDENTITIES)
def test_every_identity_passes_small(run, identity):
    result = run("--trials", 3, "verify", identity)
    assert result.exit_code == 0, result.output
    assert "result: PASS" in result.output


@pytest.mark.parametrize("identity", ["eq-c", "multipolarization"])
def test_injected_fault_fails_with_defect(run, identity):
    result = run("verify", identity, "--trials", 2, "--inject-fault")
    assert result.exit_code == 1
    assert "result: FAIL" in result.output
    assert "- trial " in result.output
    assert "kind: multipolynomial" in result.output  # the inputs are serialized


def test_fault_not_offered_elsewhere(run):
    assert run("verify", "leibniz", "--inject-fault").exit_code == 2


def test_unknown_identity_is_usage_error(run):
    assert run("verify", "no-such-identity").exit_code == 2


def test_bad_signature_is_usage_error(run):
    assert run("verify", "thm-2-1", "--signature", "2,x").exit_code == 2
    assert run("verify", "thm-2-1", "--signature", "0,1").exit_code == 2


def test_reports_are_deterministic(run):
    args = ("--seed", 11, "--format", "json", "verify", "eq-c", "--trials", 4, "--inject-fault")
    first, second = run(*args), run(*args)
    assert first.exit_code == second.exit_code == 1
    assert first.stdout == second.stdout
    data = json.loads(first.stdout)
    assert data["result"] == "FAIL" and data["params"]["seed"] == 11


def test_group_options_and_local_options_agree(run):
    a = run("--seed", 3, "--trials", 2, "verify", "leibniz")
    b = run("verify", "leibniz", "--seed", 3, "--trials", 2)
    assert a.stdout == b.stdout


def test_eval(run):
    assert run("eval", fx("example_x1x2y1y2.txt"), fx("e1_e2.txt")).output == "0\n"
    assert run("eval", fx("example_x1x2y1y2.txt"), fx("ones.txt")).output == "1\n"
    assert run("eval", fx("x1x2_polarized.txt"), fx("e1_e2.txt")).output == "1/2\n"


def test_eval_wrong_point_count(run):
    assert run("eval", fx("x1x2.txt"), fx("e1_e2.txt")).exit_code == 2


def test_polarize(run, tmp_path):
    result = run("polarize", fx("x1x2.txt"))
    assert result.exit_code == 0
    assert result.output == (FIXTURES / "x1x2_polarized.txt").read_text()
    out = tmp_path / "A.txt"
    assert run("polarize", fx("x1x2.txt"), "--x0", fx("x0.txt"), "-o", out).exit_code == 0
    assert out.read_text() == result.output


def test_polarize_rejects_multislot(run):
    assert run("polarize", fx("example_x1x2y1y2.txt")).exit_code == 2


def test_check_image_example_is_not_member(run):
    result = run("check-image", fx("example_x1x2y1y2.txt"))
    assert result.exit_code == 1
    assert "member: false" in result.output
    assert "direct value: 0" in result.output
    assert "entire polarization value: 1/6" in result.output


def test_check_image_member(run):
    result = run("check-image", fx("member_x2y2.txt"))
    assert result.exit_code == 0
    witness = result.output.split("witness:\n", 1)[1]
    A = loads(witness)
    assert A.arity == 4 and A.coeffs == {(0, 0, 0, 0): (1,)}


def test_check_image_rejects_mixed(run):
    assert run("check-image", fx("mixed_21.txt")).exit_code == 2


def test_malformed_file(run, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text((FIXTURES / "x1x2.txt").read_text().replace("= 1", "= 2/4"))
    result = run("eval", bad, fx("e1_e2.txt"))
    assert result.exit_code == 2
    assert "line 7, column 9" in result.output
    assert run("check-image", bad).exit_code == 2
    assert run("eval", tmp_path / "missing.txt", fx("e1_e2.txt")).exit_code == 2


def test_bench_csv(run):
    result = run("bench", "--mn", 4, "--kernels", "gray,naive")
    assert result.exit_code == 0, result.output
    lines = result.output.strip().split("\n")
    header = lines[0].split(",")
    assert header[:6] == ["kernel", "m", "n", "dim", "signs", "reps"]
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    assert [r["kernel"] for r in rows] == ["gray", "naive"]
    assert all(r["signs"] == "16" and r["matches"] == "true" for r in rows)
    assert rows[0]["value"] == rows[1]["value"]


def test_bench_rejects_unknown_kernel_and_range(run):
    assert run("bench", "--mn", 4, "--kernels", "gpu").exit_code == 2
    assert run("bench", "--mn", 25).exit_code == 2
    assert run("bench", "--mn", 5, "--m", 2).exit_code == 2


def test_max_signs_guard(run):
    result = run("--max-signs", 8, "verify", "multipolarization", "--trials", 1)
    assert result.exit_code == 2
    assert run("--max-signs", 16, "verify", "multipolarization", "--trials", 1).exit_code == 0
