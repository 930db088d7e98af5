"""Acceptance gate: one test per criterion, each recording a pass/fail line.

Every criterion runs at its stated size and tolerance (exact equality); the
lines are printed in the terminal summary under "acceptance criteria".
"""
import itertools
import math
import time
from fractions import Fraction
from pathlib import Path

import pytest
from click.testing import CliRunner

from multipolar import bench
from multipolar import multilinear as ml
from multipolar import multipoly as mp
from multipolar.cli import counterexample_rows, main
from multipolar.core import ContractError, basis_vector, signed_power_sum
from multipolar.generate import GeneratorConfig, InstanceGenerator
from multipolar.multipoly import Multipolynomial
from multipolar.serialize import dumps, loads
from multipolar.verify import IDENTITIES, resolve_params, run_identity

SEED = 2024
FIXTURES = Path(__file__).parent / "fixtures"


def _gen(label, trial):
    return InstanceGenerator(GeneratorConfig(seed=SEED), stream=label * 1000 + trial)


def _basis_tuples(m, d):
    return [[basis_vector(d, j) for j in combo] for combo in itertools.product(range(d), repeat=m)]


def test_criterion_01_counterexample(acceptance):
    start = time.perf_counter()
    P = Multipolynomial((2, 2), 2, 1, {((1, 1), (1, 1)): (1,)})
    e1, e2, zero = (1, 0), (0, 1), (0, 0)
    values = {
        "eval": mp.evaluate(P, [e1, e2]),
        "entire": mp.entire_polarization_rhs(P, zero, [e1, e2]),
        "remainder": mp.remainder(P, [e1, e2]),
        "multipolarize": mp.multipolarize(P, zero, [e1, e2]),
        "member": mp.in_image_psi(P).member,
    }
    elapsed = time.perf_counter() - start
    expected = {
        "eval": (0,),
        "entire": (Fraction(1, 6),),
        "remainder": (16,),
        "multipolarize": (0,),
        "member": False,
    }
    cli_ok = all(got == want for _, got, want in counterexample_rows())
    ok = values == expected and cli_ok and elapsed < 1.0
    acceptance(1, "counterexample x1x2y1y2", ok, f"{elapsed:.3f}s")
    assert values == expected
    assert cli_ok
    assert elapsed < 1.0


def test_criterion_02_multipolarization(acceptance):
    start = time.perf_counter()
    failures = []
    checks = 0
    for label, (m, n, d) in enumerate([(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)]):
        for trial in range(25):
            g = _gen(20 + label, trial)
            P = g.multipolynomial((n,) * m, d, 1 + trial % 2, symmetric=True)
            pts = g.points(m, d)
            expected = mp.evaluate(P, pts)
            for x0 in ((0,) * d, g.vector(d)):
                checks += 1
                if mp.multipolarize(P, x0, pts) != expected:
                    failures.append((m, n, d, trial, x0))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    acceptance(2, "multipolarize = eval, 4 configs x 25 trials x 2 base points", ok,
               f"{checks} checks, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 60


def test_criterion_03_n1_collapse(acceptance):
    failures = []
    for trial in range(25):
        m, d = 1 + trial % 4, 1 + (trial // 4) % 3
        g = _gen(30, trial)
        A = g.multilinear(m, d, 2, symmetric=True)
        P = mp.from_multilinear(A)
        pts, x0 = g.points(m, d), g.vector(d)
        classical = ml.polarization_formula(ml.hat(A), x0, pts)
        if mp.remainder(P, pts) != (0, 0):
            failures.append(("remainder", m, d, trial))
        if not mp.multipolarize(P, x0, pts) == classical == A(*pts):
            failures.append(("multipolarize", m, d, trial))
    ok = not failures
    acceptance(3, "n = 1: remainder is 0 and multipolarize is classical polarization", ok,
               f"25 trials, {len(failures)} failures")
    assert not failures


def test_criterion_04_round_trips(acceptance):
    start = time.perf_counter()
    failures = []
    for trial in range(25):
        m, d = 1 + trial % 4, 1 + (trial // 4) % 3
        g = _gen(40, trial)
        A = g.multilinear(m, d, 2, symmetric=True)
        if ml.polarize(ml.hat(A)) != A:
            failures.append(("polarize(hat A)", m, d, trial))
        H = g.homogeneous(m, d, 2)
        if ml.hat(ml.polarize(H)) != H:
            failures.append(("hat(polarize P)", m, d, trial))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    acceptance(4, "polarize o hat and hat o polarize are identities", ok,
               f"2 x 25 trials, {len(failures)} failures, {elapsed:.2f}s")
    assert not failures
    assert elapsed < 10


EQ_C_CONFIGS = [
    (1, 1, 1), (1, 2, 2), (1, 3, 3), (2, 1, 2), (2, 2, 2), (2, 3, 2), (3, 1, 3),
    (3, 2, 2), (3, 3, 1), (2, 2, 3), (1, 3, 2), (2, 1, 3), (3, 1, 2), (2, 3, 3),
]


def test_criterion_05_leibniz_and_eq_c(acceptance):
    start = time.perf_counter()
    failures = []
    leibniz_configs = list(itertools.product(range(1, 4), repeat=3))
    for trial, (m, n, d) in enumerate(leibniz_configs):
        g = _gen(50, trial)
        A = g.multilinear(m, d, 2, symmetric=True)
        lhs, rhs = ml.verify_leibniz(A, g.points(n, d))
        if lhs != rhs:
            failures.append(("leibniz", m, n, d, trial))
    for trial in range(25):
        m, n, d = EQ_C_CONFIGS[trial % len(EQ_C_CONFIGS)]
        g = _gen(51, trial)
        P = g.multipolynomial((n,) * m, d, 2)
        pts = g.points(d, d)
        lams = [g.scalar() for _ in range(d)]
        left, right = mp.expand_combination(P, pts, lams)
        if left != right:
            failures.append(("eq-c", m, n, d, trial))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30
    acceptance(5, "Leibniz and the combined expansion", ok,
               f"{len(leibniz_configs)} + 25 trials, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 30


def test_criterion_06_basis_and_embedding(acceptance):
    start = time.perf_counter()
    failures = []
    for label, (signature, d) in enumerate(itertools.product([(1,), (2,), (1, 1), (2, 1), (2, 2)], (1, 2))):
        g = _gen(60 + label, 0)
        P = g.multipolynomial(signature, d, 2)
        coeffs = mp.basis_coefficients(P)
        A = mp.diagonal_embed(P)
        for k in range(20):
            pts = g.points(len(signature), d)
            expected = mp.evaluate(P, pts)
            if mp.reconstruct_from_basis(coeffs, signature, pts, 2) != expected:
                failures.append(("reconstruction", signature, d, k))
            u = tuple(a for x in pts for a in x)
            if A(*[u] * A.arity) != expected:
                failures.append(("diagonal", signature, d, k))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30
    acceptance(6, "basis reconstruction and diagonal embedding", ok,
               f"10 instances x 20 tuples, {len(failures)} failures, {elapsed:.2f}s")
    assert not failures
    assert elapsed < 30


def test_criterion_07_psi(acceptance):
    failures = []
    for trial in range(25):
        g = _gen(70, trial)
        A = g.multilinear(4, 2, 1 + trial % 2, symmetric=True)
        P = mp.psi(A, 2, 2)
        result = mp.in_image_psi(P, seed=trial)
        if not (result.member and result.witness == A):
            failures.append(("round trip", trial))
        if not A.is_zero() and P.is_zero():
            failures.append(("injectivity", trial))
        x0 = g.vector(2)
        for pts in _basis_tuples(2, 2) + [g.points(2, 2) for _ in range(10)]:
            if mp.entire_polarization_rhs(P, x0, pts) != mp.evaluate(P, pts):
                failures.append(("entire formula", trial, tuple(pts)))
    zero = ml.MultilinearMap(4, 2, 1)
    zero_result = mp.in_image_psi(mp.psi(zero, 2, 2))
    if not (zero_result.member and zero_result.witness.is_zero()):
        failures.append(("zero map",))
    ok = not failures
    acceptance(7, "Psi round trip, injectivity and the entire formula on Im Psi", ok,
               f"25 trials, {len(failures)} failures")
    assert not failures


def test_criterion_08_signed_power_sum_table(acceptance):
    bad = []
    for n in range(1, 7):
        for p in range(n):
            if signed_power_sum(n, p) != 0:
                bad.append((n, p))
        if signed_power_sum(n, n) != math.factorial(n) * 2 ** n:
            bad.append((n, n))
    ok = not bad
    acceptance(8, "signed power sum table for n <= 6", ok, f"{len(bad)} wrong entries")
    assert not bad


def test_criterion_09_nullspace(acceptance):
    problems = []
    for label, signature in enumerate([(1, 2), (2, 3)]):
        nonzero = 0
        for trial in range(10):
            P = _gen(90 + label, trial).multipolynomial(signature, 2, 1)
            if P.is_zero():
                continue
            nonzero += 1
            if mp.is_symmetric(P):
                problems.append(("symmetric nonzero", signature, trial))
        if nonzero == 0:
            problems.append(("no nonzero sample", signature))
        if not mp.is_symmetric(Multipolynomial(signature, 2, 1)):
            problems.append(("zero not symmetric", signature))
        try:
            _gen(90 + label, 99).multipolynomial(signature, 2, 1, symmetric=True)
            problems.append(("symmetric construction accepted", signature))
        except ContractError:
            pass
    ok = not problems
    acceptance(9, "mixed signatures: symmetric only when zero", ok, f"{len(problems)} problems")
    assert not problems


def test_criterion_10_engineering(acceptance):
    problems = []
    documents = sorted(p for p in FIXTURES.glob("*.txt") if p.read_text().startswith("kind:"))
    for path in documents:
        text = path.read_text()
        if dumps(loads(text)) != text:
            problems.append(("round trip", path.name))
    for mn in range(1, 13):
        m, n = bench.split_mn(mn)
        problem = bench.make_problem(m, n, dim=2, seed=mn)
        if not bench.run_gray(problem) == bench.run_naive(problem) == bench.run_partitioned(problem, workers=2):
            problems.append(("kernels", mn))
    for identity in IDENTITIES:
        params = resolve_params(identity)
        first = run_identity(identity, params, 3, seed=17).render("json")
        second = run_identity(identity, params, 3, seed=17).render("json")
        if first != second:
            problems.append(("report", identity))
    runner = CliRunner()
    args = ["--seed", "17", "verify", "eq-c", "--trials", "3", "--inject-fault"]
    if runner.invoke(main, args).stdout != runner.invoke(main, args).stdout:
        problems.append(("cli report",))
    ok = not problems and len(documents) > 0
    acceptance(10, "serialization, kernel equivalence, reproducible reports", ok,
               f"{len(documents)} fixtures, 12 bench inputs, {len(IDENTITIES)} identities, {len(problems)} problems")
    assert documents
    assert not problems
