"""Throughput of the sign-sum kernel behind multipolarize.

The benchmarked sum is

    sum_eps eps_1...eps_mn Q(x0 + sum_k eps_k x_1 + ... + sum_k eps_{(m-1)n+k} x_m)

with Q the diagonal of a random symmetric multipolynomial. Points and
coefficients are cleared of denominators first, so the inner loop runs on
Python ints; the exact rational result is restored at the end.
"""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .core import BoundsError, check_sign_budget, signed_sum, signed_sum_naive
from .generate import GeneratorConfig, InstanceGenerator
from .multipoly import diagonal_polynomial

MAX_BENCH_SIGNS = 24


class IntegerPolynomial:
    """A homogeneous polynomial with integer coefficients, evaluated on int vectors."""

    def __init__(self, terms: list, degree: int, dim: int):
        self.terms = terms
        self.degree = degree
        self.dim = dim

    def __call__(self, u):
        powers = []
        for a in u:
            row = [1] * (self.degree + 1)
            for e in range(1, self.degree + 1):
                row[e] = row[e - 1] * a
            powers.append(row)
        total = 0
        for alpha, c in self.terms:
            w = c
            for row, e in zip(powers, alpha):
                w *= row[e]
            total += w
        return (total,)


@dataclass
class KernelProblem:
    poly: IntegerPolynomial
    base: tuple
    directions: list
    scale: int  # true value = integer sum / scale

    @property
    def signs(self) -> int:
        return len(self.directions)


def make_problem(m: int, n: int, dim: int = 2, seed: int = 0) -> KernelProblem:
    gen = InstanceGenerator(GeneratorConfig(seed=seed, sparsity=1.0))
    P = gen.multipolynomial((n,) * m, dim, 1, symmetric=True)
    Q = diagonal_polynomial(P)
    x0 = gen.vector(dim)
    pts = gen.points(m, dim)
    coord_den = math.lcm(*(a.denominator for v in [x0, *pts] for a in v))
    coef_den = math.lcm(1, *(v[0].denominator for v in Q.coeffs.values()))
    terms = [(alpha, int(v[0] * coef_den)) for alpha, v in Q.coeffs.items()]
    base = tuple(int(a * coord_den) for a in x0)
    dirs = [tuple(int(a * coord_den) for a in x) for x in pts for _ in range(n)]
    return KernelProblem(IntegerPolynomial(terms, m * n, dim), base, dirs,
                         coef_den * coord_den ** (m * n))


def _chunk(args):
    poly, base, dirs, start, stop = args
    return signed_sum(poly, base, dirs, start, stop)[0]


def run_gray(problem: KernelProblem) -> Fraction:
    return Fraction(signed_sum(problem.poly, problem.base, problem.directions)[0], problem.scale)


def run_naive(problem: KernelProblem) -> Fraction:
    return Fraction(signed_sum_naive(problem.poly, problem.base, problem.directions)[0], problem.scale)


def run_partitioned(problem: KernelProblem, workers: int | None = None) -> Fraction:
    """Gray walk split into contiguous ranges reduced in worker processes."""
    workers = workers or os.cpu_count() or 1
    total = 2 ** problem.signs
    pieces = min(total, workers * 4)
    bounds = [total * k // pieces for k in range(pieces + 1)]
    jobs = [(problem.poly, problem.base, problem.directions, a, b)
            for a, b in zip(bounds, bounds[1:]) if a < b]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk, jobs))
    return Fraction(sum(parts), problem.scale)


KERNELS = {"gray": run_gray, "naive": run_naive, "partitioned": run_partitioned}


def split_mn(mn: int, m: int | None = None) -> tuple[int, int]:
    if m is None:
        m = 2 if mn % 2 == 0 and mn > 1 else 1
    if mn % m:
        raise BoundsError(f"m = {m} does not divide mn = {mn}")
    return m, mn // m


def run_bench(mn: int, reps: int = 1, m: int | None = None, dim: int = 2, seed: int = 0,
              kernels=("gray", "naive", "partitioned")) -> list[dict]:
    if not 1 <= mn <= MAX_BENCH_SIGNS:
        raise BoundsError(f"mn must lie in 1..{MAX_BENCH_SIGNS}, got {mn}")
    check_sign_budget(mn)
    m, n = split_mn(mn, m)
    problem = make_problem(m, n, dim, seed)
    rows, reference = [], None
    for name in kernels:
        start = time.perf_counter()
        for _ in range(reps):
            value = KERNELS[name](problem)
        seconds = time.perf_counter() - start
        if reference is None:
            reference = value
        signs = 2 ** mn
        rows.append({
            "kernel": name, "m": m, "n": n, "dim": dim, "signs": signs, "reps": reps,
            "seconds": f"{seconds:.6f}",
            "signs_per_second": f"{signs * reps / seconds:.1f}" if seconds > 0 else "inf",
            "value": str(value),
            "matches": str(value == reference).lower(),
        })
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
