"""Seeded random instances for the verification suites.

Randomness comes from numpy's PCG64 generator. An :class:`InstanceGenerator`
is built from a :class:`GeneratorConfig` and an optional stream number, so
trial ``t`` of a suite draws from ``PCG64(SeedSequence([seed, t]))`` and
reruns reproduce every trial exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ContractError, compositions, enumerate_row_sum_matrices, vadd, vscale, zero_vector
from .multilinear import HomogeneousPolynomial, MultilinearMap, symmetrize
from .multipoly import Multipolynomial, permute_slots

SEED_MASK = 2 ** 64 - 1


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    sparsity: float = 0.75
    max_numerator: int = 9
    max_denominator: int = 9


class InstanceGenerator:
    def __init__(self, cfg: GeneratorConfig = GeneratorConfig(), stream: int | None = None):
        self.cfg = cfg
        seed = cfg.seed & SEED_MASK
        entropy = seed if stream is None else [seed, stream]
        self.rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def scalar(self, nonzero: bool = False) -> Fraction:
        lo = -self.cfg.max_numerator
        while True:
            num = int(self.rng.integers(lo, self.cfg.max_numerator + 1))
            den = int(self.rng.integers(1, self.cfg.max_denominator + 1))
            if num or not nonzero:
                return Fraction(num, den)

    def vector(self, d: int) -> tuple:
        return tuple(self.scalar() for _ in range(d))

    def points(self, count: int, d: int) -> list:
        return [self.vector(d) for _ in range(count)]

    def _values(self, keys, codim: int) -> dict:
        out = {}
        for key in keys:
            if self.rng.random() < self.cfg.sparsity:
                out[key] = tuple(self.scalar(nonzero=True) for _ in range(codim))
        return out

    def multilinear(self, m: int, d: int, codim: int = 1, symmetric: bool = False) -> MultilinearMap:
        # Same key order as the (1, ..., 1) multipolynomial keys, so both
        # generators agree on equal streams.
        keys = sorted(itertools.product(range(d), repeat=m), key=lambda k: _unit_rows(k, d))
        A = MultilinearMap(m, d, codim, self._values(keys, codim))
        return symmetrize(A) if symmetric else A

    def homogeneous(self, degree: int, d: int, codim: int = 1) -> HomogeneousPolynomial:
        keys = sorted(compositions(degree, d))
        return HomogeneousPolynomial(degree, d, codim, self._values(keys, codim))

    def multipolynomial(self, degrees, d: int, codim: int = 1, symmetric: bool = False) -> Multipolynomial:
        degrees = tuple(degrees)
        if symmetric and len(set(degrees)) != 1:
            raise ContractError(
                f"a symmetric multipolynomial with mixed degrees {degrees} is zero; refusing to generate one"
            )
        keys = list(enumerate_row_sum_matrices(len(degrees), d, degrees))
        P = Multipolynomial(degrees, d, codim, self._values(keys, codim))
        return symmetrize_slots(P) if symmetric else P


def _unit_rows(key, d: int) -> tuple:
    return tuple(tuple(int(j == c) for c in range(d)) for j in key)


def symmetrize_slots(P: Multipolynomial) -> Multipolynomial:
    """Average of P over all m! permutations of its slots."""
    perms = list(itertools.permutations(range(P.m)))
    total: dict = {}
    for perm in perms:
        for key, value in permute_slots(P, perm).terms.items():
            total[key] = vadd(total.get(key, zero_vector(P.codim)), value)
    w = Fraction(1, math.factorial(P.m))
    return Multipolynomial(P.degrees, P.dim, P.codim, {k: vscale(w, v) for k, v in total.items()})


def random_multilinear(cfg: GeneratorConfig, m: int, d: int, d_f: int = 1, symmetric: bool = False):
    return InstanceGenerator(cfg).multilinear(m, d, d_f, symmetric)


def random_multipolynomial(cfg: GeneratorConfig, signature, d: int, d_f: int = 1, symmetric: bool = False):
    return InstanceGenerator(cfg).multipolynomial(signature, d, d_f, symmetric)
