"""Multilinear maps (K^d)^m -> K^dF and homogeneous polynomials K^d -> K^dF.

Both are stored sparsely: a dict from an index key to a codomain value (a
tuple of ``codim`` Fractions). Missing keys mean zero, zero values are never
stored, and keys are kept in lexicographic order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    ArityError,
    BoundsError,
    ContractError,
    ShapeError,
    basis_vector,
    compositions,
    multi_factorial,
    multiplicity_profile,
    signed_sum,
    vadd,
    vector,
    vscale,
    vsum,
    zero_vector,
)

MAX_PERMUTATION_ARITY = 8


def _clean(coeffs: dict, codim: int) -> dict:
    out = {}
    for key in sorted(coeffs):
        value = tuple(Fraction(a) for a in coeffs[key])
        if len(value) != codim:
            raise ShapeError(f"coefficient at {key} has length {len(value)}, expected {codim}")
        if any(value):
            out[tuple(key)] = value
    return out


def _check_points(points: Sequence, count: int, d: int) -> list:
    if len(points) != count:
        raise ArityError(f"expected {count} points, got {len(points)}")
    pts = [vector(p) for p in points]
    for p in pts:
        if len(p) != d:
            raise ShapeError(f"point of dimension {len(p)}, expected {d}")
    return pts


@dataclass(frozen=True)
class MultilinearMap:
    """An m-linear map; ``coeffs[(j1, ..., jm)] = A(e_j1, ..., e_jm)``, 0-based."""

    arity: int
    dim: int
    codim: int = 1
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.arity < 1 or self.dim < 1 or self.codim < 1:
            raise BoundsError("arity, dim and codim must be positive")
        for key in self.coeffs:
            if len(key) != self.arity or not all(0 <= j < self.dim for j in key):
                raise BoundsError(f"bad index key {key} for arity {self.arity}, dim {self.dim}")
        object.__setattr__(self, "coeffs", _clean(self.coeffs, self.codim))

    def __call__(self, *points):
        return evaluate(self, points)

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        _same_space(self, other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = vadd(out.get(key, zero_vector(self.codim)), value)
        return MultilinearMap(self.arity, self.dim, self.codim, out)

    def scale(self, c) -> "MultilinearMap":
        c = Fraction(c)
        return MultilinearMap(
            self.arity, self.dim, self.codim,
            {k: vscale(c, v) for k, v in self.coeffs.items()},
        )

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """P(x) = sum over |alpha| = degree of c_alpha x^alpha."""

    degree: int
    dim: int
    codim: int = 1
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 1 or self.dim < 1 or self.codim < 1:
            raise BoundsError("degree, dim and codim must be positive")
        for alpha in self.coeffs:
            if len(alpha) != self.dim or sum(alpha) != self.degree or min(alpha) < 0:
                raise ArityError(f"exponent {alpha} is not of degree {self.degree} in {self.dim} variables")
        object.__setattr__(self, "coeffs", _clean(self.coeffs, self.codim))

    def __call__(self, x):
        return evaluate_polynomial(self, x)

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if (self.degree, self.dim, self.codim) != (other.degree, other.dim, other.codim):
            raise ShapeError("polynomials live in different spaces")
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = vadd(out.get(key, zero_vector(self.codim)), value)
        return HomogeneousPolynomial(self.degree, self.dim, self.codim, out)

    def scale(self, c) -> "HomogeneousPolynomial":
        c = Fraction(c)
        return HomogeneousPolynomial(
            self.degree, self.dim, self.codim,
            {k: vscale(c, v) for k, v in self.coeffs.items()},
        )


def _same_space(a: MultilinearMap, b: MultilinearMap) -> None:
    if (a.arity, a.dim, a.codim) != (b.arity, b.dim, b.codim):
        raise ShapeError("maps live in different spaces")


def evaluate(A: MultilinearMap, points: Sequence) -> tuple:
    pts = _check_points(points, A.arity, A.dim)
    total = [Fraction(0)] * A.codim
    for key, value in A.coeffs.items():
        w = Fraction(1)
        for p, j in zip(pts, key):
            w *= p[j]
            if not w:
                break
        if w:
            for c, a in enumerate(value):
                total[c] += w * a
    return tuple(total)


def evaluate_polynomial(P: HomogeneousPolynomial, x) -> tuple:
    (x,) = _check_points([x], 1, P.dim)
    total = [Fraction(0)] * P.codim
    for alpha, value in P.coeffs.items():
        w = Fraction(1)
        for a, e in zip(x, alpha):
            if e:
                w *= a ** e
        if w:
            for c, v in enumerate(value):
                total[c] += w * v
    return tuple(total)


def power_eval(A: MultilinearMap, points: Sequence, alpha: Sequence[int]) -> tuple:
    """A x_1^{alpha_1} ... x_n^{alpha_n}: x_k repeated alpha_k times, in order."""
    if len(points) != len(alpha):
        raise ArityError(f"{len(points)} points but multi-index of length {len(alpha)}")
    if sum(alpha) != A.arity:
        raise ArityError(f"|alpha| = {sum(alpha)} but the map has arity {A.arity}")
    args = [p for p, a in zip(points, alpha) for _ in range(a)]
    return evaluate(A, args)


def is_symmetric(A: MultilinearMap) -> bool:
    if A.arity > MAX_PERMUTATION_ARITY:
        raise BoundsError(f"arity {A.arity} exceeds the permutation guard {MAX_PERMUTATION_ARITY}")
    zero = zero_vector(A.codim)
    for key, value in A.coeffs.items():
        for perm in set(itertools.permutations(key)):
            if A.coeffs.get(perm, zero) != value:
                return False
    return True


def symmetrize(A: MultilinearMap) -> MultilinearMap:
    if A.arity > MAX_PERMUTATION_ARITY:
        raise BoundsError(f"arity {A.arity} exceeds the permutation guard {MAX_PERMUTATION_ARITY}")
    # Group by multiset: every ordering of a multiset gets the multiset's mean.
    groups: dict = {}
    for key, value in A.coeffs.items():
        ms = tuple(sorted(key))
        groups[ms] = vadd(groups.get(ms, zero_vector(A.codim)), value)
    out = {}
    for ms, total in groups.items():
        orderings = set(itertools.permutations(ms))
        mean = vscale(Fraction(1, len(orderings)), total)
        for key in orderings:
            out[key] = mean
    return MultilinearMap(A.arity, A.dim, A.codim, out)


def hat(A: MultilinearMap) -> HomogeneousPolynomial:
    """The homogeneous polynomial x -> A(x, ..., x)."""
    out: dict = {}
    for key, value in A.coeffs.items():
        alpha = multiplicity_profile(key, A.dim)
        out[alpha] = vadd(out.get(alpha, zero_vector(A.codim)), value)
    return HomogeneousPolynomial(A.arity, A.dim, A.codim, out)


def polarization_formula(P: HomogeneousPolynomial, x0, points: Sequence) -> tuple:
    """(1/(m! 2^m)) sum eps_1...eps_m P(x0 + eps_1 x_1 + ... + eps_m x_m)."""
    m, d = P.degree, P.dim
    pts = _check_points(points, m, d)
    base = zero_vector(d) if x0 is None else vector(x0)
    if len(base) != d:
        raise ShapeError(f"x0 has dimension {len(base)}, expected {d}")
    return vscale(Fraction(1, math.factorial(m) * 2 ** m), signed_sum(P, base, pts))


def polarize(P: HomogeneousPolynomial, x0=None) -> MultilinearMap:
    """The symmetric m-linear map whose diagonal is P.

    Coefficients are the polarization formula evaluated at basis tuples
    (e_j1, ..., e_jm), once per multiset of indices.
    """
    m, d = P.degree, P.dim
    basis = [basis_vector(d, j) for j in range(d)]
    out = {}
    for ms in itertools.combinations_with_replacement(range(d), m):
        value = polarization_formula(P, x0, [basis[j] for j in ms])
        if any(value):
            for key in set(itertools.permutations(ms)):
                out[key] = value
    return MultilinearMap(m, d, P.codim, out)


def verify_leibniz(A: MultilinearMap, points: Sequence) -> tuple[tuple, tuple]:
    """Both sides of A(x_1 + ... + x_n)^m = sum (m!/alpha!) A x^alpha."""
    if not is_symmetric(A):
        raise ContractError("the Leibniz formula needs a symmetric map")
    pts = [vector(p) for p in points]
    n, m = len(pts), A.arity
    total_point = vsum(pts, A.dim)
    left = power_eval(A, [total_point], (m,))
    right = zero_vector(A.codim)
    for alpha in compositions(m, n):
        weight = Fraction(math.factorial(m), multi_factorial(alpha))
        right = vadd(right, vscale(weight, power_eval(A, pts, alpha)))
    return left, right
