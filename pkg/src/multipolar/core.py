"""Exact scalars, multi-index bookkeeping and sign-vector enumeration.

Scalars are :class:`fractions.Fraction` values. Vectors and codomain values
are plain tuples of scalars. Multi-index matrices are tuples of row tuples.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

Scalar = Fraction
Vector = tuple
MultiIndex = tuple
IndexMatrix = tuple
SignVector = tuple

DEFAULT_MAX_SIGNS = 2 ** 24

_limits = {"max_signs": DEFAULT_MAX_SIGNS}


class MultipolarError(ValueError):
    pass


class BoundsError(MultipolarError):
    """An enumeration or index went past a configured guard."""


class ShapeError(MultipolarError):
    """Vector dimensions or point counts do not match."""


class ArityError(MultipolarError):
    pass


class ContractError(MultipolarError):
    """An input violates a documented precondition (symmetry, signature)."""


def set_max_signs(count: int) -> None:
    """Set the global cap on the number of sign vectors one sum may visit."""
    if count < 2:
        raise BoundsError("max_signs must be at least 2")
    _limits["max_signs"] = int(count)


def max_signs() -> int:
    return _limits["max_signs"]


def check_sign_budget(k: int) -> None:
    if k < 1:
        raise BoundsError(f"need at least one sign, got k={k}")
    if 2 ** k > _limits["max_signs"]:
        raise BoundsError(
            f"2^{k} sign vectors exceed the guard of {_limits['max_signs']}"
        )


# -- scalars and vectors ---------------------------------------------------

def scalar(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or 'p/q' string")
    return Fraction(value)


def vector(values: Iterable) -> tuple:
    return tuple(scalar(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (Fraction(0),) * n


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def vsum(vectors: Iterable[Sequence], n: int) -> tuple:
    acc = [Fraction(0)] * n
    for v in vectors:
        for k, a in enumerate(v):
            acc[k] += a
    return tuple(acc)


def basis_vector(d: int, j: int) -> tuple:
    """Canonical basis vector e_j of K^d (0-based j)."""
    if not 0 <= j < d:
        raise BoundsError(f"basis index {j} outside 0..{d - 1}")
    return tuple(Fraction(1) if k == j else Fraction(0) for k in range(d))


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- multi-indices ---------------------------------------------------------

def multi_norm(alpha: Sequence[int]) -> int:
    return sum(alpha)


def multi_factorial(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def compositions(n: int, parts: int) -> Iterator[tuple]:
    """All tuples of ``parts`` nonnegative integers summing to ``n``.

    Produced in lexicographic order.
    """
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def lex_compositions(n: int, parts: int) -> list:
    return sorted(compositions(n, parts))


def multiplicity_profile(indices: Sequence[int], d: int) -> tuple:
    """Exponent tuple of the monomial x_{j1}...x_{jk} over d variables."""
    counts = [0] * d
    for j in indices:
        counts[j] += 1
    return tuple(counts)


def row_sums(alpha: IndexMatrix) -> tuple:
    return tuple(sum(row) for row in alpha)


def col_sums(alpha: IndexMatrix) -> tuple:
    return tuple(sum(col) for col in zip(*alpha))


def enumerate_row_sum_matrices(m: int, d: int, n) -> Iterator[tuple]:
    """Every m x d matrix of nonnegative integers with row sums n.

    ``n`` may be a single degree or a sequence of per-row degrees. Matrices
    come out in lexicographic order of their flattened entries.
    """
    degrees = _degrees(n, m)
    if m < 1 or d < 1 or any(k < 0 for k in degrees):
        raise BoundsError(f"invalid sizes m={m}, d={d}, n={n}")
    rows = [lex_compositions(k, d) for k in degrees]
    yield from itertools.product(*rows)


def _degrees(n, m: int) -> tuple:
    if isinstance(n, int):
        return (n,) * m
    degrees = tuple(n)
    if len(degrees) != m:
        raise ShapeError(f"expected {m} degrees, got {len(degrees)}")
    return degrees


def matrix_sets_M_and_D(m: int, n: int) -> tuple[list, list]:
    """The matrix set M and its subset D used by the remainder function.

    M holds the m x (m+1) matrices whose column 0 is zero and whose rows and
    columns 1..m all sum to n. D holds the m! matrices whose rows are a
    permutation of n times the identity rows.
    """
    if m < 1 or n < 1:
        raise BoundsError(f"need m, n >= 1, got m={m}, n={n}")
    big_m = []
    for body in enumerate_row_sum_matrices(m, m, n):
        if all(c == n for c in col_sums(body)):
            big_m.append(tuple((0,) + row for row in body))
    d_set = [alpha for alpha in big_m if _is_scaled_permutation(alpha, n)]
    return big_m, d_set


def _is_scaled_permutation(alpha: IndexMatrix, n: int) -> bool:
    return all(sorted(row[1:])[-1] == n for row in alpha)


def epsilon_block(alpha: IndexMatrix, eps: Sequence[int], i: int, j: int, n):
    """Partial sign sum attached to entry (i, j) of ``alpha`` (0-based).

    Row i owns the contiguous run of signs starting at the sum of the degrees
    of the earlier rows; inside that run, column j takes the alpha[i][j]
    signs after those used by columns 0..j-1. Returns 0 when alpha[i][j] == 0.
    ``n`` is either the common row degree or the sequence of row degrees.
    """
    m = len(alpha)
    if not 0 <= i < m or not 0 <= j < len(alpha[i]):
        raise BoundsError(f"entry ({i}, {j}) outside a {m}x{len(alpha[0])} matrix")
    degrees = _degrees(n, m)
    if sum(alpha[i]) != degrees[i]:
        raise ContractError(f"row {i} sums to {sum(alpha[i])}, expected {degrees[i]}")
    if len(eps) < sum(degrees):
        raise BoundsError(f"need {sum(degrees)} signs, got {len(eps)}")
    start = sum(degrees[:i]) + sum(alpha[i][:j])
    return sum(eps[start:start + alpha[i][j]])


# -- sign vectors ----------------------------------------------------------

def gray_index_to_signs(t: int, k: int) -> tuple:
    """Sign vector at position t of the reflected Gray sequence."""
    g = t ^ (t >> 1)
    return tuple(-1 if (g >> b) & 1 else 1 for b in range(k))


def enumerate_sign_vectors(k: int) -> Iterator[tuple]:
    """All 2^k vectors in {+1, -1}^k, consecutive ones differing in one entry.

    Starts at the all-(+1) vector.
    """
    check_sign_budget(k)
    signs = [1] * k
    yield tuple(signs)
    for t in range(1, 2 ** k):
        b = (t & -t).bit_length() - 1
        signs[b] = -signs[b]
        yield tuple(signs)


def sign_product(eps: Sequence[int]) -> int:
    return math.prod(eps)


def signed_power_sum(n: int, p: int) -> Fraction:
    """Sum over delta in {+-1}^n of delta_1...delta_n (delta_1+...+delta_n)^p."""
    if n < 1 or p < 0:
        raise BoundsError(f"need n >= 1 and p >= 0, got n={n}, p={p}")
    total = 0
    for delta in enumerate_sign_vectors(n):
        total += sign_product(delta) * sum(delta) ** p
    return Fraction(total)


# -- the sign-sum kernel ---------------------------------------------------

def signed_sum(
    f: Callable[[tuple], tuple],
    base: Sequence,
    directions: Sequence[Sequence],
    start: int = 0,
    stop: int | None = None,
) -> tuple:
    """Sum of eps_1...eps_k * f(base + eps_1 v_1 + ... + eps_k v_k) over signs.

    Walks the sign vectors in Gray order so each step updates the argument
    with a single vector addition. ``start``/``stop`` restrict the walk to a
    range of Gray positions, for partitioned reductions.
    """
    k = len(directions)
    check_sign_budget(k)
    if stop is None:
        stop = 2 ** k
    if start >= stop:
        return None
    signs = list(gray_index_to_signs(start, k))
    arg = list(base)
    for s, v in zip(signs, directions):
        for c, a in enumerate(v):
            arg[c] += s * a
    sign = math.prod(signs)
    total = list(f(tuple(arg)))
    if sign < 0:
        total = [-a for a in total]
    twice = [tuple(2 * a for a in v) for v in directions]
    for t in range(start + 1, stop):
        b = (t & -t).bit_length() - 1
        step = twice[b]
        if signs[b] > 0:
            for c, a in enumerate(step):
                arg[c] -= a
        else:
            for c, a in enumerate(step):
                arg[c] += a
        signs[b] = -signs[b]
        sign = -sign
        value = f(tuple(arg))
        if sign > 0:
            for c, a in enumerate(value):
                total[c] += a
        else:
            for c, a in enumerate(value):
                total[c] -= a
    return tuple(total)


def signed_sum_naive(
    f: Callable[[tuple], tuple], base: Sequence, directions: Sequence[Sequence]
) -> tuple:
    """Same sum as :func:`signed_sum`, rebuilding every argument from scratch."""
    k = len(directions)
    check_sign_budget(k)
    total = None
    for eps in itertools.product((1, -1), repeat=k):
        arg = list(base)
        for s, v in zip(eps, directions):
            for c, a in enumerate(v):
                arg[c] += s * a
        value = f(tuple(arg))
        if sign_product(eps) < 0:
            value = tuple(-a for a in value)
        total = value if total is None else vadd(total, value)
    return total
