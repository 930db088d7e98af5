"""(n_1, ..., n_m)-homogeneous polynomials on (K^d)^m.

A multipolynomial is stored as a dict from an m x d exponent matrix to a
codomain value. Row i of the matrix is the exponent vector of slot i, so row i
sums to n_i::

    P(x_1, ..., x_m) = sum_alpha c_alpha * prod_i prod_j x_i[j] ** alpha[i][j]
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import (
    ArityError,
    BoundsError,
    ContractError,
    ShapeError,
    basis_vector,
    enumerate_row_sum_matrices,
    matrix_sets_M_and_D,
    multi_factorial,
    row_sums,
    signed_sum,
    vadd,
    vector,
    vscale,
    vsub,
    zero_vector,
)
from .multilinear import (
    MAX_PERMUTATION_ARITY,
    HomogeneousPolynomial,
    MultilinearMap,
    is_symmetric as map_is_symmetric,
    symmetrize,
)

MAX_BASIS_KEYS = 2 ** 20
MAX_GRID_POINTS = 2 ** 18


@dataclass(frozen=True)
class Multipolynomial:
    degrees: tuple
    dim: int
    codim: int = 1
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        degrees = tuple(int(n) for n in self.degrees)
        if not degrees or min(degrees) < 1:
            raise BoundsError(f"degrees must be positive integers, got {self.degrees}")
        if self.dim < 1 or self.codim < 1:
            raise BoundsError("dim and codim must be positive")
        object.__setattr__(self, "degrees", degrees)
        clean = {}
        for alpha in sorted(self.terms):
            key = tuple(tuple(int(a) for a in row) for row in alpha)
            if len(key) != len(degrees) or any(len(row) != self.dim for row in key):
                raise ShapeError(f"exponent matrix {alpha} is not {len(degrees)}x{self.dim}")
            if row_sums(key) != degrees or any(a < 0 for row in key for a in row):
                raise ArityError(f"exponent matrix {alpha} does not match degrees {degrees}")
            value = tuple(Fraction(a) for a in self.terms[alpha])
            if len(value) != self.codim:
                raise ShapeError(f"value at {alpha} has length {len(value)}, expected {self.codim}")
            if any(value):
                clean[key] = value
        object.__setattr__(self, "terms", clean)

    @property
    def m(self) -> int:
        return len(self.degrees)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    @property
    def equal_signature(self) -> bool:
        return len(set(self.degrees)) == 1

    def __call__(self, *points):
        return evaluate(self, points)

    def __add__(self, other: "Multipolynomial") -> "Multipolynomial":
        if (self.degrees, self.dim, self.codim) != (other.degrees, other.dim, other.codim):
            raise ShapeError("multipolynomials live in different spaces")
        out = dict(self.terms)
        for key, value in other.terms.items():
            out[key] = vadd(out.get(key, zero_vector(self.codim)), value)
        return Multipolynomial(self.degrees, self.dim, self.codim, out)

    def scale(self, c) -> "Multipolynomial":
        c = Fraction(c)
        return Multipolynomial(
            self.degrees, self.dim, self.codim,
            {k: vscale(c, v) for k, v in self.terms.items()},
        )

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class PsiWitness:
    """Outcome of the image-of-Psi test.

    ``witness`` is the symmetric mn-linear map A with Psi(A) = P when
    ``member``; otherwise ``defect`` is ``(x0, points, lhs, rhs)`` where the
    direct value ``lhs`` differs from the entire polarization sum ``rhs``.
    """

    member: bool
    witness: MultilinearMap | None = None
    defect: tuple | None = None


def _points(points: Sequence, count: int, d: int) -> list:
    if len(points) != count:
        raise ArityError(f"expected {count} points, got {len(points)}")
    pts = [vector(p) for p in points]
    for p in pts:
        if len(p) != d:
            raise ShapeError(f"point of dimension {len(p)}, expected {d}")
    return pts


def _equal_degree(P: Multipolynomial) -> int:
    if not P.equal_signature:
        raise ContractError(f"operation needs an equal signature, got {P.degrees}")
    return P.degrees[0]


def _term_weight(alpha, pts) -> Fraction:
    w = Fraction(1)
    for row, x in zip(alpha, pts):
        for e, a in zip(row, x):
            if e:
                w *= a ** e
                if not w:
                    return w
    return w


def evaluate(P: Multipolynomial, points: Sequence) -> tuple:
    pts = _points(points, P.m, P.dim)
    total = [Fraction(0)] * P.codim
    for alpha, value in P.terms.items():
        w = _term_weight(alpha, pts)
        if w:
            for c, v in enumerate(value):
                total[c] += w * v
    return tuple(total)


def _split(P: Multipolynomial) -> Callable[[tuple], tuple]:
    """P as a function of the concatenated vector (x_1, ..., x_m) in K^{md}."""
    d = P.dim
    terms = list(P.terms.items())
    codim = P.codim

    def f(u):
        total = [Fraction(0)] * codim
        pts = [u[i * d:(i + 1) * d] for i in range(P.m)]
        for alpha, value in terms:
            w = _term_weight(alpha, pts)
            if w:
                for c, v in enumerate(value):
                    total[c] += w * v
        return tuple(total)

    return f


def diagonal_polynomial(P: Multipolynomial) -> HomogeneousPolynomial:
    """x -> P(x, ..., x) as a homogeneous polynomial of degree n_1 + ... + n_m."""
    out: dict = {}
    for alpha, value in P.terms.items():
        key = tuple(sum(col) for col in zip(*alpha))
        out[key] = vadd(out.get(key, zero_vector(P.codim)), value)
    return HomogeneousPolynomial(P.total_degree, P.dim, P.codim, out)


def diag_eval(P: Multipolynomial, x) -> tuple:
    _equal_degree(P)
    (x,) = _points([x], 1, P.dim)
    return evaluate(P, [x] * P.m)


def slot_polynomial(P: Multipolynomial, j: int, fixed: Sequence) -> HomogeneousPolynomial:
    """The polynomial in slot j (0-based) with the other slots set to ``fixed``."""
    if not 0 <= j < P.m:
        raise BoundsError(f"slot {j} outside 0..{P.m - 1}")
    others = _points(fixed, P.m - 1, P.dim)
    pts = others[:j] + [None] + others[j:]
    out: dict = {}
    for alpha, value in P.terms.items():
        w = Fraction(1)
        for i, (row, x) in enumerate(zip(alpha, pts)):
            if i == j:
                continue
            for e, a in zip(row, x):
                if e:
                    w *= a ** e
        if w:
            key = alpha[j]
            out[key] = vadd(out.get(key, zero_vector(P.codim)), vscale(w, value))
    return HomogeneousPolynomial(P.degrees[j], P.dim, P.codim, out)


def permute_slots(P: Multipolynomial, perm: Sequence[int]) -> Multipolynomial:
    """Q(x_1, ..., x_m) = P(x_perm[0], ..., x_perm[m-1])."""
    m = P.m
    inv = [0] * m
    for i, p in enumerate(perm):
        inv[p] = i
    # Slot i of P reads x_perm[i], so slot k of Q carries row inv[k] of alpha.
    degrees = tuple(P.degrees[inv[k]] for k in range(m))
    terms = {tuple(alpha[inv[k]] for k in range(m)): v for alpha, v in P.terms.items()}
    return Multipolynomial(degrees, P.dim, P.codim, terms)


def is_symmetric(P: Multipolynomial) -> bool:
    """Exact symmetry test under every permutation of the m slots.

    Equal signatures compare terms under swaps of adjacent rows, which
    generate all permutations. Mixed signatures are decided by comparing P
    with each adjacent-swapped version on the grid {0, ..., n_max}^{md}, which
    determines polynomials of per-variable degree <= n_max.
    """
    m = P.m
    if m > MAX_PERMUTATION_ARITY:
        raise BoundsError(f"m = {m} exceeds the permutation guard {MAX_PERMUTATION_ARITY}")
    swaps = []
    for i in range(m - 1):
        perm = list(range(m))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        swaps.append(perm)
    if P.equal_signature:
        return all(permute_slots(P, perm).terms == P.terms for perm in swaps)
    n_max = max(P.degrees)
    _check_grid(n_max, m * P.dim)
    for u in itertools.product(range(n_max + 1), repeat=m * P.dim):
        pts = [tuple(Fraction(a) for a in u[i * P.dim:(i + 1) * P.dim]) for i in range(m)]
        value = evaluate(P, pts)
        for perm in swaps:
            if evaluate(P, [pts[k] for k in perm]) != value:
                return False
    return True


def _check_grid(n_max: int, nvars: int) -> None:
    if (n_max + 1) ** nvars > MAX_GRID_POINTS:
        raise BoundsError(
            f"grid of {(n_max + 1) ** nvars} points exceeds the guard {MAX_GRID_POINTS}"
        )


def interpolate(
    f: Callable, degrees: Sequence[int], dim: int, codim: int = 1
) -> Multipolynomial:
    """Recover the multipolynomial agreeing with ``f(x_1, ..., x_m)``.

    ``f`` is sampled on the tensor grid {0, ..., n_max}^{md} and the monomial
    coefficients are solved exactly one axis at a time. Raises ContractError
    when the interpolant has monomials outside the requested signature.
    """
    degrees = tuple(degrees)
    m = len(degrees)
    n_max = max(degrees)
    nvars = m * dim
    _check_grid(n_max, nvars)
    size = n_max + 1
    values = np.empty((size,) * nvars + (codim,), dtype=object)
    for u in itertools.product(range(size), repeat=nvars):
        pts = [tuple(Fraction(a) for a in u[i * dim:(i + 1) * dim]) for i in range(m)]
        values[u] = tuple(f(*pts))
    vinv = _inverse_vandermonde(size)
    for axis in range(nvars):
        values = np.moveaxis(np.tensordot(vinv, values, axes=([1], [axis])), 0, axis)
    terms = {}
    for u in itertools.product(range(size), repeat=nvars):
        value = tuple(values[u])
        if any(value):
            alpha = tuple(tuple(u[i * dim:(i + 1) * dim]) for i in range(m))
            if row_sums(alpha) != degrees:
                raise ContractError(f"monomial {alpha} does not have degrees {degrees}")
            terms[alpha] = value
    return Multipolynomial(degrees, dim, codim, terms)


def _inverse_vandermonde(size: int) -> np.ndarray:
    """Exact inverse of V[t][e] = t**e, t, e = 0..size-1."""
    n = size
    aug = [[Fraction(t) ** e for e in range(n)] + [Fraction(int(r == t)) for r in range(n)]
           for t in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [a / p for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    inv = np.empty((n, n), dtype=object)
    for r in range(n):
        for c in range(n):
            inv[r, c] = aug[r][n + c]
    return inv


# -- sign-sum formulas -----------------------------------------------------

def _slot_directions(alpha, pts, d: int, m: int) -> list:
    """Directions for the argument (sum_j eps_1j x_j, ..., sum_j eps_mj x_j).

    Row i contributes alpha[i][j] copies of x_j, placed in block i of K^{md},
    in column order; this matches the sign numbering of ``epsilon_block``.
    """
    dirs = []
    for i, row in enumerate(alpha):
        for x, a in zip(pts, row):
            if a:
                v = (Fraction(0),) * (i * d) + tuple(x) + (Fraction(0),) * ((m - i - 1) * d)
                dirs.extend([v] * a)
    return dirs


def remainder(P: Multipolynomial, points: Sequence) -> tuple:
    """The remainder function R_n at (x_1, ..., x_m).

    Sum over alpha in M \\ D and eps in {+-1}^{mn} of
    eps_1...eps_mn / (alpha_1! ... alpha_m!) * P(sum_j eps_1j x_j, ..., sum_j eps_mj x_j).
    """
    n = _equal_degree(P)
    m, d = P.m, P.dim
    pts = _points(points, m, d)
    big_m, d_set = matrix_sets_M_and_D(m, n)
    f = _split(P)
    base = zero_vector(m * d)
    total = zero_vector(P.codim)
    for alpha in big_m:
        if alpha in d_set:
            continue
        body = tuple(row[1:] for row in alpha)
        weight = Fraction(1, math.prod(multi_factorial(row) for row in body))
        s = signed_sum(f, base, _slot_directions(body, pts, d, m))
        total = vadd(total, vscale(weight, s))
    return total


def diagonal_sign_sum(P: Multipolynomial, x0, points: Sequence) -> tuple:
    """sum eps_1...eps_mn P(x0 + sum_k eps_k x_1 + ... + sum_k eps_{(m-1)n+k} x_m)^m.

    Each point takes n consecutive signs; the sum is unweighted.
    """
    n = _equal_degree(P)
    pts = _points(points, P.m, P.dim)
    (x0,) = _points([x0], 1, P.dim)
    dirs = [x for x in pts for _ in range(n)]
    return signed_sum(diagonal_polynomial(P), x0, dirs)


def multipolarize(P: Multipolynomial, x0, points: Sequence) -> tuple:
    """Polarization with remainder; equals P(x_1, ..., x_m) when P is symmetric."""
    n = _equal_degree(P)
    m, d = P.m, P.dim
    pts = _points(points, m, d)
    (x0,) = _points([x0], 1, d)
    head = vscale(
        Fraction(1, math.factorial(m) * (math.factorial(n) * 2 ** n) ** m),
        diagonal_sign_sum(P, x0, pts),
    )
    tail = vscale(Fraction(1, math.factorial(m) * 2 ** (m * n)), remainder(P, pts))
    return vsub(head, tail)


def entire_polarization_rhs(P: Multipolynomial, x0, points: Sequence) -> tuple:
    """(1/((mn)! 2^{mn})) sum eps_1...eps_mn P(x0 + sum_k eps_k x_1 + ...)^m."""
    n = _equal_degree(P)
    m, d = P.m, P.dim
    pts = _points(points, m, d)
    (x0,) = _points([x0], 1, d)
    weight = Fraction(1, math.factorial(m * n) * 2 ** (m * n))
    return vscale(weight, diagonal_sign_sum(P, x0, pts))


def expand_combination(P: Multipolynomial, points: Sequence, lambdas: Sequence) -> tuple[tuple, tuple]:
    """Both sides of the expansion of P(sum_j lambda_j x_j)^m.

    The right side runs over every m x q exponent matrix with row sums n
    (q = number of points) and every sign vector of length mn.
    """
    n = _equal_degree(P)
    m, d = P.m, P.dim
    q = len(points)
    if q < 1 or len(lambdas) != q:
        raise ShapeError(f"need matching nonempty points and lambdas, got {q} and {len(lambdas)}")
    pts = _points(points, q, d)
    lams = vector(lambdas)
    combo = zero_vector(d)
    for lam, x in zip(lams, pts):
        combo = vadd(combo, vscale(lam, x))
    left = diag_eval(P, combo)

    f = _split(P)
    base = zero_vector(m * d)
    right = zero_vector(P.codim)
    for alpha in enumerate_row_sum_matrices(m, q, n):
        lam_power = Fraction(1)
        for lam, c in zip(lams, (sum(col) for col in zip(*alpha))):
            lam_power *= lam ** c
        if not lam_power:
            continue
        weight = lam_power / math.prod(multi_factorial(row) for row in alpha)
        s = signed_sum(f, base, _slot_directions(alpha, pts, d, m))
        right = vadd(right, vscale(weight, s))
    right = vscale(Fraction(1, 2 ** (m * n)), right)
    return left, right


# -- basis representation and embeddings -----------------------------------

def _blocks(degrees: Sequence[int]) -> list:
    """Position ranges of the per-slot index blocks in (i_1, ..., i_M)."""
    out, start = [], 0
    for n in degrees:
        out.append(range(start, start + n))
        start += n
    return out


def basis_coefficients(P: Multipolynomial) -> dict:
    """Coefficients c[i_1, ..., i_M] of P in products of coordinate functionals.

    c = 1/(n_1! ... n_m! 2^M) * sum eps_1...eps_M *
        P(sum_{k in block 1} eps_k e_{i_k}, ..., sum_{k in block m} eps_k e_{i_k}).
    Indices are 0-based; the result is dense over {0..d-1}^M.
    """
    m, d = P.m, P.dim
    big = P.total_degree
    if d ** big > MAX_BASIS_KEYS:
        raise BoundsError(f"{d}^{big} coefficients exceed the guard {MAX_BASIS_KEYS}")
    owner = [j for j, n in enumerate(P.degrees) for _ in range(n)]
    weight = Fraction(1, math.prod(math.factorial(n) for n in P.degrees) * 2 ** big)
    f = _split(P)
    base = zero_vector(m * d)
    embedded = [[(Fraction(0),) * (j * d) + basis_vector(d, i) + (Fraction(0),) * ((m - j - 1) * d)
                 for i in range(d)] for j in range(m)]
    blocks = _blocks(P.degrees)
    # Within a block the coefficient is symmetric, so compute once per sorted block.
    per_block = [list(itertools.combinations_with_replacement(range(d), n)) for n in P.degrees]
    out = {}
    for choice in itertools.product(*per_block):
        key = tuple(i for block in choice for i in block)
        dirs = [embedded[owner[s]][key[s]] for s in range(big)]
        value = vscale(weight, signed_sum(f, base, dirs))
        orderings = [set(itertools.permutations(block)) for block in choice]
        for combo in itertools.product(*orderings):
            out[tuple(i for block in combo for i in block)] = value
    assert len(out) == d ** big
    return dict(sorted(out.items()))


def reconstruct_from_basis(coeffs: dict, degrees: Sequence[int], points: Sequence, codim: int = 1) -> tuple:
    """sum_i c_i prod_j prod_{s in block j} x_j[i_s]."""
    owner = [j for j, n in enumerate(degrees) for _ in range(n)]
    pts = [vector(p) for p in points]
    total = zero_vector(codim)
    for key, value in coeffs.items():
        w = Fraction(1)
        for s, i in enumerate(key):
            w *= pts[owner[s]][i]
            if not w:
                break
        if w:
            total = vadd(total, vscale(w, value))
    return total


def diagonal_embed(P: Multipolynomial) -> MultilinearMap:
    """An M-linear map on K^{md} agreeing with P on its diagonal.

    Slot s of the map reads block owner(s) of its argument, so
    A(u, ..., u) = P(x_1, ..., x_m) for u the concatenation of the x_j.
    The map is not symmetrized.
    """
    d = P.dim
    owner = [j for j, n in enumerate(P.degrees) for _ in range(n)]
    coeffs = {}
    for key, value in basis_coefficients(P).items():
        if any(value):
            coeffs[tuple(owner[s] * d + i for s, i in enumerate(key))] = value
    return MultilinearMap(P.total_degree, P.m * d, P.codim, coeffs)


def from_multilinear(A: MultilinearMap) -> Multipolynomial:
    """An m-linear map viewed as a (1, ..., 1)-homogeneous polynomial."""
    d = A.dim
    terms = {tuple(tuple(int(j == c) for c in range(d)) for j in key): v for key, v in A.coeffs.items()}
    return Multipolynomial((1,) * A.arity, d, A.codim, terms)


def psi(A: MultilinearMap, m: int, n: int) -> Multipolynomial:
    """Psi A(x_1, ..., x_m) = A x_1^n ... x_m^n for a symmetric mn-linear A."""
    if m < 1 or n < 1 or A.arity != m * n:
        raise ArityError(f"arity {A.arity} does not split into {m} blocks of {n}")
    if not map_is_symmetric(A):
        raise ContractError("Psi is defined on symmetric maps")
    d = A.dim
    terms: dict = {}
    for key, value in A.coeffs.items():
        alpha = []
        for i in range(m):
            row = [0] * d
            for j in key[i * n:(i + 1) * n]:
                row[j] += 1
            alpha.append(tuple(row))
        alpha = tuple(alpha)
        terms[alpha] = vadd(terms.get(alpha, zero_vector(A.codim)), value)
    return Multipolynomial((n,) * m, d, A.codim, terms)


def psi_candidate(P: Multipolynomial) -> MultilinearMap:
    """The only possible Psi-preimage of P.

    Symmetrizes the diagonal embedding into a map on K^{md} and substitutes
    the repeated vectors (x, ..., x) in every slot:
    A(e_k1, ..., e_kmn) = sum over block choices of Pv(e^(j1)_k1, ..., e^(jmn)_kmn).
    """
    _equal_degree(P)
    d = P.dim
    sym = symmetrize(diagonal_embed(P))
    out: dict = {}
    for key, value in sym.coeffs.items():
        k = tuple(J % d for J in key)
        out[k] = vadd(out.get(k, zero_vector(P.codim)), value)
    return MultilinearMap(P.total_degree, d, P.codim, out)


def in_image_psi(P: Multipolynomial, seed: int = 0, random_tuples: int = 10) -> PsiWitness:
    """Decide whether P = Psi(A) for a symmetric mn-linear A.

    On failure a defect of the entire polarization formula is located: basis
    tuples first, then seeded random tuples, then the interpolation grid
    (which is guaranteed to contain one).
    """
    n = _equal_degree(P)
    if not is_symmetric(P):
        raise ContractError("membership in the image of Psi is tested for symmetric P")
    m, d = P.m, P.dim
    candidate = psi_candidate(P)
    if psi(candidate, m, n).terms == P.terms:
        return PsiWitness(True, witness=candidate)
    x0 = zero_vector(d)
    for pts in _defect_search_points(m, d, n, seed, random_tuples):
        lhs = evaluate(P, pts)
        rhs = entire_polarization_rhs(P, x0, pts)
        if lhs != rhs:
            return PsiWitness(False, defect=(x0, tuple(pts), lhs, rhs))
    raise AssertionError("no defect found on the interpolation grid")  # unreachable for exact inputs


def _defect_search_points(m: int, d: int, n: int, seed: int, random_tuples: int):
    basis = [basis_vector(d, j) for j in range(d)]
    for combo in itertools.product(range(d), repeat=m):
        yield [basis[j] for j in combo]
    rng = np.random.default_rng(seed)
    for _ in range(random_tuples):
        yield [
            tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in range(d))
            for _ in range(m)
        ]
    for u in itertools.product(range(n + 1), repeat=m * d):
        yield [tuple(Fraction(a) for a in u[i * d:(i + 1) * d]) for i in range(m)]
