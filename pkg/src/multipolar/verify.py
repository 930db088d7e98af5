"""Exact property suites behind ``multipolar verify``.

Every suite draws trial ``t`` from its own generator stream, so a report is
a pure function of (identity, parameters, trials, seed).
"""
from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import multilinear as ml
from . import multipoly as mp
from .core import ContractError, basis_vector, format_scalar, signed_power_sum, vadd, vscale, zero_vector
from .generate import GeneratorConfig, InstanceGenerator
from .serialize import dumps, format_value

IDENTITIES = (
    "leibniz",
    "polarization-roundtrip",
    "eq-c",
    "thm-2-1",
    "cor-2-2",
    "remainder-n1",
    "multipolarization",
    "x0-invariance",
    "entire-polarization",
    "psi-roundtrip",
    "signed-power-sum",
    "nullspace",
)

FAULT_INJECTABLE = ("eq-c", "multipolarization")


@dataclass
class VerificationReport:
    identity: str
    params: dict
    trials: int
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": self.params,
            "trials": self.trials,
            "failures": self.failures,
            "result": "PASS" if self.passed else "FAIL",
        }

    def render(self, fmt: str = "text") -> str:
        """Deterministic rendering; the elapsed time is reported separately."""
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        params = " ".join(f"{k}={_param_text(v)}" for k, v in sorted(self.params.items()))
        lines = [
            f"identity: {self.identity}",
            f"params: {params}",
            f"trials run: {self.trials}",
            f"failures: {len(self.failures)}",
        ]
        for fail in self.failures:
            lines.append(f"- trial {fail['trial']} check {fail['check']}")
            lines.append(f"  lhs: {fail['lhs']}")
            lines.append(f"  rhs: {fail['rhs']}")
            for name, text in fail["inputs"].items():
                lines.append(f"  {name}:")
                lines.extend("    " + row for row in text.rstrip("\n").split("\n"))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _param_text(value) -> str:
    if isinstance(value, (tuple, list)):
        return ",".join(map(str, value))
    return str(value)


def _points_text(points) -> str:
    return "\n".join(" ".join(format_scalar(a) for a in p) for p in points) + "\n"


class _Trial:
    """Collects failures for one trial."""

    def __init__(self, index: int, failures: list):
        self.index = index
        self.failures = failures

    def check(self, name: str, lhs, rhs, **inputs) -> None:
        if lhs == rhs:
            return
        rendered = {}
        for key, obj in inputs.items():
            if isinstance(obj, (ml.MultilinearMap, ml.HomogeneousPolynomial, mp.Multipolynomial)):
                rendered[key] = dumps(obj)
            elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (list, tuple)):
                rendered[key] = _points_text(obj)
            else:
                rendered[key] = str(obj) + "\n"
        self.failures.append({
            "trial": self.index,
            "check": name,
            "lhs": _show(lhs),
            "rhs": _show(rhs),
            "inputs": rendered,
        })


def _show(value) -> str:
    if isinstance(value, tuple) and all(isinstance(a, (int, Fraction)) for a in value):
        return format_value(value)
    return str(value)


def _corrupt(P: mp.Multipolynomial) -> mp.Multipolynomial:
    """P plus the monomial x_1[0]^{n_1} ... x_m[0]^{n_m} in the first codomain entry."""
    key = tuple((n,) + (0,) * (P.dim - 1) for n in P.degrees)
    bump = (Fraction(1),) + (Fraction(0),) * (P.codim - 1)
    return P + mp.Multipolynomial(P.degrees, P.dim, P.codim, {key: bump})


def _basis_tuples(m: int, d: int):
    basis = [basis_vector(d, j) for j in range(d)]
    for combo in itertools.product(range(d), repeat=m):
        yield [basis[j] for j in combo]


# -- suites: each runs one trial -------------------------------------------

def _leibniz(gen, p, t: _Trial, fault):
    A = gen.multilinear(p["m"], p["dim"], p["codim"], symmetric=True)
    pts = gen.points(p["points"], p["dim"])
    lhs, rhs = ml.verify_leibniz(A, pts)
    t.check("leibniz", lhs, rhs, map=A, points=pts)


def _polarization_roundtrip(gen, p, t: _Trial, fault):
    A = gen.multilinear(p["m"], p["dim"], p["codim"], symmetric=True)
    t.check("polarize(hat(A)) = A", ml.polarize(ml.hat(A)), A, map=A)
    P = gen.homogeneous(p["m"], p["dim"], p["codim"])
    t.check("hat(polarize(P)) = P", ml.hat(ml.polarize(P)), P, polynomial=P)


def _eq_c(gen, p, t: _Trial, fault):
    m, n, d = p["m"], p["n"], p["dim"]
    P = gen.multipolynomial((n,) * m, d, p["codim"])
    q = p["points"]
    pts = gen.points(q, d)
    lams = [gen.scalar() for _ in range(q)]
    lhs, rhs = mp.expand_combination(P, pts, lams)
    if fault:
        combo = zero_vector(d)
        for lam, x in zip(lams, pts):
            combo = vadd(combo, vscale(lam, x))
        lhs = mp.diag_eval(_corrupt(P), combo)
    t.check("eq-c", lhs, rhs, multipolynomial=P, points=pts, lambdas=[tuple(lams)])


def _thm_2_1(gen, p, t: _Trial, fault):
    sig, d = p["signature"], p["dim"]
    P = gen.multipolynomial(sig, d, p["codim"])
    coeffs = mp.basis_coefficients(P)
    for _ in range(p["tuples"]):
        pts = gen.points(len(sig), d)
        t.check("basis reconstruction", mp.reconstruct_from_basis(coeffs, sig, pts, P.codim),
                mp.evaluate(P, pts), multipolynomial=P, points=pts)


def _cor_2_2(gen, p, t: _Trial, fault):
    sig, d = p["signature"], p["dim"]
    m = len(sig)
    P = gen.multipolynomial(sig, d, p["codim"])
    A = mp.diagonal_embed(P)
    for _ in range(p["tuples"]):
        pts = gen.points(m, d)
        u = tuple(a for x in pts for a in x)
        t.check("diagonal agreement", ml.evaluate(A, [u] * A.arity), mp.evaluate(P, pts),
                multipolynomial=P, points=pts)
    # slotwise linearity spot check
    args = gen.points(A.arity, m * d)
    s = int(gen.rng.integers(0, A.arity))
    w = gen.vector(m * d)
    lam = gen.scalar()
    mixed = list(args)
    mixed[s] = vadd(args[s], vscale(lam, w))
    other = list(args)
    other[s] = w
    t.check("slot linearity", ml.evaluate(A, mixed),
            vadd(ml.evaluate(A, args), vscale(lam, ml.evaluate(A, other))), multipolynomial=P)


def _remainder_n1(gen, p, t: _Trial, fault):
    m, d = p["m"], p["dim"]
    P = gen.multipolynomial((1,) * m, d, p["codim"])
    pts = gen.points(m, d)
    t.check("R_1 = 0", mp.remainder(P, pts), zero_vector(P.codim), multipolynomial=P, points=pts)
    A = gen.multilinear(m, d, p["codim"], symmetric=True)
    Q = mp.from_multilinear(A)
    x0 = gen.vector(d)
    pts = gen.points(m, d)
    classical = ml.polarization_formula(ml.hat(A), x0, pts)
    t.check("multipolarize = classical", mp.multipolarize(Q, x0, pts), classical,
            map=A, points=pts, x0=[x0])
    t.check("classical = A", classical, ml.evaluate(A, pts), map=A, points=pts, x0=[x0])


def _multipolarization(gen, p, t: _Trial, fault):
    m, n, d = p["m"], p["n"], p["dim"]
    P = gen.multipolynomial((n,) * m, d, p["codim"], symmetric=True)
    pts = gen.points(m, d)
    target = mp.evaluate(_corrupt(P) if fault else P, pts)
    for x0 in (zero_vector(d), gen.vector(d)):
        t.check("multipolarize = P", mp.multipolarize(P, x0, pts), target,
                multipolynomial=P, points=pts, x0=[x0])


def _x0_invariance(gen, p, t: _Trial, fault):
    m, n, d = p["m"], p["n"], p["dim"]
    P = gen.multipolynomial((n,) * m, d, p["codim"], symmetric=True)
    pts = gen.points(m, d)
    x0 = gen.vector(d)
    t.check("sign-sum term", mp.diagonal_sign_sum(P, x0, pts), mp.diagonal_sign_sum(P, zero_vector(d), pts),
            multipolynomial=P, points=pts, x0=[x0])
    H = gen.homogeneous(m, d, p["codim"])
    t.check("polarize(P, x0) = polarize(P)", ml.polarize(H, x0), ml.polarize(H), polynomial=H, x0=[x0])


def _entire_polarization(gen, p, t: _Trial, fault):
    m, n, d = p["m"], p["n"], p["dim"]
    A = gen.multilinear(m * n, d, p["codim"], symmetric=True)
    P = mp.psi(A, m, n)
    tuples = list(_basis_tuples(m, d)) + [gen.points(m, d) for _ in range(p["tuples"])]
    x0 = gen.vector(d)
    agree = True
    for pts in tuples:
        lhs, rhs = mp.evaluate(P, pts), mp.entire_polarization_rhs(P, x0, pts)
        t.check("entire formula on Im(Psi)", lhs, rhs, map=A, points=pts, x0=[x0])
        agree = agree and lhs == rhs
    t.check("member <=> entire formula holds", mp.in_image_psi(P).member, agree, map=A)


def _psi_roundtrip(gen, p, t: _Trial, fault):
    m, n, d = p["m"], p["n"], p["dim"]
    A = gen.multilinear(m * n, d, p["codim"], symmetric=True)
    B = gen.multilinear(m * n, d, p["codim"], symmetric=True)
    lam = gen.scalar()
    P = mp.psi(A, m, n)
    w = mp.in_image_psi(P)
    t.check("member", w.member, True, map=A)
    t.check("witness = A", w.witness, A, map=A)
    t.check("psi linear", mp.psi(A + B.scale(lam), m, n), P + mp.psi(B, m, n).scale(lam), map=A)
    t.check("psi(A) = 0 iff A = 0", P.is_zero(), A.is_zero(), map=A)


def _signed_power_sum(gen, p, t: _Trial, fault):
    for n in range(1, p["n_max"] + 1):
        for q in range(n + 1):
            expected = math.factorial(n) * 2 ** n if q == n else 0
            t.check(f"signed_power_sum({n},{q})", signed_power_sum(n, q), Fraction(expected))


def _nullspace(gen, p, t: _Trial, fault):
    sig, d = p["signature"], p["dim"]
    P = gen.multipolynomial(sig, d, p["codim"])
    if not P.is_zero():
        t.check("nonzero mixed P is not symmetric", mp.is_symmetric(P), False, multipolynomial=P)
    zero = mp.Multipolynomial(sig, d, p["codim"])
    t.check("zero P is symmetric", mp.is_symmetric(zero), True)
    try:
        gen.multipolynomial(sig, d, p["codim"], symmetric=True)
        rejected = False
    except ContractError:
        rejected = True
    t.check("symmetric construction rejected", rejected, True)


SUITES = {
    "leibniz": (_leibniz, ("m", "dim", "codim", "points")),
    "polarization-roundtrip": (_polarization_roundtrip, ("m", "dim", "codim")),
    "eq-c": (_eq_c, ("m", "n", "dim", "codim", "points")),
    "thm-2-1": (_thm_2_1, ("signature", "dim", "codim", "tuples")),
    "cor-2-2": (_cor_2_2, ("signature", "dim", "codim", "tuples")),
    "remainder-n1": (_remainder_n1, ("m", "dim", "codim")),
    "multipolarization": (_multipolarization, ("m", "n", "dim", "codim")),
    "x0-invariance": (_x0_invariance, ("m", "n", "dim", "codim")),
    "entire-polarization": (_entire_polarization, ("m", "n", "dim", "codim", "tuples")),
    "psi-roundtrip": (_psi_roundtrip, ("m", "n", "dim", "codim")),
    "signed-power-sum": (_signed_power_sum, ("n_max",)),
    "nullspace": (_nullspace, ("signature", "dim", "codim")),
}

DEFAULTS = {
    "m": 2, "n": 2, "dim": 2, "codim": 1, "points": None, "tuples": None,
    "signature": None, "n_max": 6,
}


def resolve_params(identity: str, **given) -> dict:
    """Fill in defaults and keep only the parameters the suite uses."""
    if identity not in SUITES:
        raise KeyError(identity)
    _, names = SUITES[identity]
    values = dict(DEFAULTS)
    values.update({k: v for k, v in given.items() if v is not None})
    if values["points"] is None:
        values["points"] = values["dim"] if identity == "eq-c" else 2
    if values["tuples"] is None:
        values["tuples"] = 10 if identity == "entire-polarization" else 20
    if values["signature"] is None:
        values["signature"] = (1, 2) if identity == "nullspace" else (2, 1)
    values["signature"] = tuple(values["signature"])
    if identity == "remainder-n1":
        values["n"] = 1
    return {k: values[k] for k in names}


def run_identity(identity: str, params: dict, trials: int, seed: int, fault: bool = False) -> VerificationReport:
    if fault and identity not in FAULT_INJECTABLE:
        raise ValueError(f"fault injection is not available for {identity}")
    suite, _ = SUITES[identity]
    if identity == "signed-power-sum":
        trials = 1
    cfg = GeneratorConfig(seed=seed)
    failures: list = []
    start = time.perf_counter()
    for k in range(trials):
        suite(InstanceGenerator(cfg, stream=k), params, _Trial(k, failures), fault)
    report_params = dict(params, seed=seed)
    if fault:
        report_params["fault"] = True
    return VerificationReport(identity, report_params, trials, failures, time.perf_counter() - start)
