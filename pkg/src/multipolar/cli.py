"""Command-line interface: ``multipolar verify|eval|polarize|check-image|counterexample|bench``.

Exit codes: 0 success, 1 a failed identity or a non-member, 2 invalid input.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import multilinear as ml
from . import multipoly as mp
from .core import DEFAULT_MAX_SIGNS, MultipolarError, set_max_signs
from .serialize import ParseError, dumps, format_value, loads, loads_points
from .verify import FAULT_INJECTABLE, IDENTITIES, resolve_params, run_identity


def _fail(message: str, code: int = 2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_object(path: str):
    try:
        return loads(Path(path).read_text())
    except ParseError as exc:
        _fail(f"{path}: {exc}")
    except OSError as exc:
        _fail(str(exc))


def _read_points(path: str, dim: int):
    try:
        return loads_points(Path(path).read_text(), dim)
    except ParseError as exc:
        _fail(f"{path}: {exc}")
    except OSError as exc:
        _fail(str(exc))


def _signature(ctx, param, value):
    if value is None:
        return None
    try:
        degrees = tuple(int(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter("expected comma-separated positive integers, e.g. 2,1")
    if not degrees or min(degrees) < 1:
        raise click.BadParameter("degrees must be positive")
    return degrees


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for the PCG64 generator.")
@click.option("--trials", type=click.IntRange(min=1), default=25, show_default=True)
@click.option("--max-signs", type=click.IntRange(min=2), default=DEFAULT_MAX_SIGNS, show_default=True,
              help="Largest number of sign vectors a single sum may visit.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.pass_context
def main(ctx, seed, trials, max_signs, fmt):
    """Exact multilinear/multipolynomial polarization toolkit."""
    set_max_signs(max_signs)
    ctx.obj = {"seed": seed, "trials": trials, "format": fmt}


@main.command()
@click.argument("identity", type=click.Choice(IDENTITIES))
@click.option("--m", type=click.IntRange(min=1), default=None)
@click.option("--n", type=click.IntRange(min=1), default=None)
@click.option("--dim", type=click.IntRange(min=1), default=None)
@click.option("--codim", type=click.IntRange(min=1), default=None)
@click.option("--signature", callback=_signature, default=None, help="Degrees, e.g. 2,1.")
@click.option("--points", type=click.IntRange(min=1), default=None, help="Number of points (leibniz, eq-c).")
@click.option("--tuples", type=click.IntRange(min=0), default=None, help="Random point tuples per trial.")
@click.option("--n-max", type=click.IntRange(min=1), default=None, help="Largest n for signed-power-sum.")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default=None)
@click.option("--inject-fault", is_flag=True,
              help=f"Corrupt one coefficient on one side to exercise the failure path ({', '.join(FAULT_INJECTABLE)}).")
@click.pass_obj
def verify(obj, identity, m, n, dim, codim, signature, points, tuples, n_max, trials, seed, fmt, inject_fault):
    """Run an exact property suite and print a report."""
    if inject_fault and identity not in FAULT_INJECTABLE:
        _fail(f"--inject-fault is not available for {identity}")
    trials = trials or obj["trials"]
    seed = obj["seed"] if seed is None else seed
    fmt = fmt or obj["format"]
    params = resolve_params(identity, m=m, n=n, dim=dim, codim=codim, signature=signature,
                            points=points, tuples=tuples, n_max=n_max)
    try:
        report = run_identity(identity, params, trials, seed, fault=inject_fault)
    except MultipolarError as exc:
        _fail(str(exc))
    click.echo(report.render(fmt), nl=False)
    click.echo(f"elapsed: {report.elapsed:.3f}s", err=True)
    sys.exit(report.exit_code)


@main.command(name="eval")
@click.argument("input_file", type=click.Path(dir_okay=False))
@click.argument("points_file", type=click.Path(dir_okay=False))
def eval_cmd(input_file, points_file):
    """Evaluate a map or multipolynomial at the points listed one per line."""
    obj = _read_object(input_file)
    pts = _read_points(points_file, obj.dim)
    try:
        value = ml.evaluate(obj, pts) if isinstance(obj, ml.MultilinearMap) else mp.evaluate(obj, pts)
    except MultipolarError as exc:
        _fail(str(exc))
    click.echo(format_value(value))


@main.command()
@click.argument("input_file", type=click.Path(dir_okay=False))
@click.option("--x0", "x0_file", type=click.Path(dir_okay=False), default=None,
              help="File holding the base point x0 (defaults to 0).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def polarize(input_file, x0_file, output):
    """Polarize a homogeneous polynomial (a multipolynomial with m = 1)."""
    obj = _read_object(input_file)
    if not isinstance(obj, mp.Multipolynomial) or obj.m != 1:
        _fail("polarize expects a multipolynomial with m = 1")
    x0 = None
    if x0_file:
        x0s = _read_points(x0_file, obj.dim)
        if len(x0s) != 1:
            _fail(f"{x0_file}: expected exactly one point")
        x0 = x0s[0]
    P = ml.HomogeneousPolynomial(obj.degrees[0], obj.dim, obj.codim,
                                 {alpha[0]: v for alpha, v in obj.terms.items()})
    text = dumps(ml.polarize(P, x0))
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command(name="check-image")
@click.argument("input_file", type=click.Path(dir_okay=False))
@click.pass_obj
def check_image(obj, input_file):
    """Decide whether a symmetric multipolynomial lies in the image of Psi."""
    P = _read_object(input_file)
    if not isinstance(P, mp.Multipolynomial) or not P.equal_signature:
        _fail("check-image expects a multipolynomial with equal degrees")
    try:
        if not mp.is_symmetric(P):
            _fail("check-image expects a symmetric multipolynomial")
        result = mp.in_image_psi(P, seed=obj["seed"])
    except MultipolarError as exc:
        _fail(str(exc))
    if result.member:
        click.echo("member: true")
        click.echo("witness:")
        click.echo(dumps(result.witness), nl=False)
        sys.exit(0)
    x0, pts, lhs, rhs = result.defect
    click.echo("member: false")
    click.echo("defect:")
    click.echo("  x0: " + format_value(x0))
    for k, p in enumerate(pts, start=1):
        click.echo(f"  x{k}: " + format_value(p))
    click.echo("  direct value: " + format_value(lhs))
    click.echo("  entire polarization value: " + format_value(rhs))
    sys.exit(1)


def counterexample_rows() -> list[tuple[str, str, str]]:
    """(quantity, computed, expected) for P = x1 x2 y1 y2 at x0 = 0, (e1, e2)."""
    P = mp.Multipolynomial((2, 2), 2, 1, {((1, 1), (1, 1)): (1,)})
    x0, e1, e2 = (0, 0), (1, 0), (0, 1)
    member = mp.in_image_psi(P).member
    return [
        ("eval(e1, e2)", format_value(mp.evaluate(P, [e1, e2])), "0"),
        ("entire_polarization_rhs(0, e1, e2)", format_value(mp.entire_polarization_rhs(P, x0, [e1, e2])), "1/6"),
        ("remainder(e1, e2)", format_value(mp.remainder(P, [e1, e2])), "16"),
        ("multipolarize(0, e1, e2)", format_value(mp.multipolarize(P, x0, [e1, e2])), "0"),
        ("in_image_psi", str(member).lower(), "false"),
    ]


@main.command()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default=None)
@click.pass_obj
def counterexample(obj, fmt):
    """Reproduce the x1 x2 y1 y2 counterexample to the entire polarization formula."""
    fmt = fmt or obj["format"]
    rows = counterexample_rows()
    ok = all(got == want for _, got, want in rows)
    if fmt == "json":
        click.echo(json.dumps({
            "multipolynomial": "x1 x2 y1 y2",
            "values": [{"quantity": q, "computed": g, "expected": w} for q, g, w in rows],
            "result": "PASS" if ok else "FAIL",
        }, indent=2, sort_keys=True))
    else:
        click.echo("multipolynomial: x1 x2 y1 y2 (m = n = 2, dim = 2)")
        for q, g, w in rows:
            click.echo(f"{q} = {g} (expected {w}) {'ok' if g == w else 'MISMATCH'}")
        click.echo(f"result: {'PASS' if ok else 'FAIL'}")
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--mn", type=click.IntRange(1, bench_mod.MAX_BENCH_SIGNS), required=True,
              help="Number of signs in the sum.")
@click.option("--reps", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--m", type=click.IntRange(min=1), default=None, help="Slots; must divide mn.")
@click.option("--dim", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--kernels", default="gray,naive,partitioned", show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def bench(obj, mn, reps, m, dim, kernels, output):
    """Time the Gray-code, naive and partitioned sign-sum kernels; emit CSV."""
    names = tuple(k.strip() for k in kernels.split(",") if k.strip())
    unknown = [k for k in names if k not in bench_mod.KERNELS]
    if unknown or not names:
        _fail(f"unknown kernels {unknown}; choose from {sorted(bench_mod.KERNELS)}")
    try:
        rows = bench_mod.run_bench(mn, reps, m, dim, obj["seed"], names)
    except MultipolarError as exc:
        _fail(str(exc))
    text = bench_mod.to_csv(rows)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    sys.exit(0 if all(r["matches"] == "true" for r in rows) else 1)


if __name__ == "__main__":
    main()
