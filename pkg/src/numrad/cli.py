"""Command-line interface.

Files in, stdout out.  Every command prints a single JSON document (or
key,value CSV rows with --format csv) and uses the exit-code contract:
0 ok, 1 parse/validation, 2 capability, 3 not optimal, 4 inconclusive,
5 internal solver failure.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .approx import ApproxProblem, OperatorSubspace, solve
from .certify import best_approx_certificate, caratheodory_reduce, suba_constant
from .errors import (
    CapabilityError,
    DegenerateInputError,
    DimensionMismatchError,
    NumradError,
    SolverError,
)
from .extend import Subspace, minimal_extension, minimal_projection, paper_examples
from .radius import (
    numerical_index,
    numerical_radius,
    q_radius,
    range_boundary_samples,
)
from .spaces import (
    DEFAULT_PHASE_RESOLUTION,
    ScalarField,
    Space,
    array_from_json,
    radius_pairs,
)

EXIT_PARSE = 1
EXIT_CAPABILITY = 2
EXIT_NOT_OPTIMAL = 3
EXIT_INCONCLUSIVE = 4
EXIT_INTERNAL = 5


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


def _space(path: str) -> Space:
    return Space.from_json(_load(path))


def _operator(path: str, space: Space) -> np.ndarray:
    T = array_from_json(_load(path), space.field)
    n = space.dim
    if T.shape != (n, n):
        raise DimensionMismatchError(f"operator shape {T.shape} != ({n}, {n})")
    return T


def _family(path: str, space: Space) -> OperatorSubspace:
    data = _load(path)
    return OperatorSubspace([array_from_json(B, space.field) for B in data])


def _emit(data: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    for key, val in _flatten(data):
        click.echo(f"{key},{val}")


def _flatten(data, prefix=""):
    rows = []
    if isinstance(data, dict):
        for key in sorted(data):
            rows.extend(_flatten(data[key], f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(data, (list, tuple)):
        rows.append((prefix.rstrip("."), json.dumps(data)))
    else:
        rows.append((prefix.rstrip("."), data))
    return rows


_format_opt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
_res_opt = click.option("--phase-resolution", type=int, default=DEFAULT_PHASE_RESOLUTION, show_default=True)
_tol_opt = click.option("--tol", type=float, default=1e-8, show_default=True)


@click.group()
def cli():
    """Numerical-radius seminorms, approximation and extension toolkit."""


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--op", "op_path", required=True, type=click.Path(exists=True))
@_format_opt
def radius(space_path, op_path, fmt):
    """Numerical radius of an operator with its active pairs."""
    X = _space(space_path)
    T = _operator(op_path, X)
    _emit(numerical_radius(X, T).to_json(), fmt)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--op", "op_path", required=True, type=click.Path(exists=True))
@click.option("--q", type=float, required=True)
@click.option("--resolution", type=int, default=64, show_default=True)
@_format_opt
def qradius(space_path, op_path, q, resolution, fmt):
    """q-numerical radius."""
    X = _space(space_path)
    T = _operator(op_path, X)
    _emit(q_radius(X, T, q, resolution).to_json(), fmt)


@cli.command("range-samples")
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--op", "op_path", required=True, type=click.Path(exists=True))
@click.option("--count", type=int, default=360, show_default=True)
@click.option("--output", type=click.Path(), default=None, help="CSV destination (default stdout)")
@click.option("--figure", type=click.Path(), default=None, help="render a PNG of the samples")
def range_samples(space_path, op_path, count, output, figure):
    """Boundary samples (theta, re, im) of the numerical range."""
    X = _space(space_path)
    T = _operator(op_path, X)
    samples = range_boundary_samples(X, T, count)
    lines = ["theta,re,im"]
    lines += [f"{t:.12g},{r:.12g},{i:.12g}" for t, r, i in samples]
    text = "\n".join(lines)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)
    if figure:
        from .plots import render_range_figure

        render_range_figure(samples, figure)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--target", "target_path", required=True, type=click.Path(exists=True))
@click.option("--family", "family_path", required=True, type=click.Path(exists=True))
@_res_opt
@_format_opt
def approx(space_path, target_path, family_path, phase_resolution, fmt):
    """Best approximation of a target from an operator family."""
    X = _space(space_path)
    T = _operator(target_path, X)
    fam = _family(family_path, X)
    pairs = radius_pairs(X, phase_resolution)
    _emit(solve(ApproxProblem(X, T, fam, pairs)).to_json(), fmt)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--target", "target_path", required=True, type=click.Path(exists=True))
@click.option("--minimizer", "min_path", required=True, type=click.Path(exists=True))
@click.option("--family", "family_path", required=True, type=click.Path(exists=True))
@_res_opt
@_tol_opt
@_format_opt
def certify(space_path, target_path, min_path, family_path, phase_resolution, tol, fmt):
    """Kolmogorov-type optimality certificate for a claimed minimizer."""
    X = _space(space_path)
    T = _operator(target_path, X)
    L = _operator(min_path, X)
    fam = _family(family_path, X)
    pairs = radius_pairs(X, phase_resolution)
    cert = best_approx_certificate(X, T, L, fam, pairs, tol)
    if cert.verdict == "optimal":
        cert = caratheodory_reduce(cert, fam.real_dim)
    _emit(cert.to_json(), fmt)
    if cert.verdict == "not_optimal":
        sys.exit(EXIT_NOT_OPTIMAL)
    if cert.verdict == "inconclusive":
        sys.exit(EXIT_INCONCLUSIVE)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--target", "target_path", required=True, type=click.Path(exists=True))
@click.option("--minimizer", "min_path", required=True, type=click.Path(exists=True))
@click.option("--family", "family_path", required=True, type=click.Path(exists=True))
@_res_opt
@_tol_opt
@_format_opt
def suba(space_path, target_path, min_path, family_path, phase_resolution, tol, fmt):
    """Strong-unicity constant of a certified best approximation."""
    X = _space(space_path)
    T = _operator(target_path, X)
    L = _operator(min_path, X)
    fam = _family(family_path, X)
    pairs = radius_pairs(X, phase_resolution)
    cert = best_approx_certificate(X, T, L, fam, pairs, tol)
    if cert.verdict == "not_optimal":
        _emit(cert.to_json(), fmt)
        sys.exit(EXIT_NOT_OPTIMAL)
    if cert.verdict == "inconclusive":
        _emit(cert.to_json(), fmt)
        sys.exit(EXIT_INCONCLUSIVE)
    _emit(suba_constant(X, T, L, fam, pairs, tol).to_json(), fmt)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--subspace", "sub_path", required=True, type=click.Path(exists=True))
@click.option("--op", "op_path", required=True, type=click.Path(exists=True))
@click.option("--a0", "a0_path", type=click.Path(exists=True), default=None)
@_res_opt
@_format_opt
def minext(space_path, sub_path, op_path, a0_path, phase_resolution, fmt):
    """Minimal numerical-radius extension of an operator on a subspace."""
    X = _space(space_path)
    V = Subspace.from_json(_load(sub_path), X.field)
    A = array_from_json(_load(op_path), X.field)
    A0 = None
    if a0_path:
        A0 = _operator(a0_path, X)
    res = minimal_extension(X, V, A, A0, phase_resolution=phase_resolution)
    _emit(res.to_json(), fmt)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--subspace", "sub_path", required=True, type=click.Path(exists=True))
@_res_opt
@_format_opt
def minproj(space_path, sub_path, phase_resolution, fmt):
    """Minimal numerical-radius projection onto a subspace."""
    X = _space(space_path)
    V = Subspace.from_json(_load(sub_path), X.field)
    res = minimal_projection(X, V, phase_resolution=phase_resolution)
    _emit(res.to_json(), fmt)


@cli.command()
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--trials", type=int, default=2000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_format_opt
def index(space_path, trials, seed, fmt):
    """Numerical index estimate (upper bound by search)."""
    X = _space(space_path)
    _emit({"index": numerical_index(X, trials, seed)}, fmt)


@cli.command()
@click.option("--figure-dir", type=click.Path(), default=None, help="also render a summary PNG here")
@_res_opt
@_format_opt
def repro(figure_dir, phase_resolution, fmt):
    """Reproduce the counterexample constructions and compare values."""
    report = paper_examples(phase_resolution)
    _emit(report, fmt)
    if figure_dir:
        import os

        from .plots import render_repro_figure

        os.makedirs(figure_dir, exist_ok=True)
        render_repro_figure(report, os.path.join(figure_dir, "repro.png"))
    if not report["all_pass"]:
        sys.exit(EXIT_PARSE)


def main():
    try:
        cli.main(standalone_mode=False)
    except SystemExit:
        raise
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_PARSE)
    except click.Abort:
        sys.exit(EXIT_PARSE)
    except CapabilityError as exc:
        click.echo(f"capability error: {exc}", err=True)
        sys.exit(EXIT_CAPABILITY)
    except SolverError as exc:
        click.echo(f"solver error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)
    except (DimensionMismatchError, DegenerateInputError, NumradError) as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, OSError) as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE)


if __name__ == "__main__":
    main()
