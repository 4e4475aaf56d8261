"""Command-line front end: ``wolfqk <command> [--in JSON] [--out PATH]``.

Every command reads one JSON record (a file path, ``-`` for stdin, or the
JSON text itself) and writes one JSON record.  Exit codes: 0 success,
1 input error, 2 numerically ill-conditioned input, 3 flow did not converge.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click
import numpy as np

from . import algebra, io, lie, moment
from .orbits import (
    ClassificationIncomplete,
    IllConditionedError,
    classify_compact,
    decompose,
    family_label,
    is_proper_free,
)
from .orbits.families import FAMILIES, INDECOMPOSABLE_TABLE, family_height, parameter_count
from .signature import DomainError, Signature

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONDITIONING = 2
EXIT_NOT_CONVERGED = 3

SIG_CHOICE = click.Choice(["7,0", "3,4"])
SEED = click.IntRange(0, io.SEED_MAX)


class InputError(Exception):
    pass


def _read_input(source: str | None):
    if source is None:
        raise InputError("this command needs --in")
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _emit(doc, out: str | None) -> None:
    text = io.dumps(doc)
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _fail(code: int, message: str, **extra) -> None:
    click.echo(json.dumps({"error": message, **extra}, sort_keys=True), err=True)
    sys.exit(code)


def _run(fn, out: str | None) -> None:
    """Call ``fn`` and map failures to the exit-code contract."""
    try:
        doc, code = fn()
    except InputError as exc:
        _fail(EXIT_INPUT, str(exc))
    except IllConditionedError as exc:
        _fail(EXIT_CONDITIONING, str(exc), gap=exc.gap)
    except moment.DegenerateDenominatorError as exc:
        _fail(EXIT_CONDITIONING, str(exc))
    except ClassificationIncomplete as exc:
        _fail(EXIT_CONDITIONING, str(exc))
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        _fail(EXIT_INPUT, str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}")
    _emit(doc, out)
    sys.exit(code)


def _matrix(doc, key: str, sig: str | None):
    """A 7x7 matrix stored either as a matrix record or as bare rows."""
    value = doc[key] if key is not None else doc
    if isinstance(value, dict) and "matrix" in value and "rows" not in value:
        value = value["matrix"]
    if isinstance(value, list):
        value = {"rows": value, "sig": doc.get("sig", "3,4") if isinstance(doc, dict) else "3,4"}
    if isinstance(value, dict) and "sig" not in value and isinstance(doc, dict) and "sig" in doc:
        value = {**value, "sig": doc["sig"]}
    return io.matrix_from_json(value, sig)


def _tol(tol: float | None, default: float) -> float:
    if tol is None:
        return default
    if not tol > 0:
        raise InputError("--tol must be positive")
    return tol


def _causal(x, sig: Signature) -> tuple[str, float]:
    q = float(x @ sig.eta @ x)
    if abs(q) < 1e-12:
        return "lightlike", q
    return ("timelike" if q > 0 else "spacelike"), q


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Quaternionic-Kaehler reductions of the Wolf spaces of SO(7) and SO(3,4)."""


def _common(f):
    f = click.option("--out", "out", default=None, help="Output path (default stdout).")(f)
    f = click.option("--in", "source", default=None, help="Input path, '-' for stdin, or inline JSON.")(f)
    f = click.option("--tol", type=float, default=None, help="Numerical tolerance.")(f)
    f = click.option("--sig", type=SIG_CHOICE, default=None, help="Metric signature (overrides the input).")(f)
    return f


@main.command("classify")
@_common
def classify_cmd(sig, tol, source, out):
    """Type, family and properness of an adjoint orbit."""

    def body():
        t = _tol(tol, 1e-8)
        doc = _read_input(source)
        A, s = _matrix(doc, None, sig)
        if not np.any(A):
            raise InputError("the zero matrix does not generate a 1-dimensional action (v must be nonzero)")
        dec = decompose(A, s, t)
        ts = dec.type_sum
        want = (7, 0) if s is Signature.COMPACT else (3, 4)
        if ts.dimension != 7 or ts.signature != want:
            raise IllConditionedError(f"decomposition produced {ts} with signature {ts.signature}", dec.pair.gap)
        report = {
            "sig": s.value,
            "tol": t,
            "type_sum": str(ts),
            "summands": ts.to_json(),
            "height": ts.height,
            "gap": dec.pair.gap,
        }
        if s is Signature.SPLIT:
            label = family_label(ts)
            report["family"] = label.name
            report["params"] = [float(p) for p in label.params]
            report["properness_verdict"] = is_proper_free(label).to_json()
        else:
            report["family"] = None
            report["params"] = list(classify_compact(A))
            report["properness_verdict"] = None
        return report, EXIT_OK

    _run(body, out)


@main.command("moment")
@_common
def moment_cmd(sig, tol, source, out):
    """Moment map, energy and regularity at g for the vector field v.

    Input: {"sig", "v": rows, "g": rows (default identity)}.
    """

    def body():
        t = _tol(tol, moment.DEFAULT_TOL)
        doc = _read_input(source)
        if not isinstance(doc, dict):
            raise InputError("expected a JSON object")
        v, s = _matrix(doc, "v", sig) if "v" in doc else _matrix(doc, None, sig)
        g = _matrix(doc, "g", s.value)[0] if "g" in doc else np.eye(7)
        lie.check_algebra(v, s)
        if not lie.is_group_element(g, s, 1e-8 * max(1.0, float(np.max(np.abs(g)))) ** 2):
            raise DomainError("g is not an element of the group")
        mu = moment.moment(v, g, s)
        D = moment.differential_matrix(v, g, s)
        rank = int(np.linalg.matrix_rank(D, tol=t * max(1.0, float(np.max(np.abs(D))))))
        return {
            "sig": s.value,
            "tol": t,
            "moment": (mu + 0.0).tolist(),
            "energy": moment.energy(v, g, s),
            "differential_rank": rank,
            "regularity": moment.classify_regularity(v, g, s, t).value,
            "in_zero_locus": moment.in_zero_locus(v, g, s, t),
        }, EXIT_OK

    _run(body, out)


@main.command("zero-locus")
@_common
@click.option("--seed", type=SEED, default=0, show_default=True)
@click.option("--n", "n", type=click.IntRange(min=1), default=100, show_default=True)
def zero_locus_cmd(sig, tol, source, out, seed, n):
    """Sample the zero locus of A_x.  Input: {"sig", "x": [7 reals]}."""

    def body():
        t = _tol(tol, moment.DEFAULT_TOL)
        doc = _read_input(source)
        if not isinstance(doc, dict) or "x" not in doc:
            raise InputError("expected {\"x\": [...]}")
        s = Signature.parse(sig or doc.get("sig", "3,4"))
        x = io.vector_from_json(doc["x"])
        causal, q = _causal(x, s)
        points = moment.sample_zero_locus_canonical(x, n, s, np.random.default_rng(seed), t)
        report = {
            "sig": s.value,
            "tol": t,
            "seed": seed,
            "n": n,
            "x": x.tolist(),
            "causal": causal,
            "norm": q,
            "max_residual": max(p.residual for p in points),
            "points": [p.to_json() for p in points],
        }
        if causal == "lightlike":
            report["note"] = "points are checked for containment only"
        return report, EXIT_OK

    _run(body, out)


@main.command("flow")
@_common
@click.option("--seed", type=SEED, default=0, show_default=True)
@click.option("--n", "n", type=click.IntRange(min=1), default=5000, show_default=True, help="Maximum number of steps.")
@click.option("--step", type=float, default=0.5, show_default=True)
@click.option("--record-every", type=click.IntRange(min=1), default=1, show_default=True)
def flow_cmd(sig, tol, source, out, seed, n, step, record_every):
    """Energy gradient flow.  Input: {"sig", "v": rows, "g0": rows (default random from --seed)}."""

    def body():
        t = _tol(tol, 1e-8)
        doc = _read_input(source)
        if not isinstance(doc, dict) or "v" not in doc:
            raise InputError("expected {\"v\": rows, ...}")
        v, s = _matrix(doc, "v", sig)
        lie.check_algebra(v, s)
        if "g0" in doc:
            g0 = _matrix(doc, "g0", s.value)[0]
        else:
            g0 = lie.random_group_element(s, np.random.default_rng(seed), 1.0)
        if not lie.is_group_element(g0, s, 1e-8 * max(1.0, float(np.max(np.abs(g0)))) ** 2):
            raise DomainError("g0 is not an element of the group")
        result = moment.flow(v, g0, s, step=step, max_steps=n, tol=t, record_every=record_every)
        report = {"sig": s.value, "tol": t, "seed": seed, **result.to_json()}
        return report, EXIT_OK if result.converged else EXIT_NOT_CONVERGED

    _run(body, out)


@main.command("g2-check")
@_common
def g2_check_cmd(sig, tol, source, out):
    """Membership of a matrix in G2(V) and of a skew-adjoint matrix in g2(V)."""

    def body():
        t = _tol(tol, 1e-9)
        doc = _read_input(source)
        A, s = _matrix(doc, None, sig)
        group = algebra.is_g2_group_element(A, s, t)
        report = {
            "sig": s.value,
            "tol": t,
            "group": {"is_member": group.is_member, "residuals": group.residuals},
            "algebra": {
                "is_member": algebra.is_g2_algebra_element(A, s, t),
                "residual": algebra.g2_residual(A),
            },
        }
        return report, EXIT_OK

    _run(body, out)


@main.command("tables")
@click.option("--out", "out", default=None, help="Output path (default stdout).")
def tables_cmd(out):
    """Golden multiplication tables and the family table."""

    def body():
        data = resources.files("wolfqk.data")
        algebras = {name: json.loads(data.joinpath(f"multiplication_{name}.json").read_text()) for name in ("O", "Osplit")}
        rows = [{"kind": r.kind.value, "height": r.height, "sign": r.sign, "dimension": r.dimension} for r in INDECOMPOSABLE_TABLE]
        families = [
            {
                "family": name,
                "height": family_height(name),
                "parameters": parameter_count(name),
                "slots": [
                    {"kind": sl.kind.value, "height": sl.height, "sign": sl.sign, "params": list(sl.params)} for sl in slots
                ],
            }
            for name, slots in FAMILIES.items()
        ]
        return {
            "multiplication": algebras,
            "indecomposables": rows,
            "families": families,
            "fixture_version": io.FIXTURE_VERSION,
        }, EXIT_OK

    _run(body, out)


if __name__ == "__main__":  # pragma: no cover
    main()
