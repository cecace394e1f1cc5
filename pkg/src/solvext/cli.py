"""Command-line surface: validate / tabulate / spectrum / verify.

Exit codes form a strict contract:

    0  success (all checks passed, where applicable)
    1  usage error (malformed flags, bad level, bad combinations)
    2  inadmissible model parameters (reason token on output)
    3  verification failure (report still emitted)

Data payloads are deterministic: the same invocation produces byte-identical
output. JSON payloads carry ``schema_version``; CSV files carry the version in
the recommended ``*.v1.csv`` filename convention instead of an extra header
line, so they stay ingestible by naive tooling. Floats are serialized with 17
significant digits, CSV uses RFC-4180-style quoting with LF line endings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import models, spectral
from .models import AdmissibilityError, ModelFamily, ModelSpec
from .polycore import laguerre_identity_residuals

SCHEMA_VERSION = "1"
FORMAT_ENV_VAR = "SOLVEXT_DEFAULT_FORMAT"

_FAMILIES = {
    "ho": ModelFamily.HARMONIC_RATIONAL,
    "morse": ModelFamily.MORSE_RATIONAL,
}

# fixed tolerances of the algebraic and orthogonality sub-checks in `verify`;
# the grid-limited checks (spectrum, pointwise residuals) use the --tol flag
ALGEBRAIC_TOL = 1e-10
GRAM_TOL = 1e-8


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solvext", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--family", required=True, choices=sorted(_FAMILIES))
        p.add_argument("--ell", required=True, type=int)
        p.add_argument("--alpha", type=float, default=None)

    def add_output_flags(p):
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--output", default=None, help="output path (default: stdout)")

    p = sub.add_parser("validate", help="check admissibility of a parameter set")
    add_model_flags(p)

    p = sub.add_parser("tabulate", help="tabulate the potential or a wavefunction")
    p.add_argument("quantity", choices=("potential", "wavefunction"))
    add_model_flags(p)
    p.add_argument("--level", default="ground", help="'ground' or an excited index")
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--n", type=int, required=True, dest="n_points")
    add_output_flags(p)

    p = sub.add_parser("spectrum", help="closed-form bound-state energies")
    add_model_flags(p)
    p.add_argument("--nmax", type=int, default=None)
    add_output_flags(p)

    p = sub.add_parser("verify", help="run the full verification suite")
    add_model_flags(p)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--n", type=int, default=None, dest="n_points")
    p.add_argument("--output", default=None, help="report path (default: stdout)")
    return parser


def _make_spec(args) -> ModelSpec:
    family = _FAMILIES[args.family]
    if family is ModelFamily.HARMONIC_RATIONAL and args.alpha is not None:
        raise SystemExit(_usage("--alpha does not apply to the harmonic family"))
    if family is ModelFamily.MORSE_RATIONAL and args.alpha is None:
        raise SystemExit(_usage("the Morse family requires --alpha"))
    return models.validate_spec(family, args.ell, args.alpha)


def _usage(message: str) -> int:
    sys.stderr.write(f"solvext: error: {message}\n")
    return 1


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _pick_format(args) -> str:
    if args.format is not None:
        return args.format
    env = os.environ.get(FORMAT_ENV_VAR)
    if env in ("csv", "json"):
        return env
    return "csv"


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _table_payload(spec, columns, rows) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "spec": models.spec_summary(spec),
        "columns": list(columns),
        "rows": rows,
    }


def _cmd_validate(args) -> int:
    try:
        _make_spec(args)
    except AdmissibilityError as exc:
        sys.stdout.write(exc.reason + "\n")
        return 2
    sys.stdout.write("admissible\n")
    return 0


def _parse_level(text: str):
    if text == "ground":
        return None
    try:
        return int(text)
    except ValueError:
        raise SystemExit(_usage(f"--level must be 'ground' or an integer, got {text!r}"))


def _cmd_tabulate(args) -> int:
    spec = _make_spec(args)
    grid = spectral.Grid(args.xmin, args.xmax, args.n_points)
    x = grid.points()
    if args.quantity == "potential":
        values = models.potential(spec, x)
        columns = ("x", "potential")
    else:
        level = _parse_level(args.level)
        try:
            state = models.eigenstate(spec, level)
        except ValueError as exc:
            raise SystemExit(_usage(str(exc)))
        values = models.wavefunction_raw(spec, state, x)
        columns = ("x", "wavefunction")
    if not all(math.isfinite(v) for v in values):
        raise SystemExit(_usage("non-finite values on the requested grid"))

    if _pick_format(args) == "json":
        rows = [[float(a), float(b)] for a, b in zip(x, values)]
        _emit(_json_text(_table_payload(spec, columns, rows)), args.output)
    else:
        rows = [(_fmt(a), _fmt(b)) for a, b in zip(x, values)]
        _emit(_csv_text(columns, rows), args.output)
    return 0


def _spectrum_rows(spec, nmax):
    levels = models.bound_levels(spec, nmax)
    return [(models.eigenstate(spec, lv).label, models.energy(spec, lv)) for lv in levels]


def _cmd_spectrum(args) -> int:
    spec = _make_spec(args)
    if not spec.is_morse() and args.nmax is None:
        raise SystemExit(_usage("the harmonic family requires --nmax"))
    rows = _spectrum_rows(spec, args.nmax)
    threshold = models.continuum_threshold(spec)
    cutoff = None
    if spec.is_morse():
        cutoff = -spec.alpha / 2.0 - spec.ell - 1.0  # excited levels need n < cutoff

    if _pick_format(args) == "json":
        payload = _table_payload(spec, ("level", "energy"), [[lb, e] for lb, e in rows])
        if spec.is_morse():
            payload["bound_cutoff"] = cutoff
            payload["threshold"] = threshold
        _emit(_json_text(payload), args.output)
    else:
        if spec.is_morse():
            columns = ("level", "energy", "bound_cutoff", "threshold")
            out_rows = [(lb, _fmt(e), _fmt(cutoff), _fmt(threshold)) for lb, e in rows]
        else:
            columns = ("level", "energy")
            out_rows = [(lb, _fmt(e)) for lb, e in rows]
        _emit(_csv_text(columns, out_rows), args.output)
    return 0


def _check(name, metric, tolerance, details=None) -> dict:
    return {
        "name": name,
        "pass": bool(metric <= tolerance),
        "metric": float(metric),
        "tolerance": float(tolerance),
        "details": details or {},
    }


def _verify_checks(spec, grid, nmax, tol):
    levels = models.bound_levels(spec, nmax)
    excited = [lv for lv in levels if lv is not None]
    checks = []

    report = spectral.compare_spectrum(spec, grid, nmax=nmax, tol=tol)
    details = report.to_dict()
    metric = report.max_abs_error if report.reason != "count-mismatch" else math.inf
    checks.append(_check("spectrum-fd", metric, tol, details))

    gram = spectral.gram_matrix(spec, levels, space="x")
    d = gram.diagonal()
    norm = gram / (d[:, None] * d[None, :]) ** 0.5
    off = norm - np.eye(len(levels))
    checks.append(
        _check(
            "gram-orthogonality-x",
            float(abs(off).max()),
            GRAM_TOL,
            {"levels": [models.eigenstate(spec, lv).label for lv in levels]},
        )
    )

    rgrid = spectral.default_residual_grid(spec)
    residuals = {
        models.eigenstate(spec, lv).label: spectral.schrodinger_residual(spec, lv, rgrid)
        for lv in levels
    }
    checks.append(
        _check(
            "schrodinger-residual",
            max(residuals.values()),
            tol,
            {"per_level": residuals, "grid": [rgrid.xmin, rgrid.xmax, rgrid.n_points]},
        )
    )

    checks.append(_check("xi-ode-residual", models.xi_ode_residual(spec), ALGEBRAIC_TOL))

    cons = [models.construction_residuals(spec, n) for n in excited]
    cons_metric = max((max(r) for r in cons), default=0.0)
    checks.append(_check("construction-residuals", cons_metric, ALGEBRAIC_TOL))

    degree_err = max(
        (abs(models.p_polynomial(spec, n).degree - (spec.ell + n + 1)) for n in excited),
        default=0,
    )
    checks.append(_check("degree-law", float(degree_err), 0.0))

    if spec.is_morse():
        equiv = [
            _rel_poly_diff(models.p_polynomial(spec, n), models.p_polynomial_closed(spec, n))
            for n in excited
        ]
        checks.append(
            _check("pm-closed-form-equivalence", max(equiv, default=0.0), ALGEBRAIC_TOL)
        )
        lag = [
            max(laguerre_identity_residuals(n, a))
            for n in range(1, 13)
            for a in (spec.alpha, *(models.eigenstate(spec, m).beta for m in excited))
        ]
        checks.append(_check("laguerre-identities", max(lag, default=0.0), ALGEBRAIC_TOL))

    return sorted(checks, key=lambda c: c["name"])


def _rel_poly_diff(p, q) -> float:
    from .polycore import relative_residual

    return relative_residual(p - q, p, q)


def _cmd_verify(args) -> int:
    spec = _make_spec(args)
    if not spec.is_morse() and args.nmax is None:
        raise SystemExit(_usage("the harmonic family requires --nmax"))
    grid_flags = (args.xmin, args.xmax, args.n_points)
    if any(v is not None for v in grid_flags):
        if any(v is None for v in grid_flags):
            raise SystemExit(_usage("grid overrides need all of --xmin --xmax --n"))
        grid = spectral.Grid(args.xmin, args.xmax, args.n_points)
    else:
        grid = spectral.default_grid(spec)

    checks = _verify_checks(spec, grid, args.nmax, args.tol)
    passed = all(c["pass"] for c in checks)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "spec": models.spec_summary(spec),
        "checks": checks,
        "pass": passed,
    }
    _emit(_json_text(payload), args.output)
    return 0 if passed else 3


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "tabulate":
            return _cmd_tabulate(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        return _cmd_verify(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except AdmissibilityError as exc:
        sys.stderr.write(f"inadmissible: {exc.reason}: {exc}\n")
        return 2
    except (ValueError, spectral.QuadratureError) as exc:
        sys.stderr.write(f"solvext: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
