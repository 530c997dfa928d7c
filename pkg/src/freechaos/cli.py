"""Command line front end.

Exit codes: 0 success, 1 a check or reduction failed, 2 bad usage or an
input outside an operation's domain, 3 unreadable input or unwritable output.
"""
from __future__ import annotations

import argparse
import csv
import logging
from pathlib import Path
import sys

from . import __version__
from .chaos import ChaosElement, ito_product, l2_norm, moment
from .exceptions import DomainError, ParseError, SchemaError, ShapeError
from .grid import GridSpec
from .io import (
    chaos_document,
    complex_pair,
    dumps,
    emit_chaos_json,
    load_json,
    parse_chaos_document,
    parse_chaos_json,
    parse_degrees,
    parse_direction,
    parse_grid,
)
from .reduction import ReductionStep, iterate_reduction, zero_divisor_probe
from .spectra import MomentRow, atom_scan, histogram, moment_compare, vacuum_spectral_measure
from .verify import run_verify

log = logging.getLogger("freechaos")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    """Raised when an input file cannot be read or understood."""


def _read_chaos(path: str) -> ChaosElement:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_chaos_json(text)
    except (ParseError, SchemaError, ShapeError, DomainError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_steps(path: str, grid: GridSpec) -> list[ReductionStep]:
    """Steps file: ``{"steps": [{"p": <degrees or document>, "h": [[re, im], ...]}, ...]}``."""
    try:
        doc = load_json(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    try:
        if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
            raise SchemaError("steps file needs a 'steps' list")
        steps = []
        for i, item in enumerate(doc["steps"]):
            if not isinstance(item, dict) or set(item) != {"p", "h"}:
                raise SchemaError(f"step {i} needs exactly 'p' and 'h'")
            p = item["p"]
            if isinstance(p, dict) and "grid" in p:
                p = parse_chaos_document(p)
                if p.grid != grid:
                    raise SchemaError(f"step {i}: grid differs from the input element")
            else:
                p = parse_degrees(p, grid)
            steps.append(ReductionStep(p, parse_direction(item["h"], grid)))
        return steps
    except (SchemaError, ShapeError, DomainError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


def _write_csv(path: str | Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def cmd_verify(args) -> int:
    grid = GridSpec(args.horizon, args.cells)
    report = run_verify(grid, args.degree, args.seed, args.trials)
    _write(args.out, dumps(report.to_dict()))
    for c in report.checks:
        log.info("%-40s %s  residual=%.3g tol=%.1g", c.name, c.status, c.residual, c.tolerance)
    print(f"{sum(c.status == 'pass' for c in report.checks)}/{len(report.checks)} checks passed")
    return EXIT_OK if report.all_pass else EXIT_FAIL


def cmd_product(args) -> int:
    lhs, rhs = _read_chaos(args.lhs), _read_chaos(args.rhs)
    _write(args.out, emit_chaos_json(ito_product(lhs, rhs)))
    return EXIT_OK


def cmd_moments(args) -> int:
    y = _read_chaos(args.input)
    if y.is_self_adjoint(1e-12):
        top = 0 if y.is_zero() else y.top_degree
        trunc = args.truncation if args.truncation is not None else max(args.max_k * top, top)
        rows = moment_compare(y, trunc, args.max_k)
    else:
        rows = [MomentRow(k, moment(y, k), None, False) for k in range(args.max_k + 1)]
    _write_csv(
        args.out,
        ["k", "exact_re", "exact_im", "truncated", "in_window"],
        [
            (r.k, r.exact.real, r.exact.imag, "" if r.truncated is None else r.truncated, int(r.in_window))
            for r in rows
        ],
    )
    if not args.no_figure:
        from .plotting import plot_moments

        plot_moments(rows, _figure_path(args.out))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    y = _read_chaos(args.input)
    measure = vacuum_spectral_measure(y, args.truncation)
    edges, weights = histogram(measure, args.bins)
    _write_csv(args.out, ["bin_left", "bin_right", "weight"],
               [(float(a), float(b), float(w)) for a, b, w in zip(edges[:-1], edges[1:], weights)])
    points = Path(args.out).with_suffix(".points.csv")
    _write_csv(points, ["eigenvalue", "weight"], [(float(l), float(w)) for l, w in measure.points])
    if not args.no_figure:
        from .plotting import plot_spectrum

        plot_spectrum(measure, edges, weights, _figure_path(args.out),
                      title=f"vacuum spectral measure, D={args.truncation}")
    return EXIT_OK


def cmd_atoms(args) -> int:
    y = _read_chaos(args.input)
    rows = atom_scan(y, args.truncations, args.eps)
    _write_csv(args.out, ["truncation", "max_window_weight"], [(d, float(w)) for d, w in rows])
    if not args.no_figure:
        from .plotting import plot_atom_scan

        plot_atom_scan(rows, args.eps, _figure_path(args.out))
    return EXIT_OK


def cmd_reduce(args) -> int:
    y = _read_chaos(args.input)
    steps = _read_steps(args.steps, y.grid)
    report = iterate_reduction(y, steps, tol=args.tol)
    doc = {
        "final": complex_pair(report.final_scalar),
        "predicted": complex_pair(report.predicted_scalar),
        "residual": report.residual,
        "tolerance": report.tol,
        "agrees": report.agrees,
        "intermediate_top_degrees": report.intermediate_top_degrees,
        "intermediates": [chaos_document(x)["degrees"] for x in report.intermediates],
    }
    _write(args.out, dumps(doc))
    return EXIT_OK if report.agrees else EXIT_FAIL


def cmd_probe(args) -> int:
    y, u = _read_chaos(args.input), _read_chaos(args.other)
    rep = zero_divisor_probe(y, u)
    doc = {
        "normYu": rep.normYu,
        "normYstaru": rep.normYstaru,
        "normY": l2_norm(y),
        "normU": l2_norm(u),
    }
    _write(args.out, dumps(doc))
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freechaos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the seeded property suite")
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--degree", type=int, required=True, help="maximal chaos order of random elements")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", default="verify.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("product", help="Ito product of two chaos documents")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("moments", help="exact and truncated moments")
    p.add_argument("--input", required=True)
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("spectrum", help="vacuum spectral measure histogram")
    p.add_argument("--input", required=True)
    p.add_argument("--truncation", type=int, required=True)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("atoms", help="atom-weight scan over truncation degrees")
    p.add_argument("--input", required=True)
    p.add_argument("--truncations", type=_int_list, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_atoms)

    p = sub.add_parser("reduce", help="iterate Delta_{p,h} down to a scalar")
    p.add_argument("--input", required=True)
    p.add_argument("--steps", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("probe", help="zero-divisor probe ||Y u||_2")
    p.add_argument("--input", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except (DomainError, ShapeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
