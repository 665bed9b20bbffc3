"""Command line interface.

Five subcommands (validate, hodge, curvature, check, export) assemble a
request, run it through the in-process service handlers, and render the
report as text, JSON, or CSV. With --server URL the same request is POSTed
to a running HTTP service instead, and the error envelope is mapped back to
the matching library exception, so exit codes agree between the two modes.

Exit codes:

  0  success
  1  usage error
  2  validation error (bad complex data, parameters, classification)
  3  I/O or parse failure
  4  harmonic dimension disagrees with the Betti oracle
  5  eigensolver failure or an ambiguous zero/nonzero split
  6  Gauss-Bonnet identity failed
  7  randomized self-checks failed

Input files are recognized by suffix: .json is the native document, .off is
a polygon mesh, anything else is read as an edge list. Mesh and edge-list
inputs are converted to the native document before the request is built, so
remote servers only ever see the native format. Set CELLFORM_NO_COLOR to
disable ANSI colors in text output.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import httpx
import numpy as np

from . import errors as errors_mod
from . import ingest
from .errors import (
    BadParameter,
    CellformError,
    EigensolverFailure,
    ParseError,
    ToleranceAmbiguous,
    ValidationError,
)
from .service import handlers, models


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _add_source_args(p):
    p.add_argument(
        "--input",
        metavar="PATH",
        help="complex file (.json native document, .off mesh, otherwise edge list)",
    )
    p.add_argument(
        "--generate",
        metavar="KIND[:PARAM]",
        help="built-in complex, e.g. cycle:5, complete:4, cube, torus_grid:3x3",
    )
    p.add_argument(
        "--weights",
        metavar="SPEC",
        help="const:X, random, or file:PATH (JSON per-dimension weight lists)",
    )
    p.add_argument("--seed", type=int, default=None, help="seed for random weights and trials")
    p.add_argument("--server", metavar="URL", help="send the request to a running service")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def _build_parser():
    parser = _Parser(prog="cellform", description="weighted cell complex toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a complex and report its invariants")
    _add_source_args(p)
    p.add_argument(
        "--require-quasiconvex",
        action="store_true",
        help="fail (exit 2) when the complex is not quasiconvex",
    )

    p = sub.add_parser("hodge", help="Laplacian spectra, harmonic dimensions, Betti numbers")
    _add_source_args(p)
    p.add_argument("--tolerance", type=float, default=1e-8, help="relative zero tolerance")

    p = sub.add_parser("curvature", help="Gauss and scalar curvature, Gauss-Bonnet check")
    _add_source_args(p)
    p.add_argument(
        "--form",
        metavar="PATH|random",
        help="JSON object of 1-form coefficients keyed 'dP:i>dQ:j' for a Ricci "
        "report, or the word random for a seeded draw on every incidence pair",
    )

    p = sub.add_parser("check", help="randomized identities: adjointness, Green, integrals")
    _add_source_args(p)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=1e-12, help="residual threshold")

    p = sub.add_parser("export", help="print the canonical JSON document")
    _add_source_args(p)
    p.add_argument("--name", help="name field to embed in the document")

    return parser


# ----------------------------------------------------------------------
# request assembly
# ----------------------------------------------------------------------

def _read_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _resolve_weights(spec):
    if spec is not None and spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        try:
            data = json.loads(_read_file(path))
        except json.JSONDecodeError as exc:
            raise ParseError(f"weights file {path}: {exc.msg}") from exc
        if not isinstance(data, list):
            raise ParseError(f"weights file {path}: expected per-dimension lists")
        return data
    return spec


def _resolve_source(args):
    """Build the ComplexSource, converting non-native inputs client-side.

    Returns (source, warnings); warnings currently report mesh edges shared
    by more than two faces.
    """
    if (args.input is None) == (args.generate is None):
        raise BadParameter("provide exactly one of --input or --generate")
    weights = _resolve_weights(args.weights)
    warnings = []
    if args.generate is not None:
        return (
            models.ComplexSource(generate=args.generate, weights=weights, seed=args.seed),
            warnings,
        )
    text = _read_file(args.input)
    if args.input.endswith(".json"):
        document = text
    elif args.input.endswith(".off"):
        result = ingest.parse_off(text)
        for (a, b) in result.nonmanifold_edges:
            warnings.append(f"edge ({a}, {b}) lies in more than two faces")
        document = ingest.serialize_complex(result.complex)
    else:
        document = ingest.serialize_complex(ingest.parse_edge_list(text))
    return models.ComplexSource(document=document, weights=weights, seed=args.seed), warnings


def _random_form(source, seed):
    """Seeded uniform coefficient per incidence pair, keyed 'dP:i>dQ:j'."""
    cx = handlers.load_complex(source)
    rng = np.random.default_rng(seed)
    return {
        f"d{v.tau.dim}:{v.tau.index}>d{v.sigma.dim}:{v.sigma.index}": float(
            rng.uniform(-1.0, 1.0)
        )
        for v in cx.incidence_vectors()
    }


# ----------------------------------------------------------------------
# local/remote dispatch
# ----------------------------------------------------------------------

def _raise_remote(envelope):
    kind = envelope.get("kind", "")
    cls = getattr(errors_mod, kind, None)
    if isinstance(cls, type) and issubclass(cls, CellformError):
        raise cls(envelope.get("message", ""), detail=envelope.get("detail") or {})
    raise CellformError(f"server error {kind!r}: {envelope.get('message', '')}")


def _call(args, path, request, local_handler):
    if args.server:
        url = args.server.rstrip("/") + path
        try:
            resp = httpx.post(url, json=request.model_dump(), timeout=120.0)
        except httpx.HTTPError as exc:
            raise OSError(f"request to {url} failed: {exc}") from exc
        if resp.status_code == 400:
            _raise_remote(resp.json())
        if resp.status_code != 200:
            raise OSError(f"request to {url} returned status {resp.status_code}")
        return resp.json()
    return local_handler(request).model_dump()


# ----------------------------------------------------------------------
# rendering
# ----------------------------------------------------------------------

def _color_enabled():
    return sys.stdout.isatty() and not os.environ.get("CELLFORM_NO_COLOR")


def _flag(ok, true_word="yes", false_word="no"):
    word = true_word if ok else false_word
    if _color_enabled():
        return f"\x1b[{'32' if ok else '31'}m{word}\x1b[0m"
    return word


def _print_json(report):
    print(json.dumps(report, indent=2, sort_keys=True))


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _render_validate(report, fmt):
    if fmt == "json":
        _print_json(report)
        return
    if fmt == "csv":
        w = _csv_writer()
        w.writerow(["field", "value"])
        for key in (
            "dimension",
            "cell_counts",
            "euler_characteristic",
            "quasiconvex",
            "closed_surface",
            "weights_constant",
        ):
            value = report[key]
            if value is None:
                continue
            if key == "cell_counts":
                value = " ".join(str(c) for c in value)
            w.writerow([key, value])
        return
    print(f"dimension: {report['dimension']}")
    print(f"cells: {' '.join(str(c) for c in report['cell_counts'])}")
    print(f"euler characteristic: {report['euler_characteristic']}")
    print(f"quasiconvex: {_flag(report['quasiconvex'])}")
    if report["closed_surface"] is not None:
        print(f"closed surface: {_flag(report['closed_surface'])}")
    print(f"constant weights: {_flag(report['weights_constant'])}")


def _render_hodge(report, fmt):
    if fmt == "json":
        _print_json(report)
        return
    if fmt == "csv":
        w = _csv_writer()
        w.writerow(["degree", "harmonic_dim", "betti", "min_nonzero_eigenvalue", "match"])
        for row in report["degrees"]:
            w.writerow(
                [
                    row["degree"],
                    row["harmonic_dim"],
                    row["betti"],
                    row["min_nonzero_eigenvalue"],
                    row["match"],
                ]
            )
        w.writerow(["overall", "", "", "", report["match"]])
        return
    for row in report["degrees"]:
        nz = row["min_nonzero_eigenvalue"]
        nz_text = "none" if nz is None else repr(nz)
        print(
            f"degree {row['degree']}: harmonic {row['harmonic_dim']}, "
            f"betti {row['betti']}, min nonzero eigenvalue {nz_text}, "
            f"match {_flag(row['match'])}"
        )
    print(f"tolerance: {report['tolerance']}")
    print(f"overall: {_flag(report['match'], 'PASS', 'FAIL')}")


def _render_curvature(report, fmt):
    if fmt == "json":
        _print_json(report)
        return
    if fmt == "csv":
        w = _csv_writer()
        w.writerow(["kind", "index", "degree", "gauss", "scalar"])
        for row in report["vertices"]:
            w.writerow(["vertex", row["index"], row["degree"], row["gauss"], row["scalar"]])
        for row in report["faces"] or []:
            w.writerow(["face", row["index"], row["degree"], row["gauss"], row["scalar"]])
        w.writerow(["total_vertices", "", "", report["gauss_total_vertices"], ""])
        if report["gauss_total_faces"] is not None:
            w.writerow(["total_faces", "", "", report["gauss_total_faces"], ""])
        w.writerow(["target", "", "", report["gauss_bonnet_target"], ""])
        w.writerow(["gauss_bonnet_ok", "", "", report["gauss_bonnet_ok"], ""])
        return
    print(f"class: {report['complex_class']}")
    print(f"euler characteristic: {report['euler_characteristic']}")
    print(f"vertex gauss total: {report['gauss_total_vertices']}")
    if report["gauss_total_faces"] is not None:
        print(f"face gauss total: {report['gauss_total_faces']}")
    print(f"target: {report['gauss_bonnet_target']}")
    print(f"gauss-bonnet: {_flag(report['gauss_bonnet_ok'], 'PASS', 'FAIL')}")
    if report.get("form") is not None:
        gap = report["form"]["max_route_discrepancy"]
        print(f"ricci route discrepancy: {gap!r} over {len(report['form']['vectors'])} vectors")


def _render_check(report, fmt):
    if fmt == "json":
        _print_json(report)
        return
    if fmt == "csv":
        w = _csv_writer()
        w.writerow(["identity", "residual"])
        for name in sorted(report["residuals"]):
            w.writerow([name, repr(report["residuals"][name])])
        w.writerow(["passed", report["passed"]])
        return
    print(f"trials: {report['trials']}")
    print(f"threshold: {report['threshold']!r}")
    for name in sorted(report["residuals"]):
        print(f"{name}: {report['residuals'][name]!r}")
    print(f"result: {_flag(report['passed'], 'PASS', 'FAIL')}")


def _render_export(report, fmt):
    if fmt == "json":
        _print_json(report)
        return
    print(report["document"])


# ----------------------------------------------------------------------
# command flows
# ----------------------------------------------------------------------

def _run(args) -> int:
    source, warnings = _resolve_source(args)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)

    if args.command == "validate":
        req = models.ValidateRequest(
            source=source, require_quasiconvex=args.require_quasiconvex
        )
        report = _call(args, "/validate", req, handlers.handle_validate)
        _render_validate(report, args.format)
        return 0

    if args.command == "hodge":
        req = models.HodgeRequest(source=source, tolerance=args.tolerance)
        report = _call(args, "/hodge", req, handlers.handle_hodge)
        _render_hodge(report, args.format)
        return 0 if report["match"] else 4

    if args.command == "curvature":
        form = None
        if args.form == "random":
            form = _random_form(source, args.seed)
        elif args.form is not None:
            try:
                form = json.loads(_read_file(args.form))
            except json.JSONDecodeError as exc:
                raise ParseError(f"form file {args.form}: {exc.msg}") from exc
            if not isinstance(form, dict):
                raise ParseError(f"form file {args.form}: expected a JSON object")
        req = models.CurvatureRequest(source=source, form=form)
        report = _call(args, "/curvature", req, handlers.handle_curvature)
        _render_curvature(report, args.format)
        return 0 if report["gauss_bonnet_ok"] else 6

    if args.command == "check":
        req = models.CheckRequest(source=source, trials=args.trials, tolerance=args.tolerance)
        report = _call(args, "/check", req, handlers.handle_check)
        _render_check(report, args.format)
        return 0 if report["passed"] else 7

    req = models.ExportRequest(source=source, name=args.name)
    report = _call(args, "/export", req, handlers.handle_export)
    _render_export(report, args.format)
    return 0


def _exit_code_for(exc) -> int:
    if isinstance(exc, (ToleranceAmbiguous, EigensolverFailure)):
        return 5
    if isinstance(exc, ParseError):
        return 3
    if isinstance(exc, ValidationError):
        return 2
    return 2


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError:
        return 1
    try:
        return _run(args)
    except CellformError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
