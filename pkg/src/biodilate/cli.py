"""Command-line interface.

Subcommands: ``analyze``, ``dilate``, ``reproduce-paper``, ``proptest``.
Exit codes: 0 success, 1 I/O or parse error, 2 property-test failure.
Tolerance precedence: ``--tol`` > ``$BIODILATE_TOL`` > built-in default.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__, dilate, io, reports
from . import numkernel as nk
from .exceptions import BiodilateError
from .proptest import run_proptest
from .reproduce import write_tables

log = logging.getLogger("biodilate")

EXIT_OK, EXIT_IO, EXIT_PROPTEST = 0, 1, 2


def resolve_tol(flag: float | None) -> float:
    if flag is not None:
        return flag
    env = os.environ.get("BIODILATE_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            log.warning("ignoring malformed BIODILATE_TOL=%r", env)
    return nk.RTOL


def _emit(doc, out: str | None):
    text = io.dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kappa(value: str):
    return {"modulus": "modulus", "ones": "ones"}[value]


def cmd_analyze(args) -> int:
    V = io.matrix_from_doc(io.read_json(args.matrix))
    doc = reports.analyze(V, _kappa(args.kappa), tol=resolve_tol(args.tol))
    _emit(doc, args.out)
    return EXIT_OK


def cmd_dilate(args) -> int:
    V = io.matrix_from_doc(io.read_json(args.matrix))
    psi = io.state_from_doc(io.read_json(args.state), renormalize=args.renormalize)
    if psi.size != V.shape[0]:
        raise io.FileFormatError(f"state length {psi.size} does not match matrix dimension {V.shape[0]}")
    methods = dilate.METHODS if args.method == "all" else (args.method,)
    tol = resolve_tol(args.tol)
    doc = reports.run_report(V, psi, methods=methods, kappa_policy=_kappa(args.kappa), tol=tol)
    _emit(doc, args.out)
    if args.export_circuit:
        method = methods[0]
        try:
            plan = dilate.build_plan(method, V, _kappa(args.kappa), tol=tol)
        except BiodilateError as exc:
            log.error("cannot export %s circuit: %s", method, exc)
        else:
            circuit = dilate.bind_circuit(plan, psi)
            initial = _initial_state(plan, psi)
            cdoc = io.circuit_to_doc(circuit, initial_state=initial,
                                     postselect=(plan.postselect_register, plan.postselect_value),
                                     output_register=plan.output_register)
            cdoc["method"] = method
            io.write_json(args.export_circuit, cdoc)
    return EXIT_OK


def _initial_state(plan: dilate.DilationPlan, psi) -> np.ndarray:
    d = psi.size
    if plan.method == "biortho":
        return np.kron(psi, np.eye(d)[0])
    return np.kron(np.eye(2 ** plan.ancilla_qubits)[0], psi)


def cmd_reproduce(args) -> int:
    paths = write_tables(args.out, seed=args.seed)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_proptest(args) -> int:
    dims = tuple(int(x) for x in args.dims.split(",") if x.strip())
    summary = run_proptest(args.seed, dims, args.cases, hooks={"corrupt_zeta": args.corrupt_zeta})
    if args.out:
        io.write_json(args.out, summary.as_dict())
    for name, r in summary.results.items():
        status = "PASS" if not r["failures"] else "FAIL"
        print(f"{status} {name} ({r['cases']} cases, {r['failure_count']} failures)")
        for msg in r["failures"]:
            print(f"    {msg}")
    print("all invariants pass" if summary.passed else "property-test failures")
    return EXIT_OK if summary.passed else EXIT_PROPTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biodilate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="eigen data, biorthogonal system and diagnostics for a matrix")
    p.add_argument("matrix")
    p.add_argument("--kappa", choices=("modulus", "ones"), default="modulus")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dilate", help="run dilation backends on (matrix, state)")
    p.add_argument("matrix")
    p.add_argument("state")
    p.add_argument("--method", choices=("biortho", "lcu", "sznagy", "all"), default="all")
    p.add_argument("--kappa", choices=("modulus", "ones"), default="modulus")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--renormalize", action="store_true", help="rescale an unnormalized input state")
    p.add_argument("--out")
    p.add_argument("--export-circuit", metavar="PATH",
                   help="write the bound circuit of the first selected method as JSON")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("reproduce-paper", help="write the reproduction tables to a directory")
    p.add_argument("--out", default="reproduction")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("proptest", help="randomized invariant suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dims", default="2,4,8,16")
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--out")
    p.add_argument("--corrupt-zeta", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_proptest)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, io.FileFormatError, BiodilateError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
