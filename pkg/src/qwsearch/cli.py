"""Command-line interface.

Exit codes: 0 success, 2 usage or parameter error, 3 input-data error,
4 numeric failure (including a verification whose residuals exceed the
tolerance). JSON numbers are written with Python's shortest round-trip
representation (at most 17 significant digits, lossless); CSV uses 12.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import graph as graphmod
from .errors import InputDataError, NumericError
from .hermitian import HermitianMatrix
from .partition import EquitablePartition, coarsest_equitable_partition, quotient_hamiltonian
from .pst import PST_TOL, check_pst_at, pst_times
from .search import (
    SearchInstance,
    search_curve_full,
    search_curve_quotient,
    search_hamiltonian,
    verify_example,
)
from .spectral import decompose

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

_REAL = re.compile(
    r"(?P<coef>[-+]?(?:\d+\.?\d*|\.\d+)(?:e[-+]?\d+)?|[-+])?\*?(?P<pi>pi)?(?:/(?P<den>\d+\.?\d*))?"
)


def parse_real(text: str) -> float:
    """Parse ``1.5``, ``1/98``, ``pi``, ``-pi/2``, ``3*pi/4`` and similar."""
    s = text.strip().replace(" ", "").lower()
    m = _REAL.fullmatch(s)
    if not m or (m["coef"] in (None, "+", "-") and not m["pi"]):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    coef = m["coef"]
    value = Fraction(-1 if coef == "-" else 1) if coef in (None, "+", "-") else Fraction(coef)
    if m["den"]:
        den = Fraction(m["den"])
        if den == 0:
            raise argparse.ArgumentTypeError(f"division by zero in {text!r}")
        value /= den
    return float(value) * (math.pi if m["pi"] else 1.0)


def parse_grid(text: str) -> np.ndarray:
    """``start:end:steps`` with inclusive endpoints and ``steps >= 2``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:end:steps, got {text!r}")
    start, end = parse_real(parts[0]), parse_real(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid steps must be an integer, got {parts[2]!r}") from None
    if steps < 2:
        raise argparse.ArgumentTypeError(f"grid needs at least 2 steps, got {steps}")
    if start > end:
        raise argparse.ArgumentTypeError(f"grid start {start} exceeds end {end}")
    return np.linspace(start, end, steps)


def _positive(text: str) -> float:
    value = parse_real(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


# -- output -------------------------------------------------------------------


def _csv_number(x: float) -> str:
    return f"{x:.12g}"


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".qwsearch-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands ----------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.family == "complete":
        if args.n is None:
            raise ValueError("complete graphs need --n")
        g = graphmod.complete_graph(args.n)
    elif args.family == "cycle":
        if args.n is None:
            raise ValueError("cycle graphs need --n")
        g = graphmod.cycle_graph(args.n)
    else:
        if args.k is None:
            raise ValueError("cyclepair graphs need --k")
        g = graphmod.example2_graph(args.k)
    fmt = args.format or "text"
    if fmt == "csv":
        text = "u,v\n" + "".join(f"{u},{v}\n" for u, v in g.edges)
    elif fmt == "json":
        text = _json_text(graphmod.graph_to_document(g))
    else:
        text = graphmod.format_edge_list(g)
    _emit(text, args.out)
    if args.out:
        _info(f"wrote {args.family} graph: {g.n} vertices, {g.num_edges} edges")
    return 0


def cmd_partition(args) -> int:
    g = graphmod.load_graph(_read(args.graph))
    p = coarsest_equitable_partition(g, args.marked)
    if (args.format or "json") == "csv":
        text = "vertex,cell\n" + "".join(f"{v},{c}\n" for v, c in enumerate(p.cell_of))
    else:
        text = _json_text(p.to_document(args.gamma))
    _emit(text, args.out)
    if args.out:
        _info(f"{p.num_cells} cells, sizes {list(p.sizes)}")
    return 0


def cmd_simulate(args) -> int:
    g = graphmod.load_graph(_read(args.graph))
    times = args.grid if args.grid is not None else np.array([args.time])
    if args.method == "full":
        probs = search_curve_full(SearchInstance(g, args.marked, args.gamma), times)
    else:
        p = coarsest_equitable_partition(g, args.marked)
        probs = search_curve_quotient(quotient_hamiltonian(p, args.gamma), times)
    if (args.format or "csv") == "json":
        doc = {
            "N": g.n,
            "marked": args.marked,
            "gamma": args.gamma,
            "method": args.method,
            "curve": [[float(t), float(pr)] for t, pr in zip(times, probs)],
        }
        text = _json_text(doc)
    else:
        rows = [f"{_csv_number(t)},{_csv_number(pr)}\n" for t, pr in zip(times, probs)]
        text = "t,probability\n" + "".join(rows)
    _emit(text, args.out)
    return 0


def _load_operator(args):
    """Hermitian operator for ``pst``: matrix or partition document, or a graph."""
    raw = _read(args.input)
    doc = None
    if raw.lstrip().startswith("{"):
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise graphmod.GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if isinstance(doc, dict) and "matrix" in doc:
        return HermitianMatrix.from_document(doc)
    if isinstance(doc, dict) and "cells" in doc:
        gamma = args.gamma if args.gamma is not None else doc.get("gamma")
        if gamma is None:
            raise ValueError("partition input needs --gamma or a 'gamma' field")
        return quotient_hamiltonian(EquitablePartition.from_document(doc), gamma).hbar
    g = graphmod.graph_from_document(doc) if doc is not None else graphmod.parse_edge_list(raw)
    if args.quotient:
        if args.gamma is None:
            raise ValueError("--quotient needs --gamma")
        return quotient_hamiltonian(coarsest_equitable_partition(g, args.marked), args.gamma).hbar
    if args.gamma is not None:
        return search_hamiltonian(g, args.marked, args.gamma)
    return graphmod.adjacency_matrix(g)


def cmd_pst(args) -> int:
    spectrum = decompose(_load_operator(args))
    tol = args.tolerance if args.tolerance is not None else PST_TOL
    if args.at is not None:
        cert = check_pst_at(spectrum, args.j, args.k, args.at, tol)
        if cert is None:
            doc = {"source": args.j, "target": args.k, "tau": args.at, "reason": "no-transfer"}
        else:
            doc = cert.to_document()
    else:
        sched = pst_times(spectrum, args.j, args.k, tol)
        doc = sched.to_document()
        if sched and args.horizon is not None:
            doc["times"] = [[t, [lam.real, lam.imag]] for t, lam in sched.times(args.horizon)]
    if (args.format or "json") == "csv":
        header = "source,target,tau,phase_re,phase_im,reason\n"
        tau = doc.get("tau")
        phase = doc.get("phase") or [None, None]
        fields = [doc["source"], doc["target"], tau, phase[0], phase[1]]
        cells = ["" if x is None else (_csv_number(x) if isinstance(x, float) else str(x)) for x in fields]
        cells.append(doc.get("reason") or "")
        text = header + ",".join(cells) + "\n"
    else:
        text = _json_text(doc)
    _emit(text, args.out)
    if "reason" in doc:
        _info(f"no perfect state transfer {args.j} -> {args.k}: {doc['reason']}")
    return 0


def cmd_verify(args) -> int:
    parameter = args.n if args.family == "complete" else args.k
    if parameter is None:
        raise ValueError(f"{args.family} family needs --{'n' if args.family == 'complete' else 'k'}")
    tol = args.tolerance if args.tolerance is not None else 1e-9
    report = verify_example(args.family, parameter, full_cap=args.full_cap, tol=tol)
    if (args.format or "json") == "csv":
        rows = [f"{_csv_number(t)},{_csv_number(p)}\n" for t, p in zip(report.times, report.probabilities)]
        text = "t,probability\n" + "".join(rows)
    else:
        text = _json_text(report.to_document())
    _emit(text, args.out)
    for note in report.notes:
        _info(note)
    if not report.ok:
        bad = {k: v for k, v in report.residuals.items() if v > tol}
        _info(f"verification failed: {bad or 'no transfer certificate'}")
        return EXIT_NUMERIC
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", "-o", help="output file (written atomically); default stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    common.add_argument("--tolerance", type=_positive, help="numerical tolerance override")

    parser = argparse.ArgumentParser(
        prog="qwsearch",
        description="Quantum-walk search on graphs via equitable partitions and perfect state transfer.",
        epilog="Reals accept fractions and pi, e.g. 1/98, pi/2, 3*pi/4. "
        "JSON numbers are lossless (<= 17 significant digits); CSV uses 12.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a graph as an edge list")
    p.add_argument("family", choices=("complete", "cycle", "cyclepair"))
    p.add_argument("--n", type=int, help="vertex count (complete, cycle)")
    p.add_argument("--k", type=int, help="cyclepair parameter, m = 2(2k+1)^2")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", parents=[common], help="coarsest equitable partition")
    p.add_argument("graph", help="edge-list or JSON graph file ('-' for stdin)")
    p.add_argument("--marked", type=int, default=0)
    p.add_argument("--gamma", type=parse_real, help="record a coupling in the document")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("simulate", parents=[common], help="success probability over time")
    p.add_argument("graph")
    p.add_argument("--marked", type=int, default=0)
    p.add_argument("--gamma", type=parse_real, required=True)
    when = p.add_mutually_exclusive_group(required=True)
    when.add_argument("--grid", type=parse_grid, help="start:end:steps, inclusive")
    when.add_argument("--time", type=parse_real)
    p.add_argument("--method", choices=("quotient", "full"), default="quotient")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pst", parents=[common], help="perfect state transfer from j to k")
    p.add_argument("input", help="graph file, or JSON matrix / partition document")
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--at", type=parse_real, help="check this time instead of searching")
    p.add_argument("--gamma", type=parse_real, help="use |w><w| + gamma A (graphs) or this coupling (partitions)")
    p.add_argument("--marked", type=int, default=0)
    p.add_argument("--quotient", action="store_true", help="work on the quotient of a graph; j, k are cells")
    p.add_argument("--horizon", type=parse_real, help="also list transfer times up to this time")
    p.set_defaults(func=cmd_pst)

    p = sub.add_parser("verify", parents=[common], help="reproduce an example family")
    p.add_argument("family", choices=("complete", "cyclepair"))
    p.add_argument("--n", type=int, help="vertex count for the complete family")
    p.add_argument("--k", type=int, help="cyclepair parameter")
    p.add_argument("--full-cap", type=int, default=2048, help="largest N simulated on the full graph")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputDataError as exc:
        _info(f"error: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        _info(f"error: {exc}")
        return EXIT_INPUT
    except NumericError as exc:
        _info(f"numeric failure: {exc}")
        return EXIT_NUMERIC
    except (ValueError, IndexError) as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
