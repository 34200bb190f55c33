"""Command-line front end: ``densfact <command> [options] INPUT...``.

Documents are written to ``--out`` or, failing that, to standard output.
Human-readable reports go to standard output when the document went to a
file and to standard error otherwise, so that document streams can be piped.
``verify`` produces only a report, always on standard output.

Exit codes: 0 success, 1 domain failure, 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .density_model import (
    DensityFactor,
    DensityOperator,
    Ensemble,
    density_from_ensemble,
    factor_from_ensemble,
)
from .documents import MatrixDocument, document_from, parse_document, serialize_document
from .equivalence import (
    CoIsometry,
    coisometry_defect,
    dft_coisometry,
    expand_factor,
    random_coisometry,
    relate_to_minimum,
)
from .errors import DensfactError, DocumentError, InvariantError, NotAFactorOf
from .factorization import minimum_df_from_eid, minimum_df_from_svd
from .linalg_core import DEFAULT_TOL, frobenius

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str, tol: float, expected: tuple[str, ...]) -> MatrixDocument:
    try:
        if path == "-":
            text = sys.stdin.buffer.read()
        else:
            text = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    doc = parse_document(text, tol)
    if doc.kind not in expected:
        raise UsageError(f"{path}: expected a {' or '.join(expected)} document, got {doc.kind!r}")
    return doc


class _Output:
    """Collects the document and report; nothing is emitted until ``flush``."""

    def __init__(self, args, stdout: TextIO, stderr: TextIO):
        self.args = args
        self.stdout = stdout
        self.stderr = stderr
        self.document: str | None = None
        self.report: dict[str, object] = {}

    def flush(self) -> None:
        if self.document is not None:
            if self.args.out:
                _atomic_write(Path(self.args.out), self.document)
                report_stream = self.stdout
            else:
                self.stdout.write(self.document)
                report_stream = self.stderr
        else:
            report_stream = self.stdout
        if self.report:
            report_stream.write(_format_report(self.report, self.args.json))


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _format_report(report: dict[str, object], as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True) + "\n"
    lines = []
    for key, value in report.items():
        if isinstance(value, float):
            value = f"{value:.6e}"
        elif isinstance(value, list):
            value = " ".join(f"{v:.15g}" if isinstance(v, float) else str(v) for v in value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _meta(command: str) -> dict[str, str]:
    return {"generated_by": f"densfact {command}"}


# -- subcommands -------------------------------------------------------------


def _cmd_build(args, out: _Output) -> int:
    ens: Ensemble = _read(args.inputs[0], args.tol, ("ensemble",)).to_domain()
    out.document = serialize_document(document_from(density_from_ensemble(ens, args.tol), _meta("build")))
    return EXIT_OK


def _cmd_factorize(args, out: _Output) -> int:
    ens: Ensemble = _read(args.inputs[0], args.tol, ("ensemble",)).to_domain()
    out.document = serialize_document(document_from(factor_from_ensemble(ens, args.tol), _meta("factorize")))
    return EXIT_OK


def _cmd_minimize(args, out: _Output) -> int:
    doc = _read(args.inputs[0], args.tol, ("density", "factor"))
    if doc.kind == "density":
        rho: DensityOperator = doc.to_domain()
        psi0, spec = minimum_df_from_eid(rho, args.tol)
        eigenvalues = spec.eigenvalues
        target = rho.matrix
        route = "eigendecomposition"
    else:
        f: DensityFactor = doc.to_domain()
        psi0, _ = minimum_df_from_svd(f, args.tol)
        eigenvalues = np.sum(np.abs(psi0.matrix) ** 2, axis=0)
        target = f.matrix @ f.matrix.conj().T
        route = "svd"
    residual = frobenius(psi0.matrix @ psi0.matrix.conj().T - target)
    out.document = serialize_document(document_from(psi0, _meta("minimize")))
    out.report = {
        "route": route,
        "rank": int(psi0.size),
        "eigenvalues": [float(x) for x in eigenvalues],
        "residual": residual,
    }
    return EXIT_OK


def _cmd_expand(args, out: _Output) -> int:
    if len(args.inputs) != 2:
        raise UsageError("expand needs FACTOR COISOMETRY")
    f: DensityFactor = _read(args.inputs[0], args.tol, ("factor",)).to_domain()
    a: CoIsometry = _read(args.inputs[1], args.tol, ("coisometry",)).to_domain()
    phi = expand_factor(f, a, args.tol)
    residual = frobenius(phi.matrix @ phi.matrix.conj().T - f.matrix @ f.matrix.conj().T)
    out.document = serialize_document(document_from(phi, _meta("expand")))
    out.report = {"columns": int(phi.size), "residual": residual}
    return EXIT_OK


def _cmd_relate(args, out: _Output) -> int:
    if len(args.inputs) != 2:
        raise UsageError("relate needs MINIMUM_FACTOR FACTOR")
    psi0: DensityFactor = _read(args.inputs[0], args.tol, ("factor",)).to_domain()
    phi: DensityFactor = _read(args.inputs[1], args.tol, ("factor",)).to_domain()
    a0 = relate_to_minimum(psi0, phi, tol=args.tol)
    reconstruction = frobenius(psi0.matrix @ a0.matrix - phi.matrix)
    defect = coisometry_defect(a0)
    ok = reconstruction <= 10 * args.tol and defect <= 10 * args.tol
    out.report = {
        "reconstruction_residual": reconstruction,
        "coisometry_defect": defect,
        "status": "pass" if ok else "fail",
    }
    if not ok:
        raise NotAFactorOf(
            f"A0 fails verification (reconstruction {reconstruction:.3e}, defect {defect:.3e})"
        )
    out.document = serialize_document(document_from(a0, _meta("relate")))
    return EXIT_OK


def _cmd_verify(args, out: _Output) -> int:
    first = _read(args.inputs[0], args.tol, ("factor", "coisometry"))
    if first.kind == "coisometry":
        if len(args.inputs) != 1:
            raise UsageError("verify takes a single COISOMETRY document")
        defect = coisometry_defect(first.to_domain())
        ok = defect <= args.tol
        out.report = {"check": "coisometry", "coisometry_defect": defect, "status": "pass" if ok else "fail"}
        return EXIT_OK if ok else EXIT_DOMAIN
    if len(args.inputs) != 2:
        raise UsageError("verify needs FACTOR DENSITY")
    f: DensityFactor = first.to_domain()
    rho: DensityOperator = _read(args.inputs[1], args.tol, ("density",)).to_domain()
    if f.dim != rho.dim:
        raise UsageError(f"factor acts on C^{f.dim}, density on C^{rho.dim}")
    residual = frobenius(f.matrix @ f.matrix.conj().T - rho.matrix)
    ok = residual <= args.tol
    out.report = {"check": "factor", "residual": residual, "status": "pass" if ok else "fail"}
    return EXIT_OK if ok else EXIT_DOMAIN


def _cmd_gen(args, out: _Output) -> int:
    if args.inputs:
        raise UsageError("gen-coisometry takes no input documents")
    if args.random is not None:
        k, p = args.random
        a = random_coisometry(k, p, args.seed)
        meta = {**_meta("gen-coisometry"), "construction": "haar", "seed": str(args.seed)}
    else:
        k, p = args.dft
        a = dft_coisometry(k, p)
        meta = {**_meta("gen-coisometry"), "construction": "dft"}
    out.document = serialize_document(document_from(a, meta))
    return EXIT_OK


COMMANDS = {
    "build": (_cmd_build, "ensemble -> density operator"),
    "factorize": (_cmd_factorize, "ensemble -> density factor"),
    "minimize": (_cmd_minimize, "density or factor -> minimum orthonormal factor"),
    "expand": (_cmd_expand, "factor x co-isometry -> factor"),
    "relate": (_cmd_relate, "minimum factor + factor -> co-isometry"),
    "verify": (_cmd_verify, "check a factor against a density, or a co-isometry"),
    "gen-coisometry": (_cmd_gen, "generate a random (Haar) or DFT co-isometry"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for random constructions (default 0)")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--out", metavar="PATH", help="write the output document here")

    parser = _Parser(prog="densfact", description="Density operators and their density factors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "gen-coisometry":
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--random", nargs=2, type=int, metavar=("K", "P"))
            group.add_argument("--dft", nargs=2, type=int, metavar=("K", "P"))
            p.add_argument("inputs", nargs="*", help=argparse.SUPPRESS)
        else:
            p.add_argument("inputs", nargs="+", metavar="INPUT", help="document path, or - for stdin")
    return parser


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    out = _Output(args, stdout, stderr)
    handler = COMMANDS[args.command][0]
    try:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        code = handler(args, out)
    except UsageError as exc:
        stderr.write(f"densfact {args.command}: {exc}\n")
        return EXIT_USAGE
    except InvariantError as exc:
        stderr.write(f"densfact {args.command}: InvariantError: {exc}\n")
        return EXIT_DOMAIN
    except DocumentError as exc:
        stderr.write(f"densfact {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except DensfactError as exc:
        if out.report:
            stderr.write(_format_report(out.report, args.json))
        stderr.write(f"densfact {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    out.flush()
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
