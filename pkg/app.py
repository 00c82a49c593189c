"""Command-line entry point: rref, det, solve, inverse, trace, selfcheck, history.

Results go to stdout and are byte-deterministic for given input and flags;
diagnostics and logs go to stderr.

Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error.
"""
import argparse
import json
import os
import sys
from typing import List, Optional

from bareiss import PivotingMode
from config import settings
from cramer import inverse, solve_gj
from determinants import COFACTOR_MAX_SIZE, det_cofactor, exact_det
from errors import MathematicalError, StructurallySingular, UsageError
from gauss_jordan import decompose_entry, gj_rational_oracle, gj_reduce, rational_rref
from logging_config import get_logger, setup_logging
from matrix import Matrix
from matrix_io import parse_matrix, parse_matrix_json, render_matrix, render_matrix_json, render_rows, to_document
from scalars import render_scalar
from schemas import EntryRecord, SelfcheckReport, TraceDocument, TraceStepRecord

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2


class CliArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so cli_main owns the exit code"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str, as_json: bool) -> Matrix:
    text = _read_text(path)
    matrix = parse_matrix_json(text) if as_json else parse_matrix(text)
    logger.debug("loaded %s", path, extra={'matrix_shape': list(matrix.shape)})
    return matrix


def _emit_matrix(m: Matrix, as_json: bool, body_only: bool = False) -> str:
    if as_json:
        return render_matrix_json(m)
    return render_rows(m) if body_only else render_matrix(m)


def _as_integer(a: Matrix) -> Matrix:
    # row scaling leaves the reduced form unchanged
    return a if a.is_integer else a.clear_denominators()[0]


# -- subcommands -------------------------------------------------------------------

def cmd_rref(args) -> str:
    a = _load(args.file, args.json)
    try:
        result = gj_reduce(_as_integer(a), args.pivoting).final
    except StructurallySingular as e:
        if args.pivoting is not PivotingMode.ROW_SWAP:
            raise
        logger.info("falling back to general reduction: %s", e, extra={'step': e.step})
        result, _ = rational_rref(a)
    return _emit_matrix(result, args.json)


def cmd_det(args) -> str:
    a = _load(args.file, args.json)
    value = render_scalar(exact_det(a))
    if args.json:
        return json.dumps({"det": value}) + "\n"
    return value + "\n"


def cmd_solve(args) -> str:
    a = _load(args.a_file, args.json)
    b = _load(args.b_file, args.json)
    result = solve_gj(a, b, args.pivoting)
    return _emit_matrix(result.solution, args.json, body_only=True)


def cmd_inverse(args) -> str:
    a = _load(args.file, args.json)
    return _emit_matrix(inverse(a, args.pivoting), args.json)


def _check_entry(permuted: Matrix, oracle: Matrix, decomposition) -> str:
    i, j, k = decomposition.i, decomposition.j, decomposition.k
    value = decomposition.value
    if value != oracle[i, j]:
        return f"FAIL(oracle={render_scalar(oracle[i, j])})"
    if permuted.rows <= COFACTOR_MAX_SIZE:
        cofactor = decompose_entry(permuted, i, j, k, det=det_cofactor)
        if (cofactor.numerator, cofactor.denominator) != (decomposition.numerator, decomposition.denominator):
            return (
                f"FAIL(cofactor num={render_scalar(cofactor.numerator)}"
                f" den={render_scalar(cofactor.denominator)})"
            )
    return "ok"


def cmd_trace(args) -> str:
    a = _load(args.file, args.json)
    if a.is_integer:
        trace = gj_reduce(a, args.pivoting)
    else:
        trace = gj_rational_oracle(a, args.pivoting)
    permuted = trace.permutation.apply(a)
    oracle = gj_rational_oracle(permuted, PivotingMode.STRICT) if args.trace_verify else None

    records: List[TraceStepRecord] = []
    for step in trace.steps:
        entries = []
        for i in range(1, a.rows + 1):
            for j in range(step.k + 1, a.cols + 1):
                d = decompose_entry(permuted, i, j, step.k)
                check = _check_entry(permuted, oracle.step(step.k).matrix, d) if oracle else None
                if check is not None and check != "ok":
                    logger.error("trace check failed at k=%d (%d,%d): %s", step.k, i, j, check, extra={'step': step.k})
                entries.append(EntryRecord(
                    i=i, j=j, case=d.case, sign=d.sign,
                    numerator=render_scalar(d.numerator),
                    denominator=render_scalar(d.denominator),
                    value=render_scalar(d.value),
                    check=check,
                ))
        records.append(TraceStepRecord(k=step.k, rows=to_document(step.matrix).rows, entries=entries))
    doc = TraceDocument(permutation=list(trace.permutation.mapping), steps=records)

    if args.json:
        return doc.model_dump_json() + "\n"
    lines = []
    if not trace.permutation.is_identity:
        lines.append("permutation " + " ".join(str(p) for p in doc.permutation))
    for step, record in zip(trace.steps, doc.steps):
        lines.append(f"A^{record.k}")
        lines.append(render_matrix(step.matrix).rstrip("\n"))
        for e in record.entries:
            line = (
                f"({e.i},{e.j}) case={e.case} sign={e.sign:+d} num={e.numerator}"
                f" den={e.denominator} value={e.value}"
            )
            if e.check is not None:
                line += f" check={e.check}"
            lines.append(line)
    return "\n".join(lines) + "\n"


def _format_report(report: SelfcheckReport) -> str:
    lines = [f"source={report.source}" + (f" seed={report.seed}" if report.seed is not None else "")]
    for battery in report.batteries:
        lines.append(
            f"{battery.name}: instances={battery.instances} cells={battery.cells_checked}"
            f" non-exact={battery.non_exact_divisions} failures={battery.failures}"
        )
        for d in battery.discrepancies:
            where = " ".join(f"{name}={value}" for name, value in (("k", d.k), ("i", d.i), ("j", d.j)) if value is not None)
            operands = " ".join(f"{name}={value}" for name, value in sorted(d.operands.items()))
            lines.append("  " + " ".join(part for part in (d.kind, where, operands) if part))
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


def cmd_selfcheck(args):
    from services.verification_service import DEFAULT_BATTERY, VerificationService

    session_factory = None
    if args.record:
        from models import SessionLocal
        session_factory = SessionLocal
    service = VerificationService(workers=args.workers, session_factory=session_factory)
    if args.file is not None:
        source = "stdin" if args.file == "-" else os.path.basename(args.file)
        report = service.verify_matrix(_load(args.file, args.json), source=source)
    else:
        counts = DEFAULT_BATTERY if args.random is None else dict.fromkeys(DEFAULT_BATTERY, args.random)
        report = service.run_battery(seed=args.seed, counts=counts)

    if args.json:
        out = json.dumps({"passed": report.passed, **report.model_dump(mode="json")}) + "\n"
    else:
        out = _format_report(report)
    return out, EXIT_OK if report.passed else EXIT_MATH


def cmd_history(args) -> str:
    from models import SessionLocal, init_db
    from repositories.verification_run_repository import VerificationRunRepository

    db = SessionLocal()
    try:
        init_db(db.get_bind())
        runs = VerificationRunRepository(db).get_latest(args.limit)
        rows = [
            {
                "id": run.id,
                "created_at": run.created_at.isoformat(timespec="seconds"),
                "source": run.source,
                "seed": run.seed,
                "matrices_checked": run.matrices_checked,
                "cells_checked": run.cells_checked,
                "discrepancies": run.discrepancies,
                "passed": run.passed,
                "duration_ms": round(run.duration_ms, 2),
            }
            for run in runs
        ]
    finally:
        db.close()
    if args.json:
        return json.dumps(rows) + "\n"
    return "".join(
        f"{r['id']} {r['created_at']} {'PASS' if r['passed'] else 'FAIL'} source={r['source']}"
        f" seed={r['seed']} matrices={r['matrices_checked']} cells={r['cells_checked']}"
        f" discrepancies={r['discrepancies']} {r['duration_ms']}ms\n"
        for r in rows
    )


# -- parser --------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--pivoting', type=PivotingMode, choices=list(PivotingMode),
                        default=PivotingMode.STRICT, metavar='{strict,swap}',
                        help='strict requires nonzero leading minors; swap exchanges rows')
    common.add_argument('--json', action='store_true', help='read and write JSON documents')

    parser = CliArgumentParser(prog='exactgj', description='Exact fraction-free Gauss-Jordan elimination')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=CliArgumentParser)

    p = sub.add_parser('rref', parents=[common], help='reduced row echelon form')
    p.add_argument('file')
    p.set_defaults(handler=cmd_rref)

    p = sub.add_parser('det', parents=[common], help='exact determinant')
    p.add_argument('file')
    p.set_defaults(handler=cmd_det)

    p = sub.add_parser('solve', parents=[common], help='solve A X = B')
    p.add_argument('a_file', metavar='A_FILE')
    p.add_argument('b_file', metavar='B_FILE')
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser('inverse', parents=[common], help='matrix inverse')
    p.add_argument('file')
    p.set_defaults(handler=cmd_inverse)

    p = sub.add_parser('trace', parents=[common], help='every A^k with its determinant ratios')
    p.add_argument('file')
    p.add_argument('--trace-verify', action='store_true',
                   help='check each ratio against cofactor minors and rational elimination')
    p.set_defaults(handler=cmd_trace)

    p = sub.add_parser('selfcheck', parents=[common], help='verify the construction')
    p.add_argument('file', nargs='?')
    p.add_argument('--random', type=_positive_int, metavar='N', help='instances per battery')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--workers', type=_positive_int, default=settings.selfcheck_workers)
    p.add_argument('--record', action='store_true', help='store the run in the verification ledger')
    p.set_defaults(handler=cmd_selfcheck)

    p = sub.add_parser('history', help='recorded self-check runs')
    p.add_argument('--limit', type=_positive_int, default=20)
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_history)
    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    setup_logging(log_level=settings.log_level, log_format=settings.log_format)
    try:
        args = build_parser().parse_args(argv)
        result = args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MathematicalError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MATH
    except SystemExit as e:
        # --help exits through argparse
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    out, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


def main():
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
