"""Command line front end.

    legdet cp --p 53
    legdet det --p 5 --delta 0 --w 1
    legdet verify --from 3 --to 200 --jobs 4
    legdet scan --from 3 --to 300 --format csv --out scan.csv

Exit status: 0 success, 1 verification failure or theorem-violation abort,
2 usage/config/I-O error, 3 conjecture counterexample found by ``scan``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

from legdet.exactla import DEFAULT_ADJUGATE_CAP, det, rank1_update_det
from legdet.families import TheoremViolation, build_A, build_u, compute_cp
from legdet.numtheory import is_prime, prime_context
from legdet.records import (
    reports_to_csv,
    reports_to_jsonl,
    scan_rows_to_csv,
    scan_rows_to_jsonl,
)
from legdet.verify import DEFAULT_SEED, ScanRow, counterexamples, scan_conjecture, verify_range

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3

FORMATS = ("csv", "jsonl", "human")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    lo: Optional[int] = None
    hi: Optional[int] = None
    delta: Optional[int] = None
    w: Optional[int] = None
    format: str = "human"
    jobs: int = 1
    out: Optional[str] = None
    adjugate_cap: int = DEFAULT_ADJUGATE_CAP
    seed: int = DEFAULT_SEED

    def validate(self) -> "RunConfig":
        if self.p is not None and (self.p < 3 or self.p % 2 == 0 or not is_prime(self.p)):
            raise UsageError(f"{self.p} is not an odd prime")
        if self.lo is not None and self.hi is not None and self.hi < self.lo:
            raise UsageError(f"empty range: --to {self.hi} < --from {self.lo}")
        if self.delta is not None and self.delta not in (0, 1):
            raise UsageError("--delta must be 0 or 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.adjugate_cap < 0:
            raise UsageError("--adjugate-cap must be nonnegative")
        return self


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="legdet", description="Legendre-symbol determinants and the c_p invariants."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, default_format):
        sp.add_argument("--format", choices=FORMATS, default=default_format)
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    def prange(sp):
        sp.add_argument("--from", dest="lo", type=int, required=True)
        sp.add_argument("--to", dest="hi", type=int, required=True)
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("cp", help="c_p and related invariants for one prime")
    sp.add_argument("--p", type=int, required=True)
    common(sp, "human")

    sp = sub.add_parser("det", help="determinants of A_delta and its rank-one perturbation")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--w", type=int, required=True)
    common(sp, "human")

    sp = sub.add_parser("verify", help="run every identity check over a prime range")
    prange(sp)
    sp.add_argument("--adjugate-cap", type=int, default=DEFAULT_ADJUGATE_CAP)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(sp, "human")

    sp = sub.add_parser("scan", help="tabulate c_p and (p/c_p) over a prime range")
    prange(sp)
    common(sp, "csv")
    return ap


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _render_rows(rows: List[ScanRow], fmt: str) -> str:
    if fmt == "csv":
        return scan_rows_to_csv(rows)
    if fmt == "jsonl":
        return scan_rows_to_jsonl(rows)
    lines = []
    for r in rows:
        flag = "  <-- COUNTEREXAMPLE" if r.counterexample else ""
        lines.append(f"p={r.p:<6} c_p={r.c_p}  (p/c_p)={r.jacobi_p_cp}{flag}")
    return "\n".join(lines) + ("\n" if lines else "")


def _render_record(rec, fmt: str) -> str:
    row = ScanRow.from_record(rec)
    if fmt != "human":
        return _render_rows([row], fmt)
    lines = [f"p             {rec.p}", f"branch        p = {rec.residue_class} (mod 4)"]
    lines.append(f"|A_1|         {rec.det_A1}")
    if rec.residue_class == 1:
        lines.append(f"J(-1)         {rec.j_minus_1}")
    else:
        lines.append(f"|A_2|         {rec.det_A2}")
    lines.append(f"half sum      {rec.half_sum}")
    lines.append(f"c_p           {rec.c_p}")
    lines.append(f"(p/c_p)       {rec.jacobi_p_cp}")
    if rec.class_number is not None:
        lines.append(f"h(-p)         {rec.class_number}")
    return "\n".join(lines) + "\n"


def cmd_cp(cfg: RunConfig) -> int:
    rec = compute_cp(prime_context(cfg.p))
    _emit(_render_record(rec, cfg.format), cfg.out)
    return EXIT_OK


def cmd_det(cfg: RunConfig) -> int:
    ctx = prime_context(cfg.p)
    A = build_A(ctx, cfg.delta)
    u = build_u(ctx, cfg.delta)
    base = det(A)
    perturbed = rank1_update_det(A, u, u, cfg.w)
    values = {
        "p": cfg.p,
        "delta": cfg.delta,
        "w": cfg.w,
        "det_A": base,
        "det_perturbed": perturbed,
        "D": perturbed - base,
    }
    if cfg.format == "jsonl":
        text = json.dumps(values) + "\n"
    elif cfg.format == "csv":
        text = ",".join(values) + "\n" + ",".join(str(v) for v in values.values()) + "\n"
    else:
        text = "".join(f"{k:<14}{v}\n" for k, v in values.items())
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    reports = verify_range(cfg.lo, cfg.hi, cfg.jobs, cfg.adjugate_cap, cfg.seed)
    failed = [r for r in reports if not r.passed]
    na = sum(1 for r in reports if not r.applicable)
    summary = (
        f"{len(reports)} reports: {len(reports) - len(failed) - na} passed, "
        f"{len(failed)} failed, {na} not applicable\n"
    )
    if cfg.format == "csv":
        _emit(reports_to_csv(reports), cfg.out)
        sys.stderr.write(summary)
    elif cfg.format == "jsonl":
        _emit(reports_to_jsonl(reports), cfg.out)
        sys.stderr.write(summary)
    else:
        _emit("".join(f"{r}\n" for r in failed) + summary, cfg.out)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    rows = scan_conjecture(cfg.lo, cfg.hi, cfg.jobs)
    _emit(_render_rows(rows, cfg.format), cfg.out)
    bad = counterexamples(rows)
    if bad:
        sys.stderr.write("conjecture counterexample(s): (p/c_p) != 1\n")
        sys.stderr.write(scan_rows_to_csv(bad))
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


COMMANDS = {"cp": cmd_cp, "det": cmd_det, "verify": cmd_verify, "scan": cmd_scan}


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args)).validate()
        return COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"legdet: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TheoremViolation as e:
        print(f"legdet: theorem violation: {e}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as e:
        print(f"legdet: I/O error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
