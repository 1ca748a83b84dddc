"""CSV / JSON-lines serialization of scan rows and verification reports.

Scan output schema (version 1), identical keys in both formats::

    p,residue_class,det_A1,det_A2,j_minus_1,half_sum,c_p,jacobi_p_cp,class_number

Undefined values are an empty CSV field or an absent JSON key, never 0.
Integers are written in full decimal.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, List

from legdet.verify import SCAN_FIELDS, ScanRow, VerificationReport

SCHEMA_VERSION = 1
CSV_HEADER = ",".join(SCAN_FIELDS)
REPORT_FIELDS = ("claim_id", "p", "passed", "applicable", "parameters", "witness")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def scan_rows_to_csv(rows: Iterable[ScanRow]) -> str:
    return _csv_text(
        SCAN_FIELDS,
        (["" if v is None else str(v) for v in (getattr(r, f) for f in SCAN_FIELDS)] for r in rows),
    )


def scan_rows_to_jsonl(rows: Iterable[ScanRow]) -> str:
    return "".join(
        json.dumps({k: v for k, v in r.as_dict().items() if v is not None}) + "\n" for r in rows
    )


def parse_scan_csv(text: str) -> List[ScanRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SCAN_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")
    return [ScanRow(**{k: int(v) if v != "" else None for k, v in rec.items()}) for rec in reader]


def parse_scan_jsonl(text: str) -> List[ScanRow]:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        unknown = set(obj) - set(SCAN_FIELDS)
        if unknown:
            raise ValueError(f"unknown keys {sorted(unknown)}")
        rows.append(ScanRow(**{f: obj.get(f) for f in SCAN_FIELDS}))
    return rows


def _jsonable(x):
    # witnesses hold big ints, tuples and lists; tuples become lists
    return json.loads(json.dumps(x, default=str))


def report_dict(r: VerificationReport) -> dict:
    return {
        "claim_id": r.claim_id,
        "p": r.p,
        "passed": r.passed,
        "applicable": r.applicable,
        "parameters": _jsonable(r.parameters),
        "witness": _jsonable(r.witness),
    }


def reports_to_jsonl(reports: Iterable[VerificationReport]) -> str:
    return "".join(json.dumps(report_dict(r)) + "\n" for r in reports)


def reports_to_csv(reports: Iterable[VerificationReport]) -> str:
    def row(r):
        d = report_dict(r)
        return [
            d["claim_id"],
            d["p"],
            str(d["passed"]).lower(),
            str(d["applicable"]).lower(),
            json.dumps(d["parameters"], sort_keys=True),
            json.dumps(d["witness"], sort_keys=True),
        ]

    return _csv_text(REPORT_FIELDS, (row(r) for r in reports))
