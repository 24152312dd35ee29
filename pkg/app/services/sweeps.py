"""
Corpus sweeps: run one verifier over every small structure, dispatching
each instance as a Celery task (in-process when SWEEP_EAGER is set).
"""
import io
import logging
import sys
from typing import Optional

import pandas as pd
from tqdm import tqdm

from app.schemas import CheckStatus, SweepRow
from app.services.poset_spec import enumerate_finite_posets
from app.services.relational_model import Signature, enumerate_structures
from app.services.semilattice import enumerate_semilattices
from app.workers import tasks

logger = logging.getLogger(__name__)

SIGNATURES = {
    "unary": Signature(relations=(("R", 1),)),
    "binary": Signature(relations=(("R", 2),)),
    "algebra": Signature(relations=(("R", 1),), functions=(("f", 2),)),
}

DEFAULT_SIZES = {
    "2.1": 4,
    "2.3": 4,
    "2.4": 4,
    "2.5": 3,
    "2.6": 3,
    "2.7": 2,
    "3.1": 3,
    "3.2": 3,
    "3.5": 3,
}

THEOREMS = tuple(DEFAULT_SIZES)


def _instances(theorem: str, max_size: int) -> list[tuple[int, str, object, tuple]]:
    """(size, subject, task, task args) per instance, in corpus order."""
    found = []
    if theorem in tasks.GLOBAL_VERIFIERS:
        found.append((max_size, f"all structures up to {max_size}", tasks.verify_global, (theorem, max_size)))
        return found
    if theorem in tasks.POSET_VERIFIERS:
        for n in range(1, max_size + 1):
            for p in enumerate_finite_posets(n):
                found.append((n, f"poset {list(p.order.rows)}", tasks.verify_poset, (theorem, tasks.poset_payload(p))))
        return found
    for n in range(1, max_size + 1):
        for s in enumerate_semilattices(n):
            payload = tasks.semilattice_payload(s)
            found.append((n, f"semilattice {payload['join']}", tasks.verify_semilattice, (theorem, payload)))
    if theorem == "3.5":
        for label, signature in SIGNATURES.items():
            for n in range(1, max_size + 1):
                for a in enumerate_structures(signature, n, up_to_iso=True, allow_large=True):
                    payload = tasks.structure_payload(a)
                    subject = f"{label} {payload['tuples']} {payload['tables']}"
                    found.append((n, subject, tasks.verify_structure, (payload,)))
    return found


def _detail(report: dict) -> Optional[str]:
    failures = [f for key, value in sorted(report.items()) if key.endswith("failures") for f in value]
    if "left_count" in report and report["left_count"] != report["right_count"]:
        failures.insert(0, f"{report['left_label']} {report['left_count']} != {report['right_label']} {report['right_count']}")
    if "preorder_count" in report and report["preorder_count"] != report["congruence_count"]:
        failures.insert(0, f"preorders {report['preorder_count']} != congruences {report['congruence_count']}")
    return "; ".join(failures[:3]) if failures else None


def run_sweep(theorem: str, max_size: Optional[int] = None, progress: Optional[bool] = None) -> list[SweepRow]:
    if theorem not in DEFAULT_SIZES:
        raise ValueError(f"No sweep for theorem {theorem}; choose from {', '.join(THEOREMS)}")
    max_size = max_size or DEFAULT_SIZES[theorem]
    if progress is None:
        progress = sys.stderr.isatty()
    instances = _instances(theorem, max_size)
    logger.info(f"Dispatching {len(instances)} instances for {theorem} up to size {max_size}")

    # in eager mode delay() runs the verifier itself
    results = [
        task.delay(*args)
        for _, _, task, args in tqdm(instances, desc=f"Sweep {theorem}", disable=not progress)
    ]
    reports = tasks.collect(results)

    rows = []
    for index, ((size, subject, _, _), report) in enumerate(zip(instances, reports)):
        rows.append(SweepRow(
            theorem=theorem,
            size=size,
            index=index,
            subject=subject,
            status=CheckStatus(report["status"]),
            detail=_detail(report),
        ))
    failed = sum(row.status is CheckStatus.FAILED for row in rows)
    if failed:
        logger.error(f"Sweep {theorem}: {failed} of {len(rows)} instances failed")
    return rows


def sweep_frame(rows: list[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump(mode="json") for row in rows], columns=list(SweepRow.model_fields))


def export_csv(rows: list[SweepRow], path=None) -> str:
    """Write the rows as CSV to path (when given) and return the CSV text."""
    stream = io.StringIO()
    sweep_frame(rows).to_csv(stream, index=False)
    if path is not None:
        with open(path, "w", newline="") as f:
            f.write(stream.getvalue())
    return stream.getvalue()


def summarize(rows: list[SweepRow]) -> list[str]:
    frame = sweep_frame(rows)
    lines = []
    for size, group in frame.groupby("size", sort=True):
        passed = int((group["status"] == CheckStatus.PASSED.value).sum())
        lines.append(f"size {size}: {len(group)} instances, {passed} passed, {len(group) - passed} failed")
    failed = frame[frame["status"] == CheckStatus.FAILED.value]
    for _, row in failed.iterrows():
        lines.append(f"FAILED [{row['index']}] {row['subject']}: {row['detail']}")
    return lines
