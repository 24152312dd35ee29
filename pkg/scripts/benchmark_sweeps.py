import os
import sys
import time

# Add project root to path
sys.path.append(os.getcwd())

from app.schemas import CheckStatus
from app.services.sweeps import DEFAULT_SIZES, run_sweep
from app.workers.celery_app import celery_app  # Import to ensure config load

# seconds allowed per sweep on a laptop
BUDGETS = {
    "2.1": 60,
    "3.5": 120,
}


def run_benchmark(theorem: str):
    print(f"\n--- Sweep {theorem} up to size {DEFAULT_SIZES[theorem]} ---")
    start = time.time()
    rows = run_sweep(theorem, progress=True)
    duration = time.time() - start
    failed = sum(1 for row in rows if row.status is CheckStatus.FAILED)
    print(f"  Instances: {len(rows)}")
    print(f"  Failed: {failed}")
    print(f"  Total time: {duration:.2f} seconds")
    if rows:
        print(f"  Avg time per instance: {(duration / len(rows)) * 1000:.2f} ms")
    return duration, failed


if __name__ == "__main__":
    theorems = sys.argv[1:] or list(DEFAULT_SIZES)
    print(f"Eager mode: {celery_app.conf.task_always_eager}")

    results = {}
    for theorem in theorems:
        results[theorem] = run_benchmark(theorem)

    print("\n--- Overall Benchmark Summary ---")
    over_budget = False
    for theorem, (duration, failed) in results.items():
        budget = BUDGETS.get(theorem)
        verdict = ""
        if budget is not None:
            verdict = "within budget" if duration < budget else f"OVER the {budget}s budget"
            over_budget = over_budget or duration >= budget
        print(f"{theorem}: {duration:.2f}s, {failed} failed {verdict}".rstrip())

    if over_budget or any(failed for _, failed in results.values()):
        sys.exit(1)
