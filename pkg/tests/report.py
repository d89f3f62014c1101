"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

RESULTS: dict = {}


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok
