import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def brute_force_pmf(vertex_count, edges, c):
    """Exact pmf of Y by plain enumeration of every coloring (independent oracle)."""
    counts = Counter()
    for col in itertools.product(range(c), repeat=vertex_count):
        counts[sum(col[u] == col[v] for u, v in edges)] += 1
    total = c**vertex_count
    return {y: Fraction(k, total) for y, k in sorted(counts.items())}


def brute_force_expectation(vertex_count, c, fn):
    """E fn(coloring) over all c**n colorings, as a Fraction when fn returns Fractions."""
    acc = 0
    for col in itertools.product(range(c), repeat=vertex_count):
        acc += fn(col)
    return acc / c**vertex_count


def binomial_pmf(n, p):
    return {k: math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(key: str, ok: bool, detail: str):
        ACCEPTANCE[key] = (bool(ok), detail)
        assert ok, f"criterion {key} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(ch for ch in k if ch.isdigit())), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
