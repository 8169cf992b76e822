"""Brute-force counting oracles: labelled speeds, bipartite Ramsey numbers, the log inequality."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import Iterator, Optional

from .errors import ArgumentError, ResourceError
from .graph import Graph
from .recognition import ClassSpec, class_violation

MAX_COUNT_N = 7


def _extend(spec: ClassSpec, n: int, rows: dict[int, int]) -> Iterator[dict[int, int]]:
    """All in-class graphs on ``1..n`` whose restriction to ``1..n-1`` is ``rows``.

    Every assignment of the new vertex's row is tried; because classes are
    hereditary, an assignment can only be in the class if its prefix is.
    """
    for m in range(1 << (n - 1)):
        new = {v: r | ((m >> (v - 1) & 1) << n) for v, r in rows.items()}
        new[n] = m << 1
        g = Graph.from_rows(new)
        if class_violation(g, spec, through=n) is None:
            yield new


def _count_from(args) -> int:
    spec, n, start_rows = args
    level = [start_rows]
    for m in range(max(start_rows, default=0) + 1, n + 1):
        level = [r for rows in level for r in _extend(spec, m, rows)]
    return len(level)


def count_labelled(spec: ClassSpec, n: int, jobs: int = 1) -> int:
    """Exact number of labelled graphs on ``{1..n}`` in the class."""
    if n < 0:
        raise ArgumentError("n must be non-negative")
    if n > MAX_COUNT_N:
        raise ResourceError(f"n={n} exceeds the enumeration limit {MAX_COUNT_N}")
    if n <= 1:
        return 1 if class_violation(Graph.on(n), spec) is None else 0
    split = min(n, 4)
    seeds = [{}]
    for m in range(1, split + 1):
        seeds = [r for rows in seeds for r in _extend(spec, m, rows)]
    if split == n:
        return len(seeds)
    work = [(spec, n, s) for s in seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return sum(ex.map(_count_from, work, chunksize=max(1, len(work) // (4 * jobs))))
    return sum(_count_from(w) for w in work)


def bits_per_vertex(count: int, n: int) -> float:
    if count < 1 or n < 1:
        raise ArgumentError("count and n must be positive")
    if n == 1:
        return math.log2(count)
    return math.log2(count) / (n * math.log2(n))


def speed_table(spec: ClassSpec, n_max: int, class_id: str = "", jobs: int = 1) -> list[tuple]:
    if n_max > MAX_COUNT_N:
        raise ResourceError(f"n_max={n_max} exceeds the enumeration limit {MAX_COUNT_N}")
    rows = []
    for n in range(1, n_max + 1):
        cnt = count_labelled(spec, n, jobs)
        rows.append((class_id, n, cnt, bits_per_vertex(cnt, n) if cnt else 0.0))
    return rows


def speed_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["class_id", "n", "count", "bits_per_vertex"])
    for cid, n, cnt, bpv in rows:
        w.writerow([cid, n, cnt, f"{bpv:.6f}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# bipartite Ramsey numbers
# ---------------------------------------------------------------------------

def _bad(rows: list[int], N: int, p: int, q: int) -> bool:
    """Does the newest row complete an induced K_{p,q} or O_{p,q} (either orientation)?"""
    full = (1 << N) - 1
    last = len(rows) - 1
    for a, b in {(p, q), (q, p)}:
        if a > len(rows):
            continue
        for others in combinations(range(last), a - 1):
            sel = [rows[i] for i in others] + [rows[last]]
            common = full
            nothing = full
            for r in sel:
                common &= r
                nothing &= ~r
            if common.bit_count() >= b or nothing.bit_count() >= b:
                return True
    return False


def ramsey_counterexample(p: int, q: int, N: int) -> Optional[list[int]]:
    """A bipartite graph with N vertices per part avoiding K_{p,q} and O_{p,q}, as top rows.

    Top vertices are interchangeable, so rows are generated in non-decreasing order.
    """
    rows: list[int] = []

    def rec(lo: int) -> bool:
        if len(rows) == N:
            return True
        for r in range(lo, 1 << N):
            rows.append(r)
            if not _bad(rows, N, p, q) and rec(r):
                return True
            rows.pop()
        return False

    return list(rows) if rec(0) else None


def bipartite_ramsey(p: int, q: int, limit: int = 4) -> Optional[int]:
    """Least N <= limit such that every N+N bipartite graph has K_{p,q} or O_{p,q}."""
    if p < 1 or q < 1:
        raise ArgumentError("p and q must be positive")
    for N in range(1, limit + 1):
        if ramsey_counterexample(p, q, N) is None:
            return N
    return None


# ---------------------------------------------------------------------------
# the log inequality
# ---------------------------------------------------------------------------

def _xlogx(x: int) -> float:
    return x * math.log2(x) if x > 1 else 0.0


EXACT_LIMIT = 1 << 20


def check_log_inequality(k: int, parts) -> bool:
    """Check ``k log k + sum n_i log n_i <= n log n`` for ``n = sum(parts)``.

    Uses the equivalent integer form ``k^k * prod n_i^n_i <= n^n`` when all
    values are at most 2**20, else floating point with a 1e-9 slack.
    """
    parts = list(parts)
    if len(parts) != k:
        raise ArgumentError("k must equal the number of parts")
    if any(not isinstance(x, int) or x < 1 for x in parts):
        raise ArgumentError("parts must be positive integers")
    n = sum(parts)
    if k < 1 or k >= n:
        raise ArgumentError(f"need 1 <= k < n, got k={k}, n={n}")
    lhs = _xlogx(k) + sum(_xlogx(x) for x in parts)
    approx = lhs <= _xlogx(n) + 1e-9
    if n <= EXACT_LIMIT:
        prod = k ** k
        for x in parts:
            prod *= x ** x
        return prod <= n ** n
    return approx


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """All compositions of ``n`` (ordered tuples of positive parts)."""
    for mask in range(1 << (n - 1)):
        out, last = [], 0
        for i in range(n - 1):
            if mask >> i & 1:
                out.append(i + 1 - last)
                last = i + 1
        out.append(n - last)
        yield tuple(out)
