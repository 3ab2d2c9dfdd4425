"""Sporadic nonempty triples ``(A, B, C)`` below the expected-dimension line.

For three parts, every nonempty triple with ``Delta <= -2`` is a pair of
consecutive terms ``(f_i, f_{i+1})`` of ``f_{i+1} = A f_i - f_{i-1}``,
seeded either by ``(k, kA)`` or by a pair from a finite seed set ``S_A``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classify import classify
from .dimvec import expected_dim
from .errors import DomainError

__all__ = [
    "SporadicSeed",
    "compute_seed_set",
    "sequence",
    "generating_function_terms",
    "enumerate_sporadic",
    "scan_grid",
    "GridRow",
    "grid_status",
]


@dataclass(frozen=True)
class SporadicSeed:
    a: int
    f0: int
    f1: int

    def __post_init__(self):
        if self.a < 2:
            raise DomainError("the fixed dimension A must be at least 2")
        if self.f0 < 1 or self.f1 < 1:
            raise DomainError("seed terms must be positive")


def _in_seed_region(a: int, b: int, c: int) -> bool:
    return (
        2 * b <= a * c
        and 2 * c <= a * b
        and b * c >= a
        and a * b * c - a * a - b * b - c * c + 4 <= 0
    )


def compute_seed_set(a: int, max_dim: int | None = None) -> set[tuple[int, int]]:
    """Seed pairs ``(b, c)`` in the region where a reduction step stalls.

    For ``a >= 3`` the region is finite: with ``b <= c`` the inequalities force
    ``b**2 * (a/2 - 1) <= a**2 - 4``, i.e. ``b**2 <= 2(a + 2)``, and
    ``c <= a*b/2``. For ``a == 2`` the set is every ``(b, b)`` with ``b >= 2``,
    so ``max_dim`` is required to truncate it.

    Membership of the quotient-nonempty clause is decided by the recursion,
    not by the sign of ``R``.
    """
    if a < 2:
        raise DomainError("compute_seed_set needs a >= 2")
    if a == 2:
        if max_dim is None:
            raise DomainError("the seed set for a = 2 is infinite; pass max_dim")
        b_hi = max_dim
    else:
        b_hi = math.isqrt(2 * (a + 2)) + 1
    seeds = set()
    for b in range(1, b_hi + 1):
        c_hi = (a * b) // 2
        if max_dim is not None:
            c_hi = min(c_hi, max_dim)
        for c in range(b, c_hi + 1):
            if not _in_seed_region(a, b, c):
                continue
            if not classify((a, b, c)).exists:
                continue
            seeds.add((b, c))
            seeds.add((c, b))
    return seeds


def sequence(seed: SporadicSeed, count: int) -> list[int]:
    """First ``count`` terms of ``f_{i+1} = A f_i - f_{i-1}``."""
    if count < 2:
        raise DomainError("count must be at least 2")
    terms = [seed.f0, seed.f1]
    while len(terms) < count:
        terms.append(seed.a * terms[-1] - terms[-2])
    return terms


def generating_function_terms(seed: SporadicSeed, count: int) -> list[int]:
    """Series coefficients of ``(f0 + (f1 - A f0) x) / (1 - A x + x**2)``.

    Computed by long division of power series, independent of
    :func:`sequence`.
    """
    num = [seed.f0, seed.f1 - seed.a * seed.f0]
    den = [1, -seed.a, 1]
    out: list[int] = []
    for i in range(count):
        acc = Fraction(num[i] if i < len(num) else 0)
        for j in range(1, min(i, 2) + 1):
            acc -= den[j] * out[i - j]
        out.append(int(acc / den[0]))
    return out


def _pairs(a: int, f0: int, f1: int, max_dim: int):
    # consecutive pairs, stopping once both terms have passed max_dim
    x, y = f0, f1
    for _ in range(4 * max_dim + 8):
        if x > max_dim and y > max_dim:
            return
        if x <= 0 or y <= 0:
            return
        yield x, y
        x, y = y, a * y - x


def enumerate_sporadic(a: int, max_dim: int) -> list[tuple[int, int, int]]:
    """Nonempty triples with smallest part ``a``, ``Delta <= -2``, largest part <= ``max_dim``.

    Seeds are ``(k, k*a)`` for ``k = 1..max_dim`` plus ``compute_seed_set(a)``.
    Triples are deduplicated after sorting; seeds themselves may overlap.
    """
    if a < 2 or max_dim < a:
        raise DomainError("enumerate_sporadic needs a >= 2 and max_dim >= a")
    seeds = [(k, k * a) for k in range(1, max_dim + 1)]
    seeds += sorted(compute_seed_set(a, max_dim if a == 2 else None))
    found = set()
    for f0, f1 in seeds:
        for x, y in _pairs(a, f0, f1, max_dim):
            t = tuple(sorted((a, x, y)))
            if t[0] != a or t[2] > max_dim:
                continue
            if expected_dim(t) > -2:
                continue
            if classify(t).exists:
                found.add(t)
    return sorted(found)


@dataclass(frozen=True)
class GridRow:
    A: int
    B: int
    C: int
    status: str
    dim_complex: int | None
    R: int
    Delta: int

    def as_dict(self) -> dict:
        return {
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "x": self.B - self.A,
            "y": self.C - self.B,
            "status": self.status,
            "dim_complex": self.dim_complex,
            "R": self.R,
            "Delta": self.Delta,
        }


def grid_status(a: int, b: int, c: int) -> GridRow:
    res = classify((a, b, c))
    delta = res.delta_value
    if not res.exists:
        status = "empty"
    elif delta > -2:
        status = "expected-dim"
    elif delta == -2:
        status = "gmax-case"
    else:
        status = "point"
    return GridRow(a, b, c, status, res.dim, res.r_value, delta)


def scan_grid(a: int, b_max: int, jobs: int = 1) -> list[GridRow]:
    """Classify every ``(a, B, C)`` with ``a <= B <= b_max`` and ``B <= C <= a*B``.

    Rows come back ordered by ``(B, C)`` whatever ``jobs`` is.
    """
    if a < 2:
        raise DomainError("scan needs a >= 2")
    if b_max < a:
        return []
    cells = [(a, b, c) for b in range(a, b_max + 1) for c in range(b, a * b + 1)]
    if jobs <= 1:
        return [grid_status(*cell) for cell in cells]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(grid_status, *zip(*cells), chunksize=256))

