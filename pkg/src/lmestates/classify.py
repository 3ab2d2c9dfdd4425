"""Existence and dimension of the space of LME states modulo local unitaries.

Two independent routes are provided: the four-case recursion
(:func:`classify`) and the closed-form trichotomy in terms of the expected
dimension and ``g_max`` (:func:`dim_by_trichotomy`). Dimensions are complex
dimensions throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .dimvec import DimVec, capital_r, expected_dim, g_max
from .errors import DomainError

__all__ = [
    "ClassifyResult",
    "classify",
    "dim_by_trichotomy",
    "d_star",
    "generic_stabilizer_dim_is_zero",
    "CASE_EMPTY",
    "CASE_POINT",
    "CASE_GENERIC",
    "CASE_REDUCE",
]

CASE_EMPTY = "Case1"
CASE_POINT = "Case2"
CASE_GENERIC = "Case3"
CASE_REDUCE = "Case4-step"


@dataclass(frozen=True)
class ClassifyResult:
    dims: DimVec
    exists: bool
    dim: int | None
    terminal_dims: DimVec
    case_trace: tuple[str, ...]
    r_value: int
    delta_value: int
    sums: tuple[int, ...] = field(default=(), repr=False)

    @property
    def dim_real(self) -> int | None:
        return None if self.dim is None else 2 * self.dim

    def to_dict(self) -> dict:
        d = self.dims
        return {
            "dims": str(d),
            "R": self.r_value,
            "Delta": self.delta_value,
            "g_max": g_max(d) if d.n >= 2 else None,
            "exists": self.exists,
            "dim_complex": self.dim,
            "dim_real": self.dim_real,
            "terminal_dims": str(self.terminal_dims),
            "case_trace": list(self.case_trace),
        }


def _case3_dim(dims: tuple[int, ...]) -> int:
    if len(dims) == 3 and dims[0] == 2 and dims[1] == dims[2]:
        return max(dims[1] - 3, 0)
    return expected_dim(dims)


@lru_cache(maxsize=1 << 16)
def _recurse(dims: tuple[int, ...]) -> tuple[str, int | None, tuple[int, ...], tuple[str, ...], tuple[int, ...]]:
    # dims: sorted, all parts > 1
    trace: list[str] = []
    sums = [sum(dims)]
    cur = dims
    while True:
        if not cur:
            trace.append(CASE_POINT)
            return CASE_POINT, 0, cur, tuple(trace), tuple(sums)
        prefix = math.prod(cur[:-1])
        last = cur[-1]
        if last > prefix:
            trace.append(CASE_EMPTY)
            return CASE_EMPTY, None, cur, tuple(trace), tuple(sums)
        if last == prefix:
            trace.append(CASE_POINT)
            return CASE_POINT, 0, cur, tuple(trace), tuple(sums)
        if 2 * last <= prefix:
            trace.append(CASE_GENERIC)
            return CASE_GENERIC, _case3_dim(cur), cur, tuple(trace), tuple(sums)
        trace.append(CASE_REDUCE)
        cur = tuple(sorted(x for x in cur[:-1] + (prefix - last,) if x > 1))
        sums.append(sum(cur))


def classify(d: DimVec | Sequence[int]) -> ClassifyResult:
    """Run the four-case recursion on ``d`` (parts equal to 1 are stripped).

    Each reduction step replaces the largest part ``d_n`` by
    ``d_1...d_{n-1} - d_n``, which strictly lowers the sum of parts, so the
    loop terminates. ``terminal_dims`` is padded with 1s back to the input
    length for display.
    """
    dv = d if isinstance(d, DimVec) else DimVec(d)
    case, dim, terminal, trace, sums = _recurse(dv.stripped())
    pad = max(dv.n - len(terminal), 0)
    return ClassifyResult(
        dims=dv,
        exists=case != CASE_EMPTY,
        dim=dim,
        terminal_dims=DimVec((1,) * pad + terminal),
        case_trace=trace,
        r_value=capital_r(dv),
        delta_value=expected_dim(dv),
        sums=sums,
    )


def dim_by_trichotomy(d: DimVec | Sequence[int]) -> tuple[bool, int | None]:
    """Closed-form existence and dimension from ``Delta``, ``g_max`` and ``R``.

    The ``Delta == -2`` branch needs at least three nontrivial parts; a lone
    qubit has ``Delta == -2`` but no LME state, so fewer parts fall through to
    the sign of ``R``.
    """
    dv = d if isinstance(d, DimVec) else DimVec(d)
    core = dv.stripped()
    delta = expected_dim(dv)
    if delta > -2:
        return True, delta
    if delta == -2 and len(core) >= 3:
        return True, max(g_max(core) - 3, 0)
    r = capital_r(dv)
    if r == 0:
        return True, 0
    if r < 0:
        return False, None
    # R > 0 with Delta <= -2 contradicts the existence criterion; surface it loudly
    raise AssertionError(f"R > 0 with Delta = {delta} for {dv}")


def d_star(prefix: DimVec | Sequence[int]) -> float:
    """Value of the last dimension at which ``Delta`` falls to -2."""
    dims = prefix.dims if isinstance(prefix, DimVec) else tuple(prefix)
    if len(dims) < 2:
        raise DomainError("d_star needs a prefix of at least two parts")
    p = math.prod(dims)
    q = sum(x * x - 1 for x in dims)
    disc = p * p - 4 * q + 8
    assert disc >= 0, f"negative discriminant for prefix {dims}"
    return p / 2 + math.sqrt(disc) / 2


def generic_stabilizer_dim_is_zero(d: DimVec | Sequence[int]) -> bool:
    """Trivial generic SLOCC stabilizer criterion: ``Delta > 3``."""
    return expected_dim(d if isinstance(d, DimVec) else DimVec(d)) > 3
