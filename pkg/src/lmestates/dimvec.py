"""Dimension vectors and their integer invariants.

All arithmetic uses Python integers, so products of squared dimensions
never overflow and the sign of ``R`` is exact.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError

__all__ = [
    "DimVec",
    "count_rationals",
    "capital_r",
    "expected_dim",
    "g_max",
    "parse_dims",
]


@dataclass(frozen=True, order=True)
class DimVec:
    """Sorted tuple of subsystem dimensions ``d_1 <= ... <= d_n``.

    Parts equal to 1 are kept; every derived quantity ignores them.
    """

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        vals = tuple(int(d) for d in dims)
        if not vals:
            raise DomainError("a dimension vector needs at least one part")
        if any(d < 1 for d in vals):
            raise DomainError(f"dimensions must be positive integers, got {vals}")
        object.__setattr__(self, "dims", tuple(sorted(vals)))

    @classmethod
    def parse(cls, text: str) -> "DimVec":
        return cls(parse_dims(text))

    @property
    def n(self) -> int:
        return len(self.dims)

    def stripped(self) -> tuple[int, ...]:
        """Parts greater than 1, still sorted (may be empty)."""
        return tuple(d for d in self.dims if d > 1)

    @property
    def total(self) -> int:
        """Hilbert-space dimension, the product of all parts."""
        return math.prod(self.dims)

    @property
    def R(self) -> int:
        return capital_r(self)

    @property
    def delta(self) -> int:
        return expected_dim(self)

    @property
    def gmax(self) -> int:
        return g_max(self)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


def parse_dims(text: str) -> tuple[int, ...]:
    """Parse ``"2x3x6"`` or ``"2,3,6"`` into a tuple, preserving order."""
    parts = [p for p in re.split(r"[xX,\s]+", text.strip()) if p]
    if not parts:
        raise DomainError(f"cannot parse dimension vector from {text!r}")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise DomainError(f"cannot parse dimension vector from {text!r}") from None
    if any(v < 1 for v in vals):
        raise DomainError(f"dimensions must be positive integers, got {text!r}")
    return vals


def _as_dims(d: DimVec | Sequence[int]) -> tuple[int, ...]:
    return d.dims if isinstance(d, DimVec) else DimVec(d).dims


def count_rationals(k: Sequence[int]) -> int:
    """Inclusion-exclusion sum of gcds over all nonempty subsets of ``k``.

    Equals the number of rationals in (0, 1] whose reduced denominator
    divides some ``k_i``. Repeated values are collapsed first; the sum is
    the size of a union of sets, so duplicates contribute nothing.
    """
    vals = [int(x) for x in k]
    if not vals:
        raise DomainError("count_rationals needs at least one integer")
    if any(x < 1 for x in vals):
        raise DomainError(f"count_rationals needs positive integers, got {vals}")
    vals = sorted(set(vals))
    m = len(vals)
    total = 0

    # depth-first over subsets, carrying the running gcd and subset size parity
    def walk(start: int, g: int, size: int) -> None:
        nonlocal total
        for i in range(start, m):
            gi = math.gcd(g, vals[i])
            total += gi if size % 2 == 0 else -gi
            walk(i + 1, gi, size + 1)

    walk(0, 0, 0)
    return total


def capital_r(d: DimVec | Sequence[int]) -> int:
    """``prod(d) - N(d_1^2, ..., d_n^2)``; LME states exist iff this is >= 0."""
    dims = _as_dims(d)
    return math.prod(dims) - count_rationals([x * x for x in dims])


def expected_dim(d: DimVec | Sequence[int]) -> int:
    """Projective state-space dimension minus the SLOCC group dimension."""
    dims = _as_dims(d)
    return (math.prod(dims) - 1) - sum(x * x - 1 for x in dims)


def g_max(d: DimVec | Sequence[int]) -> int:
    """Largest gcd over all pairs of parts."""
    dims = _as_dims(d)
    if len(dims) < 2:
        raise DomainError("g_max needs at least two parts")
    return max(math.gcd(a, b) for i, a in enumerate(dims) for b in dims[i + 1:])
