"""Generic SLOCC stabilizer dimension from the rank of the Lie-algebra action.

At a state ``psi`` the infinitesimal action of ``sl(d_1) + ... + sl(d_n)``
is a linear map into ``H``; its rank at a generic point is the dimension of
a generic orbit. The stabilizer dimension is ``dim G - rank`` and the
quotient dimension is ``dim P(H) - rank``.

Ranks are computed exactly over ``Z_p`` with ``p = 2**31 + 11``. Elimination
is blocked by column panels. Residues are held in float64 and every
product runs through BLAS with 16-bit limbs, so each partial sum stays
below ``2**53`` and is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .classify import generic_stabilizer_dim_is_zero
from .dimvec import DimVec, expected_dim
from .errors import DomainError, ResourceError
from .tensor import StateTensor

__all__ = [
    "PRIME",
    "DEFAULT_CAP",
    "action_matrix",
    "rank_mod_p",
    "matmul_mod_p",
    "generic_rank",
    "StabilizerReport",
    "stabilizer_report",
]

PRIME = 2147483659  # 2**31 + 11
DEFAULT_CAP = 4096
_PANEL = 64
_LIMB = 1 << 16


def _basis_images(psi: np.ndarray, axis: int, neg) -> list[np.ndarray]:
    """Images of the traceless basis of ``gl(d)`` acting on ``axis``."""
    d = psi.shape[axis]
    moved = np.moveaxis(psi, axis, 0)
    out = []
    for j in range(d):
        for k in range(d):
            if j == k:
                continue
            img = np.zeros_like(moved)
            img[j] = moved[k]
            out.append(img)
    for j in range(d - 1):
        img = np.zeros_like(moved)
        img[j] = moved[j]
        img[j + 1] = neg(moved[j + 1])
        out.append(img)
    return [np.moveaxis(img, 0, axis).reshape(-1) for img in out]


def _action_columns(psi: np.ndarray, neg) -> np.ndarray:
    cols = []
    for axis in range(psi.ndim):
        cols.extend(_basis_images(psi, axis, neg))
    if not cols:
        return np.zeros((psi.size, 0), dtype=psi.dtype)
    return np.stack(cols, axis=1)


def action_matrix(s: StateTensor) -> np.ndarray:
    """Matrix of shape ``(prod d, sum(d**2 - 1))``; column ``c`` is ``X_c . psi``.

    Columns are ordered by subsystem, then ``E_jk`` (j != k, row-major),
    then the diagonal differences ``E_jj - E_{j+1,j+1}``.
    """
    if s.norm2 == 0.0:
        raise DomainError("the zero state has no orbit")
    return _action_columns(np.asarray(s.coeffs), np.negative)


def _action_matrix_mod_p(dims: tuple[int, ...], psi: np.ndarray) -> np.ndarray:
    return _action_columns(psi.reshape(dims), lambda x: (PRIME - x) % PRIME)


# ---------------------------------------------------------------------------
# arithmetic mod p
#
# Residues are held in float64 as centered representatives, |r| <= (p+1)/2.
# One multiply by 1/p, a rint and a fused subtraction reduce any integer
# below 2**53. A product X @ Y is formed as [X, X*2**16 mod p] @ [Y0; Y1]
# with Y = Y0 + 2**16 Y1 and |Y0|, |Y1| <= 2**15, so every partial sum stays
# below 2**53 and BLAS returns it exactly.

_INV_P = 1.0 / PRIME
_HALF = (PRIME + 1) // 2
assert _HALF * (_LIMB // 2) * (2 * _PANEL) + _HALF < 2**53


def _reduce(x: np.ndarray) -> np.ndarray:
    """Centered residue of integer-valued float64 entries with ``|x| < 2**53``, in place."""
    q = np.multiply(x, _INV_P)
    np.rint(q, out=q)
    q *= PRIME
    x -= q
    return x


def _split(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hi = np.rint(y * (1.0 / _LIMB))
    return y - hi * _LIMB, hi


def _matmul_into(acc: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``acc - x @ y`` reduced mod p; ``x`` has at most ``_PANEL`` columns."""
    y0, y1 = _split(y)
    lhs = np.concatenate([x, _reduce(x * float(_LIMB))], axis=1)
    acc = acc - lhs @ np.concatenate([y0, y1], axis=0)
    return _reduce(acc)


def _to_residues(mat) -> np.ndarray:
    a = np.asarray(mat)
    if np.issubdtype(a.dtype, np.integer):
        a = a % PRIME
        a = np.where(a >= _HALF, a - PRIME, a)
    return np.array(a, dtype=np.float64)


def _canonical(r: np.ndarray) -> np.ndarray:
    return r.astype(np.int64) % PRIME


def matmul_mod_p(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b mod p`` for integer matrices, entries returned in ``[0, p)``."""
    af, bf = _to_residues(a), _to_residues(b)
    out = np.zeros((af.shape[0], bf.shape[1]))
    for lo in range(0, af.shape[1], _PANEL):
        out = _matmul_into(out, -af[:, lo:lo + _PANEL], bf[lo:lo + _PANEL])
    return _canonical(out)


@njit(cache=True)
def _powmod(a, e):
    out = 1
    a %= PRIME
    while e:
        if e & 1:
            out = out * a % PRIME
        a = a * a % PRIME
        e >>= 1
    return out


@njit(cache=True)
def _panel_pivots(work):
    """Pivot rows and columns of an int64 panel in ``[0, p)``; ``work`` is overwritten.

    Products of two residues are below ``2**62`` and fit in int64.
    """
    m, w = work.shape
    used = np.zeros(m, np.bool_)
    prow = np.empty(w, np.int64)
    pcol = np.empty(w, np.int64)
    k = 0
    for c in range(w):
        r = -1
        for i in range(m):
            if not used[i] and work[i, c] != 0:
                r = i
                break
        if r < 0:
            continue
        used[r] = True
        prow[k] = r
        pcol[k] = c
        k += 1
        inv = _powmod(work[r, c], PRIME - 2)
        for j in range(c + 1, w):
            work[r, j] = work[r, j] * inv % PRIME
        # rows above r are either used or zero in column c
        for i in range(r + 1, m):
            f = work[i, c]
            if used[i] or f == 0:
                continue
            for j in range(c + 1, w):
                work[i, j] = (work[i, j] - f * work[r, j]) % PRIME
    return prow[:k], pcol[:k]


@njit(cache=True)
def _inv_mod_p(a):
    """Inverse of a small invertible int64 residue matrix by Gauss-Jordan."""
    k = a.shape[0]
    aug = np.zeros((k, 2 * k), np.int64)
    aug[:, :k] = a
    for i in range(k):
        aug[i, k + i] = 1
    for c in range(k):
        r = c
        while aug[r, c] == 0:
            r += 1
        if r != c:
            for j in range(2 * k):
                aug[c, j], aug[r, j] = aug[r, j], aug[c, j]
        inv = _powmod(aug[c, c], PRIME - 2)
        for j in range(2 * k):
            aug[c, j] = aug[c, j] * inv % PRIME
        for i in range(k):
            f = aug[i, c]
            if i == c or f == 0:
                continue
            for j in range(2 * k):
                aug[i, j] = (aug[i, j] - f * aug[c, j]) % PRIME
    return aug[:, k:].copy()


def rank_mod_p(mat: np.ndarray) -> int:
    """Exact rank over ``Z_p`` of an integer matrix."""
    a = _to_residues(mat)
    if a.shape[0] < a.shape[1]:
        a = a.T
    a = np.ascontiguousarray(a)
    rank = 0
    while a.shape[0] and a.shape[1]:
        w = min(_PANEL, a.shape[1])
        panel = a[:, :w]
        prow, pcol = _panel_pivots(_canonical(panel))
        k = len(prow)
        rank += k
        rest = a[:, w:]
        if k == 0:
            a = rest
            continue
        keep = np.ones(a.shape[0], dtype=bool)
        keep[prow] = False
        if not keep.any() or rest.shape[1] == 0:
            break
        lower = panel[keep][:, pcol]
        inv = _to_residues(_inv_mod_p(_canonical(panel[prow][:, pcol])))
        x = -_matmul_into(np.zeros_like(lower), lower, inv)
        a = _matmul_into(rest[keep], x, rest[prow])
    return rank


# ---------------------------------------------------------------------------


def _random_state_mod_p(dims, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, PRIME, size=math.prod(dims), dtype=np.int64)


def _random_state_complex(dims, rng: np.random.Generator) -> np.ndarray:
    n = math.prod(dims)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _svd_rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > 1e-10 * sv[0]))


def _trial_rank(dims: tuple[int, ...], seed: int, trial: int, method: str) -> int:
    # each trial owns its stream, so results do not depend on scheduling
    rng = np.random.default_rng([seed % 2**64, trial])
    if method == "ff":
        return rank_mod_p(_action_matrix_mod_p(dims, _random_state_mod_p(dims, rng)))
    psi = _random_state_complex(dims, rng).reshape(dims)
    return _svd_rank(_action_columns(psi, np.negative))


def _trial_ranks(dims: tuple[int, ...], trials: int, seed: int, method: str, jobs: int = 1) -> list[int]:
    """Ranks of trials ``0, 1, ...`` up to the first one reaching ``min(rows, cols)``."""
    if method not in ("ff", "svd"):
        raise DomainError(f"unknown rank method {method!r}; use 'ff' or 'svd'")
    ceiling = min(math.prod(dims), sum(d * d - 1 for d in dims))
    if jobs > 1 and trials > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_ranks = list(pool.map(_trial_rank, [dims] * trials, [seed] * trials, range(trials), [method] * trials))
    else:
        all_ranks = None
    ranks: list[int] = []
    for i in range(trials):
        r = all_ranks[i] if all_ranks is not None else _trial_rank(dims, seed, i, method)
        ranks.append(r)
        if r == ceiling:
            break
    return ranks


def generic_rank(
    d: DimVec | Sequence[int], trials: int = 5, seed: int = 0, method: str = "ff", jobs: int = 1
) -> int:
    """Largest action-matrix rank over ``trials`` random states.

    The finite-field method draws coefficients uniformly from ``Z_p`` and
    computes the exact rank; by Schwartz-Zippel a single trial misses the
    generic rank with probability at most ``prod(d) / p``. Trials stop early
    once the rank reaches ``min(rows, cols)``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    dims = tuple(d.dims if isinstance(d, DimVec) else DimVec(d).dims)
    return max(_trial_ranks(dims, trials, seed, method, jobs))


@dataclass(frozen=True)
class StabilizerReport:
    dims: DimVec
    rank: int
    dim_g: int
    dim_ph: int
    dim_s: int
    quotient_dim: int
    trials: int
    method: str

    @property
    def delta(self) -> int:
        return self.dim_ph - self.dim_g

    def to_dict(self) -> dict:
        return {
            "dims": str(self.dims),
            "rank": self.rank,
            "dim_g": self.dim_g,
            "dim_ph": self.dim_ph,
            "dim_s": self.dim_s,
            "quotient_dim": self.quotient_dim,
            "Delta": self.delta,
            "trivial_stabilizer_predicted": generic_stabilizer_dim_is_zero(self.dims),
            "trials": self.trials,
            "method": "FiniteField" if self.method == "ff" else "NumericSVD",
        }


def stabilizer_report(
    d: DimVec | Sequence[int],
    trials: int = 5,
    seed: int = 0,
    method: str = "ff",
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
) -> StabilizerReport:
    """Rank, stabilizer dimension and quotient dimension for ``d``.

    ``quotient_dim`` may be negative: a generic orbit is then open in ``H``
    and contains arbitrarily small vectors, so no LME state exists.
    """
    dv = d if isinstance(d, DimVec) else DimVec(d)
    if dv.total > cap:
        raise ResourceError(f"prod(d) = {dv.total} exceeds the cap {cap}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    ranks = _trial_ranks(dv.dims, trials, seed, method, jobs)
    rank = max(ranks)
    dim_g = sum(x * x - 1 for x in dv.dims)
    dim_ph = dv.total - 1
    assert dim_ph - dim_g == expected_dim(dv)
    return StabilizerReport(
        dims=dv,
        rank=rank,
        dim_g=dim_g,
        dim_ph=dim_ph,
        dim_s=dim_g - rank,
        quotient_dim=dim_ph - rank,
        trials=len(ranks),
        method=method,
    )
