"""Dense pure-state tensors and the checks built on reduced density matrices.

Index convention: coefficients are stored as an ndarray of shape ``dims``
(C order, last index fastest). The text state format uses 1-based indices.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dimvec import parse_dims
from .errors import DomainError

__all__ = [
    "StateTensor",
    "DensityMatrix",
    "reduced_density",
    "is_lme",
    "is_m_uniform",
    "moment_map_square",
    "single_site_rdms",
    "traceless_part",
    "lme_deviation",
    "m_uniform_deviation",
    "tensor_product",
    "read_state",
    "write_state",
    "format_state",
    "parse_state",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StateTensor:
    """Pure state on ``H_1 (x) ... (x) H_n`` with dims kept in user order."""

    dims: tuple[int, ...]
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"invalid dims {self.dims}")
        arr = np.array(self.coeffs, dtype=complex)
        if arr.size != math.prod(dims):
            raise DomainError(
                f"coefficient count {arr.size} does not match prod{dims} = {math.prod(dims)}"
            )
        arr = arr.reshape(dims)
        arr.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_vector(cls, dims: Sequence[int], vec) -> "StateTensor":
        return cls(tuple(dims), np.asarray(vec, dtype=complex))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.vector, self.vector).real)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm2)

    def normalized(self) -> "StateTensor":
        nrm = self.norm
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero state")
        return StateTensor(self.dims, self.coeffs / nrm)

    def scaled(self, c: complex) -> "StateTensor":
        return StateTensor(self.dims, self.coeffs * c)

    def __repr__(self) -> str:
        return f"StateTensor(dims={self.dims}, norm2={self.norm2:.6g})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int
    entries: np.ndarray = field(repr=False)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def _subsystem_index(s: StateTensor, subsystems: Iterable[int]) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(i) for i in subsystems)))
    if not keep:
        raise DomainError("subsystem set must be nonempty")
    if any(i < 0 or i >= s.n for i in keep):
        raise DomainError(f"subsystem indices {keep} out of range for {s.n} parties")
    if len(keep) == s.n:
        raise DomainError("subsystem set must be a proper subset")
    return keep


def _rdm(psi: np.ndarray, keep: tuple[int, ...]) -> np.ndarray:
    n = psi.ndim
    rest = [i for i in range(n) if i not in keep]
    mat = np.transpose(psi, list(keep) + rest).reshape(
        math.prod(psi.shape[i] for i in keep), -1
    )
    return mat @ mat.conj().T


def reduced_density(s: StateTensor, subsystem_set: Iterable[int]) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` over the complement of ``subsystem_set``.

    Subsystems are 0-based. The result is not renormalized: its trace is the
    squared norm of ``s``.
    """
    keep = _subsystem_index(s, subsystem_set)
    rho = _rdm(s.coeffs, keep)
    return DensityMatrix(rho.shape[0], rho)


def _max_mixed_deviation(rho: np.ndarray) -> float:
    d = rho.shape[0]
    return float(np.max(np.abs(rho - np.eye(d) / d)))


def _check_nonzero(s: StateTensor) -> StateTensor:
    if s.norm2 == 0.0:
        raise DomainError("the zero state cannot be verified")
    return s.normalized()


def lme_deviation(s: StateTensor) -> float:
    """Worst max-entry deviation of a single-party marginal from ``1/d``."""
    u = _check_nonzero(s)
    if u.n == 1:
        return _max_mixed_deviation(np.outer(u.vector, u.vector.conj()))
    return max(_max_mixed_deviation(_rdm(u.coeffs, (i,))) for i in range(u.n))


def is_lme(s: StateTensor, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether every single-party marginal of the normalized state is ``1/d_i``."""
    dev = lme_deviation(s)
    return dev <= tol, dev


def m_uniform_deviation(s: StateTensor, m: int) -> float:
    u = _check_nonzero(s)
    if not 1 <= m < u.n:
        raise DomainError(f"m must satisfy 1 <= m < n = {u.n}, got {m}")
    worst = 0.0
    for size in range(1, m + 1):
        for keep in itertools.combinations(range(u.n), size):
            worst = max(worst, _max_mixed_deviation(_rdm(u.coeffs, keep)))
    return worst


def is_m_uniform(s: StateTensor, m: int, tol: float = DEFAULT_TOL) -> bool:
    """All marginals on at most ``m`` parties are maximally mixed within ``tol``."""
    return m_uniform_deviation(s, m) <= tol


def single_site_rdms(s: StateTensor) -> list[np.ndarray]:
    """Unnormalized one-party reduced density matrices, in party order."""
    if s.n == 1:
        return [np.outer(s.vector, s.vector.conj())]
    return [_rdm(s.coeffs, (i,)) for i in range(s.n)]


def traceless_part(rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return rho - (np.trace(rho).real / d) * np.eye(d)


def moment_map_square(s: StateTensor) -> float:
    """``1/2 * sum_i (tr rho_i^2 - tr(rho_i)^2 / d_i)`` on the unnormalized state.

    Evaluated as ``1/2 * sum_i ||rho_i - tr(rho_i)/d_i||_F^2``, which avoids
    cancellation near LME states.
    """
    return 0.5 * sum(float(np.sum(np.abs(traceless_part(r)) ** 2)) for r in single_site_rdms(s))


def tensor_product(
    s1: StateTensor, s2: StateTensor, regroup: Sequence[Sequence[int]] | None = None
) -> StateTensor:
    """Tensor product with factors regrouped into merged subsystems.

    Factors are numbered ``0..n1-1`` for ``s1`` then ``n1..n1+n2-1`` for
    ``s2``. ``regroup`` lists output slots; each slot is a list of factor
    numbers whose dimensions multiply, the first listed being the most
    significant digit of the merged index. Every factor must appear exactly
    once. ``None`` keeps all factors as separate slots.
    """
    full = np.multiply.outer(s1.coeffs, s2.coeffs)
    dims = s1.dims + s2.dims
    if regroup is None:
        return StateTensor(dims, full)
    order = [int(f) for slot in regroup for f in slot]
    if sorted(order) != list(range(len(dims))) or any(len(slot) == 0 for slot in regroup):
        raise DomainError(
            f"regroup {regroup} must use each factor 0..{len(dims) - 1} exactly once"
        )
    out_dims = tuple(math.prod(dims[f] for f in slot) for slot in regroup)
    return StateTensor(out_dims, np.transpose(full, order).reshape(out_dims))


# ---------------------------------------------------------------------------
# text state format


def format_state(s: StateTensor, drop_below: float = 0.0) -> str:
    """Header ``dims: AxBxC`` then ``i1 ... in re im`` lines (1-based).

    ``repr`` of a float is the shortest string that round-trips, so the
    format is lossless for double precision.
    """
    lines = ["dims: " + "x".join(str(d) for d in s.dims)]
    for idx in zip(*np.nonzero(np.abs(s.coeffs) > drop_below)):
        z = s.coeffs[idx]
        lines.append(
            " ".join(str(i + 1) for i in idx) + f" {float(z.real)!r} {float(z.imag)!r}"
        )
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> StateTensor:
    dims = None
    coeffs = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dims is None:
            if not line.lower().startswith("dims:"):
                raise DomainError(f"line {lineno}: expected 'dims:' header")
            dims = parse_dims(line.split(":", 1)[1])
            coeffs = np.zeros(dims, dtype=complex)
            continue
        parts = line.split()
        if len(parts) != len(dims) + 2:
            raise DomainError(
                f"line {lineno}: expected {len(dims)} indices and re im, got {len(parts)} fields"
            )
        try:
            idx = tuple(int(p) - 1 for p in parts[: len(dims)])
            re_, im_ = float(parts[-2]), float(parts[-1])
        except ValueError:
            raise DomainError(f"line {lineno}: malformed entry {raw!r}") from None
        if any(not 0 <= i < d for i, d in zip(idx, dims)):
            raise DomainError(f"line {lineno}: index out of range for dims {dims}")
        coeffs[idx] = complex(re_, im_)
    if dims is None:
        raise DomainError("empty state file")
    return StateTensor(dims, coeffs)


def write_state(s: StateTensor, path: str | Path) -> None:
    Path(path).write_text(format_state(s))


def read_state(path: str | Path) -> StateTensor:
    return parse_state(Path(path).read_text())
