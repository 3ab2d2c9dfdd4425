"""Explicit LME constructions.

Bell and GHZ states, the qubit-unit-vector family on ``(2, B, B)``, the
unique state on ``(2, N, N+1)`` and its Bell-dressed ``(2, NK, (N+1)K)``
version, Sudoku grid states, SU(2) 3j-symbol states and Pauli-stabilizer
states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError
from .tensor import StateTensor, tensor_product

__all__ = [
    "bell",
    "ghz",
    "UnitVectorConfig",
    "polygon_vectors",
    "from_unit_vectors",
    "state_2_n_np1",
    "state_2_nk",
    "SudokuGrid",
    "cyclic_latin_square",
    "sudoku_state",
    "wigner_3j",
    "wigner3j_state",
    "PauliStabilizerSet",
    "pauli_stabilizer_state",
    "SIX_QUBIT_GENERATORS",
    "product_state",
]


def bell(d: int) -> StateTensor:
    if d < 1:
        raise DomainError("bell needs d >= 1")
    return StateTensor((d, d), np.eye(d, dtype=complex) / math.sqrt(d))


def ghz(d: int, parties: int) -> StateTensor:
    """``(1/sqrt d) sum_i |i>^{(x) parties}``."""
    if d < 2 or parties < 2:
        raise DomainError("ghz needs d >= 2 and parties >= 2")
    psi = np.zeros((d,) * parties, dtype=complex)
    for i in range(d):
        psi[(i,) * parties] = 1 / math.sqrt(d)
    return StateTensor((d,) * parties, psi)


def product_state(dims: Sequence[int], index: Sequence[int] | None = None) -> StateTensor:
    """Computational basis state ``|i_1 ... i_n>`` (0-based), default all zeros."""
    dims = tuple(dims)
    psi = np.zeros(dims, dtype=complex)
    psi[tuple(index) if index is not None else (0,) * len(dims)] = 1.0
    return StateTensor(dims, psi)


# ---------------------------------------------------------------------------
# (2, B, B) from unit vectors


@dataclass(frozen=True)
class UnitVectorConfig:
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise DomainError("unit vectors must be an array of shape (B, 3)")
        if v.shape[0] < 2:
            raise DomainError("need at least two unit vectors")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-12:
            raise DomainError("every vector must have unit length")
        if np.max(np.abs(v.sum(axis=0))) > 1e-10:
            raise DomainError("unit vectors must sum to zero")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def b(self) -> int:
        return self.vectors.shape[0]

    def rotated(self, rot: np.ndarray) -> "UnitVectorConfig":
        return UnitVectorConfig(self.vectors @ np.asarray(rot).T)


def polygon_vectors(b: int) -> UnitVectorConfig:
    """``b`` unit vectors at angles ``2 pi j / b`` in the x-y plane."""
    if b < 2:
        raise DomainError("polygon_vectors needs b >= 2")
    ang = 2 * np.pi * np.arange(b) / b
    v = np.stack([np.cos(ang), np.sin(ang), np.zeros(b)], axis=1)
    if b == 2:
        v = np.array([[1.0, 0, 0], [-1.0, 0, 0]])
    elif b == 4:
        v = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0], [0, -1.0, 0]])
    return UnitVectorConfig(v)


def spin_up(n: Sequence[float]) -> np.ndarray:
    """Qubit state with ``(n . sigma)|n> = |n>``, first component real."""
    x, y, z = n
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def from_unit_vectors(cfg: UnitVectorConfig) -> StateTensor:
    """``(1/sqrt B) sum_i |n_i> (x) |i> (x) |i>`` on ``(2, B, B)``."""
    b = cfg.b
    psi = np.zeros((2, b, b), dtype=complex)
    for i, v in enumerate(cfg.vectors):
        psi[:, i, i] = spin_up(v) / math.sqrt(b)
    return StateTensor((2, b, b), psi)


# ---------------------------------------------------------------------------
# (2, N, N+1) and (2, NK, (N+1)K)


def state_2_n_np1(n: int) -> StateTensor:
    """The LME state on ``(2, N, N+1)``, unique up to local unitaries.

    Amplitudes ``sqrt((N+1-b)/N)`` on ``|0, b, b>`` and ``sqrt(b/N)`` on
    ``|1, b, b+1>`` for ``b = 1..N`` (1-based), overall ``1/sqrt(N+1)``.
    """
    if n < 1:
        raise DomainError("state_2_n_np1 needs n >= 1")
    psi = np.zeros((2, n, n + 1), dtype=complex)
    for b in range(1, n + 1):
        psi[0, b - 1, b - 1] = math.sqrt((n + 1 - b) / n)
        psi[1, b - 1, b] = math.sqrt(b / n)
    return StateTensor((2, n, n + 1), psi / math.sqrt(n + 1))


def state_2_nk(n: int, k: int) -> StateTensor:
    """``Psi(2, N, N+1) (x) Bell(K)`` regrouped onto ``(2, NK, (N+1)K)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return tensor_product(state_2_n_np1(n), bell(k), [[0], [1, 3], [2, 4]])


# ---------------------------------------------------------------------------
# Sudoku grids


@dataclass(frozen=True)
class SudokuGrid:
    """``B x C`` grid of symbols ``1..A`` (0 = empty), each used ``k`` times."""

    entries: np.ndarray = field(repr=False)
    a: int
    k: int

    def __post_init__(self):
        g = np.asarray(self.entries)
        if g.ndim != 2 or g.size == 0:
            raise DomainError("grid must be a nonempty 2-d array")
        if not np.issubdtype(g.dtype, np.integer):
            if not np.all(g == np.round(g)):
                raise DomainError("grid entries must be integers")
            g = g.astype(int)
        a, k = int(self.a), int(self.k)
        rows, cols = g.shape
        if a < 1 or k < 1:
            raise DomainError("symbol count and multiplicity must be positive")
        if (k * a) % rows or (k * a) % cols:
            raise DomainError(
                f"occupancy k*A/B = {k * a}/{rows} and k*A/C = {k * a}/{cols} must both be integers"
            )
        if g.min() < 0 or g.max() > a:
            raise DomainError(f"grid entries must lie in 0..{a}")
        for sym in range(1, a + 1):
            mask = g == sym
            if mask.sum() != k:
                raise DomainError(f"symbol {sym} appears {int(mask.sum())} times, expected {k}")
            if mask.sum(axis=1).max() > 1:
                raise DomainError(f"symbol {sym} repeats within a row")
            if mask.sum(axis=0).max() > 1:
                raise DomainError(f"symbol {sym} repeats within a column")
        occ = g > 0
        if np.any(occ.sum(axis=1) != k * a // rows):
            raise DomainError(f"every row must hold exactly {k * a // rows} symbols")
        if np.any(occ.sum(axis=0) != k * a // cols):
            raise DomainError(f"every column must hold exactly {k * a // cols} symbols")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_entries(cls, entries) -> "SudokuGrid":
        """Infer ``A`` as the largest symbol and ``k`` as the count of symbol 1."""
        g = np.asarray(entries)
        a = int(g.max())
        return cls(g, a, int((g == 1).sum()))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def cyclic_latin_square(a: int) -> SudokuGrid:
    g = (np.add.outer(np.arange(a), np.arange(a)) % a) + 1
    return SudokuGrid(g, a, a)


def sudoku_state(g: SudokuGrid) -> StateTensor:
    rows, cols = g.shape
    psi = np.zeros((g.a, rows, cols), dtype=complex)
    b_idx, c_idx = np.nonzero(g.entries)
    psi[g.entries[b_idx, c_idx] - 1, b_idx, c_idx] = 1 / math.sqrt(g.k * g.a)
    return StateTensor((g.a, rows, cols), psi)


# ---------------------------------------------------------------------------
# Wigner 3j symbols


def _half(x) -> Fraction:
    f = Fraction(x).limit_denominator(2) if isinstance(x, float) else Fraction(x)
    if (2 * f).denominator != 1 or (isinstance(x, float) and 2 * x != float(2 * f)):
        raise DomainError(f"{x!r} is not an integer or half-integer")
    return f


def _fact(x: Fraction) -> int:
    return math.factorial(int(x))


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol by the Racah sum in exact rational arithmetic.

    The value is ``sign * sqrt(S**2 * P)`` where the Racah sum ``S`` and the
    squared prefactor ``P`` are exact fractions; only the final square root
    is taken in floating point.
    """
    j1, j2, j3, m1, m2, m3 = (_half(v) for v in (j1, j2, j3, m1, m2, m3))
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if j < 0:
            raise DomainError("angular momenta must be nonnegative")
        if (j - m).denominator != 1:
            raise DomainError(f"j = {j} and m = {m} must share integrality")
        if abs(m) > j:
            return 0.0
    if m1 + m2 + m3 != 0:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2 or (j1 + j2 + j3).denominator != 1:
        return 0.0

    tri = Fraction(
        _fact(j1 + j2 - j3) * _fact(j1 - j2 + j3) * _fact(-j1 + j2 + j3),
        _fact(j1 + j2 + j3 + 1),
    )
    pref2 = tri * (
        _fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2) * _fact(j3 + m3) * _fact(j3 - m3)
    )
    k_lo = int(max(0, j2 - j3 - m1, j1 - j3 + m2))
    k_hi = int(min(j1 + j2 - j3, j1 - m1, j2 + m2))
    total = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        den = (
            math.factorial(k)
            * _fact(j3 - j2 + k + m1)
            * _fact(j3 - j1 + k - m2)
            * _fact(j1 + j2 - j3 - k)
            * _fact(j1 - k - m1)
            * _fact(j2 - k + m2)
        )
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0.0
    phase = -1 if int(j1 - j2 - m3) % 2 else 1
    sign = phase * (1 if total > 0 else -1)
    return sign * math.sqrt(float(total * total * pref2))


def wigner3j_state(a: int, b: int, c: int) -> StateTensor:
    """Invariant of SU(2) irreps of dimensions ``a, b, c`` as a state.

    Basis index ``i`` of a ``d``-dimensional factor carries ``m = j - i`` with
    ``j = (d - 1)/2``.
    """
    for d in (a, b, c):
        if d < 1:
            raise DomainError("dimensions must be positive")
    if (a + b + c) % 2 == 0:
        raise DomainError(f"dimensions {a, b, c} must sum to an odd number")
    ja, jb, jc = (Fraction(d - 1, 2) for d in (a, b, c))
    if jc < abs(ja - jb) or jc > ja + jb:
        raise DomainError(f"dimensions {a, b, c} violate the triangle inequality")
    psi = np.zeros((a, b, c))
    for ia in range(a):
        ma = ja - ia
        for ib in range(b):
            mb = jb - ib
            mc = -ma - mb
            if abs(mc) > jc:
                continue
            psi[ia, ib, int(jc - mc)] = wigner_3j(ja, jb, jc, ma, mb, mc)
    psi /= np.linalg.norm(psi)
    return StateTensor((a, b, c), psi)


# ---------------------------------------------------------------------------
# Pauli stabilizer states

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

SIX_QUBIT_GENERATORS = (
    "XZZXII",
    "IXZZXI",
    "XIXZZI",
    "ZXIXZI",
    "XXXXXX",
    "ZZZZZZ",
)


def _parse_pauli(text: str) -> tuple[int, str]:
    s = "".join(text.split()).replace("⊗", "").replace("*", "")
    sign = 1
    if s[:1] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    s = s.upper()
    if not s or any(ch not in _PAULI for ch in s):
        raise DomainError(f"malformed Pauli string {text!r}")
    return sign, s


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


@dataclass(frozen=True)
class PauliStabilizerSet:
    """Signed Pauli strings that pairwise commute and are GF(2)-independent."""

    generators: tuple[str, ...]
    n_qubits: int = 0

    def __post_init__(self):
        parsed = [_parse_pauli(g) for g in self.generators]
        if not parsed:
            raise DomainError("need at least one generator")
        n = len(parsed[0][1])
        if any(len(p) != n for _, p in parsed):
            raise DomainError("all Pauli strings must have the same length")
        if self.n_qubits and self.n_qubits != n:
            raise DomainError(f"strings have {n} qubits, expected {self.n_qubits}")
        norm = tuple(("-" if s < 0 else "+") + p for s, p in parsed)
        object.__setattr__(self, "generators", norm)
        object.__setattr__(self, "n_qubits", n)
        xs, zs = zip(*(self._symplectic(p) for _, p in parsed))
        for i in range(len(parsed)):
            for j in range(i + 1, len(parsed)):
                # symplectic form: anticommute iff odd overlap
                if (bin(xs[i] & zs[j]).count("1") + bin(zs[i] & xs[j]).count("1")) % 2:
                    raise DomainError(
                        f"generators {norm[i]} and {norm[j]} do not commute"
                    )
        vecs = [(x << n) | z for x, z in zip(xs, zs)]
        if _gf2_rank(vecs) != len(vecs):
            raise DomainError(
                "generators are not independent (a product of them is +-identity); "
                "a product equal to -identity leaves no fixed state"
            )

    @staticmethod
    def _symplectic(p: str) -> tuple[int, int]:
        x = z = 0
        for ch in p:
            x = (x << 1) | (ch in "XY")
            z = (z << 1) | (ch in "ZY")
        return x, z

    def matrices(self) -> list[np.ndarray]:
        out = []
        for g in self.generators:
            sign, p = _parse_pauli(g)
            m = np.array([[sign]], dtype=complex)
            for ch in p:
                m = np.kron(m, _PAULI[ch])
            out.append(m)
        return out

    @classmethod
    def from_text(cls, text: str) -> "PauliStabilizerSet":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        return cls(tuple(ln for ln in lines if ln))


def pauli_stabilizer_state(ps: PauliStabilizerSet) -> StateTensor:
    """Unit vector in the common +1 eigenspace, via ``prod (1 + S_i)/2``."""
    n = ps.n_qubits
    dim = 2**n
    proj = np.eye(dim, dtype=complex)
    for m in ps.matrices():
        proj = proj @ (np.eye(dim) + m) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    vec = proj[:, col]
    nrm = np.linalg.norm(vec)
    if nrm < 1e-9:
        raise DomainError("the generators have no common +1 eigenvector")
    vec = vec / nrm
    # fix the global phase so the largest amplitude is real positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    return StateTensor((2,) * n, vec)
