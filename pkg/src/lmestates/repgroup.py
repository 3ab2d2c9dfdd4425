"""Finite groups, their unitary representations, and LME states from invariants.

If ``R_1, ..., R_n`` are unitary irreducible representations of a finite
group ``H`` and ``R_1 (x) ... (x) R_n`` contains the trivial representation,
any invariant vector is an LME state on ``(dim R_1, ..., dim R_n)``. The
invariant subspace is the image of ``P = (1/|H|) sum_h R_1(h) (x) ... (x) R_n(h)``.

Two families are built in. ``S_3`` with its two-dimensional irrep three
times gives a GHZ-class state on ``(2, 2, 2)``. The group
``UT(3, p) x| Z_2`` with irreps ``2^{x,y}``, ``p^{+,y}`` and the dual of
``p^{+,y}`` gives an LME state on ``(2, p, p)`` for odd primes ``p``.

The existence of a group construction is a necessary condition only up to
three parties. For four or more parties sufficiency fails: ``(2, 2, 2, 7)``
admits LME states, yet no group construction exists because a product of
two 2-dimensional irreps has no constituent above dimension 4 while a
product of 2- and 7-dimensional irreps has none below dimension 6.
:func:`group_state_for_dims` therefore refuses such dimension vectors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ResourceError
from .tensor import StateTensor, is_lme

__all__ = [
    "FiniteGroup",
    "GroupRep",
    "UtElement",
    "build_ut_group",
    "build_s3_group",
    "s3_irrep",
    "irrep_1",
    "irrep_2",
    "irrep_p",
    "ut_irreps",
    "tensor_multiplicity",
    "invariant_projector",
    "lme_from_invariant",
    "ut_group_state",
    "s3_ghz_state",
    "group_state_for_dims",
    "group_info",
    "is_prime",
    "PROJECTOR_CAP",
]

PROJECTOR_CAP = 50_000_000  # |H| * D**2 complex multiply-adds


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Group given by its multiplication table over element indices."""

    elements: tuple
    mul_table: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)
    identity: int
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, element) -> int:
        return self.elements.index(element)

    def mul(self, i: int, j: int) -> int:
        return int(self.mul_table[i, j])

    def check_axioms(self, samples: int = 2000, seed: int = 0) -> None:
        """Identity and inverse laws exhaustively, associativity on random triples."""
        n = self.order
        idx = np.arange(n)
        if not (np.array_equal(self.mul_table[self.identity], idx) and np.array_equal(self.mul_table[:, self.identity], idx)):
            raise AssertionError("identity law fails")
        if not np.all(self.mul_table[idx, self.inverse] == self.identity):
            raise AssertionError("inverse law fails")
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        t = self.mul_table
        if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
            raise AssertionError("associativity fails")

    def conjugacy_classes(self) -> list[list[int]]:
        t = self.mul_table
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for g in range(self.order):
            if seen[g]:
                continue
            cls = np.unique(t[t[:, g], self.inverse])
            seen[cls] = True
            classes.append([int(x) for x in cls])
        return classes


@dataclass(frozen=True, eq=False)
class GroupRep:
    """Unitary matrices ``R(h)`` for every group element, stacked along axis 0.

    ``cocycle`` is ``None`` for ordinary representations; otherwise an
    ``|H| x |H|`` array ``c`` with ``R(h1) R(h2) = c[h1, h2] R(h1 h2)``.
    """

    group: FiniteGroup
    matrices: np.ndarray = field(repr=False)
    label: str = ""
    cocycle: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[0] != self.group.order or m.shape[1] != m.shape[2]:
            raise DomainError("need one square matrix per group element")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def character_norm(self) -> float:
        chi = self.character()
        return float(np.sum(np.abs(chi) ** 2).real / self.group.order)

    def is_irreducible(self, tol: float = 1e-10) -> bool:
        return abs(self.character_norm() - 1.0) <= tol

    def dual(self) -> "GroupRep":
        """Dual of a unitary representation: entrywise complex conjugate."""
        cc = None if self.cocycle is None else np.conj(self.cocycle)
        return GroupRep(self.group, np.conj(self.matrices), f"({self.label})*", cc)

    def unitarity_error(self) -> float:
        m = self.matrices
        prod = m @ np.conj(np.transpose(m, (0, 2, 1)))
        return float(np.max(np.abs(prod - np.eye(self.dim))))

    def homomorphism_error(self, pairs: Optional[Sequence[tuple[int, int]]] = None) -> float:
        """Largest ``|R(a)R(b) - c(a,b) R(ab)|`` over ``pairs`` (default: all)."""
        n = self.group.order
        if pairs is None:
            a, b = np.divmod(np.arange(n * n), n)
        else:
            a, b = (np.array(x) for x in zip(*pairs))
        worst = 0.0
        for lo in range(0, len(a), 4096):
            aa, bb = a[lo:lo + 4096], b[lo:lo + 4096]
            lhs = self.matrices[aa] @ self.matrices[bb]
            rhs = self.matrices[self.group.mul_table[aa, bb]]
            if self.cocycle is not None:
                rhs = rhs * self.cocycle[aa, bb][:, None, None]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst


# ---------------------------------------------------------------------------
# UT(3, p) x| Z_2


@dataclass(frozen=True)
class UtElement:
    """``((a, b, c), t)`` with ``(a, b, c)`` the unitriangular entries and ``t`` in {0, 1}."""

    a: int
    b: int
    c: int
    t: int
    p: int

    def __mul__(self, other: "UtElement") -> "UtElement":
        p = self.p
        a2, c2 = (other.a, other.c) if self.t == 0 else (-other.a, -other.c)
        return UtElement(
            (self.a + a2) % p,
            (self.b + other.b + self.a * c2) % p,
            (self.c + c2) % p,
            self.t ^ other.t,
            p,
        )

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.t)


def _ut_index(a, b, c, t, p):
    return ((t * p + a) * p + b) * p + c


def build_ut_group(p: int) -> FiniteGroup:
    """``UT(3, p) x| Z_2`` of order ``2 p**3``, elements ``(a, b, c, t)``.

    The product is ``(h, t)(h', t') = (h phi_t(h'), t t')`` where ``phi_s``
    negates ``a`` and ``c``, and ``(a,b,c)(a',b',c') = (a+a', b+b'+a c', c+c')``.
    """
    if not (isinstance(p, (int, np.integer)) and p > 2 and is_prime(int(p))):
        raise DomainError(f"p must be an odd prime, got {p!r}")
    p = int(p)
    elems = tuple(itertools.product(range(2), range(p), range(p), range(p)))
    elems = tuple((a, b, c, t) for t, a, b, c in elems)
    arr = np.array(elems)
    a1, b1, c1, t1 = (arr[:, i][:, None] for i in range(4))
    a2, b2, c2, t2 = (arr[:, i][None, :] for i in range(4))
    sgn = 1 - 2 * t1
    a2s, c2s = sgn * a2, sgn * c2
    table = _ut_index(
        (a1 + a2s) % p, (b1 + b2 + a1 * c2s) % p, (c1 + c2s) % p, t1 ^ t2, p
    ).astype(np.int64)
    ident = _ut_index(0, 0, 0, 0, p)
    inverse = np.argmax(table == ident, axis=1)
    return FiniteGroup(elems, table, inverse, ident, name=f"UT(3,{p})xZ2")


def _ut_params(group: FiniteGroup) -> tuple[int, np.ndarray]:
    p = round((group.order / 2) ** (1 / 3))
    if 2 * p**3 != group.order:
        raise DomainError("group is not UT(3,p) x| Z_2")
    return p, np.array(group.elements)


def irrep_1(group: FiniteGroup, sign: int = 1) -> GroupRep:
    """Trivial (``sign=+1``) or sign (``sign=-1``) one-dimensional irrep."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    _, arr = _ut_params(group)
    vals = np.where(arr[:, 3] == 1, float(sign), 1.0)
    return GroupRep(group, vals[:, None, None], "1" if sign == 1 else "1'")


def irrep_2(group: FiniteGroup, x: int, y: int) -> GroupRep:
    """``2^{x,y}``: ``diag(chi, chi^-1)`` with ``chi = exp(2 pi i (x a + y c) / p)``, times swap for ``s``."""
    p, arr = _ut_params(group)
    if x % p == 0 and y % p == 0:
        raise DomainError("(x, y) must not be (0, 0) mod p")
    chi = np.exp(2j * np.pi * ((x * arr[:, 0] + y * arr[:, 2]) % p) / p)
    mats = np.zeros((group.order, 2, 2), dtype=complex)
    e = arr[:, 3] == 0
    mats[e, 0, 0] = chi[e]
    mats[e, 1, 1] = np.conj(chi[e])
    s = ~e
    # R(h, s) = R(h, e) X
    mats[s, 0, 1] = chi[s]
    mats[s, 1, 0] = np.conj(chi[s])
    return GroupRep(group, mats, f"2^{{{x % p},{y % p}}}")


def irrep_p(group: FiniteGroup, sign: int, y: int) -> GroupRep:
    """``p^{sign,y}``: ``M_jk = delta_{j,[k-a]} w^{y(c(k-a)+b)}``, ``R(1, s)_mn = sign delta_{n,[-m]}``."""
    p, arr = _ut_params(group)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if y % p == 0:
        raise DomainError("y must be a unit mod p")
    flip = sign * np.eye(p)[(-np.arange(p)) % p]
    mats = np.zeros((group.order, p, p), dtype=complex)
    k = np.arange(p)
    for idx, (a, b, c, t) in enumerate(arr):
        j = (k - a) % p
        m = np.zeros((p, p), dtype=complex)
        m[j, k] = np.exp(2j * np.pi * ((y * (c * (k - a) + b)) % p) / p)
        mats[idx] = m @ flip if t else m
    return GroupRep(group, mats, f"{p}^{{{'+' if sign > 0 else '-'},{y % p}}}")


def ut_irreps(group: FiniteGroup) -> list[GroupRep]:
    """All ``2 + (p**2 - 1)/2 + 2(p - 1)`` irreps of ``UT(3, p) x| Z_2``."""
    p, _ = _ut_params(group)
    reps = [irrep_1(group, 1), irrep_1(group, -1)]
    seen = set()
    for x in range(p):
        for y in range(p):
            if (x, y) == (0, 0) or (x, y) in seen:
                continue
            seen.update({(x, y), ((-x) % p, (-y) % p)})
            reps.append(irrep_2(group, x, y))
    for sign in (1, -1):
        for y in range(1, p):
            reps.append(irrep_p(group, sign, y))
    return reps


# ---------------------------------------------------------------------------
# S_3


def build_s3_group() -> FiniteGroup:
    """Permutations of (1, 2, 3); the product ``p q`` applies ``q`` first."""
    perms = ((1, 2, 3), (2, 1, 3), (1, 3, 2), (3, 2, 1), (2, 3, 1), (3, 1, 2))
    n = len(perms)
    table = np.zeros((n, n), dtype=np.int64)
    for i, pi in enumerate(perms):
        for j, pj in enumerate(perms):
            comp = tuple(pi[pj[x] - 1] for x in range(3))
            table[i, j] = perms.index(comp)
    inverse = np.argmax(table == 0, axis=1)
    return FiniteGroup(perms, table, inverse, 0, name="S3")


def s3_irrep(group: Optional[FiniteGroup] = None) -> GroupRep:
    """Two-dimensional irrep of ``S_3`` in the basis where 3-cycles are diagonal."""
    g = group or build_s3_group()
    w = np.exp(2j * np.pi / 3)
    mats = {
        (1, 2, 3): np.eye(2),
        (2, 1, 3): np.array([[0, 1], [1, 0]]),
        (1, 3, 2): np.array([[0, w], [1 / w, 0]]),
        (3, 2, 1): np.array([[0, 1 / w], [w, 0]]),
        (2, 3, 1): np.diag([1 / w, w]),
        (3, 1, 2): np.diag([w, 1 / w]),
    }
    return GroupRep(g, np.array([mats[e] for e in g.elements], dtype=complex), "2")


# ---------------------------------------------------------------------------
# invariants


def _same_group(reps: Sequence[GroupRep]) -> FiniteGroup:
    if not reps:
        raise DomainError("need at least one representation")
    g = reps[0].group
    if any(r.group is not g for r in reps):
        raise DomainError("representations live on different groups")
    return g


def _product_cocycle(reps: Sequence[GroupRep]) -> Optional[np.ndarray]:
    cocycles = [r.cocycle for r in reps if r.cocycle is not None]
    if not cocycles:
        return None
    return reduce(np.multiply, cocycles)


def tensor_multiplicity(reps: Sequence[GroupRep], target: Optional[GroupRep] = None) -> int:
    """Multiplicity of ``target`` (default trivial) in ``(x) reps`` via characters."""
    g = _same_group(list(reps) + ([target] if target is not None else []))
    chi = reduce(np.multiply, (r.character() for r in reps))
    if target is not None:
        chi = chi * np.conj(target.character())
    val = complex(np.sum(chi) / g.order)
    mult = round(val.real)
    if abs(val - mult) > 1e-8:
        raise AssertionError(f"non-integral multiplicity {val}")
    return int(mult)


def invariant_projector(reps: Sequence[GroupRep], cap: int = PROJECTOR_CAP) -> np.ndarray:
    """``(1/|H|) sum_h R_1(h) (x) ... (x) R_n(h)``.

    Projective factors are allowed only when their product cocycle is
    identically one, which is what makes the average a projector.
    """
    g = _same_group(reps)
    dim = math.prod(r.dim for r in reps)
    if g.order * dim * dim > cap:
        raise ResourceError(f"projector needs |H| * D^2 = {g.order * dim * dim} > cap {cap}")
    cc = _product_cocycle(reps)
    if cc is not None and np.max(np.abs(cc - 1)) > 1e-10:
        raise DomainError("the product cocycle is nontrivial; the group average is not a projector")
    proj = np.zeros((dim, dim), dtype=complex)
    for h in range(g.order):
        proj += reduce(np.kron, (r.matrices[h] for r in reps))
    return proj / g.order


def lme_from_invariant(reps: Sequence[GroupRep], tol: float = 1e-9) -> StateTensor:
    """Unit invariant vector of ``(x) reps`` as a state on ``(dim R_1, ..., dim R_n)``."""
    for r in reps:
        if not r.is_irreducible():
            raise DomainError(f"representation {r.label or '?'} is reducible")
    proj = invariant_projector(reps)
    rank = int(round(np.trace(proj).real))
    if rank < 1:
        raise DomainError("the tensor product contains no invariant vector")
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    vec = proj[:, col] / np.linalg.norm(proj[:, col])
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    state = StateTensor(tuple(r.dim for r in reps), vec)
    ok, dev = is_lme(state, tol)
    if not ok:
        raise AssertionError(f"invariant vector is not LME (deviation {dev:.3g})")
    return state


def ut_group_state(p: int, x: int = 1, y: int = 1, y_p: int = 1) -> StateTensor:
    """LME state on ``(2, p, p)`` from ``{2^{x,y}, p^{+,y'}, (p^{+,y'})*}``."""
    g = build_ut_group(p)
    rp = irrep_p(g, 1, y_p)
    return lme_from_invariant([irrep_2(g, x, y), rp, rp.dual()])


def s3_ghz_state() -> StateTensor:
    r = s3_irrep()
    return lme_from_invariant([r, r, r])


def group_state_for_dims(dims: Sequence[int], x: int = 1, y: int = 1) -> StateTensor:
    """Group construction for ``2x2x2`` (``S_3``) or ``2xpxp`` with ``p`` an odd prime.

    Any other dimension vector is refused, including ones such as
    ``2x2x2x7`` where LME states exist but no group construction does.
    """
    d = tuple(sorted(int(v) for v in dims))
    if d == (2, 2, 2):
        return s3_ghz_state()
    if len(d) == 3 and d[0] == 2 and d[1] == d[2] and d[1] > 2 and is_prime(d[1]):
        return ut_group_state(d[1], x, y)
    raise DomainError(
        f"no group construction for {'x'.join(map(str, dims))}; "
        "supported families are 2x2x2 (S3) and 2xpxp with p an odd prime"
    )


def group_info(p: int) -> dict:
    """Conjugacy classes and irreps of ``UT(3, p) x| Z_2``."""
    g = build_ut_group(p)
    classes = g.conjugacy_classes()
    sizes: dict[int, int] = {}
    for c in classes:
        sizes[len(c)] = sizes.get(len(c), 0) + 1
    reps = ut_irreps(g)
    dims = [r.dim for r in reps]
    irrep_counts: dict[int, int] = {}
    for dd in dims:
        irrep_counts[dd] = irrep_counts.get(dd, 0) + 1
    return {
        "group": g.name,
        "p": p,
        "order": g.order,
        "num_classes": len(classes),
        "class_sizes": {str(k): v for k, v in sorted(sizes.items())},
        "num_irreps": len(reps),
        "irrep_dims": {str(k): v for k, v in sorted(irrep_counts.items())},
        "sum_squared_dims": sum(dd * dd for dd in dims),
        "irreps": [{"label": r.label, "dim": r.dim} for r in reps],
    }
