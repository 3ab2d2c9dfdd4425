"""Moment-map gradient flow toward LME normal forms.

The flow ``d psi / d lambda = -sum_i rho_hat_i . psi`` lowers the squared
moment map ``M`` and stays inside one SLOCC orbit. It ends at an LME state
when the orbit is semistable and runs to the zero vector when it is
unstable.

The integrator is a Lie-group form of explicit Euler: one step applies
``exp(-h rho_hat_i)`` on every factor. Each factor has determinant one, so
the iterate never leaves the orbit and SLOCC invariants such as the Cayley
hyperdeterminant are preserved up to rounding. To first order in ``h`` the
step agrees with the Euler update ``psi - h sum_i rho_hat_i psi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .tensor import (
    StateTensor,
    is_lme,
    moment_map_square,
    single_site_rdms,
    traceless_part,
)

__all__ = [
    "FlowReport",
    "grad_m",
    "flow_to_normal_form",
    "classify_orbit",
    "cayley_hyperdeterminant",
    "SEMISTABLE",
    "UNSTABLE",
    "MAX_ITERATIONS",
    "UNDECIDED",
]

SEMISTABLE = "Semistable"
UNSTABLE = "Unstable"
MAX_ITERATIONS = "MaxIterations"
UNDECIDED = "Undecided"

DEFAULT_STEP = 0.05
DEFAULT_MAX_ITERS = 200_000
DEFAULT_LME_TOL = 1e-7
DEFAULT_NORM_FLOOR = 1e-6
TRACE_EVERY = 100


@dataclass(frozen=True, eq=False)
class FlowReport:
    endpoint: StateTensor
    classification: str
    steps: int
    final_m: float
    final_norm: float
    invariant_drift: Optional[float] = None
    iterations: int = 0
    rejected: int = 0
    initial_m: float = 0.0
    final_step: float = 0.0
    lme_deviation: Optional[float] = None
    m_trace: list = field(default_factory=list, repr=False)
    m_history: Optional[np.ndarray] = field(default=None, repr=False)
    norm_history: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "dims": "x".join(str(d) for d in self.endpoint.dims),
            "classification": self.classification,
            "steps": self.steps,
            "iterations": self.iterations,
            "rejected_steps": self.rejected,
            "initial_m": self.initial_m,
            "final_m": self.final_m,
            "final_norm": self.final_norm,
            "final_step": self.final_step,
            "lme_deviation": self.lme_deviation,
            "invariant_drift": self.invariant_drift,
            "m_trace": [{"step": s, "M": m} for s, m in self.m_trace],
        }


def _tangent(psi: np.ndarray, hats: list[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(psi)
    for axis, h in enumerate(hats):
        out += np.moveaxis(np.tensordot(h, psi, axes=(1, axis)), 0, axis)
    return -out


def grad_m(s: StateTensor) -> StateTensor:
    """Right-hand side of the flow, ``-sum_i (rho_i - tr(rho_i)/d_i) . psi``."""
    if s.norm2 == 0.0:
        raise DomainError("the gradient is undefined at the zero state")
    hats = [traceless_part(r) for r in single_site_rdms(s)]
    return StateTensor(s.dims, _tangent(np.asarray(s.coeffs), hats))


def cayley_hyperdeterminant(s: StateTensor | np.ndarray) -> complex:
    """Degree-4 SLOCC invariant of a three-qubit tensor."""
    a = np.asarray(s.coeffs if isinstance(s, StateTensor) else s)
    if a.shape != (2, 2, 2):
        raise DomainError(f"the hyperdeterminant needs a 2x2x2 tensor, got shape {a.shape}")
    a000, a001, a010, a011 = a[0, 0, 0], a[0, 0, 1], a[0, 1, 0], a[0, 1, 1]
    a100, a101, a110, a111 = a[1, 0, 0], a[1, 0, 1], a[1, 1, 0], a[1, 1, 1]
    return complex(
        a000**2 * a111**2
        + a001**2 * a110**2
        + a010**2 * a101**2
        + a100**2 * a011**2
        - 2
        * (
            a000 * a001 * a110 * a111
            + a000 * a010 * a101 * a111
            + a000 * a100 * a011 * a111
            + a001 * a010 * a101 * a110
            + a001 * a100 * a011 * a110
            + a010 * a100 * a011 * a101
        )
        + 4 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111)
    )


def _state_data(psi: np.ndarray) -> tuple[list[np.ndarray], float, float]:
    s = StateTensor(psi.shape, psi)
    hats = [traceless_part(r) for r in single_site_rdms(s)]
    m = 0.5 * sum(float(np.sum(np.abs(h) ** 2)) for h in hats)
    return hats, m, s.norm2


def _exp_step(psi: np.ndarray, hats: list[np.ndarray], h: float) -> np.ndarray:
    out = psi
    for axis, hat in enumerate(hats):
        w, v = np.linalg.eigh(hat)
        g = (v * np.exp(-h * w)) @ v.conj().T
        out = np.moveaxis(np.tensordot(g, out, axes=(1, axis)), 0, axis)
    return out


def flow_to_normal_form(
    s: StateTensor,
    step: float = DEFAULT_STEP,
    max_iters: int = DEFAULT_MAX_ITERS,
    lme_tol: float = DEFAULT_LME_TOL,
    norm_floor: float = DEFAULT_NORM_FLOOR,
    record_history: bool = False,
) -> FlowReport:
    """Integrate the moment-map flow from ``s`` (rescaled to unit norm).

    A trial step is accepted only if neither ``M`` nor the norm increases;
    otherwise the step is halved. Accepted steps grow the step by 1.2.
    The run stops as

    * ``Semistable`` once the normalized state passes ``is_lme`` at
      ``lme_tol`` and ``M / ||psi||**4 <= lme_tol**2``,
    * ``Unstable`` once ``||psi|| < norm_floor``,
    * ``MaxIterations`` after ``max_iters`` trial steps.

    For 2x2x2 inputs the relative drift of the Cayley hyperdeterminant is
    reported (absolute drift when it starts at zero).
    """
    if not (step > 0 and math.isfinite(step)):
        raise DomainError("step must be a positive finite number")
    if max_iters < 0:
        raise DomainError("max_iters must be nonnegative")
    if not lme_tol > 0:
        raise DomainError("lme_tol must be positive")
    if not 0 < norm_floor < 1:
        raise DomainError("norm_floor must lie in (0, 1)")
    if s.norm2 == 0.0:
        raise DomainError("cannot flow from the zero state")

    psi = np.array(s.normalized().coeffs)
    track_inv = psi.shape == (2, 2, 2)
    inv0 = cayley_hyperdeterminant(psi) if track_inv else None

    hats, m, n2 = _state_data(psi)
    m0 = m
    trace = [(0, m)]
    m_hist = [m] if record_history else None
    n_hist = [math.sqrt(n2)] if record_history else None
    h = step
    steps = iters = rejected = 0
    status = MAX_ITERATIONS

    def converged(psi_, m_, n2_) -> bool:
        return m_ <= lme_tol**2 * n2_ * n2_ and is_lme(StateTensor(psi_.shape, psi_), lme_tol)[0]

    while True:
        if math.sqrt(n2) < norm_floor:
            status = UNSTABLE
            break
        if converged(psi, m, n2):
            status = SEMISTABLE
            break
        if iters >= max_iters or h < 1e-300:
            break
        iters += 1
        cand = _exp_step(psi, hats, h)
        c_hats, c_m, c_n2 = _state_data(cand)
        if c_m > m or c_n2 > n2 or not math.isfinite(c_m):
            rejected += 1
            h *= 0.5
            continue
        psi, hats, m, n2 = cand, c_hats, c_m, c_n2
        steps += 1
        h *= 1.2
        if steps % TRACE_EVERY == 0:
            trace.append((steps, m))
        if record_history:
            m_hist.append(m)
            n_hist.append(math.sqrt(n2))
    if trace[-1][0] != steps:
        trace.append((steps, m))

    drift = None
    if track_inv:
        inv1 = cayley_hyperdeterminant(psi)
        drift = abs(inv1 - inv0) / abs(inv0) if inv0 != 0 else abs(inv1 - inv0)

    end = StateTensor(psi.shape, psi)
    dev = is_lme(end)[1] if n2 > 0 else None
    return FlowReport(
        endpoint=end,
        classification=status,
        steps=steps,
        final_m=moment_map_square(end),
        final_norm=math.sqrt(n2),
        invariant_drift=drift,
        iterations=iters,
        rejected=rejected,
        initial_m=m0,
        final_step=h,
        lme_deviation=dev,
        m_trace=trace,
        m_history=np.array(m_hist) if record_history else None,
        norm_history=np.array(n_hist) if record_history else None,
    )


def classify_orbit(s: StateTensor, **opts) -> str:
    """``Semistable``, ``Unstable`` or ``Undecided`` (iteration budget exhausted)."""
    rep = flow_to_normal_form(s, **opts)
    return UNDECIDED if rep.classification == MAX_ITERATIONS else rep.classification
