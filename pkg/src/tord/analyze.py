"""Diagnostics: how much does time ordering matter for a given system?"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .matcore import commutator, frobenius_distance
from .propagate import (
    DEFAULT_TOL,
    MAX_STEPS,
    GridSpec,
    _kick_generator,
    evolve_backward,
    evolve_exact,
    evolve_unordered,
    propagator_fixed,
    second_order_split,
)
from .system import DEGENERACY_TOL, SystemSpec, classify_degeneracy, v_interaction

HBAR_EV_S = 6.582119569e-16
C_CM_S = 2.99792458e10


@dataclass(frozen=True)
class OrderingReport:
    ordering_error: float
    commutator_score: float
    fully_degenerate: bool
    delta_t_norm: float
    unitarity_defect: float

    def as_dict(self):
        return {
            "ordering_error": self.ordering_error,
            "commutator_score": self.commutator_score,
            "fully_degenerate": self.fully_degenerate,
            "delta_t_norm": self.delta_t_norm,
            "unitarity_defect": self.unitarity_defect,
        }


def commutator_score(spec: SystemSpec, grid: GridSpec, pair_samples: int = 16) -> float:
    """Largest ``‖[A, B]‖_F`` over interaction samples.

    The samples are ``V_I`` on a uniform lattice of ``pair_samples`` times plus
    ``theta * w̃`` for every kick in range, so kick-only systems are scored too.
    """
    if pair_samples < 2:
        raise UsageError("pair_samples must be >= 2")
    t = np.linspace(grid.t1, grid.t2, pair_samples)
    mats = [v_interaction(spec, t)] if spec.terms else []
    kicks = spec.kicks_between(grid.t1, grid.t2)
    if kicks:
        mats.append(np.array([_kick_generator(spec, k) for k in kicks]))
    if not mats:
        return 0.0
    m = np.concatenate(mats)
    c = commutator(m[:, None], m[None, :])
    return float(np.max(np.linalg.norm(c, axis=(-2, -1))))


def ordering_report(
    spec: SystemSpec,
    grid: GridSpec,
    pair_samples: int = 16,
    *,
    tol: float = DEFAULT_TOL,
    max_steps: int = MAX_STEPS,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> OrderingReport:
    exact = evolve_exact(spec, grid, tol=tol, max_steps=max_steps, samples=2)
    unordered = evolve_unordered(spec, grid, tol=tol, max_steps=max_steps)
    _, delta_t = second_order_split(spec, grid)
    return OrderingReport(
        ordering_error=frobenius_distance(exact.u, unordered),
        commutator_score=commutator_score(spec, grid, pair_samples),
        fully_degenerate=classify_degeneracy(spec.basis, degeneracy_tol).fully_degenerate,
        delta_t_norm=float(np.linalg.norm(delta_t)),
        unitarity_defect=exact.unitarity_defect,
    )


@dataclass(frozen=True)
class CoherenceScale:
    delta_e: float  # eV
    delta_t: float  # s
    delta_l: float  # cm


def coherence_scale(delta_e_ev: float) -> CoherenceScale:
    """Lifetime ``ħ/(2ΔE)`` and light-travel length ``cΔt`` for a level splitting in eV."""
    if not delta_e_ev > 0:
        raise UsageError("energy splitting must be positive")
    dt = HBAR_EV_S / (2.0 * delta_e_ev)
    return CoherenceScale(float(delta_e_ev), dt, C_CM_S * dt)


def initcond_check(spec: SystemSpec, t1: float = 0.0, h: float = 1e-2, steps: int = 256) -> float:
    """Residual ``|ȧ1(t1) + i V_I(t1)_12 a2(t1)|`` starting from state 2.

    ``ȧ1`` comes from forward differences of propagated amplitudes at
    ``h, h/2, h/4`` combined by two Richardson levels (error ``O(h³)``).
    """
    if spec.dim != 2:
        raise UsageError("initcond_check needs a two-level system")

    def a1(dt):
        return propagator_fixed(spec, t1, t1 + dt, steps)[0, 1]

    hs = [h, h / 2, h / 4]
    d = [a1(x) / x for x in hs]  # a1(t1) = 0
    r1 = [2 * d[1] - d[0], 2 * d[2] - d[1]]
    deriv = (4 * r1[1] - r1[0]) / 3
    v12 = v_interaction(spec, t1)[0, 1]
    return float(abs(deriv - (-1j) * v12))


def reciprocity_check(
    spec: SystemSpec, grid: GridSpec, *, tol: float = DEFAULT_TOL, max_steps: int = MAX_STEPS
) -> float:
    """``‖U_backward − U_forward†‖_F`` at the forward run's converged step count."""
    forward = evolve_exact(spec, grid, tol=tol, max_steps=max_steps, samples=2)
    backward = evolve_backward(spec, grid, forward.steps)
    return frobenius_distance(backward, forward.u.conj().T)


def composition_defect(spec: SystemSpec, grid: GridSpec, t_mid: float, **kw) -> float:
    """``‖U(c, a) − U(c, b) U(b, a)‖_F`` for ``a = grid.t1 < b = t_mid < c = grid.t2``."""
    if not grid.t1 <= t_mid <= grid.t2:
        raise UsageError("t_mid must lie inside the grid")
    whole = evolve_exact(spec, grid, samples=2, **kw).u
    first = evolve_exact(spec, GridSpec(grid.t1, t_mid, grid.steps), samples=2, **kw).u
    second = evolve_exact(spec, GridSpec(t_mid, grid.t2, grid.steps), samples=2, **kw).u
    return frobenius_distance(whole, second @ first)
