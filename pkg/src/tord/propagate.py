"""Propagators with and without time ordering.

All propagators work in the interaction picture, where the integrand is
``V_I(t) = exp(iH0 t) V(t) exp(-iH0 t)``. ``U(t2, t1)`` maps interaction-picture
amplitudes at ``t1`` to those at ``t2``; populations are the same in either
picture.

The interval ``[t1, t2]`` is always cut at kick times and at envelope
breakpoints (rectangular edges, tabulated knots, Gaussian peak/cutoffs) so
that every quadrature and step product sees a smooth integrand. Each piece
gets ``ceil(length / h)`` uniform steps with ``h = (t2 - t1) / steps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, UnsupportedError, UsageError, ValidationError
from .matcore import (
    as_state,
    basis_state,
    expm_hermitian_generator,
    frobenius_distance,
    ordered_product,
    unitarity_defect,
)
from .system import BasisSpec, KickSpec, SystemSpec, v_interaction

DEFAULT_TOL = 1e-8
MAX_STEPS = 2**20
MAX_DYSON_ORDER = 4
GL_NODES = 8


@dataclass(frozen=True)
class GridSpec:
    t1: float
    t2: float
    steps: int = 64

    def __post_init__(self):
        if not (math.isfinite(self.t1) and math.isfinite(self.t2)):
            raise ValidationError("grid: t1 and t2 must be finite")
        if self.t2 < self.t1:
            raise ValidationError("grid: need t1 <= t2")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValidationError("grid: steps must be a positive integer")
        object.__setattr__(self, "t1", float(self.t1))
        object.__setattr__(self, "t2", float(self.t2))
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def h(self) -> float:
        return (self.t2 - self.t1) / self.steps


@dataclass
class PropagationResult:
    """Outcome of :func:`evolve_exact`.

    ``population_trace`` has one row per sample: ``t`` followed by the
    population of each basis state. ``refinement`` lists ``(steps, change)``
    for every doubling that was tried.
    """

    u: np.ndarray
    population_trace: np.ndarray
    unitarity_defect: float
    steps: int
    refinement: list = field(default_factory=list)

    @property
    def final_populations(self) -> np.ndarray:
        return self.population_trace[-1, 1:]


def segments(spec: SystemSpec, t1: float, t2: float, steps: int):
    """Smooth pieces ``(a, b, n_steps)`` of ``[t1, t2]``."""
    if t1 == t2:
        return []
    cuts = [t1] + [p for p in spec.breakpoints() if t1 < p < t2] + [t2]
    h = (t2 - t1) / steps
    out = []
    for a, b in zip(cuts, cuts[1:]):
        n = max(1, math.ceil((b - a) / h - 1e-9))
        out.append((a, b, n))
    return out


def _step_nodes(segs):
    """Midpoints, widths and end times of every step, in time order."""
    if not segs:
        empty = np.zeros(0)
        return empty, empty, empty
    mids, widths, ends = [], [], []
    for a, b, n in segs:
        edges = np.linspace(a, b, n + 1)
        mids.append(0.5 * (edges[:-1] + edges[1:]))
        widths.append(np.diff(edges))
        ends.append(edges[1:])
    return np.concatenate(mids), np.concatenate(widths), np.concatenate(ends)


def _kick_factor(spec_or_basis, kick: KickSpec, sign=-1.0):
    gen = _kick_generator(spec_or_basis, kick)
    return expm_hermitian_generator(gen, sign * 1j)


def _kick_generator(spec_or_basis, kick):
    basis = spec_or_basis.basis if isinstance(spec_or_basis, SystemSpec) else spec_or_basis
    e = basis.energies
    return kick.theta * np.exp(1j * kick.t0 * (e[:, None] - e[None, :])) * kick.w


def factor_stack(spec: SystemSpec, t1: float, t2: float, steps: int, sign=-1.0):
    """Short-time factors ``exp(sign * i * V_I(t_mid) h)`` and kick factors.

    Returns ``(factors, times)`` in increasing-time order; ``times[k]`` is the
    time reached after factor ``k``. Kicks sit after the step that ends at
    their time, and in list order when simultaneous. ``sign=+1`` gives the
    inverse of each factor (used for backward propagation).
    """
    n = spec.dim
    segs = segments(spec, t1, t2, steps)
    mids, widths, ends = _step_nodes(segs)
    if mids.size and not spec.terms:
        steps_f = np.broadcast_to(np.eye(n, dtype=complex), (mids.size, n, n)).copy()
    elif mids.size:
        gens = v_interaction(spec, mids) * widths[:, None, None]
        steps_f = expm_hermitian_generator(gens, sign * 1j)
    else:
        steps_f = np.zeros((0, n, n), dtype=complex)

    kicks = spec.kicks_between(t1, t2)
    if not kicks:
        return steps_f, ends

    # Kick k goes after the last step whose end time is <= t0.
    slots = np.searchsorted(ends, [k.t0 for k in kicks], side="right")
    pieces, times, start = [], [], 0
    for slot, kick in zip(slots, kicks):
        pieces.append(steps_f[start:slot])
        times.append(ends[start:slot])
        pieces.append(_kick_factor(spec, kick, sign)[None])
        times.append(np.array([kick.t0]))
        start = slot
    pieces.append(steps_f[start:])
    times.append(ends[start:])
    return np.concatenate(pieces), np.concatenate(times)


def _product(factors, dim):
    if len(factors) == 0:
        return np.eye(dim, dtype=complex)
    return ordered_product(factors)


def propagator_fixed(spec: SystemSpec, t1: float, t2: float, steps: int) -> np.ndarray:
    """Ordered step product at a fixed step count (no refinement)."""
    factors, _ = factor_stack(spec, t1, t2, steps)
    return _product(factors, spec.dim)


def _refine(compute, steps, tol, max_steps, what):
    """Double ``steps`` until successive results differ by < ``tol``."""
    current = compute(steps)
    trace = [(steps, float("nan"))]
    while True:
        if 2 * steps > max_steps:
            raise ConvergenceError(
                f"{what}: no convergence to {tol:g} within {max_steps} steps",
                trace=trace,
                iterates=(prev, current) if len(trace) > 1 else (current,),
            )
        prev = current
        steps *= 2
        current = compute(steps)
        change = frobenius_distance(prev, current)
        trace.append((steps, change))
        if change < tol:
            return current, steps, trace


def _population_trace(factors, times, psi0, t1, samples):
    targets = np.linspace(t1, times[-1] if len(times) else t1, max(samples, 1))
    idx = np.unique(np.searchsorted(times, targets, side="right") - 1)
    rows = []
    psi = psi0.copy()
    prev = -1
    for k in idx:
        if k > prev:
            psi = ordered_product(factors[prev + 1 : k + 1]) @ psi
            prev = k
        t = times[k] if k >= 0 else t1
        rows.append(np.concatenate([[t], np.abs(psi) ** 2]))
    if idx[-1] < len(factors) - 1:
        psi = ordered_product(factors[idx[-1] + 1 :]) @ psi
        rows.append(np.concatenate([[times[-1]], np.abs(psi) ** 2]))
    return np.array(rows)


def _initial_state(psi0, dim):
    if isinstance(psi0, (int, np.integer)):
        if not 0 <= psi0 < dim:
            raise UsageError(f"initial state index {psi0} out of range for dimension {dim}")
        return basis_state(int(psi0), dim)
    return as_state(psi0, dim)


def evolve_exact(
    spec: SystemSpec,
    grid: GridSpec,
    psi0=0,
    *,
    tol: float = DEFAULT_TOL,
    max_steps: int = MAX_STEPS,
    samples: int = 101,
) -> PropagationResult:
    """Time-ordered propagator as a product of midpoint step exponentials.

    Later factors multiply on the left, which is the time ordering. The step
    count starts at ``grid.steps`` and doubles until two successive
    propagators differ by less than ``tol`` in Frobenius norm.

    ``psi0`` is a basis index or an amplitude vector; it only affects the
    sampled ``population_trace``.
    """
    psi = _initial_state(psi0, spec.dim)

    def compute(steps):
        return propagator_fixed(spec, grid.t1, grid.t2, steps)

    if not spec.terms or grid.t1 == grid.t2:
        # Nothing continuous to resolve; the kick product is already exact.
        steps, trace = grid.steps, [(grid.steps, 0.0)]
        u = compute(steps)
    else:
        u, steps, trace = _refine(compute, grid.steps, tol, max_steps, "evolve_exact")

    factors, times = factor_stack(spec, grid.t1, grid.t2, steps)
    if len(factors):
        pops = _population_trace(factors, times, psi, grid.t1, samples)
    else:
        pops = np.concatenate([[grid.t1], np.abs(psi) ** 2])[None]
    return PropagationResult(u, pops, unitarity_defect(u), steps, trace)


def evolve_backward(spec: SystemSpec, grid: GridSpec, steps: int) -> np.ndarray:
    """``U(t1, t2)`` built from inverse step factors applied from ``t2`` down to ``t1``."""
    inverse, _ = factor_stack(spec, grid.t1, grid.t2, steps, sign=+1.0)
    return _product(inverse[::-1], spec.dim)


def simpson_integral(spec: SystemSpec, t1: float, t2: float, steps: int) -> np.ndarray:
    """``∫ V_I dt`` by composite Simpson, each step split at its midpoint. Kicks excluded."""
    total = np.zeros((spec.dim, spec.dim), dtype=complex)
    for a, b, n in segments(spec, t1, t2, steps):
        x = np.linspace(a, b, 2 * n + 1)
        wts = np.full(x.size, 2.0)
        wts[1::2] = 4.0
        wts[0] = wts[-1] = 1.0
        wts *= (b - a) / (6.0 * n)
        total += np.einsum("k,kij->ij", wts, v_interaction(spec, x))
    return total


def unordered_generator(
    spec: SystemSpec, grid: GridSpec, *, tol: float = DEFAULT_TOL, max_steps: int = MAX_STEPS
) -> np.ndarray:
    """``M = ∫ V_I dt`` over the grid, kicks contributing ``theta * w`` at ``t0``."""
    kicks = sum(
        (_kick_generator(spec, k) for k in spec.kicks_between(grid.t1, grid.t2)),
        np.zeros((spec.dim, spec.dim), dtype=complex),
    )
    if not spec.terms or grid.t1 == grid.t2:
        return kicks
    m, _, _ = _refine(
        lambda s: simpson_integral(spec, grid.t1, grid.t2, s),
        grid.steps,
        tol,
        max_steps,
        "evolve_unordered",
    )
    return m + kicks


def evolve_unordered(
    spec: SystemSpec, grid: GridSpec, *, tol: float = DEFAULT_TOL, max_steps: int = MAX_STEPS
) -> np.ndarray:
    """Propagator with time ordering removed: ``exp(-i ∫ V_I dt)``."""
    m = unordered_generator(spec, grid, tol=tol, max_steps=max_steps)
    # Simpson sums of Hermitian samples are Hermitian only to rounding.
    m = 0.5 * (m + m.conj().T)
    return expm_hermitian_generator(m, -1j)


def apply_kick(u_before, kick: KickSpec, basis: BasisSpec) -> np.ndarray:
    """``exp(-i theta w̃) @ u_before`` with ``w̃`` the kick generator in the interaction picture."""
    u_before = np.asarray(u_before, dtype=complex)
    if u_before.shape != (basis.dim, basis.dim) or kick.w.shape != u_before.shape:
        raise UsageError(
            f"dimension mismatch: propagator {u_before.shape}, kick {kick.w.shape}, basis {basis.dim}"
        )
    return _kick_factor(basis, kick) @ u_before


# --- Dyson series -----------------------------------------------------------

_GL_CACHE: dict = {}


def _gauss_legendre01(p):
    if p not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(p)
        _GL_CACHE[p] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[p]


def _nested(spec, a, x, order, u, w):
    """``I_m(x) = ∫_a^x V_I(s) I_{m-1}(s) ds`` with ``I_0 = 1``, for an array of ``x``.

    Each level maps ``[a, x]`` onto ``[0, 1]`` and applies Gauss-Legendre
    nodes there (collapsed coordinates on the simplex).
    """
    x = np.asarray(x, dtype=float)
    span = x - a
    s = a + span[..., None] * u
    v = v_interaction(spec, s)
    if order == 1:
        return span[..., None, None] * np.einsum("j,...jik->...ik", w, v)
    inner = _nested(spec, a, s, order - 1, u, w)
    return span[..., None, None] * np.einsum("j,...jik,...jkl->...il", w, v, inner)


def _panels(spec, grid):
    for a, b, n in segments(spec, grid.t1, grid.t2, grid.steps):
        edges = np.linspace(a, b, n + 1)
        yield from zip(edges[:-1], edges[1:])


def _elements(spec, grid):
    """Panels and kicks in time order, as ``('panel', a, b)`` / ``('kick', kick)``."""
    kicks = spec.kicks_between(grid.t1, grid.t2)
    ki = 0
    while ki < len(kicks) and kicks[ki].t0 <= grid.t1:
        yield ("kick", kicks[ki])
        ki += 1
    for a, b in _panels(spec, grid):
        yield ("panel", a, b)
        while ki < len(kicks) and kicks[ki].t0 <= b:
            yield ("kick", kicks[ki])
            ki += 1
    while ki < len(kicks):
        yield ("kick", kicks[ki])
        ki += 1


def _check_order(n):
    if int(n) != n or n < 0:
        raise UsageError(f"Dyson order must be a non-negative integer, got {n!r}")
    if n > MAX_DYSON_ORDER:
        raise UnsupportedError(f"Dyson orders above {MAX_DYSON_ORDER} are not supported (got {n})")


def dyson_terms(spec: SystemSpec, n_max: int, grid: GridSpec, nodes: int = GL_NODES) -> list:
    """Dyson terms of orders ``0..n_max`` over the grid.

    Order ``n`` is ``(-i)^n`` times the integral of ``V_I(t_n) ... V_I(t_1)``
    over ``t1 <= t_1 <= ... <= t_n <= t2``. Each panel is integrated with
    ``nodes`` Gauss-Legendre points per dimension; panels and kicks are then
    chained with ``D_k(A ∪ B) = sum_j D_j(B) D_{k-j}(A)`` for ``B`` after ``A``.
    A kick contributes ``(-i theta w̃)^j / j!``.
    """
    _check_order(n_max)
    d = spec.dim
    eye = np.eye(d, dtype=complex)
    total = [eye] + [np.zeros((d, d), dtype=complex) for _ in range(n_max)]
    if n_max == 0:
        return total
    u, w = _gauss_legendre01(nodes)
    for elem in _elements(spec, grid):
        if elem[0] == "kick":
            g = -1j * _kick_generator(spec, elem[1])
            local = [eye]
            for j in range(1, n_max + 1):
                local.append(local[-1] @ g / j)
        else:
            _, a, b = elem
            if not spec.terms:
                continue
            local = [eye] + [
                (-1j) ** m * _nested(spec, a, np.array(b), m, u, w) for m in range(1, n_max + 1)
            ]
        total = [sum(local[j] @ total[k - j] for j in range(k + 1)) for k in range(n_max + 1)]
    return total


def dyson_term(spec: SystemSpec, n: int, grid: GridSpec, nodes: int = GL_NODES) -> np.ndarray:
    return dyson_terms(spec, n, grid, nodes)[n]


def dyson_partial_sum(spec: SystemSpec, n_max: int, grid: GridSpec, nodes: int = GL_NODES) -> np.ndarray:
    return sum(dyson_terms(spec, n_max, grid, nodes))


def second_order_split(spec: SystemSpec, grid: GridSpec, nodes: int = GL_NODES):
    """Split the second Dyson term into its time-average and ΔT parts.

    Over the full square ``[t1, t2]^2``::

        tav     = (-i)^2/2 ∫∫ ½{V_I(t''), V_I(t')}                 = -M^2 / 2
        delta_t = (-i)^2/2 ∫∫ ½ sign(t'' - t') [V_I(t''), V_I(t')] = -C / 2

    where ``M = ∫ V_I`` and ``C`` is the commutator integrated over
    ``t' < t''``. ``tav + delta_t`` reproduces ``dyson_term(2)`` up to
    quadrature error; ``sign(0) = 0`` so a kick never commutes against itself.

    Returns ``(tav, delta_t)``.
    """
    d = spec.dim
    m_run = np.zeros((d, d), dtype=complex)
    c_run = np.zeros((d, d), dtype=complex)
    u, w = _gauss_legendre01(nodes)
    for elem in _elements(spec, grid):
        if elem[0] == "kick":
            m_el = _kick_generator(spec, elem[1])
            c_el = 0.0
        else:
            _, a, b = elem
            if not spec.terms:
                continue
            x = a + (b - a) * u
            v = v_interaction(spec, x)
            i1 = _nested(spec, a, x, 1, u, w)
            m_el = (b - a) * np.einsum("j,jik->ik", w, v)
            c_el = (b - a) * np.einsum("j,jik->ik", w, v @ i1 - i1 @ v)
        c_run = c_run + c_el + (m_el @ m_run - m_run @ m_el)
        m_run = m_run + m_el
    return -0.5 * (m_run @ m_run), -0.5 * c_run
