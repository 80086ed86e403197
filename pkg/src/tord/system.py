"""Declarative description of a driven few-level system.

The Hamiltonian is ``H(t) = H0 + V(t)`` with ``H0 = diag(E_I)`` and
``V(t) = sum_k f_k(t) w_k`` plus instantaneous kicks ``theta * w * delta(t - t0)``.
Everything is in natural units (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UsageError, ValidationError
from .matcore import as_matrix, check_hermitian

DEGENERACY_TOL = 1e-9
GAUSSIAN_CUTOFF = 8.0  # envelope treated as zero beyond t0 +- 8 sigma when splitting intervals

ENVELOPE_KINDS = ("constant", "rectangular", "gaussian", "tabulated")


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Envelope:
    """Scalar time profile ``f(t)``.

    Use the classmethod constructors rather than filling fields by hand.
    Rectangular pulses are ``amplitude`` on ``[t_on, t_off)``; Gaussians are
    ``amplitude * exp(-(t - t0)**2 / (2 sigma**2))``; tabulated profiles
    interpolate linearly between samples and vanish outside them.
    """

    kind: str
    amplitude: float = 1.0
    t_on: float | None = None
    t_off: float | None = None
    t0: float | None = None
    sigma: float | None = None
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ValidationError(f"envelope kind must be one of {ENVELOPE_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValidationError("envelope amplitude must be finite")
        if self.kind == "rectangular":
            if self.t_on is None or self.t_off is None or not self.t_on < self.t_off:
                raise ValidationError("rectangular envelope needs t_on < t_off")
        elif self.kind == "gaussian":
            if self.t0 is None or self.sigma is None:
                raise ValidationError("gaussian envelope needs t0 and sigma")
            if not self.sigma > 0:
                raise ValidationError("gaussian envelope needs sigma > 0")
        elif self.kind == "tabulated":
            if self.times is None or self.values is None:
                raise ValidationError("tabulated envelope needs times and values")
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValidationError("tabulated envelope needs matching 1-D times/values (>= 2 samples)")
            if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
                raise ValidationError("tabulated samples must be finite")
            if np.any(np.diff(t) <= 0):
                raise ValidationError("tabulated times must be strictly increasing")
            object.__setattr__(self, "times", _frozen(t))
            object.__setattr__(self, "values", _frozen(v))

    @classmethod
    def constant(cls, amplitude=1.0):
        return cls("constant", float(amplitude))

    @classmethod
    def rectangular(cls, amplitude, t_on, t_off):
        return cls("rectangular", float(amplitude), t_on=float(t_on), t_off=float(t_off))

    @classmethod
    def gaussian(cls, amplitude, t0, sigma):
        return cls("gaussian", float(amplitude), t0=float(t0), sigma=float(sigma))

    @classmethod
    def tabulated(cls, times, values, amplitude=1.0):
        return cls("tabulated", float(amplitude), times=times, values=values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a = self.amplitude
        if self.kind == "constant":
            return np.full(t.shape, a)
        if self.kind == "rectangular":
            return np.where((t >= self.t_on) & (t < self.t_off), a, 0.0)
        if self.kind == "gaussian":
            return a * np.exp(-0.5 * ((t - self.t0) / self.sigma) ** 2)
        return a * np.interp(t, self.times, self.values, left=0.0, right=0.0)

    def support(self):
        """``(lo, hi)`` outside which the envelope is (numerically) zero, or None."""
        if self.kind == "constant":
            return None
        if self.kind == "rectangular":
            return self.t_on, self.t_off
        if self.kind == "gaussian":
            half = GAUSSIAN_CUTOFF * self.sigma
            return self.t0 - half, self.t0 + half
        return float(self.times[0]), float(self.times[-1])

    def breakpoints(self):
        """Times where the envelope is not smooth (or, for a Gaussian, its peak and cutoffs)."""
        if self.kind == "constant":
            return ()
        if self.kind == "rectangular":
            return self.t_on, self.t_off
        if self.kind == "gaussian":
            lo, hi = self.support()
            return lo, self.t0, hi
        return tuple(float(x) for x in self.times)


@dataclass(frozen=True)
class BasisSpec:
    labels: tuple
    energies: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or len(labels) != e.size or e.size < 1:
            raise ValidationError("basis: labels and energies must have equal length >= 1")
        if not np.all(np.isfinite(e)):
            raise ValidationError("basis: energies must be finite")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "energies", _frozen(e))

    @classmethod
    def from_energies(cls, energies: Sequence[float]):
        return cls(tuple(str(i + 1) for i in range(len(energies))), energies)

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class CouplingTerm:
    envelope: Envelope
    w: np.ndarray

    def __post_init__(self):
        w = as_matrix(self.w, "coupling matrix")
        check_hermitian(w, "coupling matrix")
        object.__setattr__(self, "w", _frozen(w))


@dataclass(frozen=True)
class KickSpec:
    """Instantaneous interaction ``theta * w * delta(t - t0)``."""

    t0: float
    theta: float
    w: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.theta)):
            raise ValidationError("kick time and strength must be finite")
        w = as_matrix(self.w, "kick generator")
        check_hermitian(w, "kick generator")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "w", _frozen(w))


@dataclass(frozen=True)
class SystemSpec:
    basis: BasisSpec
    terms: tuple = ()
    kicks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "kicks", tuple(self.kicks))
        n = self.basis.dim
        for i, term in enumerate(self.terms):
            if term.w.shape != (n, n):
                raise ValidationError(f"terms[{i}]: matrix is {term.w.shape}, basis size is {n}")
        for i, kick in enumerate(self.kicks):
            if kick.w.shape != (n, n):
                raise ValidationError(f"kicks[{i}]: matrix is {kick.w.shape}, basis size is {n}")
        times = [k.t0 for k in self.kicks]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValidationError("kicks must be sorted by time")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def phases(self, t):
        """``exp(i (E_I - E_J) t)`` for scalar or array ``t``; shape ``(..., n, n)``."""
        e = self.basis.energies
        t = np.asarray(t, dtype=float)
        gap = e[:, None] - e[None, :]
        return np.exp(1j * t[..., None, None] * gap)

    def breakpoints(self):
        pts = set()
        for term in self.terms:
            pts.update(term.envelope.breakpoints())
        pts.update(k.t0 for k in self.kicks)
        return sorted(pts)

    def kicks_between(self, t1, t2):
        return [k for k in self.kicks if t1 <= k.t0 <= t2]

    def kick_generator(self, kick: KickSpec) -> np.ndarray:
        """``theta * w`` conjugated into the interaction picture at the kick time."""
        return kick.theta * self.phases(kick.t0) * kick.w


def v_schrodinger(spec: SystemSpec, t) -> np.ndarray:
    """Continuous interaction ``sum_k f_k(t) w_k``; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    n = spec.dim
    v = np.zeros(t.shape + (n, n), dtype=complex)
    for term in spec.terms:
        v = v + term.envelope(t)[..., None, None] * term.w
    return v


def v_interaction(spec: SystemSpec, t) -> np.ndarray:
    """``exp(iH0 t) V(t) exp(-iH0 t)``; entry ``(I, J)`` picks up ``exp(i (E_I - E_J) t)``."""
    return spec.phases(t) * v_schrodinger(spec, t)


@dataclass(frozen=True)
class DegeneracyReport:
    classes: tuple
    fully_degenerate: bool


def classify_degeneracy(basis: BasisSpec, tol: float = DEGENERACY_TOL) -> DegeneracyReport:
    """Group basis indices into classes of (near) equal energy.

    Energies are swept in sorted order; neighbours closer than ``tol`` join
    the same class, so the grouping is transitively closed. Classes are
    ordered by energy and hold sorted indices.
    """
    if not tol > 0:
        raise UsageError("degeneracy tolerance must be positive")
    e = basis.energies
    order = np.argsort(e, kind="stable")
    classes = [[int(order[0])]]
    for prev, cur in zip(order, order[1:]):
        if e[cur] - e[prev] <= tol:
            classes[-1].append(int(cur))
        else:
            classes.append([int(cur)])
    classes = tuple(tuple(sorted(c)) for c in classes)
    return DegeneracyReport(classes, len(classes) == 1)


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=50):
    """Adaptive Simpson quadrature of a scalar function with absolute tolerance ``tol``."""
    if a == b:
        return 0.0

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb = float(f(a)), float(f(b))
    m = 0.5 * (a + b)
    fm = float(f(m))
    total = 0.0
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = float(f(lm)), float(f(rm))
        left = simpson(flo, flm, fmid, lo, mid)
        right = simpson(fmid, frm, fhi, mid, hi)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return total


def pulse_area(env: Envelope, t1: float, t2: float) -> float:
    """Phase area ``∫ f(t) dt`` over ``[t1, t2]``.

    Constant and rectangular envelopes use their closed forms. Otherwise the
    interval is split at the envelope's breakpoints and each piece goes
    through adaptive Simpson with a shared absolute tolerance of 1e-10.
    """
    if t2 < t1:
        raise UsageError("pulse_area needs t1 <= t2")
    if t1 == t2:
        return 0.0
    if env.kind == "constant":
        return env.amplitude * (t2 - t1)
    if env.kind == "rectangular":
        overlap = min(t2, env.t_off) - max(t1, env.t_on)
        return env.amplitude * max(overlap, 0.0)
    cuts = [t1] + [p for p in env.breakpoints() if t1 < p < t2] + [t2]
    tol = 1e-10 / (len(cuts) - 1)
    scalar = lambda t: env(t)[()]
    return sum(adaptive_simpson(scalar, a, b, tol) for a, b in zip(cuts, cuts[1:]))
