"""Energy-domain transforms of the step and sign functions.

For an energy offset ``x = E0 - E`` and regulator ``eta > 0``::

    ∫_0^∞ exp(-i x τ - η τ) dτ = 1 / (η + i x) = η/(x² + η²) - i x/(x² + η²)

The first piece tends to ``π δ(x)``, the second to ``P 1/x`` as η → 0⁺. The
sign function alone gives the principal-value piece:
``(i/2) ∫ sign(τ) exp(-i x τ - η|τ|) dτ = x/(x² + η²)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, UnsupportedError, UsageError, ValidationError
from .system import Envelope

TRANSFORM_TOL = 1e-8
PV_WINDOW = 10.0  # principal-value comparisons skip |x| <= PV_WINDOW * eta
PANEL_NODES = 16


@dataclass(frozen=True)
class SpectralResult:
    """Numeric step-function transform with its closed-form Sokhotsky split.

    ``values`` is the numerically integrated transform; ``delta_part`` and
    ``pv_part`` are ``η/(x²+η²)`` and ``x/(x²+η²)`` so that the exact value is
    ``delta_part - 1j * pv_part``. ``tail_bound`` bounds the truncated tail.
    """

    eta: float
    x: np.ndarray
    values: np.ndarray
    delta_part: np.ndarray
    pv_part: np.ndarray
    t_max: float
    tail_bound: float


def energy_grid(values) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValidationError("energy grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise ValidationError("energy grid must be finite")
    if np.any(np.diff(x) <= 0):
        raise ValidationError("energy grid must be strictly increasing")
    return x


def auto_t_max(x, eta, tol=TRANSFORM_TOL) -> float:
    """Cut-off long enough that the neglected tail ``exp(-η T)/η`` stays below ``tol/10``."""
    xmax = float(np.max(np.abs(x))) if np.size(x) else 0.0
    t = max(20.0 / eta, math.log(10.0 / (eta * tol)) / eta)
    if xmax > 0:
        t = max(t, 200.0 / xmax)
    return t


def _check(eta, t_max):
    if not eta > 0:
        raise UsageError("eta must be positive")
    if t_max * eta < 20.0:
        raise UsageError(f"t_max * eta = {t_max * eta:g} < 20; tail is not negligible")


def _panels(x_abs, eta, t_max, nodes=PANEL_NODES):
    """Gauss-Legendre nodes/weights on ``[0, t_max]``, one panel per period (or decay length)."""
    length = 2.0 / eta
    if x_abs > 0:
        length = min(length, 2.0 * math.pi / x_abs)
    n_panels = max(1, math.ceil(t_max / length))
    g, gw = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.0, t_max, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    tau = (mid[:, None] + half[:, None] * g).ravel()
    wts = (half[:, None] * gw).ravel()
    return tau, wts


def _tail_bound(x, eta, t_max):
    return math.exp(-eta * t_max) / float(np.min(np.hypot(x, eta)))


def _guard_tail(x, eta, t_max, tol):
    bound = _tail_bound(x, eta, t_max)
    if bound > tol:
        raise ConvergenceError(
            f"tail truncation estimate {bound:.3e} exceeds {tol:g}; increase t_max",
            trace=[(t_max, bound)],
        )
    return bound


def theta_transform(grid, eta: float, t_max: float | None = None, tol: float = TRANSFORM_TOL) -> SpectralResult:
    """``∫_0^{t_max} exp(-i x τ) exp(-η τ) dτ`` for every ``x`` in ``grid``."""
    x = energy_grid(grid)
    if not eta > 0:
        raise UsageError("eta must be positive")
    if t_max is None:
        t_max = auto_t_max(x, eta, tol)
    _check(eta, t_max)
    bound = _guard_tail(x, eta, t_max, tol)
    values = np.empty(x.size, dtype=complex)
    for i, xi in enumerate(x):
        tau, wts = _panels(abs(xi), eta, t_max)
        values[i] = np.dot(wts, np.exp(-(eta + 1j * xi) * tau))
    denom = x * x + eta * eta
    return SpectralResult(float(eta), x, values, eta / denom, x / denom, float(t_max), bound)


def sign_transform(grid, eta: float, t_max: float | None = None, tol: float = TRANSFORM_TOL) -> np.ndarray:
    """``(i/2) ∫_{-t_max}^{t_max} sign(τ) exp(-i x τ) exp(-η|τ|) dτ``, which is real.

    The two half-lines are folded onto ``[0, t_max]`` with mirrored nodes, so
    the result is exactly odd in ``x`` and exactly zero at ``x = 0``.
    """
    x = energy_grid(grid)
    if not eta > 0:
        raise UsageError("eta must be positive")
    if t_max is None:
        t_max = auto_t_max(x, eta, tol)
    _check(eta, t_max)
    _guard_tail(x, eta, t_max, tol)
    out = np.empty(x.size)
    for i, xi in enumerate(x):
        tau, wts = _panels(abs(xi), eta, t_max)
        decay = wts * np.exp(-eta * tau)
        # τ > 0 contributes exp(-i x τ), τ < 0 contributes -exp(+i x τ): (i/2)(-2i sin) = sin.
        out[i] = np.dot(decay, np.sin(xi * tau))
    return out


def lorentzian_mass(eta: float, lo: float, hi: float) -> float:
    """``∫_lo^hi η/(x² + η²) dx`` by adaptive quadrature (pole handled as a breakpoint)."""
    f = lambda t: eta / (t * t + eta * eta)
    pts = [0.0] if lo < 0.0 < hi else None
    val, _ = integrate.quad(f, lo, hi, points=pts, limit=500, epsabs=1e-13, epsrel=1e-12)
    return val


@dataclass(frozen=True)
class EtaSweepRow:
    eta: float
    lorentzian_mass: float
    pv_deviation: float
    result: SpectralResult


def off_pole(x, eta):
    return np.abs(x) > PV_WINDOW * eta


def eta_sweep(grid, etas, tol: float = TRANSFORM_TOL) -> list:
    """One row per η: Lorentzian mass over the grid span and the largest
    ``|pv_part - 1/x|`` on off-pole grid points (nan if there are none)."""
    x = energy_grid(grid)
    etas = [float(e) for e in etas]
    if not etas or any(e <= 0 for e in etas):
        raise UsageError("etas must be a non-empty list of positive values")
    if any(b >= a for a, b in zip(etas, etas[1:])):
        raise UsageError("etas must be strictly decreasing")
    rows = []
    for eta in etas:
        res = theta_transform(x, eta, tol=tol)
        mask = off_pole(x, eta)
        dev = float(np.max(np.abs(res.pv_part[mask] - 1.0 / x[mask]))) if mask.any() else float("nan")
        rows.append(EtaSweepRow(eta, lorentzian_mass(eta, x[0], x[-1]), dev, res))
    return rows


# --- band-width product -----------------------------------------------------

_SAMPLES = 2048
_OVERSAMPLE = 8


def _window(env: Envelope):
    if env.kind == "constant":
        raise UnsupportedError("constant envelope has infinite support; band-width product undefined")
    if env.kind == "gaussian":
        return env.t0 - 12.0 * env.sigma, env.t0 + 12.0 * env.sigma
    return env.support()


def _rms(axis, density):
    p = density / density.sum()
    mean = np.dot(p, axis)
    return math.sqrt(max(np.dot(p, (axis - mean) ** 2), 0.0))


def bandwidth_product(env: Envelope) -> float:
    """rms width of ``|f(t)|²`` times rms width of ``|F(ν)|²`` (ν in ordinary frequency).

    ``f`` is sampled at ``2048`` points across its support and zero padded to
    ``8x`` that length before the FFT. For non-smooth envelopes (rectangular)
    the spectral second moment diverges in the continuum limit, so the result
    is specific to this sampling.
    """
    lo, hi = _window(env)
    t = np.linspace(lo, hi, _SAMPLES)
    f = env(t)
    if env.kind == "rectangular":
        f = np.full(t.shape, env.amplitude)  # closed support, both edges included
    if not np.any(f):
        raise UnsupportedError("envelope vanishes identically")
    dt = t[1] - t[0]
    n_fft = _OVERSAMPLE * _SAMPLES
    spec = np.fft.fftshift(np.fft.fft(f, n_fft))
    nu = np.fft.fftshift(np.fft.fftfreq(n_fft, dt))
    return _rms(t, np.abs(f) ** 2) * _rms(nu, np.abs(spec) ** 2)
