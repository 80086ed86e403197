"""Independent reference computations used only by the tests.

None of these reuse the propagate/spectral code paths they check.
"""

import numpy as np
from scipy.linalg import expm

from tord.system import v_interaction


def rk4_amplitudes(spec, t1, t2, psi0, steps=4000):
    """Fixed-step RK4 for ``i da/dt = V_I(t) a``. Kicks are not supported."""
    assert not spec.kicks
    h = (t2 - t1) / steps
    a = np.array(psi0, dtype=complex)
    rhs = lambda t, y: -1j * (v_interaction(spec, t) @ y)
    t = t1
    for _ in range(steps):
        k1 = rhs(t, a)
        k2 = rhs(t + h / 2, a + h / 2 * k1)
        k3 = rhs(t + h / 2, a + h / 2 * k2)
        k4 = rhs(t + h, a + h * k3)
        a = a + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t1 + (_ + 1) * h
    return a


def rk4_propagator(spec, t1, t2, steps=4000):
    n = spec.dim
    return np.column_stack([rk4_amplitudes(spec, t1, t2, np.eye(n)[k], steps) for k in range(n)])


def constant_hamiltonian_propagator(energies, v, t1, t2):
    """Interaction-picture propagator for a time-independent ``H0 + V`` (closed form)."""
    e = np.asarray(energies, dtype=float)
    h = np.diag(e) + v
    return np.diag(np.exp(1j * e * t2)) @ expm(-1j * h * (t2 - t1)) @ np.diag(np.exp(-1j * e * t1))


def _samples(spec, t1, t2, nodes):
    """Midpoint samples of V_I plus kicks as unit-weight point samples."""
    h = (t2 - t1) / nodes
    t = t1 + (np.arange(nodes) + 0.5) * h
    mats = list(v_interaction(spec, t) * h) if spec.terms else []
    times = list(t) if spec.terms else []
    e = spec.basis.energies
    for k in spec.kicks:
        if t1 <= k.t0 <= t2:
            times.append(k.t0)
            mats.append(k.theta * np.exp(1j * k.t0 * (e[:, None] - e[None, :])) * k.w)
    return np.array(times), np.array(mats)


def riemann_delta_t(spec, t1, t2, nodes=400):
    """ΔT second-order term by a brute-force double midpoint sum over the square."""
    t, m = _samples(spec, t1, t2, nodes)
    sgn = np.sign(t[:, None] - t[None, :])
    ab = np.einsum("ab,aij,bjk->ik", sgn, m, m)
    ba = np.einsum("ab,bij,ajk->ik", sgn, m, m)
    return (-1j) ** 2 / 2 * 0.5 * (ab - ba)


def riemann_integral(spec, t1, t2, nodes=400):
    _, m = _samples(spec, t1, t2, nodes)
    return m.sum(axis=0)
