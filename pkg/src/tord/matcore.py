"""Dense complex linear algebra for small Hilbert spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Functions that
act on many matrices at once accept stacks of shape ``(..., n, n)``.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError, ValidationError

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a validated square complex matrix."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"{name}: expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name}: entries must be finite")
    return m


def as_state(v, dim=None, name="state") -> np.ndarray:
    """Return ``v`` as a normalized state vector, checking its norm to 1e-12."""
    psi = np.array(v, dtype=complex)
    if psi.ndim != 1 or psi.size < 1:
        raise ValidationError(f"{name}: expected a non-empty vector, got shape {psi.shape}")
    if dim is not None and psi.size != dim:
        raise UsageError(f"{name}: dimension {psi.size} does not match basis size {dim}")
    if not np.all(np.isfinite(psi)):
        raise ValidationError(f"{name}: amplitudes must be finite")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"{name}: norm is {norm!r}, expected 1")
    return psi


def basis_state(index: int, dim: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def _check_same_dim(a, b):
    if a.shape[-2:] != b.shape[-2:]:
        raise UsageError(f"dimension mismatch: {a.shape[-2:]} vs {b.shape[-2:]}")


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def commutator(a, b) -> np.ndarray:
    """``ab - ba``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_same_dim(a, b)
    return a @ b + b @ a


def hermiticity_defect(h) -> float:
    """Largest entry of ``|h - h†|``."""
    h = np.asarray(h, dtype=complex)
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(h - dagger(h))))


def check_hermitian(h, name="matrix", tol=HERMITIAN_TOL):
    defect = hermiticity_defect(h)
    if defect > tol:
        raise ValidationError(f"{name}: not Hermitian (max |h - h†| = {defect:.3e} > {tol:g})")


def expm_hermitian_generator(h, scale) -> np.ndarray:
    """Compute ``exp(scale * h)`` for Hermitian ``h`` by eigendecomposition.

    ``h`` may be a stack of shape ``(..., n, n)``. With ``h = Q diag(lam) Q†``
    the result is ``Q diag(exp(scale * lam)) Q†``, which is unitary to
    rounding whenever ``scale`` is purely imaginary.

    Raises
    ------
    ValidationError
        If ``h`` deviates from Hermitian by more than 1e-10 in any entry.
    """
    h = np.asarray(h, dtype=complex)
    check_hermitian(h, "generator")
    lam, q = np.linalg.eigh(h)
    phases = np.exp(complex(scale) * lam)
    return (q * phases[..., None, :]) @ dagger(q)


def frobenius_distance(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def unitarity_defect(u) -> float:
    """``‖u†u − I‖_F``."""
    u = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[-1])))


def ordered_product(factors) -> np.ndarray:
    """Product ``F[N-1] @ ... @ F[1] @ F[0]`` of a stack of factors.

    Later entries multiply on the left. The reduction is pairwise over the
    stack so it runs in ``log2(N)`` batched matmuls; the pairing is fixed, which
    keeps the result bitwise reproducible.
    """
    f = np.asarray(factors, dtype=complex)
    if f.ndim != 3:
        raise UsageError(f"expected a stack of matrices, got shape {f.shape}")
    if f.shape[0] == 0:
        raise UsageError("empty product")
    while f.shape[0] > 1:
        if f.shape[0] % 2:
            f = np.concatenate([f, np.eye(f.shape[1], dtype=complex)[None]], axis=0)
        f = f[1::2] @ f[0::2]
    return f[0]
