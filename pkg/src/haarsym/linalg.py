"""Dense complex linear algebra primitives shared by all modules.

Everything here operates on plain ``numpy`` arrays: matrices are
``complex128`` of shape ``(d, d)`` and pure states are ``complex128``
vectors of shape ``(d,)``.  Validation helpers enforce the invariants
(finiteness, unitarity, normalization) at construction boundaries.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .exceptions import DimensionMismatchError, SizeGuardError

# Desk-scale guards: the target experiments are U(4), so nothing here
# needs sparse machinery.
MAX_DIM = 16
MAX_TENSOR_DIM = 4096

UNITARY_ATOL = 1e-10
STATE_ATOL = 1e-10
PRODUCT_ATOL = 1e-9


def as_complex_matrix(matrix) -> np.ndarray:
    """Coerce to a finite complex128 2-D array."""
    m = np.ascontiguousarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def as_state_vector(vector, atol: float = STATE_ATOL) -> np.ndarray:
    """Coerce to a normalized complex128 vector (norm 1 within ``atol``)."""
    v = np.ascontiguousarray(vector, dtype=complex)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D state vector, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("state vector contains NaN or Inf entries")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state vector norm {norm!r} deviates from 1 beyond {atol}")
    return v


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Entrywise max-norm distance, the metric used by all group checks."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def is_unitary(matrix: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    eye = np.eye(m.shape[0])
    return max_abs_diff(m.conj().T @ m, eye) <= atol


def check_unitary(matrix, atol: float = UNITARY_ATOL, what: str = "matrix") -> np.ndarray:
    m = as_complex_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} is not square: shape {m.shape}")
    dev = max_abs_diff(m.conj().T @ m, np.eye(m.shape[0]))
    if dev > atol:
        raise ValueError(f"{what} is not unitary: max |U†U - I| = {dev:.3e} > {atol}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product of two complex matrices."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def fidelity(psi, phi) -> float:
    """|<psi|phi>|^2 between pure states.

    Symmetric in its arguments and invariant under a global phase of
    either argument; clamped into [0, 1] against roundoff.
    """
    p = np.asarray(psi, dtype=complex)
    q = np.asarray(phi, dtype=complex)
    if p.shape != q.shape:
        raise DimensionMismatchError(
            f"fidelity between states of dims {p.shape} and {q.shape}"
        )
    value = abs(np.vdot(p, q)) ** 2
    return float(min(value, 1.0))


def symmetric_projector(d: int, t: int) -> np.ndarray:
    """Orthogonal projector onto the symmetric subspace of (C^d)^{⊗t}.

    Built by averaging all t! tensor-factor permutation operators, which
    is exact and easy to audit at the small t this library targets.  The
    trace equals C(d+t-1, t).
    """
    if d < 1 or t < 1:
        raise ValueError("d and t must be positive")
    dim = d**t
    if dim > MAX_TENSOR_DIM:
        raise SizeGuardError(f"d**t = {dim} exceeds dense guard {MAX_TENSOR_DIM}")
    # Row j of `digits` holds the base-d digits of j, most significant first,
    # matching C-order reshape of the tensor factors.
    digits = np.array(list(np.ndindex(*(d,) * t)), dtype=np.int64)
    pows = d ** np.arange(t - 1, -1, -1, dtype=np.int64)
    cols = np.arange(dim)
    proj = np.zeros((dim, dim), dtype=complex)
    for perm in itertools.permutations(range(t)):
        rows = digits[:, perm] @ pows
        proj[rows, cols] += 1.0
    proj /= math.factorial(t)
    return proj


def symmetric_subspace_dim(d: int, t: int) -> int:
    """C(d+t-1, t), the trace of :func:`symmetric_projector`."""
    return math.comb(d + t - 1, t)
