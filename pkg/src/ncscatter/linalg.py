"""Dense complex linear algebra kernel.

Everything downstream (defect spaces, dilations, scattering frames)
reduces to a handful of spectral primitives on complex matrices:
Hermitian square roots, orthonormal range bases, seeded random
isometries, operator norms and pseudoinverses.  They are collected
here with fixed tolerance semantics and deterministic phase
conventions so that repeated runs produce byte-identical results.

Matrices are plain ``numpy.ndarray`` objects with ``complex128``
entries.  All tolerances are relative to the largest singular value
unless stated otherwise.
"""

from __future__ import annotations

import numpy as np

TOL_RANK = 1e-10
TOL_EQ = 1e-8


class NotHermitian(ValueError):
    """Raised when a Hermitian-only operation receives a non-Hermitian matrix."""


class NotPSD(ValueError):
    """Raised when a positive-semidefinite matrix is required but an
    eigenvalue lies below the negative tolerance band."""


class DimensionError(ValueError):
    """Raised on impossible shape requests (e.g. an isometry with more
    columns than rows)."""


def as_matrix(data) -> np.ndarray:
    """Coerce to a 2-d complex128 array and reject non-finite entries."""
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got ndim={m.ndim}")
    if m.size and not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite")
    return m


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value; 0.0 for empty matrices."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitian_sqrt(m: np.ndarray, tol: float = TOL_RANK, floor_scale: float = 0.0) -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol*scale, 0)`` are rounding noise and get
    clamped to zero; anything below that band raises :class:`NotPSD`.
    ``scale`` is the operator norm of ``m``.

    ``floor_scale`` optionally zeroes all eigenvalues at or below
    ``tol*floor_scale``.  Callers that know the natural scale of the
    computation (defect operators of contractions live on scale 1, no
    matter how close to isometric the tuple is) use it so that a
    numerically-zero defect really comes out as the zero matrix
    instead of a sqrt(eps)-sized noise matrix.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"square matrix required, got {m.shape}")
    if m.size == 0:
        return np.zeros_like(m)
    scale = operator_norm(m)
    if operator_norm(m - m.conj().T) > tol * max(scale, floor_scale):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    if w[0] < -tol * max(scale, floor_scale):
        raise NotPSD(f"eigenvalue {w[0]:.3e} below the PSD tolerance band")
    w = np.where(w <= tol * floor_scale, 0.0, np.maximum(w, 0.0))
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2.0


def _fix_column_phases(q: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero coordinate is real positive."""
    q = q.copy()
    for k in range(q.shape[1]):
        col = q[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            pivot = col[nz[0]]
            q[:, k] = col * (np.conj(pivot) / np.abs(pivot))
    return q


def range_onb(m: np.ndarray, tol: float = TOL_RANK) -> np.ndarray:
    """Orthonormal basis of the column space.

    Returns an ``rows x rank`` matrix whose columns span the range of
    ``m``; rank counts singular values above ``tol`` times the largest
    one.  The phase of each column is fixed (first nonzero coordinate
    real positive) so the basis is deterministic.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError("expected a matrix")
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    rank = int(np.count_nonzero(s > tol * s[0]))
    return _fix_column_phases(u[:, :rank])


def complement_onb(q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of an isometric frame.

    ``q`` must have orthonormal columns.  The complement projector
    I - q q* has eigenvalues 0 and 1 exactly, so membership is decided
    by an eigenvalue threshold of 1/2; this stays correct even when the
    complement is empty and the projector is pure rounding noise,
    where a relative singular-value cutoff would hallucinate columns.
    """
    q = np.asarray(q, dtype=np.complex128)
    n = q.shape[0]
    p = np.eye(n, dtype=np.complex128) - q @ q.conj().T
    w, v = np.linalg.eigh((p + p.conj().T) / 2.0)
    return _fix_column_phases(v[:, w > 0.5])


def random_isometry(rows: int, cols: int, seed) -> np.ndarray:
    """Haar-ish random isometry from a seeded PCG64 stream.

    Draws a complex standard-normal matrix and orthonormalizes it by
    QR with the R-diagonal made real positive; the result satisfies
    ``v.conj().T @ v == I`` to near machine precision.  ``seed`` is an
    integer or an existing ``numpy.random.Generator``.
    """
    if cols > rows:
        raise DimensionError(f"cannot build a {rows}x{cols} isometry (cols > rows)")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r).copy()
    diag[diag == 0] = 1.0
    return q * np.conj(diag / np.abs(diag))


def pseudo_inverse(m: np.ndarray, tol: float = TOL_RANK) -> np.ndarray:
    """Moore-Penrose pseudoinverse with singular values <= tol*s_max dropped."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    inv = np.where(s > tol * s[0], 1.0 / np.where(s == 0, 1, s), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def principal_angles(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Principal angles between the column spans of two orthonormal frames.

    Uses the sine-based formula (SVD of the residual of one frame
    against the other's projector), which stays accurate for angles
    near zero where the cosine formula loses all precision.
    """
    q1 = np.asarray(q1, dtype=np.complex128)
    q2 = np.asarray(q2, dtype=np.complex128)
    if q1.shape[1] != q2.shape[1]:
        raise DimensionError("frames must have the same number of columns")
    if q1.shape[1] == 0:
        return np.zeros(0)
    resid = q2 - q1 @ (q1.conj().T @ q2)
    s = np.linalg.svd(resid, compute_uv=False)
    return np.arcsin(np.clip(s, 0.0, 1.0))
