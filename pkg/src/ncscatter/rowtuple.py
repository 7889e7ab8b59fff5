"""Tuples of operators viewed as a single row operator.

A d-tuple (T_1, ..., T_d) of n x n matrices acts as the row
[T_1 ... T_d] from the d-fold direct sum of C^n to C^n.  The row
being a contraction, a coisometry or a row isometry is what the
classifier reports.  The defect operator

    D = (I - row* row)^(1/2)

on the direct sum measures how far the tuple is from a row isometry;
its range is the defect space.  Operators with values in the defect
space are always stored in coordinates of a fixed orthonormal basis
of that range, so downstream code never drags around the ambient
d*n-dimensional representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import TOL_EQ, TOL_RANK


class NotContraction(ValueError):
    """Raised when a row contraction is required."""


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """A d-tuple of square matrices on a common space."""

    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.ops) == 0:
            raise ValueError("need at least one operator")
        mats = tuple(linalg.as_matrix(op) for op in self.ops)
        n = mats[0].shape[0]
        for m in mats:
            if m.shape != (n, n):
                raise ValueError(f"all operators must be {n}x{n}, got {m.shape}")
        object.__setattr__(self, "ops", mats)

    @property
    def d(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def row(self) -> np.ndarray:
        """The n x (d*n) block row [T_1 ... T_d]."""
        return np.hstack(self.ops)

    def op(self, j: int) -> np.ndarray:
        """Letter-indexed access, j in 1..d."""
        if not 1 <= j <= self.d:
            raise IndexError(f"letter {j} outside 1..{self.d}")
        return self.ops[j - 1]

    def word_product(self, word) -> np.ndarray:
        """T_w = T_{w_1} T_{w_2} ... T_{w_k} (left to right)."""
        out = np.eye(self.dim, dtype=np.complex128)
        for letter in word:
            out = out @ self.op(letter)
        return out


def zero_tuple(d: int, n: int) -> OperatorTuple:
    return OperatorTuple(tuple(np.zeros((n, n), dtype=np.complex128) for _ in range(d)))


@dataclass(frozen=True)
class TupleKind:
    contraction: bool
    coisometric: bool
    row_isometry: bool


def classify(t: OperatorTuple, tol: float = TOL_EQ) -> TupleKind:
    """Check the three row properties of the tuple within ``tol``."""
    row = t.row()
    gram_out = row @ row.conj().T          # sum_j T_j T_j*
    eye = np.eye(t.dim)
    coiso = linalg.operator_norm(gram_out - eye) <= tol
    if coiso:
        contraction = True
    else:
        w = np.linalg.eigvalsh((gram_out + gram_out.conj().T) / 2.0)
        contraction = bool(w[-1] <= 1.0 + tol)
    iso_violation = 0.0
    for i in range(t.d):
        for j in range(t.d):
            target = eye if i == j else np.zeros_like(eye)
            iso_violation = max(
                iso_violation,
                linalg.operator_norm(t.ops[i].conj().T @ t.ops[j] - target),
            )
    return TupleKind(contraction, coiso, iso_violation <= tol)


@dataclass(frozen=True, eq=False)
class DefectData:
    """Defect operator of a row contraction plus coordinate plumbing.

    ``operator`` is D = (I - row* row)^(1/2) on the d*n-dimensional
    direct sum, ``basis`` an orthonormal basis of its range and
    ``rank`` the defect rank.  ``coord_component(j)`` is the rank x n
    matrix of the j-th slot embedding followed by D, expressed in
    basis coordinates: it sends ell in C^n to the coordinates of
    D (0, ..., ell, ..., 0).  Its conjugate transpose realizes the
    adjoint slot map from defect coordinates back to C^n.
    """

    row_op: np.ndarray
    operator: np.ndarray
    basis: np.ndarray
    rank: int
    _components: tuple[np.ndarray, ...] = field(repr=False, compare=False)

    @property
    def d(self) -> int:
        return self.row_op.shape[1] // self.row_op.shape[0] if self.row_op.shape[0] else 0

    @property
    def dim(self) -> int:
        return self.row_op.shape[0]

    def component(self, j: int) -> np.ndarray:
        """(D)_j = D restricted to the j-th slot, ambient (d*n) x n."""
        n = self.dim
        return self.operator[:, (j - 1) * n : j * n]

    def coord_component(self, j: int) -> np.ndarray:
        return self._components[j - 1]


def psd_sqrt_clamped(gram: np.ndarray, tol_rank: float = TOL_RANK) -> np.ndarray:
    """Square root of a nearly-PSD Hermitian matrix on natural scale 1.

    Eigenvalues at or below ``tol_rank`` are zeroed, including small
    negative ones.  Used for defect operators of loaded data that may
    fail the contraction property by more than rounding; validation
    reports the violation separately instead of refusing to build.
    """
    w, v = np.linalg.eigh((gram + gram.conj().T) / 2.0)
    w = np.where(w <= tol_rank, 0.0, w)
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2.0


def defect(
    t: OperatorTuple,
    tol: float = TOL_EQ,
    tol_rank: float = TOL_RANK,
    clamp: bool = False,
) -> DefectData:
    """Defect data of a row contraction.

    Raises :class:`NotContraction` when the row norm exceeds 1 beyond
    tolerance.  Eigenvalues of I - row* row at or below the rank
    tolerance (on the natural scale 1 of a contraction) are treated as
    exact zeros, so row isometries get the zero defect and coisometric
    tuples get an exact orthogonal projection.

    With ``clamp=True`` the contraction precondition is skipped and
    negative eigenvalues are clamped, so invalid data still yields a
    usable (if meaningless) defect frame for diagnostic runs.
    """
    row = t.row()
    gram = np.eye(row.shape[1], dtype=np.complex128) - row.conj().T @ row
    if clamp:
        op = psd_sqrt_clamped(gram, tol_rank)
    else:
        if not classify(t, tol).contraction:
            raise NotContraction("row operator norm exceeds 1 beyond tolerance")
        op = linalg.hermitian_sqrt(gram, tol_rank, floor_scale=1.0)
    basis = linalg.range_onb(op, tol_rank)
    comps = tuple(
        basis.conj().T @ op[:, j * t.dim : (j + 1) * t.dim] for j in range(t.d)
    )
    return DefectData(row, op, basis, basis.shape[1], comps)
