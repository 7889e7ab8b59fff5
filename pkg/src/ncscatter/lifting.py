"""Coisometric liftings of coisometric row tuples.

A lifting instance packages a coisometric d-tuple C on a base space
H_C together with a lower-triangular coisometric extension

    E_j = [[C_j, 0   ],
           [B_j, A_j ]]     on  H_C (+) H_A.

Coisometry of the row E forces two block identities,

    sum_j C_j B_j* = 0        and        B B* = I - A A*,

and guarantees an isometry ``gamma`` from the range of the star
defect D* = (I - A A*)^(1/2) into the defect space of C with
``gamma D* = B*`` (B* maps H_A into the d-fold sum of H_C copies).
``assemble`` validates all of this; ``generate`` draws random valid
instances from a seeded stream by running the construction backwards:
pick C coisometric, pick a strictly contractive A, pick gamma at
random, then let B be whatever the identity dictates.

Stored coordinates: every operator with values in a defect space is
kept in the coordinates of the corresponding orthonormal defect
basis, never in the ambient d*n-dimensional representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import TOL_EQ, TOL_RANK
from .rowtuple import DefectData, OperatorTuple, defect, psd_sqrt_clamped


class NotCoisometricC(ValueError):
    """The base tuple fails row coisometry."""


class NotCoisometricE(ValueError):
    """The assembled lifting fails row coisometry; the message names
    the violated block identity."""


class GammaUndefined(ValueError):
    """B* does not vanish on the kernel of the star defect, so no
    isometry gamma with gamma D* = B* can exist."""


class Infeasible(ValueError):
    """Requested dimensions admit no valid instance: the star defect
    rank exceeds the defect rank (d-1)*dimC of the base tuple."""


@dataclass(frozen=True, eq=False)
class LiftingInstance:
    """A validated coisometric lifting with precomputed defect data.

    ``b`` holds the d coupling blocks B_j (dimA x dimC each), ``e``
    the assembled block tuple.  ``gamma`` is stored as a matrix from
    star-defect coordinates to base-defect coordinates; ``dstar`` and
    ``dstar_basis`` live on H_A.
    """

    c: OperatorTuple
    a: OperatorTuple
    b: tuple[np.ndarray, ...]
    e: OperatorTuple
    defect_c: DefectData
    defect_e: DefectData
    dstar: np.ndarray
    dstar_basis: np.ndarray
    gamma: np.ndarray
    seed: int | None = None

    @property
    def d(self) -> int:
        return self.c.d

    @property
    def dim_c(self) -> int:
        return self.c.dim

    @property
    def dim_a(self) -> int:
        return self.a.dim

    @property
    def dim_e(self) -> int:
        return self.e.dim

    @property
    def rank_c(self) -> int:
        return self.defect_c.rank

    @property
    def rank_e(self) -> int:
        return self.defect_e.rank

    @property
    def rank_star(self) -> int:
        return self.dstar_basis.shape[1]

    def b_row(self) -> np.ndarray:
        """[B_1 ... B_d] : d-fold sum of H_C copies -> H_A."""
        return np.hstack(self.b)

    def b_star(self) -> np.ndarray:
        """Stacked adjoint (d*dimC) x dimA, sending h_a to (B_j* h_a)_j."""
        return self.b_row().conj().T


def _block_lifting_ops(c: OperatorTuple, a: OperatorTuple, b) -> OperatorTuple:
    nc, na = c.dim, a.dim
    ops = []
    for j in range(c.d):
        m = np.zeros((nc + na, nc + na), dtype=np.complex128)
        m[:nc, :nc] = c.ops[j]
        m[nc:, :nc] = b[j]
        m[nc:, nc:] = a.ops[j]
        ops.append(m)
    return OperatorTuple(tuple(ops))


def gamma_isometry(
    defect_c_basis: np.ndarray,
    dstar: np.ndarray,
    dstar_basis: np.ndarray,
    bstar: np.ndarray,
    tol: float = TOL_EQ,
    strict: bool = True,
) -> np.ndarray:
    """Solve gamma D* = B* for the defect-coordinate matrix of gamma.

    The restriction of D* to its range is invertible, so gamma is the
    coefficient matrix of B* against the defect bases composed with
    that inverse.  Well-definedness requires B* to kill the kernel of
    D*; in strict mode a violation raises :class:`GammaUndefined`.
    """
    qs = dstar_basis
    kernel = linalg.complement_onb(qs)
    if kernel.shape[1]:
        leak = linalg.operator_norm(bstar @ kernel)
        if strict and leak > tol:
            raise GammaUndefined(
                f"B* does not vanish on ker D* (leak {leak:.3e} > {tol:.1e})"
            )
    restricted = qs.conj().T @ dstar @ qs
    return defect_c_basis.conj().T @ bstar @ qs @ linalg.pseudo_inverse(restricted)


def extract_gamma(instance: LiftingInstance, tol: float = TOL_EQ) -> np.ndarray:
    """Recover gamma from the stored blocks (see :func:`gamma_isometry`)."""
    return gamma_isometry(
        instance.defect_c.basis,
        instance.dstar,
        instance.dstar_basis,
        instance.b_star(),
        tol,
    )


def lifting_violations(instance: LiftingInstance) -> dict[str, float]:
    """Numerical size of every defining identity of the instance.

    Keys: ``c_coisometry``, ``cross_block`` (sum C_j B_j* = 0),
    ``complement_block`` (B B* + A A* = I), ``e_coisometry``,
    ``gamma_isometry``, ``gamma_intertwine`` (gamma D* = B*) and
    ``gamma_kernel`` (B* vanishes on ker D*).
    """
    c_row = instance.c.row()
    e_row = instance.e.row()
    a_row = instance.a.row()
    b_row = instance.b_row()
    eye_c = np.eye(instance.dim_c)
    eye_a = np.eye(instance.dim_a)
    cross = sum(
        instance.c.ops[j] @ instance.b[j].conj().T for j in range(instance.d)
    )
    out = {
        "c_coisometry": linalg.operator_norm(c_row @ c_row.conj().T - eye_c),
        "cross_block": linalg.operator_norm(cross),
        "complement_block": linalg.operator_norm(
            b_row @ b_row.conj().T + a_row @ a_row.conj().T - eye_a
        ),
        "e_coisometry": linalg.operator_norm(
            e_row @ e_row.conj().T - np.eye(instance.dim_e)
        ),
    }
    g = instance.gamma
    out["gamma_isometry"] = linalg.operator_norm(
        g.conj().T @ g - np.eye(g.shape[1])
    )
    lifted = instance.defect_c.basis @ g @ (
        instance.dstar_basis.conj().T @ instance.dstar
    )
    out["gamma_intertwine"] = linalg.operator_norm(lifted - instance.b_star())
    kernel = linalg.complement_onb(instance.dstar_basis)
    out["gamma_kernel"] = (
        linalg.operator_norm(instance.b_star() @ kernel) if kernel.shape[1] else 0.0
    )
    return out


def assemble(
    c: OperatorTuple,
    a: OperatorTuple,
    b,
    tol: float = TOL_EQ,
    seed: int | None = None,
    strict: bool = True,
) -> LiftingInstance:
    """Build and validate a lifting instance from its three blocks.

    In strict mode any violated identity raises the matching error
    (:class:`NotCoisometricC`, :class:`NotCoisometricE`,
    :class:`GammaUndefined`).  With ``strict=False`` the instance is
    built regardless so its violations can be measured and reported;
    defect operators are then computed with clamped spectra.
    """
    if a.d != c.d:
        raise ValueError(f"C has {c.d} operators but A has {a.d}")
    b = tuple(linalg.as_matrix(m) for m in b)
    if len(b) != c.d:
        raise ValueError(f"expected {c.d} coupling blocks, got {len(b)}")
    for m in b:
        if m.shape != (a.dim, c.dim):
            raise ValueError(
                f"coupling blocks must be {a.dim}x{c.dim}, got {m.shape}"
            )

    c_row = c.row()
    c_viol = linalg.operator_norm(c_row @ c_row.conj().T - np.eye(c.dim))
    if strict and c_viol > tol:
        raise NotCoisometricC(f"sum C_j C_j* - I has norm {c_viol:.3e}")

    e = _block_lifting_ops(c, a, b)
    if strict:
        cross = sum(c.ops[j] @ b[j].conj().T for j in range(c.d))
        cross_viol = linalg.operator_norm(cross)
        if cross_viol > tol:
            raise NotCoisometricE(
                f"sum C_j B_j* has norm {cross_viol:.3e}, should vanish"
            )
        b_row = np.hstack(b)
        a_row = a.row()
        comp_viol = linalg.operator_norm(
            b_row @ b_row.conj().T + a_row @ a_row.conj().T - np.eye(a.dim)
        )
        if comp_viol > tol:
            raise NotCoisometricE(f"B B* + A A* - I has norm {comp_viol:.3e}")

    defect_c = defect(c, tol, clamp=not strict)
    defect_e = defect(e, tol, clamp=not strict)
    a_row = a.row()
    star_gram = np.eye(a.dim, dtype=np.complex128) - a_row @ a_row.conj().T
    if strict:
        dstar = linalg.hermitian_sqrt(star_gram, TOL_RANK, floor_scale=1.0)
    else:
        dstar = psd_sqrt_clamped(star_gram)
    dstar_basis = linalg.range_onb(dstar)
    bstar = np.hstack(b).conj().T
    gamma = gamma_isometry(defect_c.basis, dstar, dstar_basis, bstar, tol, strict)

    inst = LiftingInstance(c, a, b, e, defect_c, defect_e, dstar, dstar_basis, gamma, seed)
    if strict:
        viols = lifting_violations(inst)
        worst = max(viols, key=viols.get)
        if viols[worst] > tol:
            raise NotCoisometricE(f"identity {worst} violated by {viols[worst]:.3e}")
    return inst


def generate(
    d: int,
    dim_c: int,
    dim_a: int,
    seed: int,
    a_scale: float = 0.9,
    tol: float = TOL_EQ,
) -> LiftingInstance:
    """Draw a random valid instance from a seeded PCG64 stream.

    C is the adjoint of a random isometry (hence exactly coisometric),
    A is a random tuple scaled to row norm ``a_scale`` (strictly less
    than 1 keeps the star defect full rank, 0 gives A = 0), gamma is a
    random isometry between the defect frames, and B is forced by
    B = (gamma D*)*.  Raises :class:`Infeasible` when the star defect
    rank exceeds (d-1)*dimC.
    """
    if d < 1:
        raise ValueError("need at least one operator")
    if dim_c < 1:
        raise ValueError("base dimension must be positive")
    if dim_a < 0:
        raise ValueError("corner dimension must be nonnegative")
    if not 0.0 <= a_scale <= 1.0:
        raise ValueError("a_scale must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    cstar = linalg.random_isometry(d * dim_c, dim_c, rng)
    c = OperatorTuple(
        tuple(cstar[j * dim_c : (j + 1) * dim_c, :].conj().T for j in range(d))
    )

    if dim_a == 0:
        a = OperatorTuple(tuple(np.zeros((0, 0)) for _ in range(d)))
        b = tuple(np.zeros((0, dim_c)) for _ in range(d))
        return assemble(c, a, b, tol, seed=seed)

    raw = rng.standard_normal((dim_a, d * dim_a)) + 1j * rng.standard_normal(
        (dim_a, d * dim_a)
    )
    norm = linalg.operator_norm(raw)
    a_row = raw * (a_scale / norm) if a_scale > 0 and norm > 0 else np.zeros_like(raw)
    a = OperatorTuple(
        tuple(a_row[:, j * dim_a : (j + 1) * dim_a] for j in range(d))
    )

    star_gram = np.eye(dim_a, dtype=np.complex128) - a_row @ a_row.conj().T
    dstar = linalg.hermitian_sqrt(star_gram, TOL_RANK, floor_scale=1.0)
    dstar_basis = linalg.range_onb(dstar)
    rank_star = dstar_basis.shape[1]

    defect_c = defect(c, tol)
    if rank_star > defect_c.rank:
        raise Infeasible(
            f"star defect rank {rank_star} exceeds base defect rank "
            f"{defect_c.rank} = (d-1)*dimC; no isometry gamma exists"
        )
    gamma = linalg.random_isometry(defect_c.rank, rank_star, rng)

    bstar = defect_c.basis @ gamma @ (dstar_basis.conj().T @ dstar)
    b = tuple(
        bstar[j * dim_c : (j + 1) * dim_c, :].conj().T for j in range(d)
    )
    return assemble(c, a, b, tol, seed=seed)


def lifting_block_violation(e: OperatorTuple, dim_c: int) -> float:
    """Largest norm of the forbidden upper-right block of any E_j.

    The lifting property says the base space is co-invariant: each
    E_j must map H_A into H_A, so the H_A -> H_C corner has to vanish.
    """
    worst = 0.0
    for op in e.ops:
        worst = max(worst, linalg.operator_norm(op[:dim_c, dim_c:]))
    return worst


def lifting_property_check(instance: LiftingInstance, tol: float = TOL_EQ):
    """Verify the block structure of E against the stored C, A, B."""
    nc = instance.dim_c
    worst = lifting_block_violation(instance.e, nc)
    for j in range(instance.d):
        op = instance.e.ops[j]
        worst = max(
            worst,
            linalg.operator_norm(op[:nc, :nc] - instance.c.ops[j]),
            linalg.operator_norm(op[nc:, :nc] - instance.b[j]),
            linalg.operator_norm(op[nc:, nc:] - instance.a.ops[j]),
        )
    return worst <= tol, worst
