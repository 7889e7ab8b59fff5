"""Outgoing scattering structure of a lifted dilation.

Removing the base space from the lifted dilation space leaves the
corner-plus-Fock part, which the lifted dilation maps into itself
because the lifting is block triangular.  Restricted there, the
dilation is a row isometry with two distinguished wandering
subspaces:

* the vacuum copy of the lifted defect space, whose translates under
  dilation words tile every Fock level (the shift part), and
* the image of the vacuum base-defect copy under the adjoint
  intertwiner (the star-wandering part), which is exactly the
  orthogonal complement of the translates of the whole corner part.

Every function here measures one piece of that decomposition at a
finite truncation depth, where all of it holds exactly.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .dilation import Dilation, GradedVector
from .intertwiner import apply_intertwiner_adjoint, lift_space
from .lifting import LiftingInstance
from .words import Word


class DepthError(ValueError):
    """Requested word lengths do not fit inside the truncation depth."""


def star_wandering_frame(instance: LiftingInstance, depth: int) -> np.ndarray:
    """Adjoint-intertwiner image of the vacuum base-defect copy.

    Returns flat lifted-space coordinates, one column per base-defect
    basis vector.  The columns are orthonormal (the adjoint is an
    isometry) and their base-space rows vanish up to rounding; see
    :func:`base_leak`.
    """
    batch = GradedVector(
        depth, None, {(): np.eye(instance.rank_c, dtype=np.complex128)}
    )
    out = apply_intertwiner_adjoint(instance, batch)
    return lift_space(instance, depth).flatten(out, width=instance.rank_c)


def base_leak(instance: LiftingInstance, depth: int) -> float:
    """Norm of the base-space rows of the star-wandering frame."""
    frame = star_wandering_frame(instance, depth)
    return linalg.operator_norm(frame[: instance.dim_c])


def corner_rows(instance: LiftingInstance, depth: int) -> np.ndarray:
    """Flat row indices of the corner-plus-Fock part."""
    sp = lift_space(instance, depth)
    return np.arange(instance.dim_c, sp.dim)


def shifted_star_frames(
    instance: LiftingInstance, depth: int, max_len: int
) -> dict[Word, np.ndarray]:
    """Dilation-word translates of the star-wandering frame.

    The frame is computed at depth - max_len so that every translate
    of length up to ``max_len`` lands inside the depth truncation.
    """
    if max_len > depth:
        raise DepthError(f"word length {max_len} does not fit in depth {depth}")
    if max_len < 0:
        raise DepthError("word length must be nonnegative")
    dil = Dilation(instance.e, instance.defect_e)
    sp = lift_space(instance, depth)
    base_depth = depth - max_len
    frame = lift_space(instance, base_depth).unflatten(
        star_wandering_frame(instance, base_depth)
    )
    frames = {(): sp.flatten(frame, width=instance.rank_c)}
    level = {(): frame}
    for _ in range(max_len):
        deeper: dict[Word, GradedVector] = {}
        for w, v in level.items():
            for j in range(1, instance.d + 1):
                deeper[(j,) + w] = dil.apply(j, v)
        level = deeper
        for w, v in level.items():
            frames[w] = sp.flatten(v, width=instance.rank_c)
    return frames


def wandering_violation(frames: dict[Word, np.ndarray]) -> float:
    """Largest deviation of the translate family from orthonormality.

    Off-diagonal Gram blocks must vanish and each diagonal block must
    be the identity.
    """
    worst = 0.0
    items = sorted(frames.items())
    for i, (_, fa) in enumerate(items):
        for k in range(i, len(items)):
            gram = fa.conj().T @ items[k][1]
            if k == i:
                gram = gram - np.eye(gram.shape[0])
            worst = max(worst, linalg.operator_norm(gram))
    return worst


def verify_wandering(instance: LiftingInstance, depth: int, max_len: int) -> float:
    return wandering_violation(shifted_star_frames(instance, depth, max_len))


def complement_frame(instance: LiftingInstance, depth: int) -> np.ndarray:
    """Orthocomplement of the shifted corner part, in corner rows.

    Stacks the corner-restricted dilation matrices from depth-1 and
    takes the left null space.  The stack is an isometry, so its
    singular values sit at 1 and the null-space dimension is exact.
    """
    if depth < 1:
        raise DepthError("complement needs depth at least 1")
    dil = Dilation(instance.e, instance.defect_e)
    rows = corner_rows(instance, depth)
    cols = corner_rows(instance, depth - 1)
    stack = np.hstack(
        [dil.matrix(j, depth - 1)[np.ix_(rows, cols)] for j in range(1, instance.d + 1)]
    )
    u, s, _ = np.linalg.svd(stack, full_matrices=True)
    rank = int(np.sum(s > 0.5))
    if rank != stack.shape[1]:
        raise DepthError("shifted corner stack lost injectivity")
    return u[:, rank:]


def verify_complement(instance: LiftingInstance, depth: int) -> tuple[int, float]:
    """Dimension of the complement and its angle to the star frame.

    Returns ``(dim, max principal angle)``; the star-wandering space
    equals the complement exactly when the dimension is the base
    defect rank and the angle vanishes.
    """
    comp = complement_frame(instance, depth)
    frame = star_wandering_frame(instance, depth)[corner_rows(instance, depth)]
    if comp.shape[1] != frame.shape[1]:
        return comp.shape[1], float(np.pi / 2)
    angles = linalg.principal_angles(comp, frame)
    return comp.shape[1], float(angles.max(initial=0.0))


def verify_shift_decomposition(instance: LiftingInstance, depth: int) -> float:
    """Translates of the vacuum defect copy against the Fock basis.

    Applying every dilation word of length at most ``depth`` to the
    vacuum copy of the lifted defect space must reproduce the
    standard graded basis: identity on the Fock rows, zero on the
    ambient rows.
    """
    dil = Dilation(instance.e, instance.defect_e)
    sp = lift_space(instance, depth)
    r = instance.rank_e
    worst = 0.0
    level = {(): GradedVector(0, None, {(): np.eye(r, dtype=np.complex128)})}
    for m in range(depth + 1):
        for w, v in sorted(level.items()):
            flat = sp.flatten(v, width=r)
            want = np.zeros_like(flat)
            want[sp.slot(w)] = np.eye(r)
            worst = max(worst, linalg.operator_norm(flat - want))
        if m < depth:
            level = {
                (j,) + w: dil.apply(j, v)
                for w, v in level.items()
                for j in range(1, instance.d + 1)
            }
    return worst
