"""Characteristic function of a lifting and its intertwiner identities.

The lifting determines a word-indexed family of blocks from the
lifted defect space to the base defect space, written down in closed
form from the blocks C, A, B and the coupling isometry gamma.  The
closed form is first assembled on the ambient d-fold sum (the symbol),
then factored through the lifted defect operator; factoring is only
possible when the symbol kills the kernel of that operator, otherwise
the function is not defined on defect vectors and :class:`IllDefined`
is raised.

Two independent identities tie the closed form to the rest of the
package and are measured here:

* coincidence: the block at a word equals the transfer-function
  coefficient at the reversed word;
* restriction: the canonical intertwiner, restricted to the vacuum
  copy of the lifted defect space, has exactly these blocks as its
  Fock components, and on Fock-only vectors it acts as reversed-word
  convolution by the transfer series.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .dilation import GradedVector
from .intertwiner import base_space, intertwiner_matrix, lift_space
from .lifting import LiftingInstance
from .transfer import (
    NCSeries,
    build_colligation,
    random_series,
    series_multiply,
    transfer_coefficient,
    transfer_series,
)
from .words import Word, enumerate_words, reverse


class IllDefined(ValueError):
    """The symbol does not vanish on the kernel of the lifted defect,
    so no function on defect vectors represents it."""


def _suffix_adjoints(instance: LiftingInstance, depth: int) -> dict[Word, np.ndarray]:
    """Adjoints of corner word products, built by prepending letters."""
    na = instance.dim_a
    adj: dict[Word, np.ndarray] = {(): np.eye(na, dtype=np.complex128)}
    level: list[Word] = [()]
    for _ in range(depth):
        deeper: list[Word] = []
        for w in level:
            for j in range(1, instance.d + 1):
                adj[(j,) + w] = adj[w] @ instance.a.ops[j - 1].conj().T
                deeper.append((j,) + w)
        level = deeper
    return adj


def symbol_blocks(instance: LiftingInstance, depth: int) -> dict[Word, np.ndarray]:
    """Ambient closed form: word -> block on the stacked lifted slots.

    Each block has shape (base defect rank, d * dimE).  Per input
    slot i the base-space columns read

        vacuum:  (D_C-coords)_i - gamma dstar B_i
        word w:  - gamma dstar (A_w)* B_i

    and the corner columns read

        vacuum:       - gamma dstar A_i
        word (j,)+w:  gamma dstar (A_w)* (delta_ij - A_j* A_i).
    """
    d, nc, na, ne = instance.d, instance.dim_c, instance.dim_a, instance.dim_e
    rc = instance.rank_c
    gs = instance.gamma @ (instance.dstar_basis.conj().T @ instance.dstar)
    adj = _suffix_adjoints(instance, depth)
    blocks = {
        w: np.zeros((rc, d * ne), dtype=np.complex128)
        for w in enumerate_words(d, depth).words
    }
    for i in range(1, d + 1):
        cols_c = slice((i - 1) * ne, (i - 1) * ne + nc)
        cols_a = slice((i - 1) * ne + nc, i * ne)
        b_i = instance.b[i - 1]
        a_i = instance.a.ops[i - 1]
        blocks[()][:, cols_c] = instance.defect_c.coord_component(i) - gs @ b_i
        blocks[()][:, cols_a] = -gs @ a_i
        for w in blocks:
            if not w:
                continue
            blocks[w][:, cols_c] = -gs @ adj[w] @ b_i
            j, rest = w[0], w[1:]
            cross = -instance.a.ops[j - 1].conj().T @ a_i
            if j == i:
                cross = cross + np.eye(na)
            blocks[w][:, cols_a] = gs @ adj[rest] @ cross
    return blocks


def _stacked_symbol(blocks: dict[Word, np.ndarray]) -> np.ndarray:
    return np.vstack([blocks[w] for w in sorted(blocks, key=lambda w: (len(w), w))])


def charfn_series(
    instance: LiftingInstance, depth: int, tol: float = linalg.TOL_EQ
) -> NCSeries:
    """The characteristic function on defect coordinates.

    Factors the ambient symbol through the lifted defect operator.
    Raises :class:`IllDefined` when the symbol leaks onto the kernel
    of that operator beyond ``tol``.
    """
    blocks = symbol_blocks(instance, depth)
    kernel = linalg.complement_onb(instance.defect_e.basis)
    if kernel.shape[1]:
        leak = linalg.operator_norm(_stacked_symbol(blocks) @ kernel)
        if leak > tol:
            raise IllDefined(
                f"symbol leaks onto ker of the lifted defect ({leak:.3e} > {tol:.1e})"
            )
    factor = linalg.pseudo_inverse(instance.defect_e.operator) @ instance.defect_e.basis
    coeffs = {w: m @ factor for w, m in blocks.items()}
    return NCSeries(instance.rank_c, instance.rank_e, depth, coeffs)


def coincidence_violation(instance: LiftingInstance, depth: int) -> float:
    """Characteristic blocks against reversed transfer coefficients."""
    series = charfn_series(instance, depth)
    coll = build_colligation(instance)
    worst = 0.0
    for w, m in series.coeffs.items():
        worst = max(
            worst,
            linalg.operator_norm(m - transfer_coefficient(coll, reverse(w))),
        )
    return worst


def vacuum_restriction_violation(instance: LiftingInstance, depth: int) -> float:
    """Intertwiner columns on the vacuum defect copy against the blocks.

    The base-space rows must vanish and the Fock rows must reproduce
    the characteristic blocks word by word, with no reversal.
    """
    series = charfn_series(instance, depth)
    w_mat = intertwiner_matrix(instance, depth)
    dom = lift_space(instance, depth)
    cod = base_space(instance, depth)
    cols = w_mat[:, dom.slot(())]
    worst = linalg.operator_norm(cols[: instance.dim_c])
    for alpha in cod.index.words:
        block = cols[cod.slot(alpha)]
        worst = max(worst, linalg.operator_norm(block - series.coeff(alpha)))
    return worst


def fock_action_violation(instance: LiftingInstance, depth: int, seed=0) -> float:
    """Intertwiner on Fock-only vectors against reversed convolution.

    Loading a signal into Fock coordinates through word reversal turns
    the intertwiner's action into convolution by the transfer series:
    the intertwiner respects prepended letters, convolution respects
    appended ones.
    """
    signal = random_series(instance.rank_e, 1, instance.d, depth, seed)
    dom = lift_space(instance, depth)
    cod = base_space(instance, depth)
    fock = {w: signal.coeff(reverse(w)) for w in dom.index.words}
    flat_in = dom.flatten(GradedVector(depth, None, fock), width=1)
    got = intertwiner_matrix(instance, depth) @ flat_in
    theta = transfer_series(build_colligation(instance), depth)
    out = series_multiply(theta, signal)
    worst = float(np.linalg.norm(got[: instance.dim_c]))
    for w in cod.index.words:
        want = out.coeff(reverse(w))
        worst = max(worst, float(np.linalg.norm(got[cod.slot(w)] - want)))
    return worst
