"""Word-indexed state-space simulation of the lifting-driven system.

Running the colligation as a recursion over words gives trajectories

    x(()) = 0,   x(j w) = state_j x(w) + input_j u(w),
    y(w) = output x(w) + feedthrough u(w),

and the input/output behaviour must reproduce convolution by the
transfer series.  Both the recursion and the convolution are exact at
finite depth, so they are compared at working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .transfer import Colligation, DimMismatch, NCSeries, series_multiply, transfer_series
from .words import Word


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Input, state and output values per word, as column batches."""

    depth: int
    u: dict[Word, np.ndarray] = field(default_factory=dict)
    x: dict[Word, np.ndarray] = field(default_factory=dict)
    y: dict[Word, np.ndarray] = field(default_factory=dict)

    def output_series(self, out_dim: int) -> NCSeries:
        return NCSeries(out_dim, 1, self.depth, dict(self.y))


def simulate(coll: Colligation, signal: NCSeries, depth: int | None = None) -> Trajectory:
    """Run the recursion on a width-one input series.

    The state at a word of length m only sees inputs at its proper
    suffixes, so the recursion fills level by level by prepending
    letters.
    """
    if signal.in_dim != 1:
        raise DimMismatch("signals are series with a single column")
    if signal.out_dim != coll.in_dim:
        raise DimMismatch(
            f"signal values have dim {signal.out_dim}, colligation takes {coll.in_dim}"
        )
    if depth is None:
        depth = signal.depth
    if depth > signal.depth:
        raise DimMismatch(f"signal is only known to depth {signal.depth}")

    zero_state = np.zeros((coll.state_dim, 1), dtype=np.complex128)
    u = {w: signal.coeff(w) for w in _all_words(coll.d, depth)}
    x: dict[Word, np.ndarray] = {(): zero_state}
    level = [()]
    for _ in range(depth):
        deeper = []
        for w in level:
            for j in range(1, coll.d + 1):
                x[(j,) + w] = coll.state_ops[j - 1] @ x[w] + coll.input_ops[
                    j - 1
                ] @ u[w]
                deeper.append((j,) + w)
        level = deeper
    y = {w: coll.output_map @ x[w] + coll.feedthrough @ u[w] for w in u}
    return Trajectory(depth, u, x, y)


def _all_words(d: int, depth: int) -> list[Word]:
    out: list[Word] = [()]
    level: list[Word] = [()]
    for _ in range(depth):
        level = [w + (j,) for w in level for j in range(1, d + 1)]
        out.extend(level)
    return out


def io_violation(coll: Colligation, signal: NCSeries, depth: int | None = None) -> float:
    """Recursion output against convolution by the transfer series."""
    traj = simulate(coll, signal, depth)
    theta = transfer_series(coll, traj.depth)
    want = series_multiply(theta, signal, depth=traj.depth)
    worst = 0.0
    for w, got in traj.y.items():
        worst = max(worst, float(np.linalg.norm(got - want.coeff(w))))
    return worst
