"""Random operator factories for property tests."""

import numpy as np

from . import builtins
from .operators import (
    AdjointOp,
    BlackboxOp,
    MatrixOp,
    SplitPartOp,
    add,
    compose,
    random_vector,
    scale,
    stack,
)


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def blackbox_from_matrices(F, G, validate=True):
    """Real-linear blackbox computing ``F x + conj(G x)`` and its adjoint."""
    F = np.asarray(F, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    FH, GH = F.conj().T, G.conj().T
    return BlackboxOp(lambda x: F @ x + np.conj(G @ x),
                      lambda y: FH @ y + GH @ np.conj(y),
                      F.shape, mult_charge_apply=8 * F.size, validate=validate)


def random_leaf(rng, rows, cols):
    kind = rng.integers(0, 5 if rows == cols else 3)
    if kind == 0:
        return MatrixOp(random_matrix(rng, rows, cols), random_matrix(rng, rows, cols))
    if kind == 1:
        return blackbox_from_matrices(random_matrix(rng, rows, cols),
                                      random_matrix(rng, rows, cols))
    if kind == 2:
        # purely linear or purely antilinear
        M = random_matrix(rng, rows, cols)
        return builtins.linear(M) if rng.random() < 0.5 else builtins.antilinear(M)
    if kind == 3:
        return [builtins.conjugation, builtins.real_part, builtins.imag_part][rng.integers(0, 3)](rows)
    return builtins.scaled_identity(complex(*rng.standard_normal(2)), rows)


def random_operator(rng, rows, cols, depth=2):
    """Random expression tree of the given shape.

    Mixes matrix, blackbox and elementwise leaves with sums, compositions,
    scalings, stacks, adjoints and split parts.
    """
    if depth <= 0:
        return random_leaf(rng, rows, cols)
    kind = rng.integers(0, 8)
    sub = lambda r, c: random_operator(rng, r, c, depth - 1)  # noqa: E731
    if kind == 0:
        return add(sub(rows, cols), sub(rows, cols))
    if kind == 1:
        mid = int(rng.integers(1, 6))
        return compose(sub(rows, mid), sub(mid, cols))
    if kind == 2:
        c = rng.standard_normal() if rng.random() < 0.5 else complex(*rng.standard_normal(2))
        return scale(c, sub(rows, cols))
    if kind == 3 and rows >= 2:
        top = int(rng.integers(1, rows))
        return stack([sub(top, cols), sub(rows - top, cols)])
    if kind == 4:
        return AdjointOp(sub(cols, rows))
    if kind == 5:
        return SplitPartOp(sub(rows, cols), antilinear=bool(rng.integers(0, 2)))
    return random_leaf(rng, rows, cols)


__all__ = ["blackbox_from_matrices", "random_leaf", "random_matrix", "random_operator",
           "random_vector"]
