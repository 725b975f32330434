"""Ready-made real-linear operators.

Adjoints, with ``s = sqrt(lam)``:

* conjugation: ``conj(y)``
* real part: ``real(y)``
* imaginary part: ``i * real(y)``
* ``[A x; s imag(B x)]``: ``A^H y1 + s i B^H real(y2)``
* ``[A x; s (C x - D conj(E x))]``: ``A^H y1 + s (C^H y2 - E^H conj(D^H y2))``

None of these are hard-coded; they fall out of the expression tree.
"""

import numpy as np

from .operators import (
    BlackboxOp,
    DimensionError,
    ElementwiseOp,
    MatrixOp,
    compose,
    stack,
)


def conjugation(n):
    return ElementwiseOp(0.0, 1.0, n, name="conj")


def real_part(n):
    return ElementwiseOp(0.5, 0.5, n, name="real")


def imag_part(n):
    # imag(x) = x/(2i) - conj(x)/(2i)
    return ElementwiseOp(-0.5j, -0.5j, n, name="imag")


def scaled_identity(c, n):
    c = complex(c)
    cost = 0 if c in (1, -1) else (2 * n if c.imag == 0 else 4 * n)
    return ElementwiseOp(c, 0.0, n, mult_charge=cost, name=f"{c}*I")


def identity(n):
    return scaled_identity(1.0, n)


def zero(rows, cols):
    return MatrixOp(None, None, shape=(rows, cols))


def linear(F):
    """The linear operator ``x -> F x``."""
    return MatrixOp(F, None)


def antilinear(G):
    """The antilinear operator ``x -> conj(G x)``."""
    return MatrixOp(None, G)


def matrix_blackbox(M, name=None):
    """Wrap ``M`` as a linear blackbox with matvec and conjugate-transpose
    callables, charging ``4 * rows * cols`` per call.
    """
    M = np.array(M, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionError("matrix_blackbox needs a 2-D matrix")
    MH = M.conj().T
    return BlackboxOp(lambda x: M @ x, lambda y: MH @ y, M.shape,
                      mult_charge_apply=4 * M.size, validate=False, name=name)


def _sqrt_lam(lam):
    lam = float(lam)
    if not lam > 0:
        raise ValueError(f"regularization parameter must be positive, got {lam}")
    return np.sqrt(lam)


def _leaf(M, blackbox, name):
    return matrix_blackbox(M, name=name) if blackbox else linear(M)


def phase_constrained_system(A, B, lam, blackbox=False):
    """Stacked operator ``x -> [A x; sqrt(lam) imag(B x)]``."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[1]:
        raise DimensionError(f"A {A.shape} and B {B.shape} must share a column count")
    s = _sqrt_lam(lam)
    penalty = s * compose(imag_part(B.shape[0]), _leaf(B, blackbox, "B"))
    return stack([_leaf(A, blackbox, "A"), penalty])


def _check_loraks_dims(A, C, D, E):
    for name, M in zip("ACDE", (A, C, D, E)):
        if M.ndim != 2:
            raise DimensionError(f"{name} must be 2-D, got shape {M.shape}")
    N = A.shape[1]
    if C.shape[1] != N or E.shape[1] != N:
        raise DimensionError(f"A, C and E must have {N} columns: C {C.shape}, E {E.shape}")
    if D.shape[0] != C.shape[0]:
        raise DimensionError(f"D rows {D.shape[0]} must match C rows {C.shape[0]}")
    if D.shape[1] != E.shape[0]:
        raise DimensionError(f"D columns {D.shape[1]} must match E rows {E.shape[0]}")


def loraks_system(A, C, D, E, lam, form="expression"):
    """Stacked operator ``x -> [A x; sqrt(lam) (C x - D conj(E x))]``.

    Parameters
    ----------
    A, C, D, E : array_like
        Complex matrices of shapes ``M1 x N``, ``M2 x N``, ``M2 x P`` and
        ``P x N``.
    lam : float
        Positive regularization weight.
    form : {"expression", "blackbox", "matrix"}
        ``"expression"`` builds a lazy tree over matrix leaves,
        ``"blackbox"`` the same tree over :func:`matrix_blackbox` leaves, and
        ``"matrix"`` a single :class:`MatrixOp` with precomputed

            F = [A; sqrt(lam) C],  G = [0; -sqrt(lam) conj(D) E].
    """
    A, C, D, E = (np.asarray(M, dtype=np.complex128) for M in (A, C, D, E))
    _check_loraks_dims(A, C, D, E)
    s = _sqrt_lam(lam)
    if form == "matrix":
        F = np.vstack([A, s * C])
        G = np.vstack([np.zeros_like(A), -s * (D.conj() @ E)])
        return MatrixOp(F, G)
    if form not in ("expression", "blackbox"):
        raise ValueError(f"unknown form {form!r}")
    bb = form == "blackbox"
    b_op = _leaf(C, bb, "C") - compose(
        _leaf(D, bb, "D"), compose(conjugation(E.shape[0]), _leaf(E, bb, "E")))
    return stack([_leaf(A, bb, "A"), s * b_op])
