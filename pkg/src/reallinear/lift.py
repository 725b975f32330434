"""Real-valued lifting of complex real-linear problems.

A complex vector ``x`` is packed as ``[real(x); imag(x)]`` and a real-linear
operator with matrices ``F`` and ``G`` becomes the real ``2M x 2N`` matrix

    [[re F + re G, -im F - im G],
     [im F - im G,  re F - re G]]

so that ``||A(x) - b||^2 == ||At xt - bt||^2``.
"""

import numpy as np

from .counter import charge
from .operators import (
    AdjointOp,
    ComposeOp,
    DimensionError,
    ElementwiseOp,
    ScaleOp,
    StackOp,
    SumOp,
    materialize,
)


def lift_vector(x):
    """Pack a complex vector as ``[real(x); imag(x)]``."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {x.shape}")
    return np.concatenate([x.real, x.imag]).astype(np.float64, copy=False)


def unlift_vector(xt):
    """Inverse of :func:`lift_vector`."""
    xt = np.asarray(xt, dtype=np.float64)
    if xt.ndim != 1 or xt.size % 2:
        raise DimensionError(f"lifted vector must be 1-D with even length, got shape {xt.shape}")
    n = xt.size // 2
    out = np.empty(n, dtype=np.complex128)
    out.real = xt[:n]
    out.imag = xt[n:]
    return out


def _as_lifted(v, n, name):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (2 * n,):
        raise DimensionError(f"{name} has shape {v.shape}, expected ({2 * n},)")
    return v


class LiftedMatrix:
    """Dense real matrix of a lifted operator ``C^N -> C^M``.

    Each product with the matrix or its transpose charges ``4 * M * N``
    real multiplications.
    """

    def __init__(self, matrix, rows, cols):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.shape != (2 * rows, 2 * cols):
            raise DimensionError(
                f"lifted matrix shape {matrix.shape} does not match {rows}x{cols} operator")
        self.matrix = matrix
        self.matrix.flags.writeable = False
        self.rows = rows
        self.cols = cols

    @property
    def shape(self):
        return (self.rows, self.cols)

    def matvec(self, xt, counter=None):
        xt = _as_lifted(xt, self.cols, "xt")
        charge(counter, self.matrix.size)
        return self.matrix @ xt

    def rmatvec(self, yt, counter=None):
        yt = _as_lifted(yt, self.rows, "yt")
        charge(counter, self.matrix.size)
        return self.matrix.T @ yt

    def blocks(self):
        M, N = self.rows, self.cols
        A = self.matrix
        return A[:M, :N], A[:M, N:], A[M:, :N], A[M:, N:]


def _real_block_matrix(F, G):
    Fr, Fi, Gr, Gi = F.real, F.imag, G.real, G.imag
    return np.block([[Fr + Gr, -Fi - Gi], [Fi - Gi, Fr - Gr]])


def lift_operator(op):
    """Return the :class:`LiftedMatrix` of ``op``.

    Operators not already in matrix form are materialized first, which costs
    ``2 * op.cols`` applies.
    """
    F, G = materialize(op).dense()
    return LiftedMatrix(_real_block_matrix(F, G), op.rows, op.cols)


def build_loraks_lifted(A, C, D, E, lam):
    """Lifted matrix of ``x -> [A x; sqrt(lam) (C x - D conj(E x))]``
    assembled block by block from the real and imaginary parts of the
    constituent matrices, without forming ``F`` and ``G``.

    Row layout is ``[re A, -im A; H11, H12; im A, re A; H21, H22]``.
    """
    A, C, D, E = (np.asarray(M, dtype=np.complex128) for M in (A, C, D, E))
    for name, M in zip("ACDE", (A, C, D, E)):
        if M.ndim != 2:
            raise DimensionError(f"{name} must be 2-D, got shape {M.shape}")
    N = A.shape[1]
    if C.shape[1] != N or E.shape[1] != N or D.shape[0] != C.shape[0] or D.shape[1] != E.shape[0]:
        raise DimensionError(
            f"inconsistent shapes A {A.shape}, C {C.shape}, D {D.shape}, E {E.shape}")
    lam = float(lam)
    if not lam > 0:
        raise ValueError(f"regularization parameter must be positive, got {lam}")
    s = np.sqrt(lam)
    Ar, Ai, Cr, Ci = A.real, A.imag, C.real, C.imag
    Dr, Di, Er, Ei = D.real, D.imag, E.real, E.imag
    H11 = s * Cr - s * (Dr @ Er) - s * (Di @ Ei)
    H12 = -s * Ci + s * (Dr @ Ei) - s * (Di @ Er)
    H21 = s * Ci - s * (Di @ Er) + s * (Dr @ Ei)
    H22 = s * Cr + s * (Di @ Ei) + s * (Dr @ Er)
    matrix = np.block([[Ar, -Ai], [H11, H12], [Ai, Ar], [H21, H22]])
    return LiftedMatrix(matrix, A.shape[0] + C.shape[0], N)


# --- naive function-call lifting -------------------------------------------
#
# Each block (i, j) of the lifted matrix is applied to a real vector by
# walking the expression tree and expanding every product of 2x2 block
# matrices term by term. Leaves are reached through one function call per
# term, which reproduces the call counts of a straightforward real-valued
# implementation (4 calls per standalone matrix, 8 per factor of a product).
# Structural zero blocks return None so no call is spent on them.


def _part(z, i):
    return z.real.copy() if i == 0 else z.imag.copy()


def _rscale(s, v, counter):
    if s == 0:
        return None
    if s in (1, -1):
        return v if s == 1 else -v
    charge(counter, v.size)
    return s * v


def _radd(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _scalar_blocks(f, g):
    # lifted 2x2 of x -> f x + conj(g x)
    return ((f.real + g.real, -f.imag - g.imag),
            (f.imag - g.imag, f.real - g.real))


def _zero_block(op, i, j):
    """Whether block (i, j) of the lifted matrix is structurally zero."""
    if isinstance(op, ElementwiseOp):
        return _scalar_blocks(op.f, op.g)[i][j] == 0
    if isinstance(op, ScaleOp):
        S = _scalar_blocks(complex(op.c), 0j)
        return all(S[i][k] == 0 or _zero_block(op.op, k, j) for k in (0, 1))
    if isinstance(op, SumOp):
        return _zero_block(op.a, i, j) and _zero_block(op.b, i, j)
    if isinstance(op, ComposeOp):
        return all(_zero_block(op.outer, i, k) or _zero_block(op.inner, k, j) for k in (0, 1))
    if isinstance(op, StackOp):
        return all(_zero_block(child, i, j) for child in op.ops)
    if isinstance(op, AdjointOp):
        return _zero_block(op.op, j, i)
    return False


def _block(op, i, j, v, counter):
    if isinstance(op, ElementwiseOp):
        return _rscale(_scalar_blocks(op.f, op.g)[i][j], v, counter)
    if isinstance(op, ScaleOp):
        c = complex(op.c)
        S = _scalar_blocks(c, 0j)
        out = None
        for k in (0, 1):
            if S[i][k] != 0:
                inner = _block(op.op, k, j, v, counter)
                if inner is not None:
                    out = _radd(out, _rscale(S[i][k], inner, counter))
        return out
    if isinstance(op, SumOp):
        return _radd(_block(op.a, i, j, v, counter), _block(op.b, i, j, v, counter))
    if isinstance(op, ComposeOp):
        out = None
        for k in (0, 1):
            if _zero_block(op.outer, i, k):
                continue
            mid = _block(op.inner, k, j, v, counter)
            if mid is not None:
                out = _radd(out, _block(op.outer, i, k, mid, counter))
        return out
    if isinstance(op, StackOp):
        pieces = [_block(child, i, j, v, counter) for child in op.ops]
        if all(p is None for p in pieces):
            return None
        return np.concatenate([np.zeros(c.rows) if p is None else p
                               for c, p in zip(op.ops, pieces)])
    if isinstance(op, AdjointOp):
        return _block_t(op.op, i, j, v, counter)
    # opaque leaf: one call on v (j = 0) or i*v (j = 1), keep one component
    return _part(op._apply(v.astype(np.complex128) if j == 0 else 1j * v, counter), i)


def _block_t(op, i, j, v, counter):
    """Block (i, j) of the transposed lifted matrix."""
    if isinstance(op, ElementwiseOp):
        return _rscale(_scalar_blocks(op.f, op.g)[j][i], v, counter)
    if isinstance(op, ScaleOp):
        c = complex(op.c)
        S = _scalar_blocks(c, 0j)
        out = None
        for k in (0, 1):
            if S[j][k] != 0:
                out = _radd(out, _block_t(op.op, i, k, _rscale(S[j][k], v, counter), counter))
        return out
    if isinstance(op, SumOp):
        return _radd(_block_t(op.a, i, j, v, counter), _block_t(op.b, i, j, v, counter))
    if isinstance(op, ComposeOp):
        out = None
        for k in (0, 1):
            if _zero_block(op.inner, k, i):
                continue
            mid = _block_t(op.outer, k, j, v, counter)
            if mid is not None:
                out = _radd(out, _block_t(op.inner, i, k, mid, counter))
        return out
    if isinstance(op, StackOp):
        out = None
        for child, lo, hi in zip(op.ops, op.offsets[:-1], op.offsets[1:]):
            out = _radd(out, _block_t(child, i, j, v[lo:hi], counter))
        return out
    if isinstance(op, AdjointOp):
        return _block(op.op, i, j, v, counter)
    return _part(op._adjoint(v.astype(np.complex128) if j == 0 else 1j * v, counter), i)


def _naive(blockfn, op, vt, n_in, n_out, counter):
    halves = (vt[:n_in], vt[n_in:])
    out = []
    for i in (0, 1):
        acc = None
        for j in (0, 1):
            acc = _radd(acc, blockfn(op, i, j, halves[j], counter))
        out.append(np.zeros(n_out) if acc is None else acc)
    return np.concatenate(out)


def naive_funcall_lift_apply(op, xt, counter=None):
    """Compute ``At @ xt`` using only calls to the constituent operators."""
    xt = _as_lifted(xt, op.cols, "xt")
    return _naive(_block, op, xt, op.cols, op.rows, counter)


def naive_funcall_lift_adjoint(op, yt, counter=None):
    """Compute ``At.T @ yt`` using only calls to the constituent adjoints."""
    yt = _as_lifted(yt, op.rows, "yt")
    return _naive(_block_t, op, yt, op.rows, op.cols, counter)


class NaiveLiftedOp:
    """Lifted matrix of ``op`` evaluated through function calls only.

    Exposes the same ``matvec``/``rmatvec`` interface as
    :class:`LiftedMatrix`, so the real-valued solvers accept either.
    """

    def __init__(self, op):
        self.op = op
        self.rows, self.cols = op.shape

    @property
    def shape(self):
        return (self.rows, self.cols)

    def matvec(self, xt, counter=None):
        return naive_funcall_lift_apply(self.op, xt, counter)

    def rmatvec(self, yt, counter=None):
        return naive_funcall_lift_adjoint(self.op, yt, counter)


class LiftedOperator:
    """Lifted view of a complex operator through one apply (or adjoint) per
    product.
    """

    def __init__(self, op):
        self.op = op
        self.rows, self.cols = op.shape

    @property
    def shape(self):
        return (self.rows, self.cols)

    def matvec(self, xt, counter=None):
        xt = _as_lifted(xt, self.cols, "xt")
        return lift_vector(self.op._apply(unlift_vector(xt), counter))

    def rmatvec(self, yt, counter=None):
        yt = _as_lifted(yt, self.rows, "yt")
        return lift_vector(self.op._adjoint(unlift_vector(yt), counter))


def lifted_cost(At, bt, xt, counter=None):
    """``||At xt - bt||^2`` for any lifted operator."""
    r = At.matvec(xt, counter) - np.asarray(bt, dtype=np.float64)
    charge(counter, r.size)
    return float(r @ r)
