"""Real-linear operators on complex vectors.

A real-linear operator ``A: C^N -> C^M`` is additive and homogeneous for
real scalars. Every such operator can be written uniquely as

    A(x) = F @ x + conj(G @ x)

and its adjoint with respect to the real inner product ``real(p^H q)`` is

    A*(y) = F^H @ y + G^H @ conj(y).

Operators come in three flavours: explicit matrix pairs (:class:`MatrixOp`,
:class:`ElementwiseOp`), user callables (:class:`BlackboxOp`), and expression
nodes built from the others (sums, compositions, scalings, stacks). Expression
adjoints are evaluated by walking the tree, so blackbox leaves only ever need
their two callables.
"""

import numbers

import numpy as np

from .counter import charge


class DimensionError(ValueError):
    """Raised when operator or vector sizes do not line up."""


class NonFiniteError(ValueError):
    """Raised when an input vector contains NaN or Inf."""


class NotRealLinearError(ValueError):
    """Raised when a blackbox callable fails the real-linearity probes."""


def as_vector(x, length=None, name="x"):
    """Return ``x`` as a finite 1-D complex128 array, checking its length."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {x.shape}")
    if length is not None and x.shape[0] != length:
        raise DimensionError(f"{name} has length {x.shape[0]}, expected {length}")
    x = x.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return x


def _check_shape(rows, cols):
    rows, cols = int(rows), int(cols)
    if rows <= 0 or cols <= 0:
        raise DimensionError(f"operator dimensions must be positive, got {rows}x{cols}")
    return rows, cols


class RealLinearOp:
    """Base class for real-linear operators ``C^cols -> C^rows``.

    Subclasses implement ``_apply`` and ``_adjoint`` on already-validated
    complex128 vectors and charge the optional counter themselves.
    """

    rows = None
    cols = None

    @property
    def shape(self):
        return (self.rows, self.cols)

    def apply(self, x, counter=None):
        """Evaluate ``A(x)``."""
        return self._apply(as_vector(x, self.cols), counter)

    def adjoint(self, y, counter=None):
        """Evaluate ``A*(y)``."""
        return self._adjoint(as_vector(y, self.rows, name="y"), counter)

    def __call__(self, x, counter=None):
        return self.apply(x, counter)

    def _apply(self, x, counter):
        raise NotImplementedError

    def _adjoint(self, y, counter):
        raise NotImplementedError

    def matrix_parts(self):
        """Return ``(F, G)`` if cheaply known without probing, else ``None``.

        Either entry may be ``None`` to mark a structural zero.
        """
        return None

    @property
    def H(self):
        return AdjointOp(self)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, c):
        if not isinstance(c, numbers.Number):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __matmul__(self, inner):
        return compose(self, inner)

    def __repr__(self):
        return f"{type(self).__name__}({self.rows}x{self.cols})"


def _scalar_charge(c, n):
    # sign flips are free; a real scale costs 2 per complex entry, a complex one 4
    if c == 1 or c == -1:
        return 0
    return 2 * n if np.imag(c) == 0 else 4 * n


class MatrixOp(RealLinearOp):
    """``A(x) = F x + conj(G x)`` with explicit matrices.

    Pass ``None`` for ``F`` or ``G`` to declare it identically zero; a
    structurally zero part costs nothing to apply. If both are ``None`` the
    ``shape`` argument is required.

    Each present matrix charges ``4*M*N`` real multiplications per apply and
    per adjoint.
    """

    def __init__(self, F=None, G=None, shape=None):
        F = None if F is None else np.array(F, dtype=np.complex128)
        G = None if G is None else np.array(G, dtype=np.complex128)
        for name, mat in (("F", F), ("G", G)):
            if mat is not None and mat.ndim != 2:
                raise DimensionError(f"{name} must be a 2-D matrix")
        shapes = {m.shape for m in (F, G) if m is not None}
        if len(shapes) > 1:
            raise DimensionError(f"F and G shapes differ: {F.shape} vs {G.shape}")
        if shapes:
            (found,) = shapes
            if shape is not None and tuple(shape) != found:
                raise DimensionError(f"shape {tuple(shape)} does not match matrices {found}")
            shape = found
        elif shape is None:
            raise DimensionError("shape is required when F and G are both zero")
        self.rows, self.cols = _check_shape(*shape)
        for name, mat in (("F", F), ("G", G)):
            if mat is not None and not np.all(np.isfinite(mat)):
                raise NonFiniteError(f"{name} contains non-finite entries")
        self.F = F
        self.G = G
        if F is not None:
            F.flags.writeable = False
        if G is not None:
            G.flags.writeable = False

    @property
    def unit_charge(self):
        return 4 * self.rows * self.cols * ((self.F is not None) + (self.G is not None))

    def _apply(self, x, counter):
        out = np.zeros(self.rows, dtype=np.complex128)
        if self.F is not None:
            out += self.F @ x
        if self.G is not None:
            out += np.conj(self.G @ x)
        charge(counter, self.unit_charge)
        return out

    def _adjoint(self, y, counter):
        out = np.zeros(self.cols, dtype=np.complex128)
        if self.F is not None:
            out += self.F.conj().T @ y
        if self.G is not None:
            out += self.G.conj().T @ np.conj(y)
        charge(counter, self.unit_charge)
        return out

    def matrix_parts(self):
        return self.F, self.G

    def dense(self):
        """Return ``(F, G)`` with structural zeros filled in."""
        zero = np.zeros(self.shape, dtype=np.complex128)
        return (zero if self.F is None else self.F,
                zero if self.G is None else self.G)


class ElementwiseOp(RealLinearOp):
    """``A(x) = f x + conj(g x)`` for complex scalars ``f`` and ``g``.

    Covers conjugation, real and imaginary part, and scaled identities
    without storing any matrix. ``mult_charge`` is charged per apply and per
    adjoint.
    """

    def __init__(self, f, g, n, mult_charge=0, name=None):
        self.rows, self.cols = _check_shape(n, n)
        self.f = complex(f)
        self.g = complex(g)
        self.mult_charge = int(mult_charge)
        self.name = name

    def _apply(self, x, counter):
        charge(counter, self.mult_charge)
        return self.f * x + np.conj(self.g * x)

    def _adjoint(self, y, counter):
        charge(counter, self.mult_charge)
        return np.conj(self.f) * y + np.conj(self.g) * np.conj(y)

    def matrix_parts(self):
        eye = np.eye(self.rows, dtype=np.complex128)
        return (None if self.f == 0 else self.f * eye,
                None if self.g == 0 else self.g * eye)

    def __repr__(self):
        label = self.name or f"f={self.f}, g={self.g}"
        return f"ElementwiseOp({label}, n={self.rows})"


class BlackboxOp(RealLinearOp):
    """Operator known only through an apply callable and an adjoint callable.

    Parameters
    ----------
    apply_fn, adjoint_fn : callable
        ``apply_fn(x)`` evaluates ``A(x)``; ``adjoint_fn(y)`` evaluates
        ``A*(y)``. Both receive and must return 1-D complex arrays.
    shape : tuple of int
        ``(rows, cols)``.
    mult_charge_apply, mult_charge_adjoint : int
        Real multiplications charged per call. The adjoint charge defaults
        to the apply charge.
    validate : bool
        Probe ``apply_fn`` at construction for additivity and real
        homogeneity; a violation raises :class:`NotRealLinearError`.
    """

    probes = 8
    probe_rtol = 1e-10

    def __init__(self, apply_fn, adjoint_fn, shape, mult_charge_apply=0,
                 mult_charge_adjoint=None, validate=True, name=None):
        self.rows, self.cols = _check_shape(*shape)
        self.apply_fn = apply_fn
        self.adjoint_fn = adjoint_fn
        self.mult_charge_apply = int(mult_charge_apply)
        self.mult_charge_adjoint = int(
            mult_charge_apply if mult_charge_adjoint is None else mult_charge_adjoint)
        if self.mult_charge_apply < 0 or self.mult_charge_adjoint < 0:
            raise ValueError("multiplication charges must be nonnegative")
        self.name = name
        if validate:
            self._validate()

    def _call(self, fn, v, length, what):
        out = np.asarray(fn(v))
        if out.shape != (length,):
            raise DimensionError(f"{what} returned shape {out.shape}, expected ({length},)")
        return out.astype(np.complex128, copy=False)

    def _apply(self, x, counter):
        charge(counter, self.mult_charge_apply)
        return self._call(self.apply_fn, x, self.rows, "apply_fn")

    def _adjoint(self, y, counter):
        charge(counter, self.mult_charge_adjoint)
        return self._call(self.adjoint_fn, y, self.cols, "adjoint_fn")

    def _validate(self):
        rng = np.random.default_rng(0x5EED)
        for _ in range(self.probes):
            x, y = random_vector(rng, self.cols), random_vector(rng, self.cols)
            a = rng.standard_normal()
            ax, ay = self._apply(x, None), self._apply(y, None)
            sum_err = np.linalg.norm(self._apply(x + y, None) - ax - ay)
            sum_scale = np.linalg.norm(ax) + np.linalg.norm(ay)
            axa = self._apply(a * x, None)
            hom_err = np.linalg.norm(axa - a * ax)
            hom_scale = np.linalg.norm(axa)
            if sum_err > self.probe_rtol * sum_scale or hom_err > self.probe_rtol * hom_scale:
                raise NotRealLinearError(
                    f"apply_fn is not real-linear (additivity err {sum_err:.3e}, "
                    f"homogeneity err {hom_err:.3e})")

    def __repr__(self):
        return f"BlackboxOp({self.name or '?'}, {self.rows}x{self.cols})"


class SumOp(RealLinearOp):
    def __init__(self, a, b):
        if a.shape != b.shape:
            raise DimensionError(f"cannot add operators of shape {a.shape} and {b.shape}")
        self.a, self.b = a, b
        self.rows, self.cols = a.shape

    def _apply(self, x, counter):
        return self.a._apply(x, counter) + self.b._apply(x, counter)

    def _adjoint(self, y, counter):
        return self.a._adjoint(y, counter) + self.b._adjoint(y, counter)


class ComposeOp(RealLinearOp):
    """``outer(inner(x))``; the adjoint runs ``inner*(outer*(y))``."""

    def __init__(self, outer, inner):
        if inner.rows != outer.cols:
            raise DimensionError(
                f"cannot compose {outer.shape} after {inner.shape}: "
                f"inner.rows={inner.rows} != outer.cols={outer.cols}")
        self.outer, self.inner = outer, inner
        self.rows, self.cols = outer.rows, inner.cols

    def _apply(self, x, counter):
        return self.outer._apply(self.inner._apply(x, counter), counter)

    def _adjoint(self, y, counter):
        return self.inner._adjoint(self.outer._adjoint(y, counter), counter)


class ScaleOp(RealLinearOp):
    """``c * A(x)``. The adjoint is ``A*(conj(c) y)``."""

    def __init__(self, c, op):
        if not np.isfinite(c):
            raise NonFiniteError("scale factor must be finite")
        self.c = c
        self.op = op
        self.rows, self.cols = op.shape

    def _apply(self, x, counter):
        charge(counter, _scalar_charge(self.c, self.rows))
        return self.c * self.op._apply(x, counter)

    def _adjoint(self, y, counter):
        charge(counter, _scalar_charge(self.c, self.rows))
        return self.op._adjoint(np.conj(self.c) * y, counter)


class StackOp(RealLinearOp):
    """Vertical concatenation ``[A_1(x); A_2(x); ...]``."""

    def __init__(self, ops):
        ops = list(ops)
        if not ops:
            raise DimensionError("stack needs at least one operator")
        cols = {op.cols for op in ops}
        if len(cols) != 1:
            raise DimensionError(f"stacked operators must share cols, got {sorted(cols)}")
        self.ops = ops
        self.cols = ops[0].cols
        self.rows = sum(op.rows for op in ops)
        self.offsets = np.cumsum([0] + [op.rows for op in ops])

    def _apply(self, x, counter):
        return np.concatenate([op._apply(x, counter) for op in self.ops])

    def _adjoint(self, y, counter):
        out = np.zeros(self.cols, dtype=np.complex128)
        for op, lo, hi in zip(self.ops, self.offsets[:-1], self.offsets[1:]):
            out += op._adjoint(y[lo:hi], counter)
        return out


class AdjointOp(RealLinearOp):
    """The adjoint ``A*`` viewed as an operator in its own right."""

    def __init__(self, op):
        self.op = op
        self.rows, self.cols = op.cols, op.rows

    def _apply(self, x, counter):
        return self.op._adjoint(x, counter)

    def _adjoint(self, y, counter):
        return self.op._apply(y, counter)

    @property
    def H(self):
        return self.op

    def matrix_parts(self):
        parts = self.op.matrix_parts()
        if parts is None:
            return None
        F, G = parts
        # A*(n) = F^H n + conj(G^T n)
        return (None if F is None else F.conj().T,
                None if G is None else G.T.copy())


class SplitPartOp(RealLinearOp):
    """Linear or antilinear component of a real-linear operator.

    The linear part is ``1/2 A(x) - i/2 A(ix)`` and the antilinear part is
    ``1/2 A(x) + i/2 A(ix)``. Each apply costs two applies of ``A``; the
    adjoints follow the same formulas with ``A*`` in place of ``A``.
    """

    def __init__(self, op, antilinear):
        self.op = op
        self.antilinear = bool(antilinear)
        self.rows, self.cols = op.shape

    def _combine(self, fn, v, n, counter):
        sign = 1j if self.antilinear else -1j
        a, b = fn(v, counter), fn(1j * v, counter)
        charge(counter, 4 * n)
        return 0.5 * a + (0.5 * sign) * b

    def _apply(self, x, counter):
        return self._combine(self.op._apply, x, self.rows, counter)

    def _adjoint(self, y, counter):
        return self._combine(self.op._adjoint, y, self.cols, counter)

    def __repr__(self):
        kind = "antilinear" if self.antilinear else "linear"
        return f"SplitPartOp({kind}, {self.op!r})"


def random_vector(rng, n):
    """Complex vector with i.i.d. standard normal real and imaginary parts."""
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def apply(op, x, counter=None):
    return op.apply(x, counter)


def adjoint(op, y, counter=None):
    return op.adjoint(y, counter)


def adjoint_operator(op):
    return AdjointOp(op)


def _mm(a, b):
    return None if a is None or b is None else a @ b


def _madd(*terms):
    terms = [t for t in terms if t is not None]
    if not terms:
        return None
    return sum(terms[1:], terms[0].copy())


def _require_parts(op):
    parts = op.matrix_parts()
    if parts is None:
        raise TypeError(f"eager combination needs matrix-form operands, got {op!r}")
    return parts


def compose(outer, inner, eager=False):
    """Return the operator ``x -> outer(inner(x))``.

    With ``eager=True`` both operands must be in matrix form and the result
    is a single :class:`MatrixOp` with

        F = F2 F1 + conj(G2) G1,    G = conj(F2) G1 + G2 F1.
    """
    if inner.rows != outer.cols:
        raise DimensionError(
            f"cannot compose {outer.shape} after {inner.shape}")
    if not eager:
        return ComposeOp(outer, inner)
    F1, G1 = _require_parts(inner)
    F2, G2 = _require_parts(outer)
    conj = lambda m: None if m is None else m.conj()  # noqa: E731
    F = _madd(_mm(F2, F1), _mm(conj(G2), G1))
    G = _madd(_mm(conj(F2), G1), _mm(G2, F1))
    return MatrixOp(F, G, shape=(outer.rows, inner.cols))


def add(a, b, eager=False):
    """Return the operator ``x -> a(x) + b(x)``; eager mode sums F and G."""
    if a.shape != b.shape:
        raise DimensionError(f"cannot add operators of shape {a.shape} and {b.shape}")
    if not eager:
        return SumOp(a, b)
    F1, G1 = _require_parts(a)
    F2, G2 = _require_parts(b)
    return MatrixOp(_madd(F1, F2), _madd(G1, G2), shape=a.shape)


def scale(c, op):
    return ScaleOp(c, op)


def stack(ops):
    return StackOp(ops)


def split_linear_antilinear(op):
    """Split ``op`` into its unique linear and antilinear parts.

    Returns ``(linear, antilinear)``, two operators whose sum is ``op``.
    Matrix-form operators split exactly into ``F x`` and ``conj(G x)``;
    anything else uses the two-evaluation formulas.
    """
    parts = op.matrix_parts()
    if parts is not None:
        F, G = parts
        return (MatrixOp(F, None, shape=op.shape),
                MatrixOp(None, G, shape=op.shape))
    return SplitPartOp(op, antilinear=False), SplitPartOp(op, antilinear=True)


def materialize(op):
    """Recover the unique ``(F, G)`` pair of ``op`` as a :class:`MatrixOp`.

    Operators that do not know their matrices are probed column by column
    with ``e_j`` and ``i e_j`` (``2 * cols`` applies, not charged)::

        f_j = (A(e_j) - i A(i e_j)) / 2
        conj(g_j) = (A(e_j) + i A(i e_j)) / 2
    """
    if isinstance(op, MatrixOp):
        return op
    parts = op.matrix_parts()
    if parts is not None:
        return MatrixOp(*parts, shape=op.shape)
    F = np.empty(op.shape, dtype=np.complex128)
    Gc = np.empty(op.shape, dtype=np.complex128)
    e = np.zeros(op.cols, dtype=np.complex128)
    for j in range(op.cols):
        e[j] = 1.0
        a = op._apply(e, None)
        e[j] = 1j
        b = op._apply(e, None)
        e[j] = 0.0
        F[:, j] = 0.5 * (a - 1j * b)
        Gc[:, j] = 0.5 * (a + 1j * b)
    return MatrixOp(F, Gc.conj())


def real_inner(p, q, counter=None):
    """Real inner product ``real(p^H q)``.

    Equals the Euclidean inner product of the stacked ``[real; imag]``
    vectors.
    """
    p = np.asarray(p)
    q = np.asarray(q)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionError(f"real_inner needs equal-length vectors, got {p.shape} and {q.shape}")
    charge(counter, 2 * p.size if np.iscomplexobj(p) or np.iscomplexobj(q) else p.size)
    return float(np.vdot(p, q).real)
