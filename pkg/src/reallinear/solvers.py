"""Iterative least-squares solvers in two families.

The ``*_real`` solvers run on a lifted real system (anything exposing
``matvec``/``rmatvec`` on real vectors: :class:`~reallinear.lift.LiftedMatrix`
or :class:`~reallinear.lift.NaiveLiftedOp`). The ``*_complex`` solvers run on
a complex real-linear operator through ``apply``/``adjoint`` and the real
inner product ``real(p^H q)``. Both families share one implementation of each
algorithm and only differ in the vector space they work in, so in exact
arithmetic they produce the same iterates.

Only real scalars ever multiply vectors, which is what keeps the complex
iterations valid for operators that are not complex-linear.
"""

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .counter import MultCounter, charge, vector_charge
from .lift import lift_vector, lifted_cost, unlift_vector
from .operators import DimensionError, as_vector


class NumericalBreakdown(ArithmeticError):
    """CG curvature ``p^H A*A p`` came out nonpositive with a nonzero residual."""


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls.

    ``step_size`` is only used by Landweber; ``None`` means estimate it.
    ``residual_tolerance`` stops early once the normal-equation residual
    ``||A*(b - A x_k)||`` drops below that fraction of its initial value;
    0 disables early stopping.
    """

    max_iters: int = 50
    step_size: float = None
    residual_tolerance: float = 0.0

    def __post_init__(self):
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a nonnegative integer, got {self.max_iters}")
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError(f"step size must be positive, got {self.step_size}")
        if not self.residual_tolerance >= 0:
            raise ValueError("residual_tolerance must be nonnegative")


@dataclass
class TraceRecord:
    k: int
    cost: float
    cum_real_mults: int
    elapsed_seconds: float


@dataclass
class SolverTrace:
    """Per-iteration history of a solve.

    ``iterates[k]`` is the complex-domain iterate after ``k`` iterations
    (lifted iterates are unpacked before storage). ``records`` has one entry
    per stored iterate, starting with the initial guess.
    """

    records: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    stop_reason: str = "max_iters"
    step_size: float = None

    @property
    def x(self):
        return self.iterates[-1]

    @property
    def costs(self):
        return np.array([r.cost for r in self.records])

    @property
    def mults(self):
        return np.array([r.cum_real_mults for r in self.records], dtype=np.int64)

    @property
    def iterations(self):
        return len(self.records) - 1


class _Recorder:
    """Builds a trace while keeping metric evaluation off the clock and off
    the solver's multiplication count."""

    def __init__(self, cost_fn, to_complex, counter):
        self.cost_fn = cost_fn
        self.to_complex = to_complex
        self.counter = counter
        self.start = counter.total
        self.elapsed = 0.0
        self.trace = SolverTrace()
        self._t0 = time.perf_counter()

    def record(self, k, x):
        self.elapsed += time.perf_counter() - self._t0
        self.trace.records.append(TraceRecord(
            k, self.cost_fn(x), self.counter.total - self.start, self.elapsed))
        self.trace.iterates.append(self.to_complex(x))
        self._t0 = time.perf_counter()


def _dot(p, q, counter):
    charge(counter, vector_charge(p))
    return float(np.vdot(p, q).real)


def _axpy(a, x, y, counter):
    """``y + a * x`` for real ``a``."""
    charge(counter, vector_charge(x))
    return y + a * x


def _scal(a, x, counter):
    charge(counter, vector_charge(x))
    return a * x


# --- shared algorithm bodies ------------------------------------------------


def _landweber(fwd, adj, b, x, alpha, config, rec, counter):
    rec.record(0, x)
    r0 = None
    for k in range(1, config.max_iters + 1):
        g = adj(b - fwd(x, counter), counter)
        if config.residual_tolerance > 0:
            gnorm = np.sqrt(_dot(g, g, counter))
            r0 = gnorm if r0 is None else r0
            if gnorm <= config.residual_tolerance * r0:
                rec.trace.stop_reason = "tolerance"
                break
        x = _axpy(alpha, g, x, counter)
        rec.record(k, x)
    return rec.trace


def _cg(fwd, adj, b, x, config, rec, counter):
    rec.record(0, x)
    r = adj(b - fwd(x, counter), counter)
    p = r
    rr = _dot(r, r, counter)
    rr0 = rr
    for k in range(1, config.max_iters + 1):
        if rr == 0.0:
            rec.trace.stop_reason = "converged"
            break
        if config.residual_tolerance > 0 and np.sqrt(rr) <= config.residual_tolerance * np.sqrt(rr0):
            rec.trace.stop_reason = "tolerance"
            break
        z = adj(fwd(p, counter), counter)
        pz = _dot(p, z, counter)
        if pz <= 0.0:
            # only rounding can make this nonpositive when rr > 0
            if rr <= (np.finfo(float).eps ** 2) * rr0:
                rec.trace.stop_reason = "converged"
                break
            raise NumericalBreakdown(
                f"nonpositive curvature {pz:.3e} at iteration {k} with residual {np.sqrt(rr):.3e}")
        a = rr / pz
        x = _axpy(a, p, x, counter)
        r = _axpy(-a, z, r, counter)
        rr_new = _dot(r, r, counter)
        beta = rr_new / rr
        rr = rr_new
        p = _axpy(beta, p, r, counter)
        rec.record(k, x)
    return rec.trace


def _lsqr(fwd, adj, b, x, config, rec, counter):
    """Golub-Kahan bidiagonalization LSQR without reorthogonalization."""
    rec.record(0, x)
    tiny = np.finfo(float).tiny
    u = b - fwd(x, counter)
    beta = np.sqrt(_dot(u, u, counter))
    if beta <= tiny:
        rec.trace.stop_reason = "converged"
        return rec.trace
    u = _scal(1.0 / beta, u, counter)
    v = adj(u, counter)
    alpha = np.sqrt(_dot(v, v, counter))
    if alpha <= tiny:
        rec.trace.stop_reason = "converged"
        return rec.trace
    v = _scal(1.0 / alpha, v, counter)
    w = v
    phibar, rhobar = beta, alpha
    normr0 = alpha * beta
    for k in range(1, config.max_iters + 1):
        u = fwd(v, counter) - _scal(alpha, u, counter)
        beta = np.sqrt(_dot(u, u, counter))
        if beta > tiny:
            u = _scal(1.0 / beta, u, counter)
            v = adj(u, counter) - _scal(beta, v, counter)
            alpha = np.sqrt(_dot(v, v, counter))
            if alpha > tiny:
                v = _scal(1.0 / alpha, v, counter)

        rho = np.hypot(rhobar, beta)
        c, s = rhobar / rho, beta / rho
        theta = s * alpha
        rhobar = -c * alpha
        phi = c * phibar
        phibar = s * phibar

        x = _axpy(phi / rho, w, x, counter)
        w = _axpy(-theta / rho, w, v, counter)
        rec.record(k, x)

        if beta <= tiny or alpha <= tiny:
            rec.trace.stop_reason = "converged"
            break
        # ||A*(b - A x_k)|| = phibar * alpha * |c|
        if config.residual_tolerance > 0 and phibar * alpha * abs(c) <= config.residual_tolerance * normr0:
            rec.trace.stop_reason = "tolerance"
            break
    return rec.trace


def _power_gram(fwd, adj, n, dtype, max_iters, rtol, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    if dtype == np.complex128:
        v = v + 1j * rng.standard_normal(n)
    v /= np.sqrt(np.vdot(v, v).real)
    est = 0.0
    for _ in range(max_iters):
        w = adj(fwd(v, None), None)
        new = float(np.vdot(v, w).real)
        norm = np.sqrt(np.vdot(w, w).real)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if est > 0 and abs(new - est) <= rtol * abs(new):
            return new
        est = new
    return est


# --- operator plumbing ------------------------------------------------------


def _complex_fns(op):
    return op._apply, op._adjoint


def _real_fns(At):
    return At.matvec, At.rmatvec


def _is_lifted(op):
    return hasattr(op, "matvec") and hasattr(op, "rmatvec")


def gram_norm_estimate(op, max_iters=100, rtol=1e-8, seed=0):
    """Estimate the largest eigenvalue of ``A*A`` (the squared spectral norm
    of the lifted matrix) by power iteration."""
    if _is_lifted(op):
        return _power_gram(*_real_fns(op), 2 * op.cols, np.float64, max_iters, rtol, seed)
    return _power_gram(*_complex_fns(op), op.cols, np.complex128, max_iters, rtol, seed)


def estimate_step_size(op, safety=1.05, numerator=1.9, **kwargs):
    """Landweber step ``1.9 / (1.05 * sigma^2)`` from a power-iteration
    estimate of ``sigma^2``. Returns 1 with a warning for a zero operator."""
    sigma2 = gram_norm_estimate(op, **kwargs)
    if sigma2 <= 0.0:
        warnings.warn("operator appears to be zero; using step size 1", RuntimeWarning,
                      stacklevel=2)
        return 1.0
    return numerator / (safety * sigma2)


def cost(op, b, x, counter=None):
    """``||A(x) - b||^2``; charges the apply plus ``2M`` for the norm."""
    b = as_vector(b, op.rows, name="b")
    r = op.apply(x, counter) - b
    charge(counter, 2 * r.size)
    return float(np.vdot(r, r).real)


def _setup_complex(op, b, x0):
    b = as_vector(b, op.rows, name="b")
    x0 = np.zeros(op.cols, dtype=np.complex128) if x0 is None else as_vector(x0, op.cols, "x0").copy()
    cost_fn = lambda x: cost(op, b, x)  # noqa: E731
    return b, x0, cost_fn, lambda x: x.copy()


def _setup_real(At, bt, x0t):
    bt = np.asarray(bt, dtype=np.float64)
    if bt.shape != (2 * At.rows,):
        raise DimensionError(f"bt has shape {bt.shape}, expected ({2 * At.rows},)")
    if x0t is None:
        x0t = np.zeros(2 * At.cols)
    else:
        x0t = np.array(x0t, dtype=np.float64)
        if x0t.shape != (2 * At.cols,):
            raise DimensionError(f"x0t has shape {x0t.shape}, expected ({2 * At.cols},)")
    if not (np.all(np.isfinite(bt)) and np.all(np.isfinite(x0t))):
        raise ValueError("non-finite data or initial guess")
    cost_fn = lambda xt: lifted_cost(At, bt, xt)  # noqa: E731
    return bt, x0t, cost_fn, unlift_vector


def _run(kind, family, op, b, x0, config, counter):
    config = config or SolverConfig()
    counter = counter if counter is not None else MultCounter()
    if family == "real":
        b, x0, cost_fn, to_complex = _setup_real(op, b, x0)
        fwd, adj = _real_fns(op)
    else:
        b, x0, cost_fn, to_complex = _setup_complex(op, b, x0)
        fwd, adj = _complex_fns(op)
    alpha = None
    if kind == "landweber":
        alpha = config.step_size if config.step_size is not None else estimate_step_size(op)
    rec = _Recorder(cost_fn, to_complex, counter)
    if kind == "landweber":
        trace = _landweber(fwd, adj, b, x0, alpha, config, rec, counter)
        trace.step_size = alpha
    elif kind == "cg":
        trace = _cg(fwd, adj, b, x0, config, rec, counter)
    else:
        trace = _lsqr(fwd, adj, b, x0, config, rec, counter)
    return trace


def landweber_real(At, bt, x0t=None, config=None, counter=None):
    """Landweber iteration ``xt <- xt + alpha At^T (bt - At xt)``."""
    return _run("landweber", "real", At, bt, x0t, config, counter)


def landweber_complex(op, b, x0=None, config=None, counter=None):
    """Landweber iteration ``x <- x + alpha A*(b - A(x))``."""
    return _run("landweber", "complex", op, b, x0, config, counter)


def cg_real(At, bt, x0t=None, config=None, counter=None):
    """Conjugate gradients on the normal equations of a lifted system."""
    return _run("cg", "real", At, bt, x0t, config, counter)


def cg_complex(op, b, x0=None, config=None, counter=None):
    """Conjugate gradients on ``A*(A(x)) = A*(b)`` with
    ``alpha_k = r^H r / real(p^H A*(A(p)))``."""
    return _run("cg", "complex", op, b, x0, config, counter)


def lsqr_real(At, bt, x0t=None, config=None, counter=None):
    return _run("lsqr", "real", At, bt, x0t, config, counter)


def lsqr_complex(op, b, x0=None, config=None, counter=None):
    """LSQR with every inner product taken as ``real(p^H q)``."""
    return _run("lsqr", "complex", op, b, x0, config, counter)


def normal_residual(op, b, x):
    """``||A*(b - A(x))||`` for a complex operator."""
    g = op.adjoint(np.asarray(b) - op.apply(x))
    return float(np.linalg.norm(g))


SOLVERS = {
    ("landweber", "real"): landweber_real,
    ("landweber", "complex"): landweber_complex,
    ("cg", "real"): cg_real,
    ("cg", "complex"): cg_complex,
    ("lsqr", "real"): lsqr_real,
    ("lsqr", "complex"): lsqr_complex,
}


def lift_problem(op, b):
    """Lift ``b`` for use with the real solvers."""
    return lift_vector(as_vector(b, op.rows, name="b"))
