"""Four-way benchmark on the conjugate-symmetry regularized problem

    min_x ||A x - b||^2 + lam ||C x - D conj(E x)||^2

solved by real-lifted and complex-native iterations, each with either
explicit matrices or blackbox matrix-vector callables.
"""

import csv
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .builtins import loraks_system
from .counter import MultCounter
from .lift import NaiveLiftedOp, build_loraks_lifted, lift_operator, lift_vector, unlift_vector
from .operators import as_vector
from .solvers import SOLVERS, SolverConfig, estimate_step_size

log = logging.getLogger(__name__)

APPROACHES = ("real-matrix", "complex-matrix", "real-funcall", "complex-funcall")
SOLVER_NAMES = ("landweber", "cg", "lsqr")
REFERENCE = "real-matrix"

PAPER_DIMS = (1000, 20000, 30000, 2000)
DESK_DIMS = (100, 2000, 3000, 200)
DEFAULT_LAMBDA = 1e-3

CSV_HEADER = ["approach", "solver", "iteration", "cum_real_mults", "cost",
              "elapsed_seconds", "rel_diff"]


class SingularGramError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class Problem:
    """A least-squares problem ``min ||op(x) - b||^2``."""

    op: object
    b: np.ndarray

    def lifted_matrix(self):
        return lift_operator(self.op)


@dataclass(frozen=True, eq=False)
class BenchProblem:
    A: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    x_true: np.ndarray
    noise: np.ndarray
    b: np.ndarray
    lam: float
    seed: int

    @property
    def dims(self):
        """``(N, M1, M2, P)``."""
        return (self.A.shape[1], self.A.shape[0], self.C.shape[0], self.D.shape[1])

    @property
    def rows(self):
        return self.A.shape[0] + self.C.shape[0]

    @cached_property
    def data(self):
        """Right-hand side of the stacked system, ``[b; 0]``."""
        return np.concatenate([self.b, np.zeros(self.C.shape[0], dtype=np.complex128)])

    def operator(self, form="expression"):
        return loraks_system(self.A, self.C, self.D, self.E, self.lam, form=form)

    def lifted_matrix(self):
        return build_loraks_lifted(self.A, self.C, self.D, self.E, self.lam)


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def generate_problem(seed, N, M1, M2, P, lam=DEFAULT_LAMBDA):
    """Random instance with i.i.d. standard normal real and imaginary parts.

    Draw order is A, C, D, E, x_true, noise from a PCG64 generator seeded
    with ``seed``, so regeneration is bit-identical.
    """
    dims = dict(N=N, M1=M1, M2=M2, P=P)
    for name, d in dims.items():
        if int(d) != d or d <= 0:
            raise ValueError(f"dimension {name} must be a positive integer, got {d}")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    rng = np.random.Generator(np.random.PCG64(seed))
    A = _gaussian(rng, (M1, N))
    C = _gaussian(rng, (M2, N))
    D = _gaussian(rng, (M2, P))
    E = _gaussian(rng, (P, N))
    x_true = _gaussian(rng, N)
    noise = _gaussian(rng, M1)
    b = A @ x_true + noise
    return BenchProblem(A, C, D, E, x_true, noise, b, float(lam), int(seed))


def oracle_solve(problem, cond_limit=1e12):
    """Dense least-squares solution through the lifted normal equations
    ``(At^T At) xt = At^T bt``.

    ``problem`` needs a ``lifted_matrix()`` method and a ``data`` or ``b``
    attribute holding the full right-hand side.
    """
    At = problem.lifted_matrix().matrix
    b = getattr(problem, "data", None)
    b = problem.b if b is None else b
    bt = lift_vector(as_vector(b, At.shape[0] // 2, name="b"))
    gram = At.T @ At
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularGramError(f"lifted Gram matrix is singular to working precision (cond ~ {cond:.3e})")
    return unlift_vector(np.linalg.solve(gram, At.T @ bt))


def rel_diff(p, q):
    """``||p - q|| / ||(p + q) / 2||``, taken as 0 when ``p == q``.

    Returns ``inf`` when ``p == -q != 0``.
    """
    num = np.linalg.norm(p - q)
    if num == 0.0:
        return 0.0
    den = np.linalg.norm(0.5 * p + 0.5 * q)
    return float(num / den) if den > 0 else float("inf")


@dataclass
class MetricsRow:
    approach: str
    solver: str
    iteration: int
    cum_real_mults: int
    cost: float
    elapsed_seconds: float
    rel_diff: float


def build_approach(problem, approach):
    """Return ``(family, operator, rhs)`` for one of :data:`APPROACHES`."""
    if approach == "real-matrix":
        return "real", problem.lifted_matrix(), lift_vector(problem.data)
    if approach == "complex-matrix":
        return "complex", problem.operator("matrix"), problem.data
    if approach == "real-funcall":
        return "real", NaiveLiftedOp(problem.operator("blackbox")), lift_vector(problem.data)
    if approach == "complex-funcall":
        return "complex", problem.operator("blackbox"), problem.data
    raise ValueError(f"unknown approach {approach!r}; choose from {', '.join(APPROACHES)}")


def _check_names(names, valid, what):
    names = list(names)
    for n in names:
        if n not in valid:
            raise ValueError(f"unknown {what} {n!r}; choose from {', '.join(valid)}")
    return names


def run_benchmark(problem, solvers=SOLVER_NAMES, approaches=APPROACHES, iters=None,
                  timing_repeats=1, step_size=None):
    """Run every (approach, solver) pair; see :func:`run_benchmark_traces`."""
    rows, _ = run_benchmark_traces(problem, solvers, approaches, iters, timing_repeats, step_size)
    return rows


def run_benchmark_traces(problem, solvers=SOLVER_NAMES, approaches=APPROACHES, iters=None,
                         timing_repeats=1, step_size=None):
    """Run every (approach, solver) pair and collect one row per iteration.

    Parameters
    ----------
    problem : BenchProblem
    solvers, approaches : iterable of str
    iters : dict, optional
        Iterations per solver name; defaults to 50 for Landweber and 15 for
        CG and LSQR.
    timing_repeats : int
        Each run is repeated this many times (serially) and the elapsed
        times averaged. Costs, counts and iterates come from the first run.
    step_size : float, optional
        Landweber step shared by all approaches. Estimated once from the
        matrix-form operator when omitted.

    Returns
    -------
    rows : list of MetricsRow
    traces : dict
        ``(approach, solver) -> SolverTrace`` for the first run of each pair.
    """
    solvers = _check_names(solvers, SOLVER_NAMES, "solver")
    approaches = _check_names(approaches, APPROACHES, "approach")
    if timing_repeats < 1:
        raise ValueError("timing_repeats must be at least 1")
    iters = {"landweber": 50, "cg": 15, "lsqr": 15, **(iters or {})}
    if "landweber" in solvers and step_size is None:
        step_size = estimate_step_size(problem.operator("matrix"))
        log.info("landweber step size %.6g", step_size)

    built = {a: build_approach(problem, a) for a in dict.fromkeys([REFERENCE, *approaches])}
    traces = {}
    rows = []
    for solver in solvers:
        config = SolverConfig(max_iters=iters[solver],
                              step_size=step_size if solver == "landweber" else None)
        for approach in dict.fromkeys([REFERENCE, *approaches]):
            family, op, rhs = built[approach]
            fn = SOLVERS[solver, family]
            runs = [fn(op, rhs, None, config, MultCounter()) for _ in range(timing_repeats)]
            traces[approach, solver] = runs[0]
            if approach not in approaches:
                continue
            ref = traces[REFERENCE, solver]
            for k, rec in enumerate(runs[0].records):
                elapsed = float(np.mean([r.records[k].elapsed_seconds for r in runs]))
                rows.append(MetricsRow(approach, solver, rec.k, rec.cum_real_mults, rec.cost,
                                       elapsed, rel_diff(runs[0].iterates[k], ref.iterates[k])))
            log.info("%s/%s: %d iterations, %d real mults", approach, solver,
                     runs[0].iterations, runs[0].records[-1].cum_real_mults)
    return rows, traces


def write_metrics(rows, path):
    """Write rows as CSV sorted by (approach, solver, iteration)."""
    rows = sorted(rows, key=lambda r: (r.approach, r.solver, r.iteration))
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in rows:
                writer.writerow([r.approach, r.solver, r.iteration, r.cum_real_mults,
                                 f"{r.cost:.17g}", f"{r.elapsed_seconds:.17g}",
                                 f"{r.rel_diff:.17g}"])
    except OSError as exc:
        raise OSError(f"could not write metrics to {path}: {exc}") from exc


def read_metrics(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [MetricsRow(r["approach"], r["solver"], int(r["iteration"]),
                           int(r["cum_real_mults"]), float(r["cost"]),
                           float(r["elapsed_seconds"]), float(r["rel_diff"]))
                for r in reader]


def validate_against_oracle(problem, traces):
    """Relative distance of each final iterate from the dense solution."""
    x_star = oracle_solve(problem)
    return {key: float(np.linalg.norm(t.x - x_star) / np.linalg.norm(x_star))
            for key, t in traces.items()}

