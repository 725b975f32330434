import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reallinear import (
    BlackboxOp,
    DimensionError,
    MatrixOp,
    MultCounter,
    NaiveLiftedOp,
    adjoint,
    apply,
    build_loraks_lifted,
    conjugation,
    lift_operator,
    lift_vector,
    loraks_system,
    materialize,
    naive_funcall_lift_adjoint,
    naive_funcall_lift_apply,
    stack,
    unlift_vector,
)
from reallinear.lift import LiftedOperator
from reallinear.testing import random_matrix, random_operator, random_vector

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_lift_vector_packing():
    np.testing.assert_array_equal(lift_vector(np.array([1 + 2j, 3])), [1, 3, 2, 0])


def test_unlift_vector():
    np.testing.assert_array_equal(unlift_vector([0, 0, 1, 1]), [1j, 1j])


def test_unlift_rejects_odd_length():
    with pytest.raises(DimensionError):
        unlift_vector([1, 2, 3])


def test_round_trip_is_bit_exact():
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = random_vector(rng, int(rng.integers(1, 50))) * 10.0 ** rng.integers(-300, 300)
        back = unlift_vector(lift_vector(x))
        assert back.tobytes() == x.tobytes()


def test_lift_rotation():
    np.testing.assert_array_equal(lift_operator(MatrixOp([[1j]])).matrix, [[0, -1], [1, 0]])


def test_lift_conjugation():
    np.testing.assert_array_equal(lift_operator(conjugation(1)).matrix, [[1, 0], [0, -1]])


def test_lift_matches_evaluation_at_one_and_i():
    op = MatrixOp([[1 + 2j]], [[3 - 1j]])
    At = lift_operator(op).matrix
    # columns are the lifted images of 1 and i
    expected = np.column_stack([lift_vector(apply(op, [1])), lift_vector(apply(op, [1j]))])
    np.testing.assert_array_equal(At, expected)
    np.testing.assert_array_equal(At, [[4, -1], [3, -2]])


def test_loraks_lifted_scalar_instance():
    one = np.ones((1, 1))
    At = build_loraks_lifted(one, one, one, one, 1.0).matrix
    # x -> [x; x - conj(x)] = [x; 2i imag(x)]
    np.testing.assert_array_equal(At, [[1, 0], [0, 0], [0, 1], [0, 2]])


def test_loraks_lifted_without_antilinear_term():
    rng = np.random.default_rng(1)
    A, C = random_matrix(rng, 3, 2), random_matrix(rng, 4, 2)
    D, E = np.zeros((4, 5)), random_matrix(rng, 5, 2)
    lam = 0.25
    s = np.sqrt(lam)
    At = build_loraks_lifted(A, C, D, E, lam).matrix
    np.testing.assert_array_equal(At[3:7], np.hstack([s * C.real, -s * C.imag]))
    np.testing.assert_array_equal(At[10:14], np.hstack([s * C.imag, s * C.real]))


def test_loraks_lifted_dimension_checks():
    with pytest.raises(DimensionError):
        build_loraks_lifted(np.ones((2, 2)), np.ones((3, 2)), np.ones((2, 4)), np.ones((4, 2)), 1.0)
    with pytest.raises(ValueError):
        build_loraks_lifted(np.ones((2, 2)), np.ones((3, 2)), np.ones((3, 4)), np.ones((4, 2)), 0.0)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_loraks_lifted_matches_generic_lift(seed):
    rng = np.random.default_rng(seed)
    N, M1, M2, P = (int(v) for v in rng.integers(1, 12, size=4))
    A, C = random_matrix(rng, M1, N), random_matrix(rng, M2, N)
    D, E = random_matrix(rng, M2, P), random_matrix(rng, P, N)
    lam = float(rng.uniform(0.01, 3))
    direct = build_loraks_lifted(A, C, D, E, lam).matrix
    generic = lift_operator(materialize(loraks_system(A, C, D, E, lam))).matrix
    assert np.abs(direct - generic).max() <= 1e-13 * max(np.abs(generic).max(), 1)


# --- naive function-call lifting ---------------------------------------------


def _counting_blackbox(M, calls, name):
    MH = M.conj().T

    def fwd(x):
        calls[name] += 1
        return M @ x

    def bwd(y):
        calls[name] += 1
        return MH @ y

    return BlackboxOp(fwd, bwd, M.shape, mult_charge_apply=4 * M.size, validate=False)


def test_naive_call_counts():
    rng = np.random.default_rng(2)
    N, M1, M2, P = 3, 4, 5, 2
    mats = {"A": random_matrix(rng, M1, N), "C": random_matrix(rng, M2, N),
            "D": random_matrix(rng, M2, P), "E": random_matrix(rng, P, N)}
    calls = dict.fromkeys(mats, 0)
    bb = {k: _counting_blackbox(m, calls, k) for k, m in mats.items()}
    op = stack([bb["A"], 0.5 * (bb["C"] - bb["D"] @ conjugation(P) @ bb["E"])])
    xt = rng.standard_normal(2 * N)
    naive_funcall_lift_apply(op, xt)
    assert calls == {"A": 4, "C": 4, "D": 8, "E": 8}
    calls.update(dict.fromkeys(calls, 0))
    naive_funcall_lift_adjoint(op, rng.standard_normal(2 * (M1 + M2)))
    assert calls == {"A": 4, "C": 4, "D": 8, "E": 8}


def test_naive_call_charges():
    rng = np.random.default_rng(3)
    N, M1, M2, P = 3, 4, 5, 2
    A, C = random_matrix(rng, M1, N), random_matrix(rng, M2, N)
    D, E = random_matrix(rng, M2, P), random_matrix(rng, P, N)
    op = loraks_system(A, C, D, E, 1.0, form="blackbox")  # sqrt(1) scale is free
    c = MultCounter()
    naive_funcall_lift_apply(op, rng.standard_normal(2 * N), c)
    calls = 4 * 4 * M1 * N + 4 * 4 * M2 * N + 8 * 4 * M2 * P + 8 * 4 * P * N
    assert c.total == calls


def test_naive_conjugation():
    xt = np.array([1.0, 2.0, 3.0, -4.0])
    np.testing.assert_array_equal(naive_funcall_lift_apply(conjugation(2), xt), [1, 2, -3, 4])


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_naive_matches_dense(seed):
    rng = np.random.default_rng(seed)
    op = random_operator(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), depth=2)
    At = lift_operator(op)
    naive = NaiveLiftedOp(op)
    xt = rng.standard_normal(2 * op.cols)
    yt = rng.standard_normal(2 * op.rows)
    ref = At.matvec(xt)
    assert np.linalg.norm(naive.matvec(xt) - ref) <= 1e-12 * max(np.linalg.norm(ref), 1e-300) + 1e-300
    ref = At.rmatvec(yt)
    assert np.linalg.norm(naive.rmatvec(yt) - ref) <= 1e-12 * max(np.linalg.norm(ref), 1e-300) + 1e-300


def test_naive_loraks_matches_dense():
    rng = np.random.default_rng(4)
    A, C = random_matrix(rng, 6, 4), random_matrix(rng, 5, 4)
    D, E = random_matrix(rng, 5, 3), random_matrix(rng, 3, 4)
    op = loraks_system(A, C, D, E, 1e-3, form="blackbox")
    At = build_loraks_lifted(A, C, D, E, 1e-3)
    for _ in range(5):
        xt, yt = rng.standard_normal(8), rng.standard_normal(22)
        ref = At.matvec(xt)
        assert np.linalg.norm(naive_funcall_lift_apply(op, xt) - ref) <= 1e-12 * np.linalg.norm(ref)
        ref = At.rmatvec(yt)
        assert np.linalg.norm(naive_funcall_lift_adjoint(op, yt) - ref) <= 1e-12 * np.linalg.norm(ref)


def test_lifted_matrix_charges_and_checks():
    At = lift_operator(MatrixOp(np.ones((3, 2))))
    c = MultCounter()
    At.matvec(np.ones(4), c)
    At.rmatvec(np.ones(6), c)
    assert c.total == 2 * 6 * 4
    with pytest.raises(DimensionError):
        At.matvec(np.ones(3))


# --- lifting lemma ------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_lifted_forward_and_adjoint(seed):
    rng = np.random.default_rng(seed)
    op = random_operator(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)))
    At = lift_operator(op)
    m, n = random_vector(rng, op.cols), random_vector(rng, op.rows)
    fwd = apply(op, m)
    assert np.linalg.norm(At.matvec(lift_vector(m)) - lift_vector(fwd)) <= 1e-12 * np.linalg.norm(fwd)
    back = adjoint(op, n)
    assert np.linalg.norm(At.rmatvec(lift_vector(n)) - lift_vector(back)) <= 1e-12 * np.linalg.norm(back)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_cost_is_preserved_by_lifting(seed):
    rng = np.random.default_rng(seed)
    op = random_operator(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)))
    At = lift_operator(op).matrix
    x, b = random_vector(rng, op.cols), random_vector(rng, op.rows)
    complex_cost = np.linalg.norm(apply(op, x) - b) ** 2
    lifted_cost = np.linalg.norm(At @ lift_vector(x) - lift_vector(b)) ** 2
    assert lifted_cost == pytest.approx(complex_cost, rel=1e-12)


def test_lifted_operator_view():
    rng = np.random.default_rng(5)
    op = random_operator(rng, 4, 3)
    view, At = LiftedOperator(op), lift_operator(op)
    xt, yt = rng.standard_normal(6), rng.standard_normal(8)
    np.testing.assert_allclose(view.matvec(xt), At.matvec(xt), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(view.rmatvec(yt), At.rmatvec(yt), rtol=1e-12, atol=1e-12)
