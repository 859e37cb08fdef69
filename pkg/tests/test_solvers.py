import numpy as np
import pytest

from minkdmp.classical import drazin, moore_penrose
from minkdmp.core import hs_decompose, metric_partition, minkowski_adjoint, minkowski_metric, numeric_rank
from minkdmp.errors import ConditionFailed, FullRank, NotExists, ShapeMismatch, SingularWV
from minkdmp.fixtures import SYSTEM_DATA
from minkdmp.minkowski import mdmp
from minkdmp.solvers import (
    ComplementBases,
    bordered_matrix,
    build_complement_bases,
    cramer_solve,
    least_norm_min,
    solve_projected,
)


def printed_bases():
    return ComplementBases(SYSTEM_DATA["V"], SYSTEM_DATA["W"], 1)


def admissible_b(A, rng, b2_scale=1.0):
    """b = G U (b1; b2) with G1^-1 b1 in the range of (Sigma K)^D."""
    dec = hs_decompose(A)
    part = metric_partition(dec)
    r, n = dec.r, dec.n
    z = rng.standard_normal(r) + 1j * rng.standard_normal(r)
    b1 = part.G1 @ (drazin(dec.SigmaK) @ z)
    b2 = b2_scale * (rng.standard_normal(n - r) + 1j * rng.standard_normal(n - r))
    return minkowski_metric(n) @ dec.U @ np.concatenate([b1, b2])


def objective(A, x, b):
    return np.linalg.norm(minkowski_adjoint(A @ moore_penrose(A)) @ A @ x - b)


def test_example_solutions(example_a):
    b, x = SYSTEM_DATA["b"], SYSTEM_DATA["x"]
    assert np.allclose(solve_projected(example_a, b).particular, x, atol=1e-4)
    res = least_norm_min(example_a, b)
    assert np.allclose(res.x, x, atol=1e-4)
    assert abs(res.min_value - SYSTEM_DATA["min_value"]) < 1e-4
    assert np.allclose(res.b1, SYSTEM_DATA["b1"], atol=1e-4)
    assert np.allclose(res.b2, SYSTEM_DATA["b2"], atol=1e-4)
    assert np.allclose(cramer_solve(example_a, b, printed_bases()), x, atol=1e-4)
    assert np.allclose(cramer_solve(example_a, b), x, atol=1e-4)


def test_printed_bases_give_printed_E(example_a):
    _, E = bordered_matrix(example_a, printed_bases())
    assert np.allclose(E, SYSTEM_DATA["E"])
    # W V is a permutation here, not the identity
    WV = SYSTEM_DATA["W"] @ SYSTEM_DATA["V"]
    assert not np.allclose(WV, np.eye(4))


def test_zero_rhs(example_a):
    z = np.zeros(5)
    assert np.array_equal(solve_projected(example_a, z).particular, z)
    assert np.allclose(cramer_solve(example_a, z), z)


def test_general_solution_with_null_vectors(instances, rng):
    for n, q, A in instances[:40]:
        b = rng.standard_normal(n)
        base = solve_projected(A, b)
        assert base.unique_on_rangeAk
        P = base.homogeneous_projector
        assert np.linalg.norm(P @ P - P) <= 1e-8 * max(1, np.linalg.norm(P))
        scale = max(1.0, np.linalg.norm(np.linalg.matrix_power(A, q)) * np.linalg.norm(b))
        assert base.residual <= 1e-8 * scale
        # any v gives a solution; v in N(A^k) in particular
        v = rng.standard_normal(n)
        res = solve_projected(A, b, v)
        assert res.x_residual <= 1e-8 * scale * max(1, np.linalg.norm(v))


def test_particular_in_range_of_power(instances, rng):
    for n, q, A in instances[:40]:
        x = solve_projected(A, rng.standard_normal(n)).particular
        Ak = np.linalg.matrix_power(A, q)
        s = np.linalg.norm(A, 2) ** q
        stacked = np.column_stack([Ak, x * s / max(np.linalg.norm(x), 1e-300)])
        assert numeric_rank(stacked, scale=2 * s) == numeric_rank(Ak, scale=2 * s)


def test_least_norm_min_on_instances(instances, rng):
    checked = 0
    for n, q, A in instances[:60]:
        if numeric_rank(A) == n:
            continue
        b = admissible_b(A, rng)
        res = least_norm_min(A, b)
        checked += 1
        assert res.condition_ok
        assert np.allclose(res.x, mdmp(A) @ b)
        assert abs(res.objective - res.min_value) <= 1e-8 * max(1, np.linalg.norm(b))
        assert abs(np.linalg.norm(res.b2) - res.min_value) <= 1e-12
        # empirical minimality over R(A^k)
        Ak = np.linalg.matrix_power(A, q)
        for _ in range(20):
            y = Ak @ (rng.standard_normal(n) + 1j * rng.standard_normal(n))
            assert objective(A, y, b) >= res.min_value - 1e-8
    assert checked > 20


def test_least_norm_min_homogeneity(example_a):
    b = SYSTEM_DATA["b"]
    res1, res3 = least_norm_min(example_a, b), least_norm_min(example_a, 3 * b)
    assert np.isclose(res3.min_value, 3 * res1.min_value)
    assert np.allclose(res3.x, 3 * res1.x)


def test_least_norm_min_zero_b2(instances, rng):
    n, q, A = next(t for t in instances if numeric_rank(t[2]) < t[0])
    b = admissible_b(A, rng, b2_scale=0.0)
    res = least_norm_min(A, b)
    assert res.min_value < 1e-12
    assert res.objective < 1e-8 * max(1, np.linalg.norm(b))


def test_least_norm_min_refusals(example_a):
    dec = hs_decompose(example_a)
    part = metric_partition(dec)
    # choose b1 with G1^-1 b1 outside R((Sigma K)^D)
    y = np.linalg.svd(drazin(dec.SigmaK))[0][:, -1]
    b1 = part.G1 @ y
    b = minkowski_metric(5) @ dec.U @ np.concatenate([b1, np.zeros(3)])
    with pytest.raises(ConditionFailed):
        least_norm_min(example_a, b)
    with pytest.raises(FullRank):
        least_norm_min(np.array([[2.0, 1.0], [0.0, 1.0]]), np.ones(2))
    with pytest.raises(NotExists):
        least_norm_min(np.array([[1.0, 1.0], [0.0, 0.0]]), np.ones(2))


def test_complement_bases(instances):
    for n, q, A in instances[:40]:
        bases = build_complement_bases(A)
        Ak = np.linalg.matrix_power(A, q)
        assert bases.V.shape == (n, n - bases.t) and bases.W.shape == (n - bases.t, n)
        assert np.linalg.norm(Ak @ bases.V) < 1e-8 * max(1, np.linalg.norm(Ak))
        assert np.linalg.norm(bases.W @ Ak) < 1e-8 * max(1, np.linalg.norm(Ak))
        E = bases.projector()
        assert np.linalg.norm(E @ E - E) < 1e-8 * max(1, np.linalg.norm(E))
        assert numeric_rank(E) == n - bases.t
        assert np.linalg.norm(Ak @ E) < 1e-8 * max(1, np.linalg.norm(Ak) * np.linalg.norm(E))


def test_complement_bases_edge_cases():
    bases = build_complement_bases(np.eye(2, k=1))
    assert bases.t == 0
    assert np.allclose(bases.projector(), np.eye(2))
    with pytest.raises(FullRank):
        build_complement_bases(np.eye(3))


def test_invalid_user_bases(example_a):
    V = SYSTEM_DATA["V"]
    with pytest.raises(ShapeMismatch):
        cramer_solve(example_a, SYSTEM_DATA["b"], ComplementBases(V[:, :3], SYSTEM_DATA["W"], 1))
    with pytest.raises(ConditionFailed):
        cramer_solve(example_a, SYSTEM_DATA["b"], ComplementBases(np.eye(5)[:, :4], SYSTEM_DATA["W"], 1))
    W_bad = SYSTEM_DATA["W"].copy()
    W_bad[3] = W_bad[0]
    with pytest.raises((ConditionFailed, SingularWV)):
        cramer_solve(example_a, SYSTEM_DATA["b"], ComplementBases(V, W_bad, 1))


def test_cramer_matches_projected(instances, rng):
    for n, q, A in instances[:60]:
        b = rng.standard_normal(n)
        x = solve_projected(A, b).particular
        y = cramer_solve(A, b)
        assert np.linalg.norm(y - x) <= 100 * 1e-8 * max(1, np.linalg.norm(x))


def test_cramer_nonsingular():
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    b = np.array([1.0, 2.0])
    assert np.allclose(cramer_solve(A, b), np.linalg.solve(A, b))


def test_projector_independent_of_basis_choice(instances, rng):
    # E is the projector onto N(A^k) along R(A^k), so re-basing V and W leaves it unchanged
    for n, q, A in instances[:30]:
        bases = build_complement_bases(A)
        m = n - bases.t
        R = rng.standard_normal((m, m)) + 3 * np.eye(m)
        S = rng.standard_normal((m, m)) + 3 * np.eye(m)
        other = ComplementBases(bases.V @ R, S @ bases.W, bases.t)
        assert np.allclose(other.projector(), bases.projector(), atol=1e-8)
        b = rng.standard_normal(n)
        assert np.allclose(cramer_solve(A, b, other), cramer_solve(A, b), atol=1e-6)
