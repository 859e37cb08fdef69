import numpy as np
import pytest

from minkdmp.classical import drazin
from minkdmp.core import hs_decompose, metric_partition, minkowski_adjoint
from minkdmp.errors import IndexTooLarge, NotExists, SingularDelta, SingularG1, ZeroPower
from minkdmp.fixtures import EXAMPLE_INVERSES
from minkdmp.minkowski import (
    MDMP_ROUTES,
    dual_mdmp,
    dual_mdmp_hs,
    m_core,
    mdmp,
    mdmp_composite,
    mdmp_fullrank,
    mdmp_hs,
    mdmp_hs_forms,
    minkowski_exists,
    minkowski_inverse,
    minkowski_inverse_hs,
    projector_AAdm,
    projector_AdmA,
)
from minkdmp.verify import check_mdmp_system, check_minkowski

# column (1, 1) lies on the light cone, so A~ A or A A~ vanishes
LIGHTCONE_ROW = np.array([[1.0, 1.0], [0.0, 0.0]])
LIGHTCONE_COL = np.array([[1.0, 0.0], [1.0, 0.0]])


def rel(X, Y):
    return np.linalg.norm(X - Y) / max(1.0, np.linalg.norm(Y))


def test_existence_report(example_a):
    rep = minkowski_exists(example_a)
    assert rep.exists
    assert (rep.rank_A, rep.rank_AAs, rep.rank_AsA, rep.rank_AsAAs) == (2, 2, 2, 2)
    assert minkowski_exists(np.eye(3)).exists


@pytest.mark.parametrize("A", [LIGHTCONE_ROW, LIGHTCONE_COL])
def test_lightcone_does_not_exist(A):
    rep = minkowski_exists(A)
    assert not rep.exists and rep.rank_A == 1
    assert min(rep.rank_AAs, rep.rank_AsA) == 0
    with pytest.raises(NotExists) as info:
        mdmp(A)
    assert info.value.details["report"] is not None


def test_hs_route_signals_nonexistence():
    with pytest.raises(SingularDelta):
        minkowski_inverse_hs(hs_decompose(LIGHTCONE_ROW))
    with pytest.raises(SingularG1):
        mdmp_hs(hs_decompose(LIGHTCONE_COL))


def test_minkowski_inverse_examples(example_a):
    assert np.allclose(minkowski_inverse(example_a), EXAMPLE_INVERSES["minkowski"], atol=1e-4)
    assert np.allclose(minkowski_inverse(np.diag([2.0, 3.0, 0.0])), np.diag([0.5, 1 / 3, 0.0]))
    assert np.array_equal(minkowski_inverse(np.zeros((3, 2))), np.zeros((2, 3)))


def test_minkowski_inverse_rectangular(rng):
    A = rng.standard_normal((4, 3))
    X = minkowski_inverse(A)
    assert check_minkowski(A, X).passed


def test_minkowski_routes_agree(instances):
    for n, q, A in instances[:60]:
        X = minkowski_inverse(A)
        assert check_minkowski(A, X).passed
        assert rel(minkowski_inverse_hs(hs_decompose(A)), X) < 1e-8


def test_mdmp_examples(example_a):
    X = mdmp(example_a)
    assert np.allclose(X, EXAMPLE_INVERSES["mdmp"], atol=1e-4)
    assert np.allclose(dual_mdmp(example_a), EXAMPLE_INVERSES["dual-mdmp"], atol=1e-4)
    assert not np.allclose(X, dual_mdmp(example_a), atol=1e-4)
    assert np.array_equal(mdmp(np.eye(3, k=1)), np.zeros((3, 3)))
    A = np.array([[2.0, 1.0], [0.5, 3.0]])
    assert np.allclose(mdmp(A), np.linalg.inv(A))


def test_hs_forms_agree_on_example(example_a):
    dec = hs_decompose(example_a)
    first, second = mdmp_hs_forms(dec, metric_partition(dec))
    assert np.allclose(first, second)
    assert np.allclose(first, EXAMPLE_INVERSES["mdmp"], atol=1e-4)


def test_hand_oracle_diag():
    A = np.diag([2.0, 0.0])
    dec = hs_decompose(A)
    part = metric_partition(dec)
    assert np.allclose(drazin(dec.SigmaK), [[0.5]])
    assert np.allclose(np.abs(part.G1), [[1.0]])
    for route in MDMP_ROUTES.values():
        assert np.allclose(route(A), np.diag([0.5, 0.0]))
    assert np.allclose(m_core(A), np.diag([0.5, 0.0]))


def test_fullrank_route_edge_cases(example_a):
    assert np.allclose(mdmp_fullrank(example_a), EXAMPLE_INVERSES["mdmp"], atol=1e-4)
    with pytest.raises(ZeroPower):
        mdmp_fullrank(np.eye(3, k=1))
    with pytest.raises(ZeroPower):
        mdmp_fullrank(np.zeros((2, 2)))


def test_composite_forms(example_a):
    left, right = mdmp_composite(example_a)
    assert np.allclose(left, EXAMPLE_INVERSES["mdmp"], atol=1e-4)
    assert np.allclose(right, EXAMPLE_INVERSES["mdmp"], atol=1e-4)
    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    for X in mdmp_composite(A):
        assert np.allclose(X, np.linalg.inv(A))


def test_routes_agree_on_instances(instances):
    for n, q, A in instances[:80]:
        ref = mdmp(A)
        assert check_mdmp_system(A, ref).passed
        for name, route in MDMP_ROUTES.items():
            assert rel(route(A), ref) < 10 * 1e-8, name


def test_dual_mdmp_block_form(instances, example_a):
    assert np.allclose(dual_mdmp_hs(hs_decompose(example_a)), EXAMPLE_INVERSES["dual-mdmp"], atol=1e-4)
    for n, q, A in instances[:40]:
        assert rel(dual_mdmp_hs(hs_decompose(A)), dual_mdmp(A)) < 1e-8


def test_m_core_requires_index_one(example_a):
    with pytest.raises(IndexTooLarge):
        m_core(example_a)


def test_projectors(instances, example_a):
    assert np.allclose(projector_AAdm(example_a), example_a @ EXAMPLE_INVERSES["mdmp"])
    assert np.allclose(projector_AdmA(example_a), EXAMPLE_INVERSES["mdmp"] @ example_a)
    assert np.allclose(projector_AdmA(example_a), EXAMPLE_INVERSES["drazin"] @ example_a)
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(projector_AAdm(A), np.eye(2))
    for n, q, A in instances[:40]:
        P, Q = projector_AAdm(A), projector_AdmA(A)
        assert rel(P @ P, P) < 1e-8 and rel(Q @ Q, Q) < 1e-8
        assert rel(Q, drazin(A) @ A) < 1e-8


def test_rank_of_mdmp_equals_rank_of_power(instances):
    from minkdmp.core import numeric_rank

    for n, q, A in instances[:40]:
        Ak = np.linalg.matrix_power(A, q)
        assert numeric_rank(mdmp(A)) == numeric_rank(Ak, scale=np.linalg.norm(A, 2) ** q)


def test_adjoint_symmetry_of_projectors(instances):
    for n, q, A in instances[:20]:
        P = A @ minkowski_inverse(A)
        assert rel(minkowski_adjoint(P), P) < 1e-8
