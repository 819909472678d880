from fractions import Fraction

import pytest

from qrefl.characters import CharacterMatrix, OddDimension, grassmann_matrix, screen_reflection_solutions
from qrefl.noumi import (
    OperatorMatrix,
    build_k_operator,
    check_centrality_bf,
    check_centrality_bs,
    coideal_element,
    grassmann_coideal_generators,
    k_entry_by_contraction,
    qtrace_aux,
)
from qrefl.rea import check_operator_reflection
from qrefl.scalar import Scalar, q_pow, s_var
from qrefl.tensorlin import DimensionMismatch, TensorOperator
from qrefl.uqsln import antipode, flip, r_matrix, vector_rep


def Q(e, N):
    return q_pow(Fraction(e), N)


def perturbed(K):
    rows = [dict(r) for r in K.flat.rows]
    rows[1][1] = rows[1].get(1, Scalar(0, K.flat.root_order)) + 1
    return OperatorMatrix(TensorOperator(K.n, 2, rows, K.flat.root_order))


@pytest.mark.parametrize("M", [CharacterMatrix.identity(2), grassmann_matrix(2),
                               CharacterMatrix.identity(3)])
def test_flat_matches_contraction(M):
    K = build_k_operator(M)
    for i in range(1, M.n + 1):
        for j in range(1, M.n + 1):
            assert K.block(i, j) == k_entry_by_contraction(M, i, j)


def test_identity_gives_r21_r12():
    for n in (2, 3):
        R, P = r_matrix(n), flip(n)
        assert build_k_operator(CharacterMatrix.identity(n)).flat == P @ R @ P @ R


def test_grid_roundtrip():
    K = build_k_operator(grassmann_matrix(2))
    assert OperatorMatrix.from_grid(K.grid).flat == K.flat
    with pytest.raises(DimensionMismatch):
        OperatorMatrix(TensorOperator.identity(2, 3))


def test_scaling_covariance():
    c = s_var(2) + 2
    M = grassmann_matrix(2)
    K, Kc = build_k_operator(M), build_k_operator(M.scaled(c))
    assert Kc.flat == K.flat.scale(c)
    assert qtrace_aux(Kc) == qtrace_aux(K).scale(c)
    G = grassmann_coideal_generators(2)
    assert check_centrality_bs(Kc, G).passed == check_centrality_bs(K, G).passed


def test_qtrace_identity_is_scalar():
    # the image of a central element on the simple module V
    for n in (2, 3):
        C = qtrace_aux(build_k_operator(CharacterMatrix.identity(n)))
        c = C[0, 0]
        assert C == TensorOperator.identity(n, 1, C.root_order).scale(c)
    C2 = qtrace_aux(build_k_operator(CharacterMatrix.identity(2)))
    assert C2[0, 0] == Q(2, 2) + Q(-2, 2)


def test_qtrace_grassmann_n2_regression():
    s = s_var(2)
    C = qtrace_aux(build_k_operator(grassmann_matrix(2, s)))
    assert C.entries == [
        [s * (Q(2, 2) - 1), Q(-3, 2) - Q(-1, 2)],
        [1 - Q(2, 2), s * (1 - Q(-2, 2))],
    ]


def test_qtrace_of_zero():
    K = OperatorMatrix(TensorOperator.zeros(2, 2))
    assert qtrace_aux(K).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_identity_operator_re_and_centrality(n):
    K = build_k_operator(CharacterMatrix.identity(n))
    assert check_operator_reflection(K, r_matrix(n))
    assert check_centrality_bf(K)


@pytest.mark.parametrize("n", [2, 4])
def test_grassmann_operator_re_and_centrality(n):
    K = build_k_operator(grassmann_matrix(n))
    assert check_operator_reflection(K, r_matrix(n))
    assert check_centrality_bf(K)


def test_centrality_chain_over_battery():
    battery = [grassmann_matrix(2), CharacterMatrix.from_rows([[1, 1], [0, 1]], root_order=2)]
    battery += screen_reflection_solutions(2)
    for M in battery:
        K = build_k_operator(M)
        if check_operator_reflection(K, r_matrix(2)).passed:
            assert check_centrality_bf(K)


def test_perturbed_k_fails_bf():
    rep = check_centrality_bf(perturbed(build_k_operator(grassmann_matrix(2))))
    assert not rep.passed and rep.witness is not None


# ------------------------------------------------------------ coideal side

def test_sigma_b_n2():
    s = s_var(2)
    g = vector_rep(2)
    G = grassmann_coideal_generators(2, s)
    expected = -(g.y[1] @ g.t[1]) - g.t_inv[1] @ g.x[1] @ g.t[1] + g.t[1].scale(s)
    assert G.sigma_b == {1: expected}
    assert G.taus == {}


def test_sigma_b_n4():
    s = s_var(4)
    g = vector_rep(4)
    G = grassmann_coideal_generators(4, s)
    assert G.sigma_b[1] == -(g.y[1] @ g.t[1]) - g.t_inv[3] @ g.x[3] @ g.t[1]
    assert G.sigma_b[2] == (-(g.y[2] @ g.t[2]) - g.t_inv[2] @ g.x[2] @ g.t[2]
                            + g.t[2].scale(s))
    assert sorted(G.taus) == [1, 3]
    h = Fraction(1, 2)
    assert G.taus[1] == TensorOperator.diagonal(4, [Q(h, 4), Q(-h, 4), Q(-h, 4), Q(h, 4)])
    names = [name for name, _ in G.matrices()]
    assert names[:3] == ["sigma(B_1)", "sigma(B_2)", "sigma(B_3)"]


def test_coideal_element_words():
    s = s_var(4)
    assert coideal_element(1, 4, s) == {(("y", 1),): 1, (("tinv", 1), ("x", 3)): 1}
    assert (("tinv", 2),) in coideal_element(2, 4, s)
    assert antipode(coideal_element(1, 4, s))


def test_odd_dimension():
    with pytest.raises(OddDimension):
        grassmann_coideal_generators(3)


@pytest.mark.parametrize("n", [2, 4])
def test_centrality_bs_grassmann(n):
    s = s_var(n)
    K = build_k_operator(grassmann_matrix(n, s))
    assert check_centrality_bs(K, grassmann_coideal_generators(n, s))


@pytest.mark.parametrize("n", [2, 4])
def test_centrality_bs_detects_shifted_parameter(n):
    s = s_var(n)
    K = build_k_operator(grassmann_matrix(n, s))
    rep = check_centrality_bs(K, grassmann_coideal_generators(n, s + 1))
    assert not rep.passed and rep.witness is not None


def test_centrality_bs_detects_non_scalar_solutions():
    G = grassmann_coideal_generators(2)
    for M in screen_reflection_solutions(2):
        C = qtrace_aux(build_k_operator(M))
        scalar = C == TensorOperator.identity(2, 1, C.root_order).scale(C[0, 0])
        assert check_centrality_bs(build_k_operator(M), G).passed == scalar


def test_scalar_character_commutes_with_everything():
    # C_V of c*I is a scalar matrix, so it commutes with every coideal generator
    c = Q(1, 2) + 3
    K = build_k_operator(CharacterMatrix.identity(2).scaled(c))
    C = qtrace_aux(K)
    assert C == TensorOperator.identity(2, 1, C.root_order).scale(C[0, 0])
    assert check_centrality_bs(K, grassmann_coideal_generators(2))


def test_centrality_bs_dimension_check():
    with pytest.raises(DimensionMismatch):
        check_centrality_bs(build_k_operator(grassmann_matrix(2)), grassmann_coideal_generators(4))
