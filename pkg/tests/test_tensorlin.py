import itertools
import random

import pytest

from qrefl.scalar import Scalar, q_pow, s_var
from qrefl.tensorlin import (
    BadPositions,
    DimensionMismatch,
    SingularMatrix,
    TensorOperator,
    TensorVector,
    apply_on_legs,
    det_fraction_free,
    flatten,
    inverse,
    kron,
    leg_embed,
    permutation_op,
    unflatten,
)
from qrefl.uqsln import r_matrix

q = q_pow(1)
s = s_var()
POOL = [Scalar(0), Scalar(1), Scalar(-2), q, q**-1, s, q - q**-1, s * q + 1]


def random_op(rng, n=2, legs=1):
    d = n**legs
    return TensorOperator.from_dense(n, legs, [[rng.choice(POOL) for _ in range(d)] for _ in range(d)])


def test_kron_identity_and_diagonal_action():
    assert kron(TensorOperator.identity(2), TensorOperator.identity(2)) == TensorOperator.identity(2, 2)
    A = kron(TensorOperator.diagonal(2, [q, q**-1]), TensorOperator.identity(2))
    v = TensorVector.basis(2, (2, 1))
    assert A @ v == TensorVector(2, 2, {flatten((2, 1), 2): q**-1})


def test_kron_mixed_product():
    rng = random.Random(1)
    for _ in range(5):
        A, B, C, D = (random_op(rng) for _ in range(4))
        assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)


def test_kron_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kron(TensorOperator.identity(2), TensorOperator.identity(3))


def test_leg_embed_identities():
    rng = random.Random(2)
    A, B = random_op(rng), random_op(rng)
    I = TensorOperator.identity(2)
    assert leg_embed(A, 2, [1]) == kron(A, I)
    R = r_matrix(2)
    P12 = leg_embed(permutation_op((2, 1), 2), 3, [1, 2])
    assert leg_embed(R, 3, [2, 1]) == P12 @ leg_embed(R, 3, [1, 2]) @ P12
    X, Y = leg_embed(A, 3, [1]), leg_embed(B, 3, [3])
    assert X @ Y == Y @ X
    P = permutation_op((2, 1), 2)
    assert leg_embed(P @ R @ P, 3, [1, 3]) == leg_embed(R, 3, [3, 1])


@pytest.mark.parametrize("legs,positions", [(2, [1, 1]), (1, [0]), (1, [4]), (1, [1, 2])])
def test_leg_embed_bad_positions(legs, positions):
    op = TensorOperator.identity(2, legs)
    with pytest.raises(BadPositions):
        leg_embed(op, 3, positions)


def test_apply_on_legs_matches_embedding():
    rng = random.Random(3)
    A = random_op(rng, legs=2)
    v = TensorVector(2, 3, {i: rng.choice(POOL) for i in range(8)})
    assert apply_on_legs(A, v, [3, 1]) == leg_embed(A, 3, [3, 1]) @ v


def test_permutation_basics():
    assert permutation_op((1, 2, 3), 2) == TensorOperator.identity(2, 3)
    P = permutation_op((2, 1), 2)
    assert P @ TensorVector.basis(2, (1, 2)) == TensorVector.basis(2, (2, 1))
    assert P @ P == TensorOperator.identity(2, 2)


def _compose(a, b):
    # operator of a after b: factor at j goes to b[j], then to a[b[j]]
    return tuple(a[b[j] - 1] for j in range(len(a)))


def test_permutation_homomorphism():
    perms = list(itertools.permutations((1, 2, 3)))
    for a in perms:
        for b in perms:
            lhs = permutation_op(a, 2) @ permutation_op(b, 2)
            assert lhs == permutation_op(_compose(a, b), 2)


def test_flatten_roundtrip():
    for n in range(1, 5):
        for k in range(1, 5):
            for idx in range(n**k):
                assert flatten(unflatten(idx, n, k), n) == idx


def test_associativity():
    rng = random.Random(4)
    for _ in range(3):
        A, B, C = (random_op(rng, 3) for _ in range(3))
        assert (A @ B) @ C == A @ (B @ C)


def test_det_examples():
    assert det_fraction_free(TensorOperator.identity(3)) == 1
    assert det_fraction_free(TensorOperator.diagonal(2, [q, q**-1])) == 1
    assert det_fraction_free(TensorOperator.zeros(2)) == 0


def test_det_with_denominators():
    A = TensorOperator.from_dense(2, 1, [[1 / (q - 1), s], [Scalar(1), q / s]])
    assert det_fraction_free(A) == A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]


def test_det_multiplicative():
    rng = random.Random(5)
    for _ in range(4):
        A, B = random_op(rng, 3), random_op(rng, 3)
        assert det_fraction_free(A @ B) == det_fraction_free(A) * det_fraction_free(B)


def test_inverse_examples():
    assert inverse(TensorOperator.identity(2)) == TensorOperator.identity(2)
    R = r_matrix(2)
    assert inverse(R) @ R == TensorOperator.identity(2, 2, R.root_order)
    P = permutation_op((2, 1), 2)
    assert inverse(P) == P
    with pytest.raises(SingularMatrix):
        inverse(TensorOperator.from_dense(2, 1, [[1, 1], [1, 1]]))


def test_inverse_random():
    rng = random.Random(6)
    A = random_op(rng, 3)
    while det_fraction_free(A) == 0:
        A = random_op(rng, 3)
    B = inverse(A)
    I = TensorOperator.identity(3, 1, A.root_order)
    assert A @ B == I and B @ A == I


def test_ratio_to():
    v = TensorVector(2, 1, {0: q, 1: Scalar(1)})
    w = TensorVector(2, 1, {0: q * s, 1: s})
    assert w.ratio_to(v) == s
    assert TensorVector(2, 1, {0: q}).ratio_to(v) is None
