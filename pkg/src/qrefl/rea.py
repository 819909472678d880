"""Exact checkers for Yang-Baxter type identities.

Every check compares two operators entry by entry and reports the first
mismatch in row-major order, so failures give reproducible witnesses.

Matrix-valued inputs may be plain :class:`TensorOperator` objects or any
object with a ``matrix`` attribute (character matrices); operator-valued
inputs are anything with a ``flat`` attribute holding the operator on
``V_aux ⊗ V_rep``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from qrefl.scalar import Scalar, q_pow
from qrefl.tensorlin import (
    DimensionMismatch,
    TensorOperator,
    first_difference,
    kron,
    leg_embed,
    permutation_op,
    unflatten,
)
from qrefl.uqsln import r_matrix, r_matrix_inverse, rhat

__all__ = [
    "Report",
    "Witness",
    "check_braid",
    "check_four_braid",
    "check_hecke",
    "check_operator_reflection",
    "check_qybe",
    "check_reflection",
    "check_rtt",
    "compare",
    "reflection_r_prime",
    "type_b_rep",
]


@dataclass(frozen=True)
class Witness:
    row: tuple
    col: tuple
    lhs: Scalar
    rhs: Scalar

    @property
    def residual(self):
        return self.lhs - self.rhs


@dataclass(frozen=True)
class Report:
    relation: str
    passed: bool
    witness: Witness | None = None
    parts: tuple = field(default=())
    values: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.passed


def compare(lhs, rhs, relation):
    diff = first_difference(lhs, rhs)
    if diff is None:
        return Report(relation, True)
    i, j = diff
    n, k = lhs.n, lhs.legs
    return Report(relation, False, Witness(unflatten(i, n, k), unflatten(j, n, k),
                                           lhs[i, j], rhs[i, j]))


def combine(relation, parts):
    parts = tuple(parts)
    return Report(relation, all(p.passed for p in parts), None, parts)


def _matrix(M):
    return getattr(M, "matrix", M)


def _flip(n):
    return permutation_op((2, 1), n, 2)


# ----------------------------------------------------------------- R-level

def check_qybe(R):
    R12 = leg_embed(R, 3, [1, 2])
    R13 = leg_embed(R, 3, [1, 3])
    R23 = leg_embed(R, 3, [2, 3])
    return compare(R12 @ R13 @ R23, R23 @ R13 @ R12, "qybe")


def check_braid(Rh):
    A = leg_embed(Rh, 3, [1, 2])
    B = leg_embed(Rh, 3, [2, 3])
    return compare(A @ B @ A, B @ A @ B, "braid")


def hecke_eigenvalues(n):
    """The pair ``(q^{1/n-1}, -q^{1/n+1})`` annihilating ``rhat(n)``."""
    return q_pow(Fraction(1, n) - 1, n), -q_pow(Fraction(1, n) + 1, n)


def check_hecke(Rh, eigenvalues=None):
    n = Rh.n
    a, b = hecke_eigenvalues(n) if eigenvalues is None else eigenvalues
    I = TensorOperator.identity(n, 2, Rh.root_order)
    lhs = (Rh - I.scale(a)) @ (Rh - I.scale(b))
    return compare(lhs, TensorOperator.zeros(n, 2, Rh.root_order), "hecke")


# ---------------------------------------------------------------- RE-level

def reflection_r_prime(n, variant="r"):
    """``R' = R`` for variant ``"r"``; ``R' = (R_21)^{-1}`` for ``"rbar21"``."""
    if variant == "r":
        return r_matrix(n)
    if variant == "rbar21":
        P = _flip(n)
        return P @ r_matrix_inverse(n) @ P
    raise ValueError(f"unknown variant {variant!r}")


def check_reflection(Rp, M):
    M = _matrix(M)
    n = Rp.n
    if M.n != n or M.legs != 1:
        raise DimensionMismatch("character matrix does not match R'")
    I = TensorOperator.identity(n, 1, M.root_order)
    S1, S2 = kron(M, I), kron(I, M)
    P = _flip(n)
    R21 = P @ Rp @ P
    return compare(S2 @ R21 @ S1 @ Rp, R21 @ S1 @ Rp @ S2, "reflection")


def _operator_flat(T):
    flat = getattr(T, "flat", None)
    if flat is not None:
        return flat, True
    return _matrix(T), False


def check_rtt(R, T):
    """``R T_1 T_2 = T_2 T_1 R`` with entries composed in the written order."""
    n = R.n
    flat, op_valued = _operator_flat(T)
    if op_valued:
        if flat.n != n or flat.legs != 2:
            raise DimensionMismatch("operator entries must act on an n-dimensional space")
        T1 = leg_embed(flat, 3, [1, 3])
        T2 = leg_embed(flat, 3, [2, 3])
        R12 = leg_embed(R, 3, [1, 2])
    else:
        if flat.n != n or flat.legs != 1:
            raise DimensionMismatch("matrix does not match R")
        I = TensorOperator.identity(n, 1, flat.root_order)
        T1, T2, R12 = kron(flat, I), kron(I, flat), R
    return compare(R12 @ T1 @ T2, T2 @ T1 @ R12, "rtt")


def check_operator_reflection(K, Rp):
    """Reflection equation for an operator-valued K on ``aux ⊗ aux ⊗ rep``."""
    flat, _ = _operator_flat(K)
    n = Rp.n
    if flat.n != n or flat.legs != 2:
        raise DimensionMismatch("K must act on V_aux ⊗ V_rep with dim V_rep = n")
    K13 = leg_embed(flat, 3, [1, 3])
    K23 = leg_embed(flat, 3, [2, 3])
    R12 = leg_embed(Rp, 3, [1, 2])
    R21 = leg_embed(Rp, 3, [2, 1])
    return compare(K23 @ R21 @ K13 @ R12, R21 @ K13 @ R12 @ K23, "operator_reflection")


def check_four_braid(S_leg, Rh, M):
    M = _matrix(M)
    if S_leg not in (1, 2):
        raise ValueError("S_leg must be 1 or 2")
    S = leg_embed(M, 2, [S_leg])
    return compare(S @ Rh @ S @ Rh, Rh @ S @ Rh @ S, "four_braid")


# ------------------------------------------------------------------ type B

# With S on the second leg, S Rh S Rh = Rh S Rh S is literally the
# reflection equation for R' = R.  The boundary generator therefore sits
# on the last strand and g_i braids strands (k-i, k-i+1), so that g_1 is
# the crossing next to the boundary.
BOUNDARY_LEG = "last"


def type_b_rep(n, k, M, scale=None):
    """Type-B braid generators ``[g_0, g_1, ..., g_{k-1}]`` on ``V^{⊗k}`` and a report."""
    if k < 2:
        raise ValueError("need at least two strands")
    M = _matrix(M)
    g0_local = M if scale is None else M.scale(scale)
    g0 = leg_embed(g0_local, k, [k])
    Rh = rhat(n)
    gens = [g0] + [leg_embed(Rh, k, [k - i, k - i + 1]) for i in range(1, k)]

    parts = []
    g1 = gens[1]
    parts.append(compare(g0 @ g1 @ g0 @ g1, g1 @ g0 @ g1 @ g0, "g0g1g0g1=g1g0g1g0"))
    for i in range(1, k - 1):
        a, b = gens[i], gens[i + 1]
        parts.append(compare(a @ b @ a, b @ a @ b, f"g{i}g{i + 1}g{i}=g{i + 1}g{i}g{i + 1}"))
    for i in range(1, k):
        for j in range(i + 2, k):
            a, b = gens[i], gens[j]
            parts.append(compare(a @ b, b @ a, f"[g{i},g{j}]=0"))
    for j in range(2, k):
        parts.append(compare(g0 @ gens[j], gens[j] @ g0, f"[g0,g{j}]=0"))
    return gens, combine("type_b", parts)
