"""L-operators of characters on the vector representation and their central elements."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from qrefl.characters import OddDimension, _as_character
from qrefl.rea import Report, Witness, combine, compare
from qrefl.scalar import Scalar, q_pow, s_var
from qrefl.tensorlin import DimensionMismatch, TensorOperator, kron, permutation_op
from qrefl.uqsln import (
    WeightVector,
    antipode,
    evaluate,
    r_matrix,
    tau_action,
    two_rho_exponents,
    vector_rep,
)

__all__ = [
    "CoidealGenerators",
    "OperatorMatrix",
    "build_k_operator",
    "check_centrality_bf",
    "check_centrality_bs",
    "coideal_element",
    "grassmann_coideal_generators",
    "k_entry_by_contraction",
    "qtrace_aux",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """n x n grid of operators on V_rep, stored flat on ``V_aux ⊗ V_rep`` (aux first)."""

    flat: TensorOperator

    def __post_init__(self):
        if self.flat.legs != 2:
            raise DimensionMismatch("operator matrix must act on V_aux ⊗ V_rep")

    @property
    def n(self):
        return self.flat.n

    @property
    def d(self):
        return self.flat.n

    def block(self, i, j):
        """``K^i_j`` as a d x d matrix (1-based aux indices)."""
        n = self.n
        rows = []
        for k in range(n):
            src = self.flat.rows[(i - 1) * n + k]
            rows.append({m: v for col, v in src.items()
                         for m in [col - (j - 1) * n] if 0 <= m < n})
        return TensorOperator._trusted(n, 1, rows, self.flat.root_order)

    @property
    def grid(self):
        return [[self.block(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    @classmethod
    def from_grid(cls, grid):
        n = len(grid)
        rows = [dict() for _ in range(n * n)]
        for i, line in enumerate(grid):
            if len(line) != n:
                raise DimensionMismatch("grid must be square")
            for j, blk in enumerate(line):
                if blk.n != n or blk.legs != 1:
                    raise DimensionMismatch("blocks must be n x n")
                for k, row in enumerate(blk.rows):
                    for m, v in row.items():
                        rows[i * n + k][j * n + m] = v
        return cls(TensorOperator(n, 2, rows))


def build_k_operator(M, n=None):
    """``R_21 (M ⊗ I) R_12`` on ``V_aux ⊗ V_rep`` with M on the auxiliary leg."""
    M = _as_character(M)
    n = M.n if n is None else n
    if M.n != n:
        raise DimensionMismatch("character matrix does not match n")
    R = r_matrix(n)
    P = permutation_op((2, 1), n, 2)
    I = TensorOperator.identity(n, 1, M.root_order)
    return OperatorMatrix((P @ R @ P) @ kron(M.matrix, I) @ R)


def k_entry_by_contraction(M, i, j):
    """``(K^i_j)_{k,m} = sum_{a,b,l} R^{ki}_{la} M^a_b R^{bl}_{jm}``, index by index."""
    M = _as_character(M)
    n = M.n
    R = r_matrix(n).entries
    E = M.entries

    def r(a, b, c, d):
        return R[(a - 1) * n + (b - 1)][(c - 1) * n + (d - 1)]

    out = []
    for k in range(1, n + 1):
        row = []
        for m in range(1, n + 1):
            acc = Scalar(0)
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    mab = E[a - 1][b - 1]
                    if not mab:
                        continue
                    for l in range(1, n + 1):
                        acc = acc + r(k, i, l, a) * mab * r(b, l, j, m)
            row.append(acc)
        out.append(row)
    return TensorOperator.from_dense(n, 1, out)


def qtrace_aux(K):
    """``sum_i q^{n-2i+1} K^i_i``, the image of the quantum trace of V."""
    n = K.n
    N = K.flat.root_order
    total = TensorOperator.zeros(n, 1, N)
    for i, e in enumerate(two_rho_exponents(n), 1):
        total = total + K.block(i, i).scale(q_pow(e, N))
    return total


def _commutator_report(relation, C, g):
    rep = compare(C @ g, g @ C, relation)
    return rep


def check_centrality_bf(K):
    C = qtrace_aux(K)
    parts = []
    for i in range(1, K.n + 1):
        for j in range(1, K.n + 1):
            rep = _commutator_report(f"[C,K^{i}_{j}]", C, K.block(i, j))
            if not rep.passed:
                return Report("centrality_bf", False, rep.witness, (rep,))
            parts.append(rep)
    return combine("centrality_bf", parts)


# ------------------------------------------------------- coideal side

@dataclass(frozen=True)
class CoidealGenerators:
    n: int
    s: Scalar
    sigma_b: dict
    taus: dict

    def matrices(self):
        out = [(f"sigma(B_{i})", g) for i, g in sorted(self.sigma_b.items())]
        out += [(f"tau(w_{i}-w_{self.n - i})", g) for i, g in sorted(self.taus.items())]
        return out


def coideal_element(i, n, s):
    """``B_i`` as a word-algebra element (see :mod:`qrefl.uqsln`)."""
    m = n // 2
    p = n - i
    elt = {(("y", i),): Scalar(1), (("tinv", i), ("x", p)): Scalar(1)}
    if i == m:
        elt[(("tinv", m),)] = s
    return elt


def grassmann_coideal_generators(n, s=None):
    if n < 2 or n % 2:
        raise OddDimension(f"n = {n} must be even and at least 2")
    s = s_var(n) if s is None else s
    m = n // 2
    gens = vector_rep(n)
    sigma_b = {i: evaluate(antipode(coideal_element(i, n, s)), gens) for i in range(1, n)}
    taus = {}
    for i in range(1, n):
        if i == m:
            continue
        w = WeightVector.fundamental(i, n) - WeightVector.fundamental(n - i, n)
        taus[i] = tau_action(w, n)
    return CoidealGenerators(n, s, sigma_b, taus)


def check_centrality_bs(K, G):
    if K.n != G.n:
        raise DimensionMismatch("K and the coideal generators live on different n")
    C = qtrace_aux(K)
    parts = []
    for name, g in G.matrices():
        rep = _commutator_report(f"[C,{name}]", C, g)
        if not rep.passed:
            return Report("centrality_bs", False, rep.witness, (rep,))
        parts.append(rep)
    return combine("centrality_bs", parts)
