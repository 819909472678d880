"""U_q(sl_n) acting on its vector representation V = V(omega_1).

Generators are named by pairs ``(kind, i)`` with kind one of ``"x"``,
``"y"``, ``"t"``, ``"tinv"`` and ``1 <= i <= n-1``; the strings ``"x1"``,
``"y2"``, ``"t1"``, ``"tinv1"`` (or ``"t1^-1"``) are accepted as well.

All matrices use the root order ``N = n`` so that the R-matrix prefactor
``q^(1/n)`` and weight pairings in ``(1/n)Z`` are exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from qrefl.scalar import Scalar, q_pow
from qrefl.tensorlin import TensorOperator, kron, permutation_op

__all__ = [
    "GeneratorSet",
    "RootOrderIncompatible",
    "UnknownGenerator",
    "WeightVector",
    "antipode",
    "coproduct_on_pair",
    "counit",
    "evaluate",
    "fundamental_pairing",
    "generator_matrix",
    "parse_generator",
    "qtrace",
    "r_matrix",
    "r_matrix_inverse",
    "rhat",
    "rhat_inverse",
    "tau_action",
    "vector_rep",
]


class UnknownGenerator(KeyError):
    pass


class RootOrderIncompatible(ValueError):
    pass


# ----------------------------------------------------------------- weights

def fundamental_pairing(i, j, n):
    """``(omega_i, omega_j) = min(i, j) - i*j/n`` with ``omega_0 = omega_n = 0``."""
    return Fraction(min(i, j)) - Fraction(i * j, n)


@dataclass(frozen=True)
class WeightVector:
    """Weight ``sum_i coords[i-1] * omega_i`` of sl_n."""

    coords: tuple

    @classmethod
    def fundamental(cls, i, n):
        c = [0] * (n - 1)
        c[i - 1] = 1
        return cls(tuple(c))

    @classmethod
    def simple_root(cls, i, n):
        c = [0] * (n - 1)
        c[i - 1] = 2
        if i > 1:
            c[i - 2] = -1
        if i < n - 1:
            c[i] = -1
        return cls(tuple(c))

    @classmethod
    def rho(cls, n):
        return cls((1,) * (n - 1))

    @property
    def n(self):
        return len(self.coords) + 1

    def __add__(self, other):
        return WeightVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return WeightVector(tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return WeightVector(tuple(k * a for a in self.coords))

    def pairing_with_fundamental(self, j):
        n = self.n
        return sum((c * fundamental_pairing(i, j, n) for i, c in enumerate(self.coords, 1)),
                   Fraction(0))

    def pairing_with_basis_weight(self, j):
        """``(self, wt v_j)`` where ``wt v_j = omega_j - omega_{j-1}``."""
        return self.pairing_with_fundamental(j) - self.pairing_with_fundamental(j - 1)


def tau_action(weight, n=None):
    """Diagonal matrix of ``tau(weight)`` on V: ``v_j -> q^{(weight, wt v_j)} v_j``."""
    n = weight.n if n is None else n
    if weight.n != n:
        raise ValueError("weight rank does not match n")
    return TensorOperator.diagonal(
        n, [q_pow(weight.pairing_with_basis_weight(j), n) for j in range(1, n + 1)]
    )


# -------------------------------------------------------------- generators

_GEN_RE = re.compile(r"^(x|y|tinv|t)(\d+)(\^-1)?$")


def parse_generator(g):
    if isinstance(g, tuple) and len(g) == 2:
        kind, i = g
    else:
        m = _GEN_RE.match(str(g).replace(" ", ""))
        if not m:
            raise UnknownGenerator(g)
        kind, i = m.group(1), int(m.group(2))
        if m.group(3):
            if kind != "t":
                raise UnknownGenerator(g)
            kind = "tinv"
    if kind not in ("x", "y", "t", "tinv"):
        raise UnknownGenerator(g)
    return kind, int(i)


@dataclass
class GeneratorSet:
    """Matrices of the Chevalley generators on V, plus their antipode images."""

    n: int
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    t: dict = field(default_factory=dict)
    t_inv: dict = field(default_factory=dict)
    sx: dict = field(default_factory=dict)
    sy: dict = field(default_factory=dict)
    st: dict = field(default_factory=dict)
    root_order: int = 0

    def matrix(self, g):
        kind, i = parse_generator(g)
        if not 1 <= i <= self.n - 1:
            raise UnknownGenerator(g)
        return {"x": self.x, "y": self.y, "t": self.t, "tinv": self.t_inv}[kind][i]

    def generators(self):
        return [(k, i) for i in range(1, self.n) for k in ("x", "y", "t", "tinv")]


def _unit(n, row, col):
    rows = [dict() for _ in range(n)]
    rows[row - 1][col - 1] = Scalar(1, n)
    return TensorOperator(n, 1, rows, n)


def vector_rep(n):
    if n < 2:
        raise ValueError("n must be at least 2")
    gs = GeneratorSet(n=n, root_order=n)
    for i in range(1, n):
        gs.x[i] = _unit(n, i, i + 1)  # x_i v_{i+1} = v_i
        gs.y[i] = _unit(n, i + 1, i)  # y_i v_i = v_{i+1}
        diag = [q_pow((j == i) - (j == i + 1), n) for j in range(1, n + 1)]
        gs.t[i] = TensorOperator.diagonal(n, diag)
        gs.t_inv[i] = TensorOperator.diagonal(n, [d.inverse() for d in diag])
        gs.sx[i] = -(gs.t_inv[i] @ gs.x[i])
        gs.sy[i] = -(gs.y[i] @ gs.t[i])
        gs.st[i] = gs.t_inv[i]
    return gs


def generator_matrix(g, n):
    return vector_rep(n).matrix(g)


# ------------------------------------------------------ words and antipode
#
# An element of U is a dict {word: Scalar}, a word being a tuple of
# generator ids.  Only what the checks need: antipode, coproduct in
# Sweedler form, counit, evaluation on V.

def _gen_element(g):
    return {(parse_generator(g),): Scalar(1)}


_ANTIPODE = {
    "x": lambda i: {(("tinv", i), ("x", i)): Scalar(-1)},
    "y": lambda i: {(("y", i), ("t", i)): Scalar(-1)},
    "t": lambda i: {(("tinv", i),): Scalar(1)},
    "tinv": lambda i: {(("t", i),): Scalar(1)},
}


def _mul_elements(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            c = out[w] + ca * cb if w in out else ca * cb
            out[w] = c
    return {w: c for w, c in out.items() if c}


def antipode(element):
    """Antipode of an element given as ``{word: coefficient}`` or a generator id."""
    if not isinstance(element, dict):
        element = _gen_element(element)
    out = {}
    for word, c in element.items():
        img = {(): Scalar(1)}
        for g in reversed(word):
            kind, i = g
            img = _mul_elements(img, _ANTIPODE[kind](i))
        for w, d in img.items():
            out[w] = out[w] + c * d if w in out else c * d
    return {w: c for w, c in out.items() if c}


def counit(g):
    kind, _ = parse_generator(g)
    return 1 if kind in ("t", "tinv") else 0


def sweedler(g):
    """``Delta(g)`` as a list of ``(left_element, right_element)`` pairs."""
    kind, i = parse_generator(g)
    one = {(): Scalar(1)}
    gen = {((kind, i),): Scalar(1)}
    if kind == "x":
        return [(gen, one), ({(("t", i),): Scalar(1)}, gen)]
    if kind == "y":
        return [(gen, {(("tinv", i),): Scalar(1)}), (one, gen)]
    return [(gen, gen)]


def evaluate(element, gens):
    """Matrix of an element of U on V."""
    n = gens.n
    total = TensorOperator.zeros(n, 1, n)
    for word, c in element.items():
        m = TensorOperator.identity(n, 1, n)
        for g in word:
            m = m @ gens.matrix(g)
        total = total + m.scale(c)
    return total


# ------------------------------------------------------------- R-matrix

def r_matrix(n, root_order=None):
    """R on V⊗V: ``R(v_k⊗v_l) = sum_ij R^{ij}_{kl} v_i⊗v_j``.

    ``R^{ij}_{kl} = q^{1/n} * (q^-1 if i=j=k=l; 1 if i=k != j=l;
    q^-1 - q if i=l < j=k; 0 otherwise)``.
    """
    N = n if root_order is None else root_order
    if N % n:
        raise RootOrderIncompatible(f"root order {N} is not divisible by n={n}")
    pre = q_pow(Fraction(1, n), N)
    diag = pre * q_pow(-1, N)
    cross = pre * (q_pow(-1, N) - q_pow(1, N))
    rows = [dict() for _ in range(n * n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            row = (i - 1) * n + (j - 1)
            if i == j:
                rows[row][row] = diag
            else:
                rows[row][row] = pre  # k=i, l=j
                if i < j:
                    rows[row][(j - 1) * n + (i - 1)] = cross  # k=j, l=i
    return TensorOperator(n, 2, rows, N)


def flip(n):
    return permutation_op((2, 1), n, 2)


def rhat(n, root_order=None):
    """The braiding ``R̂ = P∘R`` on V⊗V."""
    return flip(n) @ r_matrix(n, root_order)


def rhat_inverse(n, root_order=None):
    """``R̂^{-1} = (R̂ + q^{1/n+1} - q^{1/n-1}) / q^{2/n}``, read off the quadratic relation."""
    N = n if root_order is None else root_order
    Rh = rhat(n, N)
    shift = q_pow(Fraction(1, n) + 1, N) - q_pow(Fraction(1, n) - 1, N)
    out = Rh + TensorOperator.identity(n, 2, N).scale(shift)
    return out.scale(q_pow(Fraction(-2, n), N))


def r_matrix_inverse(n, root_order=None):
    return rhat_inverse(n, root_order) @ flip(n)


def coproduct_on_pair(g, n, gens=None):
    """Matrix of ``Delta(g)`` on V⊗V."""
    gens = vector_rep(n) if gens is None else gens
    kind, i = parse_generator(g)
    if not 1 <= i <= n - 1:
        raise UnknownGenerator(g)
    one = TensorOperator.identity(n, 1, n)
    if kind == "x":
        return kron(gens.x[i], one) + kron(gens.t[i], gens.x[i])
    if kind == "y":
        return kron(gens.y[i], gens.t_inv[i]) + kron(one, gens.y[i])
    m = gens.t[i] if kind == "t" else gens.t_inv[i]
    return kron(m, m)


def two_rho_exponents(n):
    """``(2 rho, wt v_i) = n - 2i + 1`` for i = 1..n."""
    return [n - 2 * i + 1 for i in range(1, n + 1)]


def qtrace(X, n=None):
    """``tr(X tau(2 rho))``."""
    n = X.n if n is None else n
    total = Scalar(0, n)
    for i, e in enumerate(two_rho_exponents(n)):
        v = X.rows[i].get(i)
        if v is not None:
            total = total + v * q_pow(e, n)
    return total
