"""Characters of the reflection equation algebra and their quantum determinants.

A character is recorded by its values on the degree-one generators, an
n x n matrix ``M`` with ``M[i][j] = f(t^i_j)`` (row = upper index).  The
value on ``det_q`` is computed two ways:

* :func:`qdet_antisym` lets the operator ``D = M_n ... M_1`` on ``V^{⊗n}``
  act on the q-antisymmetriser ``Y`` and reads off ``D(Y) / Y``;
* :func:`qdet_monomial_oracle` expands ``det_q`` into monomials and
  evaluates each one by the multiplicativity rule of the character
  (:func:`char_eval_monomial`), using only R and R^{-1} entries.

The two routes share nothing beyond ``r_matrix``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import lcm

from qrefl.rea import Report, Witness, check_reflection, combine, reflection_r_prime
from qrefl.scalar import Scalar, q_pow, s_var
from qrefl.tensorlin import (
    DimensionMismatch,
    TensorOperator,
    TensorVector,
    apply_on_legs,
    det_fraction_free,
    flatten,
    leg_embed,
)
from qrefl.uqsln import r_matrix, r_matrix_inverse

__all__ = [
    "CharacterMatrix",
    "NotProportional",
    "OddDimension",
    "OmegaMatrix",
    "SLNormalization",
    "TooLarge",
    "WordTooLong",
    "ZeroQdet",
    "char_eval_monomial",
    "character_from_omega",
    "check_grassmann_invariance",
    "check_invertibility_criterion",
    "cylinder_scale",
    "grassmann_matrix",
    "match_grassmann",
    "normalize_sl_character",
    "omega_from_character",
    "q_antisymmetrizer",
    "qdet_antisym",
    "qdet_monomial_oracle",
    "screen_reflection_solutions",
]


class NotProportional(ArithmeticError):
    pass


class WordTooLong(ValueError):
    pass


class TooLarge(ValueError):
    pass


class ZeroQdet(ArithmeticError):
    pass


class OddDimension(ValueError):
    pass


@dataclass(frozen=True)
class CharacterMatrix:
    matrix: TensorOperator
    variant: str = "r"

    def __post_init__(self):
        if self.matrix.legs != 1:
            raise DimensionMismatch("a character matrix acts on a single leg")
        if self.variant not in ("r", "rbar21"):
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def from_rows(cls, rows, variant="r", root_order=None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("character matrix must be square")
        op = TensorOperator.from_dense(n, 1, rows)
        if root_order is not None:
            op = op.with_root_order(lcm(op.root_order, root_order))
        return cls(op, variant)

    @classmethod
    def identity(cls, n, variant="r"):
        return cls(TensorOperator.identity(n, 1, n), variant)

    @property
    def n(self):
        return self.matrix.n

    @property
    def root_order(self):
        return self.matrix.root_order

    @property
    def entries(self):
        return self.matrix.entries

    def entry(self, i, j):
        """``f(t^i_j)`` with 1-based indices."""
        return self.matrix[i - 1, j - 1]

    def scaled(self, c):
        return CharacterMatrix(self.matrix.scale(c), self.variant)

    def is_admissible(self):
        return check_reflection(reflection_r_prime(self.n, self.variant), self).passed

    def __eq__(self, other):
        if not isinstance(other, CharacterMatrix):
            return NotImplemented
        return self.variant == other.variant and self.matrix == other.matrix

    __hash__ = None


def _working_order(M):
    """Smallest root order holding both M and the R-matrix of size n."""
    return lcm(M.root_order, M.n)


def _as_character(M):
    if isinstance(M, CharacterMatrix):
        return M
    return CharacterMatrix(M)


# ------------------------------------------------------ antisymmetriser

def _inversions(perm):
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def q_antisymmetrizer(n, root_order=None):
    """``Y = sum_sigma (-q)^{l(sigma)} v_sigma(1) ⊗ ... ⊗ v_sigma(n)``."""
    N = n if root_order is None else root_order
    mq = -q_pow(1, N)
    coords = {}
    for perm in permutations(range(1, n + 1)):
        coords[flatten(perm, n)] = mq ** _inversions(perm)
    return TensorVector(n, n, coords)


def _block_legs(n, k):
    """Legs of the k-th factor ``M_k``: it lives on the last k legs."""
    b = n - k + 1
    return b, list(range(b + 1, n + 1))


def _d_operator(M, n):
    """``D = M_n ... M_1`` as a full matrix on ``V^{⊗n}``."""
    R = r_matrix(n)
    Rinv = r_matrix_inverse(n)
    D = TensorOperator.identity(n, n, M.root_order)
    for k in range(1, n + 1):
        b, rest = _block_legs(n, k)
        X = TensorOperator.identity(n, n, R.root_order)
        Xinv = TensorOperator.identity(n, n, R.root_order)
        for c in rest:
            X = leg_embed(R, n, [b, c]) @ X
            Xinv = Xinv @ leg_embed(Rinv, n, [b, c])
        Mk = Xinv @ leg_embed(M, n, [b]) @ X
        D = Mk @ D
    return D


def _apply_d(M, vec, n):
    """``D(vec)`` one factor at a time, never forming an ``n^n x n^n`` matrix."""
    R = r_matrix(n)
    Rinv = r_matrix_inverse(n)
    for k in range(1, n + 1):
        b, rest = _block_legs(n, k)
        for c in rest:
            vec = apply_on_legs(R, vec, [b, c])
        vec = apply_on_legs(M, vec, [b])
        for c in reversed(rest):
            vec = apply_on_legs(Rinv, vec, [b, c])
    return vec


def qdet_antisym(M, method="auto"):
    """``f(det_q)`` as the eigenvalue of ``D`` on the q-antisymmetriser.

    ``M_k`` conjugates ``M`` on leg ``n-k+1`` by ``R_{b,n} ... R_{b,b+1}``
    (the R-matrix of V past the remaining ``k-1`` legs).  ``method`` picks
    the full-matrix route (``"matrix"``), the vector route (``"vector"``),
    or the former for n <= 3 and the latter beyond (``"auto"``).
    """
    M = _as_character(M)
    if M.variant != "r":
        raise ValueError("the antisymmetriser route is implemented for R' = R only")
    n = M.n
    N = _working_order(M)
    mat = M.matrix.with_root_order(N)
    Y = q_antisymmetrizer(n, N)
    if method == "auto":
        method = "matrix" if n <= 3 else "vector"
    if method == "matrix":
        DY = Y.applied(_d_operator(mat, n))
    elif method == "vector":
        DY = _apply_d(mat, Y, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    c = DY.ratio_to(Y)
    if c is None:
        raise NotProportional("D(Y) is not a multiple of the q-antisymmetriser")
    return c


# ------------------------------------------------------- monomial route

class _MonomialEvaluator:
    """Evaluate ``f`` on words in the generators ``t^i_j`` by peeling off the left letter.

    For a letter ``a = t^i_j`` and a word ``w`` one has
    ``f(a w) = sum r'(sigma(t^i_x), w_(1)) r'(t^y_j, w_(2)) M[x][y] f(w_(3))``,
    and ``r'`` on a letter against a word is a product of n x n transfer
    matrices built from R or R^{-1} entries.
    """

    def __init__(self, M):
        self.n = n = M.n
        self.N = N = _working_order(M)
        self.M = M.matrix.with_root_order(N).entries
        R = r_matrix(n, N).entries
        Ri = r_matrix_inverse(n, N).entries

        def ent(mat, a, b, c, d):
            return mat[a * n + b][c * n + d]

        # A_fac[k][u][i][x]: factor contributed by letter t^k_u to r'(sigma(t^i_x), .)
        # B_fac[u][v][y][j]: factor contributed by letter t^u_v to r'(t^y_j, .)
        if M.variant == "r":
            self.A_fac = [[[[ent(Ri, i, k, x, u) for x in range(n)] for i in range(n)]
                           for u in range(n)] for k in range(n)]
            self.B_fac = [[[[ent(R, y, u, j, v) for j in range(n)] for y in range(n)]
                           for v in range(n)] for u in range(n)]
        else:
            self.A_fac = [[[[ent(R, k, i, u, x) for x in range(n)] for i in range(n)]
                           for u in range(n)] for k in range(n)]
            self.B_fac = [[[[ent(Ri, u, y, v, j) for j in range(n)] for y in range(n)]
                           for v in range(n)] for u in range(n)]
        self.zero = Scalar(0, N)
        self.one = Scalar(1, N)
        self.f = lru_cache(maxsize=None)(self._f)

    def _row_times(self, row, mat):
        n = self.n
        out = []
        for x in range(n):
            acc = self.zero
            for i in range(n):
                a = row[i]
                if a:
                    b = mat[i][x]
                    if b:
                        acc = acc + a * b
            out.append(acc)
        return out

    def _mat_times_col(self, mat, col):
        n = self.n
        out = []
        for y in range(n):
            acc = self.zero
            for j in range(n):
                a = col[j]
                if a:
                    b = mat[y][j]
                    if b:
                        acc = acc + b * a
            out.append(acc)
        return out

    def _f(self, word):
        n = self.n
        if not word:
            return self.one
        (i, j), rest = word[0], word[1:]
        if not rest:
            return self.M[i][j]
        p = len(rest)
        uppers = [k for k, _ in rest]
        lowers = tuple(l for _, l in rest)
        total = self.zero
        for U in product(range(n), repeat=p):
            row = [self.one if x == i else self.zero for x in range(n)]
            for k, u in zip(uppers, U):
                row = self._row_times(row, self.A_fac[k][u])
                if not any(row):
                    break
            if not any(row):
                continue
            cvec = self._row_times(row, self.M)
            if not any(cvec):
                continue
            for V in product(range(n), repeat=p):
                fv = self.f(tuple(zip(V, lowers)))
                if not fv:
                    continue
                col = [self.one if y == j else self.zero for y in range(n)]
                for u, v in zip(U, V):
                    col = self._mat_times_col(self.B_fac[u][v], col)
                    if not any(col):
                        break
                acc = self.zero
                for y in range(n):
                    if cvec[y] and col[y]:
                        acc = acc + cvec[y] * col[y]
                if acc:
                    total = total + acc * fv
        return total


def char_eval_monomial(M, word, max_length=4):
    """``f(t^{i1}_{j1} ... t^{ik}_{jk})`` for a word of 1-based index pairs."""
    M = _as_character(M)
    word = tuple((int(i) - 1, int(j) - 1) for i, j in word)
    if len(word) > max_length:
        raise WordTooLong(f"word of length {len(word)} exceeds the bound {max_length}")
    if any(not (0 <= i < M.n and 0 <= j < M.n) for i, j in word):
        raise IndexError("generator index out of range")
    return _MonomialEvaluator(M).f(word)


def qdet_monomial_oracle(M, max_n=3):
    """``sum_sigma (-q)^{l(sigma)} f(t^1_sigma(1) ... t^n_sigma(n))``."""
    M = _as_character(M)
    n = M.n
    if n > max_n:
        raise TooLarge(f"monomial expansion is limited to n <= {max_n}")
    ev = _MonomialEvaluator(M)
    mq = -q_pow(1, ev.N)
    total = Scalar(0, ev.N)
    for perm in permutations(range(n)):
        v = ev.f(tuple(enumerate(perm)))
        if v:
            total = total + mq ** _inversions(perm) * v
    return total


# ------------------------------------------------------------ criterion

def check_invertibility_criterion(M):
    """``det M != 0`` if and only if ``f(det_q) != 0``."""
    M = _as_character(M)
    det = det_fraction_free(M.matrix)
    qdet = qdet_antisym(M)
    passed = bool(det) == bool(qdet)
    return Report("invertibility_criterion", passed, values={"det": det, "qdet": qdet})


@dataclass(frozen=True)
class SLNormalization:
    qdet: Scalar
    beta: Scalar | None
    matrix: CharacterMatrix | None

    @property
    def needs_extension(self):
        return self.beta is None


def _int_root(a, n):
    if a < 0:
        if n % 2 == 0:
            return None
        r = _int_root(-a, n)
        return None if r is None else -r
    r = round(a ** (1.0 / n)) if a else 0
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**n == a:
            return c
    return None


def _rational_root(c, n):
    c = Fraction(c)
    a = _int_root(c.numerator, n)
    b = _int_root(c.denominator, n)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def normalize_sl_character(M):
    """Rescale M by an n-th root of ``f(det_q)`` when one exists over the base field."""
    M = _as_character(M)
    n = M.n
    qdet = qdet_antisym(M)
    if not qdet:
        raise ZeroQdet("f(det_q) vanishes")
    mono = qdet.as_monomial()
    beta = None
    if mono is not None:
        c, e, k = mono
        root = _rational_root(c, n)
        if k == 0 and root is not None and e % n == 0:
            beta = Scalar(root, qdet.root_order) * q_pow(Fraction(e // n, qdet.root_order),
                                                         qdet.root_order)
    if beta is None:
        return SLNormalization(qdet, None, None)
    return SLNormalization(qdet, beta, M.scaled(beta.inverse()))


def cylinder_scale(M):
    """``q^{(n^2-1)/n} M``, the degree-one image of the twist by ``u^{-1}``."""
    M = _as_character(M)
    n = M.n
    return M.scaled(q_pow(Fraction(n * n - 1, n), n))


# ------------------------------------------------------------ Grassmann

def _check_even(n):
    if n < 2 or n % 2:
        raise OddDimension(f"n = {n} must be even and at least 2")


def grassmann_matrix(n, s=None, lam=1):
    """The K-matrix of the symmetric pair for ``Gr(m, 2m)``, ``n = 2m``.

    Nonzero entries: ``lam q^{2i-n-1}`` at ``(i, n-i+1)`` for ``i <= m``,
    ``lam q^{2i-n}`` there for ``i > m``, and ``lam s (q^2 - 1)`` on the
    diagonal for ``i > m``.
    """
    _check_even(n)
    s = s_var(n) if s is None else s
    m = n // 2
    lam = lam if isinstance(lam, Scalar) else Scalar(lam, n)
    diag = s * (q_pow(2, n) - 1)
    rows = [dict() for _ in range(n)]
    for i in range(1, n + 1):
        j = n - i + 1
        rows[i - 1][j - 1] = lam * q_pow(2 * i - n - (1 if i <= m else 0), n)
        if i > m and diag:
            rows[i - 1][i - 1] = lam * diag
    return CharacterMatrix(TensorOperator(n, 1, rows))


@dataclass(frozen=True)
class OmegaMatrix:
    matrix: TensorOperator
    scale: Scalar = Scalar(1)

    @property
    def n(self):
        return self.matrix.n

    def entry(self, i, j):
        return self.matrix[i - 1, j - 1]


def omega_from_character(M, scale=None):
    """``Omega[j][i] = q^{n+1-2i} M[i][j]`` (1-based)."""
    M = _as_character(M)
    n = M.n
    N = _working_order(M)
    rows = [dict() for _ in range(n)]
    for i, row in enumerate(M.matrix.with_root_order(N).rows, 1):
        w = q_pow(n + 1 - 2 * i, N)
        for j, v in row.items():
            rows[j][i - 1] = w * v
    return OmegaMatrix(TensorOperator(n, 1, rows, N), Scalar(1) if scale is None else scale)


def character_from_omega(omega, variant="r"):
    """Inverse of :func:`omega_from_character`: ``M[i][j] = q^{2i-n-1} Omega[j][i]``."""
    n = omega.n
    N = omega.matrix.root_order
    rows = [dict() for _ in range(n)]
    for j, row in enumerate(omega.matrix.rows):
        for i, v in row.items():
            rows[i][j] = q_pow(2 * (i + 1) - n - 1, N) * v
    return CharacterMatrix(TensorOperator(n, 1, rows, N), variant)


def _scalar_check(relation, lhs, rhs, index=()):
    if lhs == rhs:
        return Report(relation, True)
    return Report(relation, False, Witness(index, (), lhs, rhs))


def check_grassmann_invariance(omega, s):
    """Block shape of Omega and the three coefficient relations tying it together."""
    n = omega.n
    _check_even(n)
    m = n // 2
    N = omega.matrix.root_order
    q = q_pow(1, N)
    qinv = q_pow(-1, N)
    E = omega.matrix.entries
    zero = Scalar(0, N)
    parts = []

    # [[0, F], [G, H]] with F, G codiagonal and H diagonal
    shape = Report("block_pattern", True)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = E[i - 1][j - 1]
            allowed = (j == n - i + 1) or (i == j and i > m)
            if v and not allowed:
                shape = Report("block_pattern", False, _witness((i, j), v, zero))
                break
        if not shape.passed:
            break
    parts.append(shape)

    f_entries = [E[i - 1][n - i] for i in range(1, m + 1)]
    g_entries = [E[i - 1][n - i] for i in range(m + 1, n + 1)]
    parts.append(_all_equal("F_constant", f_entries, range(1, m + 1), n))
    parts.append(_all_equal("G_constant", g_entries, range(m + 1, n + 1), n))
    parts.append(_scalar_check("F=qG", f_entries[0], q * g_entries[0], (1, n)))
    rel1 = Report("diag_ratio", True)
    for i in range(m + 1, n):
        lhs, rhs = E[i - 1][i - 1], q * q * E[i][i]
        if lhs != rhs:
            rel1 = Report("diag_ratio", False, _witness((i, i), lhs, rhs))
            break
    parts.append(rel1)
    parts.append(_scalar_check("H_start", E[m][m], s * (q - qinv) * E[m][m - 1], (m + 1, m + 1)))
    return combine("grassmann_invariance", parts)


def _witness(index, lhs, rhs):
    return Witness(index, (), lhs, rhs)


def _all_equal(relation, values, rows, n):
    first = values[0]
    for i, v in zip(rows, values):
        if v != first:
            return Report(relation, False, _witness((i, n - i + 1), v, first))
    return Report(relation, True)


# ------------------------------------------------------------ screening

def _screen_candidates(n, values):
    N = n
    one = Scalar(1, N)
    for i in range(n):
        for j in range(n):
            rows = [dict() for _ in range(n)]
            rows[i][j] = one
            yield TensorOperator(n, 1, rows, N)
    for diag in product(values, repeat=n):
        if not any(diag):
            continue
        yield TensorOperator.diagonal(n, list(diag)).with_root_order(N)


def screen_reflection_solutions(n=2, variant="r", values=None):
    """Matrix units and small diagonal matrices that solve the reflection equation."""
    if values is None:
        values = [Scalar(0, n), Scalar(1, n), Scalar(-1, n), q_pow(1, n), q_pow(-1, n)]
    Rp = reflection_r_prime(n, variant)
    found = []
    seen = []
    for cand in _screen_candidates(n, values):
        if any(cand == s for s in seen):
            continue
        seen.append(cand)
        if check_reflection(Rp, cand).passed:
            found.append(CharacterMatrix(cand, variant))
    return found


def match_grassmann(M):
    """Return ``(s, lam)`` when M equals ``grassmann_matrix(n, s, lam)``, else None."""
    M = _as_character(M)
    n = M.n
    if n % 2 or M.variant != "r":
        return None
    m = n // 2
    N = _working_order(M)
    corner = M.entry(1, n)
    if not corner:
        return None
    lam = corner.with_root_order(N) * q_pow(n - 1, N)
    s = M.entry(m + 1, m + 1) / (lam * (q_pow(2, N) - 1))
    if grassmann_matrix(n, s, lam).matrix != M.matrix.with_root_order(N):
        return None
    return s, lam
