"""Exact linear algebra for operators on tensor powers of an n-dimensional space.

Basis vector ``v_{i1} ⊗ ... ⊗ v_{ik}`` (1-based indices) sits at flat
position ``sum_j (i_j - 1) * n**(k - j)``, i.e. row-major with the first
leg most significant.

Operators are stored as one ``{column: Scalar}`` dict per row holding the
nonzero entries only; :attr:`TensorOperator.entries` gives the dense view.
The R-matrix families handled here have at most a handful of nonzeros per
row, which is what makes n = 4 triple products and n = 6 reflection checks
cheap in pure Python.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from qrefl._poly import nc
from qrefl.scalar import Scalar, _canonical, _exquo_terms, _tadd, _tmul

__all__ = [
    "BadPositions",
    "DimensionMismatch",
    "SingularMatrix",
    "TensorOperator",
    "TensorVector",
    "apply_on_legs",
    "det_fraction_free",
    "flatten",
    "inverse",
    "kron",
    "leg_embed",
    "permutation_op",
    "unflatten",
]


class DimensionMismatch(ValueError):
    pass


class BadPositions(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


def flatten(multi, n):
    """Flat 0-based index of the 1-based multi-index ``multi``."""
    idx = 0
    for i in multi:
        idx = idx * n + (i - 1)
    return idx


def unflatten(idx, n, k):
    """Inverse of :func:`flatten`."""
    out = [0] * k
    for j in range(k - 1, -1, -1):
        idx, r = divmod(idx, n)
        out[j] = r + 1
    return tuple(out)


def _as_scalar(x, N):
    if isinstance(x, Scalar):
        return x
    return Scalar(Fraction(x), N)


def _common_root_order(values):
    N = 1
    for v in values:
        r = getattr(v, "root_order", 1)
        N = N * r // gcd(N, r)
    return N


def _zero(N):
    return Scalar._raw({}, None, N)


class TensorOperator:
    """Square matrix over :class:`Scalar` acting on ``V^{⊗legs}``, ``dim V = n``."""

    __slots__ = ("n", "legs", "dim", "rows", "root_order", "_cols")

    def __init__(self, n, legs, rows, root_order=None):
        self.n = n
        self.legs = legs
        self.dim = n**legs
        if len(rows) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} rows, got {len(rows)}")
        if root_order is None:
            root_order = _common_root_order(v for row in rows for v in row.values())
        clean = []
        for row in rows:
            r = {}
            for j, v in row.items():
                if not 0 <= j < self.dim:
                    raise DimensionMismatch(f"column {j} out of range")
                v = _as_scalar(v, root_order)
                if v:
                    if v.root_order != root_order:
                        v = v.with_root_order(root_order)
                    r[j] = v
            clean.append(r)
        self.rows = tuple(clean)
        self.root_order = root_order
        self._cols = None

    @classmethod
    def _trusted(cls, n, legs, rows, root_order):
        obj = cls.__new__(cls)
        obj.n = n
        obj.legs = legs
        obj.dim = n**legs
        obj.rows = tuple(rows)
        obj.root_order = root_order
        obj._cols = None
        return obj

    # -- construction ------------------------------------------------------
    @classmethod
    def from_dense(cls, n, legs, entries):
        rows = [{j: v for j, v in enumerate(row) if v != 0} for row in entries]
        if any(len(row) != n**legs for row in entries):
            raise DimensionMismatch("matrix is not square of side n**legs")
        return cls(n, legs, rows)

    @classmethod
    def identity(cls, n, legs=1, root_order=1):
        one = Scalar(1, root_order)
        return cls._trusted(n, legs, [{i: one} for i in range(n**legs)], root_order)

    @classmethod
    def zeros(cls, n, legs=1, root_order=1):
        return cls._trusted(n, legs, [{} for _ in range(n**legs)], root_order)

    @classmethod
    def diagonal(cls, n, values):
        values = list(values)
        legs = 1
        while n**legs < len(values):
            legs += 1
        if n**legs != len(values):
            raise DimensionMismatch("diagonal length is not a power of n")
        return cls(n, legs, [{i: v} for i, v in enumerate(values)])

    # -- views -----------------------------------------------------------
    @property
    def entries(self):
        z = _zero(self.root_order)
        return [[row.get(j, z) for j in range(self.dim)] for row in self.rows]

    def __getitem__(self, key):
        i, j = key
        v = self.rows[i].get(j)
        return v if v is not None else _zero(self.root_order)

    def columns(self):
        """Column view ``[{row: Scalar}]`` (cached)."""
        if self._cols is None:
            cols = [dict() for _ in range(self.dim)]
            for i, row in enumerate(self.rows):
                for j, v in row.items():
                    cols[j][i] = v
            self._cols = cols
        return self._cols

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def with_root_order(self, N):
        if N == self.root_order:
            return self
        rows = [{j: v.with_root_order(N) for j, v in row.items()} for row in self.rows]
        return TensorOperator._trusted(self.n, self.legs, rows, N)

    def _aligned(self, other):
        if not isinstance(other, TensorOperator):
            raise TypeError("TensorOperator expected")
        if (self.n, self.legs) != (other.n, other.legs):
            raise DimensionMismatch(
                f"operators on V^{self.legs} (n={self.n}) and V^{other.legs} (n={other.n})"
            )
        N = self.root_order * other.root_order // gcd(self.root_order, other.root_order)
        return self.with_root_order(N), other.with_root_order(N), N

    # -- algebra -----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, TensorVector):
            return other.applied(self)
        a, b, N = self._aligned(other)
        brows = b.rows
        out = []
        for arow in a.rows:
            # accumulate Laurent products as raw term maps, everything else as Scalars
            acc = {}
            slow = {}
            for k, x in arow.items():
                xn = x._n if x._d is None else None
                for j, y in brows[k].items():
                    if xn is not None and y._d is None:
                        t = acc.get(j)
                        if t is None:
                            t = acc[j] = {}
                        get = t.get
                        for (e1, k1), c1 in xn.items():
                            for (e2, k2), c2 in y._n.items():
                                key = (e1 + e2, k1 + k2)
                                t[key] = get(key, 0) + c1 * c2
                    else:
                        p = x * y
                        slow[j] = slow[j] + p if j in slow else p
            row = {}
            for j, t in acc.items():
                t = {key: nc(c) for key, c in t.items() if c}
                v = Scalar._raw(t, None, N)
                if j in slow:
                    v = v + slow.pop(j)
                if v:
                    row[j] = v
            for j, v in slow.items():
                if v:
                    row[j] = v
            out.append(row)
        return TensorOperator._trusted(a.n, a.legs, out, N)

    def __add__(self, other):
        a, b, N = self._aligned(other)
        out = []
        for ra, rb in zip(a.rows, b.rows):
            row = dict(ra)
            for j, v in rb.items():
                w = row[j] + v if j in row else v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
            out.append(row)
        return TensorOperator._trusted(a.n, a.legs, out, N)

    def __neg__(self):
        rows = [{j: -v for j, v in row.items()} for row in self.rows]
        return TensorOperator._trusted(self.n, self.legs, rows, self.root_order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_scalar(c, self.root_order)
        if not c:
            return TensorOperator.zeros(self.n, self.legs, self.root_order)
        rows = [{j: c * v for j, v in row.items()} for row in self.rows]
        N = self.root_order * c.root_order // gcd(self.root_order, c.root_order)
        return TensorOperator(self.n, self.legs, rows, N)

    def __mul__(self, c):
        if isinstance(c, TensorOperator):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self):
        rows = [dict(c) for c in self.columns()]
        return TensorOperator._trusted(self.n, self.legs, rows, self.root_order)

    def commutator(self, other):
        return self @ other - other @ self

    def is_zero(self):
        return not any(self.rows)

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return first_difference(self, other) is None

    __hash__ = None

    def __repr__(self):
        return f"TensorOperator(n={self.n}, legs={self.legs}, nnz={self.nnz()})"


def first_difference(a, b):
    """First ``(row, col)`` in row-major order where ``a`` and ``b`` differ, or None."""
    if (a.n, a.legs) != (b.n, b.legs):
        raise DimensionMismatch("operators act on different spaces")
    for i, (ra, rb) in enumerate(zip(a.rows, b.rows)):
        if ra == rb:
            continue
        for j in sorted(set(ra) | set(rb)):
            x, y = ra.get(j), rb.get(j)
            if x is None or y is None or x != y:
                return i, j
    return None


class TensorVector:
    """Sparse coordinate vector on ``V^{⊗legs}`` (same indexing as operators)."""

    __slots__ = ("n", "legs", "coords")

    def __init__(self, n, legs, coords):
        self.n = n
        self.legs = legs
        self.coords = {i: v for i, v in coords.items() if v}

    @classmethod
    def basis(cls, n, multi):
        return cls(n, len(multi), {flatten(multi, n): Scalar(1)})

    def applied(self, op):
        if (op.n, op.legs) != (self.n, self.legs):
            raise DimensionMismatch("operator and vector act on different spaces")
        cols = op.columns()
        out = {}
        for j, x in self.coords.items():
            for i, a in cols[j].items():
                out[i] = out[i] + a * x if i in out else a * x
        return TensorVector(self.n, self.legs, out)

    def __getitem__(self, i):
        return self.coords.get(i, Scalar(0))

    def dense(self):
        return [self[i] for i in range(self.n**self.legs)]

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (self.n, self.legs) == (other.n, other.legs) and self.coords == other.coords

    __hash__ = None

    def ratio_to(self, other):
        """Return ``c`` with ``self == c * other``, or None if not proportional."""
        if not other.coords:
            raise ValueError("reference vector is zero")
        if not self.coords:
            return Scalar(0)
        if set(self.coords) != set(other.coords):
            return None
        it = iter(other.coords.items())
        j0, y0 = next(it)
        c = self.coords[j0] / y0
        for j, y in it:
            if self.coords[j] != c * y:
                return None
        return c

    def __repr__(self):
        return f"TensorVector(n={self.n}, legs={self.legs}, nnz={len(self.coords)})"


def apply_on_legs(op, vec, positions):
    """Apply ``op`` to the listed legs of ``vec`` without building the full operator."""
    n, k = vec.n, vec.legs
    if op.n != n or op.legs != len(positions):
        raise DimensionMismatch("operator does not fit the selected legs")
    _check_positions(positions, k)
    cols = op.columns()
    pos = [p - 1 for p in positions]
    out = {}
    for idx, x in vec.coords.items():
        multi = list(unflatten(idx, n, k))
        sub = flatten([multi[p] for p in pos], n)
        for r, a in cols[sub].items():
            rm = unflatten(r, n, len(pos))
            for p, v in zip(pos, rm):
                multi[p] = v
            t = flatten(multi, n)
            out[t] = out[t] + a * x if t in out else a * x
    return TensorVector(n, k, out)


def kron(a, b):
    """``a ⊗ b``: ``a`` on the leading legs, ``b`` on the trailing ones."""
    if a.n != b.n:
        raise DimensionMismatch(f"kron of n={a.n} and n={b.n}")
    N = a.root_order * b.root_order // gcd(a.root_order, b.root_order)
    a = a.with_root_order(N)
    b = b.with_root_order(N)
    db = b.dim
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            row = {}
            for ja, x in ra.items():
                off = ja * db
                for jb, y in rb.items():
                    row[off + jb] = x * y
            rows.append(row)
    return TensorOperator._trusted(a.n, a.legs + b.legs, rows, N)


def _check_positions(positions, k):
    if len(set(positions)) != len(positions) or not all(1 <= p <= k for p in positions):
        raise BadPositions(f"positions {list(positions)} invalid for {k} legs")


def leg_embed(op, legs_target, positions):
    """Act as ``op`` on ``positions`` (in the listed order), identity elsewhere."""
    if op.legs != len(positions):
        raise BadPositions(f"operator has {op.legs} legs but {len(positions)} positions were given")
    _check_positions(positions, legs_target)
    n = op.n
    pos = [p - 1 for p in positions]
    cols = op.columns()
    rows = [dict() for _ in range(n**legs_target)]
    for j in range(n**legs_target):
        multi = list(unflatten(j, n, legs_target))
        sub = flatten([multi[p] for p in pos], n)
        for r, v in cols[sub].items():
            rm = unflatten(r, n, op.legs)
            for p, x in zip(pos, rm):
                multi[p] = x
            rows[flatten(multi, n)][j] = v
    return TensorOperator._trusted(n, legs_target, rows, op.root_order)


def permutation_op(perm, n, k=None):
    """Operator moving the tensor factor in position j to position ``perm[j-1]``.

    ``perm`` is a 1-based tuple; the map ``perm -> operator`` is a group
    homomorphism (composition of permutations goes to operator product).
    """
    k = len(perm) if k is None else k
    if sorted(perm) != list(range(1, k + 1)):
        raise BadPositions(f"{perm} is not a permutation of 1..{k}")
    one = Scalar(1)
    rows = [dict() for _ in range(n**k)]
    for multi in product(range(1, n + 1), repeat=k):
        out = [0] * k
        for j, i in enumerate(multi):
            out[perm[j] - 1] = i
        rows[flatten(out, n)][flatten(multi, n)] = one
    return TensorOperator._trusted(n, k, rows, 1)


# ------------------------------------------------------------ elimination

def _row_lcm_den(row):
    """Least common multiple (up to units) of the denominators in ``row``."""
    L = {(0, 0): 1}
    for v in row:
        if v._d is None:
            continue
        # L / d in lowest terms has denominator d / gcd(L, d)
        _, extra = _canonical(L, dict(v._d))
        if extra is not None:
            L = _tmul(L, extra)
    return L


def det_fraction_free(A):
    """Exact determinant by Bareiss elimination after clearing row denominators."""
    N = A.root_order
    m = A.dim
    if m == 0:
        return Scalar(1, N)
    dense = A.entries
    scale = {(0, 0): 1}
    rows = []
    for row in dense:
        L = _row_lcm_den(row)
        scale = _tmul(scale, L)
        lift = Scalar._raw(L, None, N)
        cleared = []
        for v in row:
            w = v * lift if v else v
            assert w.is_laurent
            cleared.append(dict(w._n))
        rows.append(cleared)
    sign = 1
    prev = {(0, 0): 1}
    for k in range(m - 1):
        if not rows[k][k]:
            for i in range(k + 1, m):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Scalar(0, N)
        pk = rows[k][k]
        for i in range(k + 1, m):
            rik = rows[i][k]
            ri = rows[i]
            rk = rows[k]
            for j in range(k + 1, m):
                t = _tmul(pk, ri[j]) if ri[j] else {}
                if rik and rk[j]:
                    t = _tadd(t, {key: -c for key, c in _tmul(rik, rk[j]).items()})
                ri[j] = _exquo_terms(t, prev) if t else {}
            ri[k] = {}
        prev = pk
    det = rows[m - 1][m - 1]
    if not det:
        return Scalar(0, N)
    if sign < 0:
        det = {key: -c for key, c in det.items()}
    n_, d_ = _canonical(det, scale)
    return Scalar._raw(n_, d_, N)


def inverse(A):
    """Exact inverse by Gauss-Jordan elimination; raises :class:`SingularMatrix`."""
    N = A.root_order
    m = A.dim
    one = Scalar(1, N)
    left = [dict(r) for r in A.rows]
    right = [{i: one} for i in range(m)]
    for col in range(m):
        # deterministic pivot: the simplest nonzero entry in this column
        best = None
        for i in range(col, m):
            v = left[i].get(col)
            if v is not None:
                cost = (len(v._n) + (len(v._d) if v._d else 0), i)
                if best is None or cost < best[0]:
                    best = (cost, i)
        if best is None:
            raise SingularMatrix("matrix is singular")
        p = best[1]
        left[col], left[p] = left[p], left[col]
        right[col], right[p] = right[p], right[col]
        inv = left[col][col].inverse()
        left[col] = {j: v * inv for j, v in left[col].items()}
        right[col] = {j: v * inv for j, v in right[col].items()}
        for i in range(m):
            if i == col:
                continue
            f = left[i].get(col)
            if f is None:
                continue
            for src, dst in ((left[col], left[i]), (right[col], right[i])):
                for j, v in src.items():
                    w = dst[j] - f * v if j in dst else -(f * v)
                    if w:
                        dst[j] = w
                    else:
                        dst.pop(j, None)
    return TensorOperator._trusted(A.n, A.legs, right, N)
