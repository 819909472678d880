"""Exact scalars in the fraction field of Q[q^(1/N), q^(-1/N)][s].

Exponents of ``q`` are stored as integers relative to a root order ``N``:
the key ``(e, k)`` denotes the monomial ``q^(e/N) * s^k``.  Values with
different root orders are lifted to the lcm before they are combined.

A :class:`Scalar` is kept in canonical form:

* numerator and denominator share no polynomial factor (gcd taken in
  ``t = q^(1/N)`` over Q[s], subresultant PRS);
* the denominator has minimum q-exponent 0 and its leading term, in the
  order (q-exponent, s-exponent), has coefficient 1.

Hence a denominator that is a monomial in ``q`` is always folded into the
numerator, and Laurent polynomials (the common case) carry ``den = 1``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from qrefl import _poly
from qrefl._poly import nc

__all__ = [
    "DivisionByZero",
    "LaurentPoly",
    "ParseError",
    "Scalar",
    "arith",
    "parse_scalar",
    "print_scalar",
    "q_pow",
    "s_var",
]


class DivisionByZero(ZeroDivisionError):
    pass


class ParseError(ValueError):
    """Raised for text outside the scalar grammar.

    ``offset`` is the byte offset of the failure, ``expected`` the set of
    tokens that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


def _lcm(a, b):
    return a * b // gcd(a, b)


def _lift_terms(terms, k):
    if k == 1:
        return terms
    return {(e * k, j): c for (e, j), c in terms.items()}


class LaurentPoly:
    """Finite sum of ``c * q^(e/N) * s^k`` with rational ``c``."""

    __slots__ = ("root_order", "terms")

    def __init__(self, terms=None, root_order=1):
        if root_order < 1:
            raise ValueError("root_order must be positive")
        self.root_order = root_order
        self.terms = {key: nc(Fraction(c)) for key, c in (terms or {}).items() if c != 0}
        for e, k in self.terms:
            if k < 0:
                raise ValueError("s-exponents must be nonnegative")

    @classmethod
    def _raw(cls, terms, root_order):
        obj = cls.__new__(cls)
        obj.root_order = root_order
        obj.terms = terms
        return obj

    def lift(self, k):
        return LaurentPoly._raw(_lift_terms(self.terms, k), self.root_order * k)

    def _normalized(self):
        g = self.root_order
        for e, _ in self.terms:
            g = gcd(g, e)
        n = self.root_order // g
        return n, frozenset(((e // g, k), c) for (e, k), c in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._normalized() == other._normalized()

    def __hash__(self):
        return hash(self._normalized())

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LaurentPoly({self.terms!r}, root_order={self.root_order})"


# ------------------------------------------------------------------ terms

def _tadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for key, c in b.items():
        v = out.get(key)
        if v is None:
            out[key] = c
        else:
            v = nc(v + c)
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def _tneg(a):
    return {key: -c for key, c in a.items()}


def _tmul(a, b):
    if len(a) == 1:
        ((e0, k0), c0), = a.items()
        if c0 == 1:
            return {(e + e0, k + k0): c for (e, k), c in b.items()}
        return {(e + e0, k + k0): nc(c * c0) for (e, k), c in b.items()}
    if len(b) == 1:
        return _tmul(b, a)
    out = {}
    get = out.get
    for (e1, k1), c1 in a.items():
        for (e2, k2), c2 in b.items():
            key = (e1 + e2, k1 + k2)
            out[key] = get(key, 0) + c1 * c2
    return {key: nc(c) for key, c in out.items() if c}


def _tscale(a, c, eshift=0, kshift=0):
    if c == 1:
        return {(e + eshift, k + kshift): v for (e, k), v in a.items()}
    return {(e + eshift, k + kshift): nc(v * c) for (e, k), v in a.items()}


def _has_s(terms):
    for _, k in terms:
        if k:
            return True
    return False


def _exquo_terms(a, b):
    """Exact quotient of Laurent term maps; raises ArithmeticError if inexact."""
    if not b:
        raise DivisionByZero("division by zero")
    if not a:
        return {}
    if len(b) == 1:
        ((e0, k0), c0), = b.items()
        inv = 1 / Fraction(c0)
        out = {}
        for (e, k), c in a.items():
            if k < k0:
                raise ArithmeticError("inexact division")
            out[(e - e0, k - k0)] = nc(c * inv)
        return out
    ea = min(e for e, _ in a)
    eb = min(e for e, _ in b)
    quo = _poly.t_exquo(_poly.t_from_terms(a, ea), _poly.t_from_terms(b, eb))
    return _poly.t_to_terms(quo, ea - eb)


def _canonical(num, den):
    """Reduce ``num/den`` (term maps at a common root order) to canonical form.

    Returns ``(num, den)`` with ``den`` either ``None`` (meaning 1) or a
    normalised term map.
    """
    if not num:
        return {}, None
    if den is None:
        return num, None
    if not den:
        raise DivisionByZero("division by zero")
    if len(den) == 1:
        ((e0, k0), c0), = den.items()
        inv = 1 if c0 == 1 else 1 / Fraction(c0)
        if k0:
            kmin = min(k for _, k in num)
            r = min(k0, kmin)
            num = _tscale(num, inv, -e0, -r)
            k0 -= r
            return num, ({(0, k0): 1} if k0 else None)
        return _tscale(num, inv, -e0), None
    a, b = _reduce_pair(num, den)
    lc = b[max(b)]
    inv = 1 if lc == 1 else 1 / Fraction(lc)
    nt = _tscale(a, inv)
    dt = _tscale(b, inv)
    if len(dt) == 1:
        # only possible as s^k after reduction
        ((e0, k0),) = dt
        if k0 == 0:
            return nt, None
    return nt, dt


def _reduce_pair(num, den):
    """Cancel the gcd of two term maps; both are shifted so the lowest q-power in ``den`` is 0.

    Works over Z[q][s] after clearing denominators, with the variable of
    smaller degree taken as the coefficient ring of the subresultant PRS.
    """
    ea = min(e for e, _ in num)
    eb = min(e for e, _ in den)
    scale = 1
    for c in (*num.values(), *den.values()):
        if type(c) is Fraction:
            scale = scale * c.denominator // gcd(scale, c.denominator)
    deg_t = max(max(e for e, _ in num) - ea, max(e for e, _ in den) - eb)
    deg_s = max(k for _, k in (*num, *den))
    s_main = deg_s <= deg_t

    def dense(terms, shift):
        rows = {}
        for (e, k), c in terms.items():
            outer, inner = (k, e - shift) if s_main else (e - shift, k)
            rows.setdefault(outer, {})[inner] = int(c * scale)
        out = []
        for i in range(max(rows) + 1):
            row = rows.get(i)
            if row:
                coeffs = [0] * (max(row) + 1)
                for j, c in row.items():
                    coeffs[j] = c
                out.append(tuple(coeffs))
            else:
                out.append(())
        return out

    def sparse(poly, shift):
        out = {}
        for i, coeffs in enumerate(poly):
            for j, c in enumerate(coeffs):
                if c:
                    out[(j + shift, i) if s_main else (i + shift, j)] = c
        return out

    a, b = dense(num, ea), dense(den, eb)
    g = _poly.bi_gcd(a, b)
    if len(g) > 1 or len(g[0]) > 1:
        a, b = _poly.bi_exquo(a, g), _poly.bi_exquo(b, g)
    elif g[0][0] not in (1, -1):
        a = [tuple(c // g[0][0] for c in row) for row in a]
        b = [tuple(c // g[0][0] for c in row) for row in b]
    # the t-gcd never contains a power of q, since both sides start at q^0
    return sparse(a, ea - eb), sparse(b, 0)



# ----------------------------------------------------------------- Scalar

class Scalar:
    """Immutable exact element of Q(q^(1/N))(s), kept canonical.

    Construct with :func:`parse_scalar`, :func:`q_pow`, :func:`s_var` or
    ``Scalar(3)``; combine with the usual operators.  Plain ``int`` and
    ``Fraction`` operands are coerced.
    """

    __slots__ = ("_n", "_d", "_N")

    def __init__(self, value=0, root_order=1):
        if isinstance(value, Scalar):
            self._n, self._d, self._N = value._n, value._d, value._N
            return
        value = Fraction(value)
        self._n = {(0, 0): nc(value)} if value else {}
        self._d = None
        self._N = root_order

    @classmethod
    def _raw(cls, num, den, root_order):
        obj = cls.__new__(cls)
        obj._n = num
        obj._d = den
        obj._N = root_order
        return obj

    @classmethod
    def from_terms(cls, terms, root_order=1, den_terms=None):
        """Build ``num/den`` from ``{(e, k): c}`` maps (``q^(e/N) s^k``)."""
        num = LaurentPoly(terms, root_order).terms
        den = None if den_terms is None else LaurentPoly(den_terms, root_order).terms
        n, d = _canonical(num, den)
        return cls._raw(n, d, root_order)

    @classmethod
    def from_laurent(cls, num, den=None):
        if den is not None and den.root_order != num.root_order:
            m = _lcm(num.root_order, den.root_order)
            num, den = num.lift(m // num.root_order), den.lift(m // den.root_order)
        n, d = _canonical(dict(num.terms), None if den is None else dict(den.terms))
        return cls._raw(n, d, num.root_order)

    # -- accessors ------------------------------------------------------
    @property
    def root_order(self):
        return self._N

    @property
    def num(self):
        return LaurentPoly._raw(dict(self._n), self._N)

    @property
    def den(self):
        return LaurentPoly._raw(dict(self._d) if self._d else {(0, 0): 1}, self._N)

    @property
    def is_laurent(self):
        """True when the denominator is 1."""
        return self._d is None

    def terms(self):
        """Numerator term map (a copy)."""
        return dict(self._n)

    def depends_on_s(self):
        return _has_s(self._n) or (self._d is not None and _has_s(self._d))

    def as_monomial(self):
        """Return ``(c, e, k)`` if the value is ``c q^(e/N) s^k``, else None."""
        if self._d is None and len(self._n) == 1:
            ((e, k), c), = self._n.items()
            return Fraction(c), e, k
        return None

    def lift(self, k):
        if k == 1:
            return self
        return Scalar._raw(_lift_terms(self._n, k),
                           None if self._d is None else _lift_terms(self._d, k),
                           self._N * k)

    def with_root_order(self, N):
        """Re-express with root order ``N`` (must be a multiple of the current one)."""
        if N % self._N:
            raise ValueError(f"root order {N} is not a multiple of {self._N}")
        return self.lift(N // self._N)

    # -- coercion --------------------------------------------------------
    def _align(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other, self._N)
            else:
                return None, None
        if other._N == self._N:
            return self, other
        m = _lcm(self._N, other._N)
        return self.lift(m // self._N), other.lift(m // other._N)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        if not b._n:
            return a
        if not a._n:
            return b
        if a._d is None and b._d is None:
            return Scalar._raw(_tadd(a._n, b._n), None, a._N)
        if a._d == b._d:
            n, d = _canonical(_tadd(a._n, b._n), a._d)
            return Scalar._raw(n, d, a._N)
        ad = a._d or {(0, 0): 1}
        bd = b._d or {(0, 0): 1}
        n, d = _canonical(_tadd(_tmul(a._n, bd), _tmul(b._n, ad)), _tmul(ad, bd))
        return Scalar._raw(n, d, a._N)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(_tneg(self._n), self._d, self._N)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        if not a._n or not b._n:
            return Scalar._raw({}, None, a._N)
        if a._d is None and b._d is None:
            return Scalar._raw(_tmul(a._n, b._n), None, a._N)
        ad = a._d or {(0, 0): 1}
        bd = b._d or {(0, 0): 1}
        n, d = _canonical(_tmul(a._n, b._n), _tmul(ad, bd))
        return Scalar._raw(n, d, a._N)

    __rmul__ = __mul__

    def inverse(self):
        if not self._n:
            raise DivisionByZero("division by zero")
        n, d = _canonical(dict(self._d) if self._d else {(0, 0): 1}, self._n)
        return Scalar._raw(n, d, self._N)

    def __truediv__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = Scalar(1, self._N)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ------------------------------------------------------
    def __bool__(self):
        return bool(self._n)

    def __eq__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a._n == b._n and a._d == b._d

    def _key(self):
        g = self._N
        for e, _ in self._n:
            g = gcd(g, e)
        for e, _ in self._d or ():
            g = gcd(g, e)
        num = frozenset(((e // g, k), c) for (e, k), c in self._n.items())
        den = None if self._d is None else frozenset(((e // g, k), c) for (e, k), c in self._d.items())
        return self._N // g, num, den

    def __hash__(self):
        key = self._key()
        if key[0] == 1 and key[2] is None and len(self._n) <= 1:
            # agree with hash() of equal ints/Fractions
            if not self._n:
                return hash(0)
            ((e, k), c), = self._n.items()
            if e == 0 and k == 0:
                return hash(c)
        return hash(key)

    def __repr__(self):
        return f"Scalar({print_scalar(self)!r})"

    def __str__(self):
        return print_scalar(self)

    def __reduce__(self):
        return (parse_scalar, (print_scalar(self), self._N))


def q_pow(exponent, root_order=None):
    """The monomial ``q^exponent`` for a rational exponent.

    ``root_order`` defaults to the exponent's denominator.
    """
    exponent = Fraction(exponent)
    N = root_order or exponent.denominator
    e = exponent * N
    if e.denominator != 1:
        raise ValueError(f"q^{exponent} is not representable with root order {N}")
    return Scalar._raw({(int(e), 0): 1}, None, N)


def s_var(root_order=1):
    """The polynomial parameter ``s``."""
    return Scalar._raw({(0, 1): 1}, None, root_order)


def arith(a, b, kind):
    """Field operation ``kind`` in {"add", "sub", "mul", "div"}."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if not b:
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


# --------------------------------------------------------------- printing

def _fmt_rational(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _fmt_qexp(e, N):
    x = Fraction(e, N)
    if x == 1:
        return "q"
    if x.denominator == 1:
        return f"q^{x.numerator}"
    return f"q^({x.numerator}/{x.denominator})"


def _fmt_terms(terms, N):
    if not terms:
        return "0"
    keys = sorted(terms, key=lambda t: (-t[0], t[1]))
    parts = []
    for idx, key in enumerate(keys):
        e, k = key
        c = Fraction(terms[key])
        mono = []
        if e:
            mono.append(_fmt_qexp(e, N))
        if k:
            mono.append("s" if k == 1 else f"s^{k}")
        mono = "*".join(mono)
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = _fmt_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rational(mag)}*{mono}"
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def print_scalar(x):
    """Canonical text: terms by decreasing q-exponent then increasing s-exponent."""
    if isinstance(x, (int, Fraction)):
        x = Scalar(x)
    if x._d is None:
        return _fmt_terms(x._n, x._N)
    return f"({_fmt_terms(x._n, x._N)})/({_fmt_terms(x._d, x._N)})"


# ---------------------------------------------------------------- parsing

class _Parser:
    def __init__(self, text, root_order):
        self.text = text
        self.pos = 0
        self.N = root_order

    def error(self, message, expected=(), at=None):
        pos = self.pos if at is None else at
        offset = len(self.text[:pos].encode("utf-8"))
        raise ParseError(message, offset, expected)

    def skip(self):
        text = self.text
        while self.pos < len(text) and text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def digits(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits", {"digit"})
        return int(self.text[start : self.pos])

    def integer(self):
        neg = self.take("-")
        value = self.digits()
        return -value if neg else value

    def parse(self):
        value = self.expr()
        if self.peek():
            self.error("unexpected input", {"+", "-", "*", "/", "end of input"})
        return value

    def expr(self):
        # a leading sign is accepted so that printed negatives read back
        if self.take("-"):
            value = -self.term()
        else:
            self.take("+")
            value = self.term()
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                value = value * self.factor()
            elif ch == "/":
                self.pos += 1
                self.skip()
                start = self.pos
                divisor = self.factor()
                if not divisor:
                    self.error("division by zero", at=start)
                value = value / divisor
            elif ch and (ch.isdigit() or ch in "qs("):
                value = value * self.factor()
            else:
                return value

    def factor(self):
        ch = self.peek()
        if ch.isdigit():
            num = self.digits()
            save = self.pos
            if self.take("/"):
                self.skip()
                if self.pos < len(self.text) and self.text[self.pos].isdigit():
                    start = self.pos
                    den = self.digits()
                    if den == 0:
                        self.error("zero denominator", at=start)
                    return Scalar(Fraction(num, den), self.N)
                self.pos = save
            return Scalar(num, self.N)
        if ch in ("q", "s"):
            self.pos += 1
            exp, start = Fraction(1), self.pos
            if self.take("^"):
                self.skip()
                start = self.pos
                exp = self.power()
            if ch == "q":
                e = exp * self.N
                if e.denominator != 1:
                    self.error(f"exponent {exp} not in (1/{self.N})Z", at=start)
                return Scalar._raw({(int(e), 0): 1}, None, self.N)
            if exp.denominator != 1:
                self.error("s-exponents must be integers", at=start)
            k = int(exp)
            mono = Scalar._raw({(0, abs(k)): 1}, None, self.N)
            return mono if k >= 0 else mono.inverse()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if not self.take(")"):
                self.error("unbalanced parenthesis", {")"})
            return value
        self.error("expected a factor", {"integer", "q", "s", "("})

    def power(self):
        close = {"(": ")", "{": "}"}.get(self.peek())
        if close:
            self.pos += 1
            num = self.integer()
            den = 1
            if self.take("/"):
                self.skip()
                start = self.pos
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", at=start)
            if not self.take(close):
                self.error("unterminated exponent", {close})
            return Fraction(num, den)
        ch = self.peek()
        if ch != "-" and not ch.isdigit():
            self.error("expected an exponent", {"integer", "(", "{"})
        return Fraction(self.integer())


def parse_scalar(text, root_order=1):
    """Parse ``text`` in the scalar grammar into a canonical :class:`Scalar`."""
    if root_order < 1:
        raise ValueError("root_order must be positive")
    return _Parser(text, root_order).parse()
