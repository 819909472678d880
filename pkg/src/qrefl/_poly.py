"""Dense helpers for polynomials in Q[s][t].

A polynomial in s is a tuple of rational coefficients, lowest degree
first, with no trailing zeros (``()`` is zero).  A polynomial in t over
Q[s] is a list of such tuples indexed by t-degree, again trimmed.

Only what the scalar layer needs lives here: exact division, and a
subresultant gcd over integer coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def nc(c):
    """Normalise a rational coefficient: integral values become ``int``."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------- Q[s]

def _strim(c):
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def s_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = nc(out[i] + c)
    return _strim(out)


def s_neg(a):
    return tuple(-c for c in a)


def s_sub(a, b):
    return s_add(a, s_neg(b))


def s_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _strim([nc(c) for c in out])


def s_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    lb = Fraction(b[-1])
    db = len(b) - 1
    if len(r) <= db:
        return (), tuple(r)
    quo = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = nc(r[k + db] / lb)
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = nc(r[k + j] - c * y)
    return _strim(quo), _strim(r[:db])


def s_exquo(a, b):
    q, r = s_divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in Q[s]")
    return q


# ------------------------------------------------------------- Q[s][t]

def _ttrim(p):
    while p and not p[-1]:
        p.pop()
    return p


def t_from_terms(terms, eshift=0):
    """Build a Q[s][t] polynomial from ``{(te, se): c}``; t-exponents shifted by ``-eshift``."""
    if not terms:
        return []
    deg = max(e for e, _ in terms) - eshift
    rows = [dict() for _ in range(deg + 1)]
    for (e, k), c in terms.items():
        rows[e - eshift][k] = c
    out = []
    for row in rows:
        if row:
            coeffs = [0] * (max(row) + 1)
            for k, c in row.items():
                coeffs[k] = c
            out.append(tuple(coeffs))
        else:
            out.append(())
    return out


def t_to_terms(p, eshift=0):
    out = {}
    for e, coeffs in enumerate(p):
        for k, c in enumerate(coeffs):
            if c:
                out[(e + eshift, k)] = c
    return out


def t_exquo(a, b):
    """Exact quotient ``a / b`` in Q[s][t]; raises if ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [c for c in a]
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact division in Q[s][t]")
        return []
    quo = [()] * (len(r) - db)
    while r:
        shift = len(r) - 1 - db
        if shift < 0:
            raise ArithmeticError("inexact division in Q[s][t]")
        c = s_exquo(r[-1], lb)
        quo[shift] = c
        for j, y in enumerate(b):
            r[shift + j] = s_sub(r[shift + j], s_mul(c, y))
        if r[-1]:
            raise ArithmeticError("inexact division in Q[s][t]")
        _ttrim(r)
    return _ttrim(quo)


def _spow(a, k):
    out = (1,)
    for _ in range(k):
        out = s_mul(out, a)
    return out


# ------------------------------------------------- integer coefficients
#
# The canonical-form gcd runs over Z[x][y] after clearing denominators;
# integer arithmetic avoids the Fraction normalisation that otherwise
# dominates the cost.

def z_exquo(a, b):
    """Exact quotient in Z[x]; raises ArithmeticError if ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        if any(r):
            raise ArithmeticError("inexact division in Z[x]")
        return ()
    quo = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c, rem = divmod(r[k + db], lb)
        if rem:
            raise ArithmeticError("inexact division in Z[x]")
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    if any(r[:db]):
        raise ArithmeticError("inexact division in Z[x]")
    return _strim(quo)


def z_content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def z_primitive(a):
    if not a:
        return a
    g = z_content(a)
    if a[-1] < 0:
        g = -g
    return a if g == 1 else tuple(c // g for c in a)


def _z_prem(a, b):
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, y in enumerate(b):
            r[shift + j] -= lr * y
        _strim(r)
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def z_gcd(a, b):
    """Primitive gcd in Z[x] (positive leading coefficient, content included)."""
    if not a or not b:
        a = a or b
        return tuple(-x for x in a) if a and a[-1] < 0 else a
    c = gcd(z_content(a), z_content(b))
    a, b = z_primitive(a), z_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _z_prem(a, b)
        a, b = b, z_primitive(r) if r else ()
    return tuple(c * x for x in z_primitive(a))


def _bi_content(p):
    g = ()
    for c in p:
        if c:
            g = z_gcd(g, c)
            if g == (1,):
                return g
    return g


def _bi_exquo_scalar(p, c):
    if c == (1,):
        return list(p)
    return [z_exquo(x, c) if x else () for x in p]


def _bi_prem(a, b):
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        steps -= 1
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [s_mul(c, lb) for c in r]
        for j, y in enumerate(b):
            r[shift + j] = s_sub(r[shift + j], s_mul(lr, y))
        _ttrim(r)
    if steps > 0 and r:
        f = _spow(lb, steps)
        r = [s_mul(c, f) for c in r]
    return r


def bi_exquo(a, b):
    """Exact quotient in Z[x][y]."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact division in Z[x][y]")
        return []
    quo = [()] * (len(r) - db)
    while r:
        shift = len(r) - 1 - db
        if shift < 0:
            raise ArithmeticError("inexact division in Z[x][y]")
        c = z_exquo(r[-1], lb)
        quo[shift] = c
        for j, y in enumerate(b):
            r[shift + j] = s_sub(r[shift + j], s_mul(c, y))
        if r[-1]:
            raise ArithmeticError("inexact division in Z[x][y]")
        _ttrim(r)
    return _ttrim(quo)


def bi_gcd(a, b):
    """gcd in Z[x][y] by the subresultant PRS in y, up to a sign."""
    if not a:
        return list(b)
    if not b:
        return list(a)
    if len(a) < len(b):
        a, b = b, a
    ca, cb = _bi_content(a), _bi_content(b)
    d = z_gcd(ca, cb)
    a = _bi_exquo_scalar(a, ca)
    b = _bi_exquo_scalar(b, cb)
    g = h = (1,)
    while True:
        delta = len(a) - len(b)
        r = _bi_prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [d]
        a = b
        b = _bi_exquo_scalar(r, s_mul(g, _spow(h, delta)))
        g = a[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = z_exquo(_spow(g, delta), _spow(h, delta - 1))
    return [s_mul(c, d) for c in _bi_exquo_scalar(b, _bi_content(b))]
