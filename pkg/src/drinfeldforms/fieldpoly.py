"""Exact arithmetic for GF(p^r), the polynomial ring F_q[T], its fraction
field F_q(T), and dense matrices over F_q(T) with Gaussian elimination.

Polynomials are stored densely as small integer coordinate arrays, one row
per basis coordinate of the field over its prime field.  Multiplication is
integer convolution followed by reduction, so the heavy kernels run inside
numpy while every value stays exact.  All objects are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import itertools
import re

import numpy as np

from .errors import BadDegree, DivisionByZero, MixedField, NotOddPrime

NEG_INF = float("-inf")  # degree of the zero polynomial

_TABLE_LIMIT = 1 << 20  # largest extension field with exp/log tables


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over the prime field, used only for the modulus search.
# Represented as plain lists of residues, lowest degree first.

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _fp_trim(out)


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a, m, p):
    a = _fp_trim(list(a))
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            f = (c * inv) % p
            k = len(a) - 1 - dm
            for j in range(dm + 1):
                a[k + j] = (a[k + j] - f * m[j]) % p
        a.pop()
        _fp_trim(a)
    return a


def _fp_gcd(a, b, p):
    a = _fp_trim(list(a))
    b = _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _fp_pow_x(e, m, p):
    """x^e reduced mod m over the prime field."""
    result = [1]
    base = _fp_mod([0, 1], m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def _fp_is_irreducible(f, p):
    """Rabin's criterion for a monic polynomial over F_p."""
    n = len(f) - 1
    if n <= 0:
        return False
    x = [0, 1]
    if _fp_sub(_fp_pow_x(p ** n, f, p), _fp_mod(x, f, p), p):
        return False
    for t in _prime_factors(n):
        g = _fp_sub(_fp_pow_x(p ** (n // t), f, p), _fp_mod(x, f, p), p)
        if len(_fp_gcd(g, f, p)) != 1:
            return False
    return True


def _smallest_irreducible(p, r):
    """Lexicographically smallest monic irreducible of degree r over F_p.

    Coefficient vectors are compared lowest degree first, so the constant
    term is the most significant position.
    """
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=r):
        f = list(tail) + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Field context and elements


class FieldCtx:
    """GF(p^r) with a deterministic modulus.

    Elements are encoded as integers in [0, q) whose base-p digits are the
    coordinates with respect to the power basis 1, w, ..., w^(r-1) of the
    generator w, where w is a root of ``modulus``.  For r > 1 a generator of
    the multiplicative group is found once and exp/log tables drive scalar
    multiplication and inversion.
    """

    __slots__ = ("p", "r", "q", "modulus", "key", "_wred", "_exp", "_log",
                 "_ppow")

    def __init__(self, p, r):
        if not _is_prime(p) or p == 2:
            raise NotOddPrime(f"p = {p} is not an odd prime")
        if r < 1:
            raise BadDegree(f"extension degree r = {r} must be at least 1")
        self.p = p
        self.r = r
        self.q = p ** r
        self.modulus = _smallest_irreducible(p, r)
        self.key = (p, r, self.modulus)
        self._ppow = tuple(p ** i for i in range(r))
        if r > 1:
            self._wred = self._reduction_rows()
            if self.q > _TABLE_LIMIT:
                raise ValueError(
                    f"extension field of order {self.q} is too large for "
                    "table-based arithmetic")
            self._exp, self._log = self._build_tables()
        else:
            self._wred = np.zeros((0, 1), dtype=np.int64)
            self._exp = self._log = None

    def _reduction_rows(self):
        # row s holds the coordinates of w^(r+s), for s = 0 .. r-2
        p, r, m = self.p, self.r, self.modulus
        rows = np.zeros((r - 1, r), dtype=np.int64)
        base = np.array([(-c) % p for c in m[:r]], dtype=np.int64)
        rows[0] = base
        for s in range(1, r - 1):
            prev = rows[s - 1]
            row = np.zeros(r, dtype=np.int64)
            row[1:] = prev[:-1]
            row += prev[r - 1] * base
            rows[s] = row % p
        return rows

    def _mul_coords(self, a, b):
        # full product of two coordinate vectors, reduced mod the modulus
        p, r = self.p, self.r
        full = np.convolve(a, b)
        for s in range(full.size - 1, r - 1, -1):
            c = full[s]
            if c:
                full[:r] += c * self._wred[s - r]
                full[s] = 0
        return full[:self.r] % p

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order)

        def code_mul(a, b):
            return self._encode(self._mul_coords(self._decode(a),
                                                 self._decode(b)))

        def code_pow(a, e):
            acc, base = 1, a
            while e:
                if e & 1:
                    acc = code_mul(acc, base)
                base = code_mul(base, base)
                e >>= 1
            return acc

        gen = None
        for cand in range(2, q):
            if all(code_pow(cand, order // t) != 1 for t in factors):
                gen = cand
                break
        assert gen is not None
        exp = [1] * order
        log = [0] * q
        for i in range(1, order):
            exp[i] = code_mul(exp[i - 1], gen)
            log[exp[i]] = i
        log[0] = -1
        return exp, log

    def _decode(self, code):
        out = np.zeros(self.r, dtype=np.int64)
        for i in range(self.r):
            code, out[i] = divmod(code, self.p)
        return out

    def _encode(self, coords):
        code = 0
        for i in range(self.r - 1, -1, -1):
            code = code * self.p + int(coords[i]) % self.p
        return code

    # scalar arithmetic on codes
    def _add_codes(self, a, b):
        if self.r == 1:
            return (a + b) % self.p
        out, m = 0, 1
        for _ in range(self.r):
            out += ((a + b) % self.p) * m
            a //= self.p
            b //= self.p
            m *= self.p
        return out

    def _neg_code(self, a):
        if self.r == 1:
            return (-a) % self.p
        out, m = 0, 1
        for _ in range(self.r):
            out += ((-a) % self.p) * m
            a //= self.p
            m *= self.p
        return out

    def _sub_codes(self, a, b):
        return self._add_codes(a, self._neg_code(b))

    def _mul_codes(self, a, b):
        if self.r == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv_code(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero field element")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def zero(self):
        return FqElem(self, 0)

    def one(self):
        return FqElem(self, 1)

    def element(self, value):
        """Build a field element from an integer (image of the integer in
        the prime subfield) or from a coordinate sequence."""
        if isinstance(value, FqElem):
            if value.ctx is not self and value.ctx.key != self.key:
                raise MixedField("element from a different field")
            return value
        if isinstance(value, int):
            return FqElem(self, value % self.p)
        coords = list(value)
        if len(coords) != self.r:
            raise ValueError(f"expected {self.r} coordinates")
        code = 0
        for i in range(self.r - 1, -1, -1):
            code = code * self.p + coords[i] % self.p
        return FqElem(self, code)

    def elements(self):
        """All field elements in code order."""
        return (FqElem(self, c) for c in range(self.q))

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, r={self.r})"


def make_field(p, r):
    """Construct GF(p^r) with the smallest monic irreducible modulus."""
    return FieldCtx(p, r)


def _same_ctx(a, b):
    if a.ctx.key != b.ctx.key:
        raise MixedField(f"mixed fields {a.ctx!r} and {b.ctx!r}")


class FqElem:
    """Element of GF(p^r), canonically reduced."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = code

    @property
    def coords(self):
        """Coordinates with respect to 1, w, ..., w^(r-1), each in [0, p)."""
        c, p = self.code, self.ctx.p
        out = []
        for _ in range(self.ctx.r):
            c, d = divmod(c, p)
            out.append(d)
        return tuple(out)

    def is_zero(self):
        return self.code == 0

    def is_one(self):
        return self.code == 1

    def in_prime_field(self):
        return self.code < self.ctx.p

    def _coerce(self, other):
        if isinstance(other, FqElem):
            _same_ctx(self, other)
            return other
        if isinstance(other, int):
            return FqElem(self.ctx, other % self.ctx.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqElem(self.ctx, self.ctx._add_codes(self.code, other.code))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqElem(self.ctx, self.ctx._sub_codes(self.code, other.code))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FqElem(self.ctx, self.ctx._neg_code(self.code))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqElem(self.ctx, self.ctx._mul_codes(self.code, other.code))

    __rmul__ = __mul__

    def inverse(self):
        return FqElem(self.ctx, self.ctx._inv_code(self.code))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        acc = FqElem(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            return self.code == other % self.ctx.p and self.code < self.ctx.p
        return (isinstance(other, FqElem) and self.ctx.key == other.ctx.key
                and self.code == other.code)

    def __hash__(self):
        return hash((self.ctx.key, self.code))

    def _monomials(self):
        # nonzero (power of w, residue) pairs, highest power first
        return [(i, d) for i, d in reversed(list(enumerate(self.coords)))
                if d]

    def __str__(self):
        if self.code == 0:
            return "0"
        parts = []
        for i, d in self._monomials():
            if i == 0:
                parts.append(str(d))
            else:
                wpow = "w" if i == 1 else f"w^{i}"
                parts.append(wpow if d == 1 else f"{d}*{wpow}")
        return "+".join(parts)

    def __repr__(self):
        return f"FqElem({self}, q={self.ctx.q})"


# ---------------------------------------------------------------------------
# Dense polynomials over GF(p^r)


def _convolve_mod(a, b, p):
    # exact 1-D convolution of residue vectors; int64 is safe at desk scale
    if a.size * (p - 1) * (p - 1) < (1 << 62):
        return np.convolve(a, b) % p
    out = [0] * (a.size + b.size - 1)
    al = [int(x) for x in a]
    bl = [int(x) for x in b]
    for i, ai in enumerate(al):
        if ai:
            for j, bj in enumerate(bl):
                out[i + j] = (out[i + j] + ai * bj) % p
    return np.array(out, dtype=np.int64)


class Poly:
    """Dense polynomial in T over GF(p^r).

    The coefficient array has one row per field coordinate and one column
    per power of T; the highest column is nonzero.  The zero polynomial has
    zero columns and degree NEG_INF.
    """

    __slots__ = ("ctx", "arr")

    def __init__(self, ctx, arr):
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != ctx.r:
            raise ValueError("coefficient array has wrong shape")
        n = arr.shape[1]
        while n > 0 and not arr[:, n - 1].any():
            n -= 1
        arr = np.ascontiguousarray(arr[:, :n])
        arr.setflags(write=False)
        self.ctx = ctx
        self.arr = arr

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls(ctx, np.zeros((ctx.r, 0), dtype=np.int64))

    @classmethod
    def one(cls, ctx):
        return cls.constant(ctx, 1)

    @classmethod
    def T(cls, ctx):
        arr = np.zeros((ctx.r, 2), dtype=np.int64)
        arr[0, 1] = 1
        return cls(ctx, arr)

    @classmethod
    def constant(cls, ctx, c):
        e = ctx.element(c) if not isinstance(c, FqElem) else c
        arr = np.zeros((ctx.r, 1), dtype=np.int64)
        arr[:, 0] = e.coords
        return cls(ctx, arr)

    @classmethod
    def from_coeffs(cls, ctx, coeffs):
        """Polynomial from coefficients, lowest degree first."""
        elems = [ctx.element(c) for c in coeffs]
        arr = np.zeros((ctx.r, len(elems)), dtype=np.int64)
        for j, e in enumerate(elems):
            arr[:, j] = e.coords
        return cls(ctx, arr)

    @classmethod
    def from_pairs(cls, ctx, pairs):
        """Polynomial from (exponent, coefficient) pairs."""
        pairs = list(pairs)
        n = max((e for e, _ in pairs), default=-1) + 1
        arr = np.zeros((ctx.r, n), dtype=np.int64)
        for e, c in pairs:
            elem = ctx.element(c)
            arr[:, e] = (arr[:, e] + np.array(elem.coords)) % ctx.p
        return cls(ctx, arr)

    # -- basic queries ------------------------------------------------
    @property
    def degree(self):
        n = self.arr.shape[1]
        return n - 1 if n else NEG_INF

    def is_zero(self):
        return self.arr.shape[1] == 0

    def is_one(self):
        return (self.arr.shape[1] == 1 and self.arr[0, 0] == 1
                and not self.arr[1:, 0].any())

    def coeff(self, i):
        """Coefficient of T^i as a field element."""
        if i < 0 or i >= self.arr.shape[1]:
            return self.ctx.zero()
        return self.ctx.element(self.arr[:, i].tolist())

    @property
    def lead(self):
        if self.is_zero():
            return self.ctx.zero()
        return self.coeff(self.arr.shape[1] - 1)

    def is_monic(self):
        return not self.is_zero() and self.lead.is_one()

    def coeffs(self):
        return tuple(self.coeff(i) for i in range(self.arr.shape[1]))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            _same_ctx(self, other)
            return other
        if isinstance(other, (int, FqElem)):
            return Poly.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.arr, other.arr
        n = max(a.shape[1], b.shape[1])
        out = np.zeros((self.ctx.r, n), dtype=np.int64)
        out[:, :a.shape[1]] += a
        out[:, :b.shape[1]] += b
        return Poly(self.ctx, out % self.ctx.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.arr, other.arr
        n = max(a.shape[1], b.shape[1])
        out = np.zeros((self.ctx.r, n), dtype=np.int64)
        out[:, :a.shape[1]] += a
        out[:, :b.shape[1]] -= b
        return Poly(self.ctx, out % self.ctx.p)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly(self.ctx, (-self.arr) % self.ctx.p)

    def __mul__(self, other):
        if isinstance(other, FqElem):
            return self._scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.ctx)
        ctx = self.ctx
        a, b = self.arr, other.arr
        if ctx.r == 1:
            return Poly(ctx, _convolve_mod(a[0], b[0], ctx.p)[None, :])
        r = ctx.r
        m = a.shape[1] + b.shape[1] - 1
        acc = np.zeros((2 * r - 1, m), dtype=np.int64)
        for i in range(r):
            if not a[i].any():
                continue
            for j in range(r):
                if not b[j].any():
                    continue
                acc[i + j] += np.convolve(a[i], b[j])
        acc %= ctx.p
        for s in range(2 * r - 2, r - 1, -1):
            row = acc[s]
            if row.any():
                acc[:r] += np.outer(ctx._wred[s - r], row)
        return Poly(ctx, acc[:r] % ctx.p)

    __rmul__ = __mul__

    def _scale(self, e):
        """Multiply by a field element."""
        if e.is_zero() or self.is_zero():
            return Poly.zero(self.ctx)
        if e.is_one():
            return self
        ctx = self.ctx
        if ctx.r == 1:
            return Poly(ctx, (self.arr * e.code) % ctx.p)
        return Poly(ctx, self._scale_block(np.array(e.coords,
                                                    dtype=np.int64),
                                           self.arr))

    def _scale_block(self, coords, block):
        ctx = self.ctx
        r = ctx.r
        acc = np.zeros((2 * r - 1, block.shape[1]), dtype=np.int64)
        for i in range(r):
            if coords[i]:
                acc[i:i + r] += coords[i] * block
        acc %= ctx.p
        for s in range(2 * r - 2, r - 1, -1):
            row = acc[s]
            if row.any():
                acc[:r] += np.outer(ctx._wred[s - r], row)
        return acc[:r] % ctx.p

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        acc = Poly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        ctx = self.ctx
        dg = other.arr.shape[1] - 1
        df = self.arr.shape[1] - 1
        if df < dg:
            return Poly.zero(ctx), self
        ginv = other.lead.inverse()
        ginv_coords = np.array(ginv.coords, dtype=np.int64)
        work = self.arr.copy()
        quot = np.zeros((ctx.r, df - dg + 1), dtype=np.int64)
        garr = other.arr
        for k in range(df, dg - 1, -1):
            col = work[:, k]
            if not col.any():
                continue
            if ctx.r == 1:
                qc = (col * ginv.code) % ctx.p
                quot[:, k - dg] = qc
                work[:, k - dg:k + 1] = (work[:, k - dg:k + 1]
                                         - qc[0] * garr) % ctx.p
            else:
                qc = ctx._mul_coords(col, ginv_coords)
                quot[:, k - dg] = qc
                work[:, k - dg:k + 1] = (work[:, k - dg:k + 1]
                                         - self._scale_block(qc, garr)) % ctx.p
        return Poly(ctx, quot), Poly(ctx, work[:, :dg])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        """Monic greatest common divisor."""
        other = self._coerce(other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def monic(self):
        if self.is_zero() or self.lead.is_one():
            return self
        return self._scale(self.lead.inverse())

    # -- comparison and rendering --------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.ctx, other)
        return (isinstance(other, Poly) and self.ctx.key == other.ctx.key
                and self.arr.shape == other.arr.shape
                and np.array_equal(self.arr, other.arr))

    def __hash__(self):
        return hash((self.ctx.key, self.arr.shape[1], self.arr.tobytes()))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j in range(self.arr.shape[1] - 1, -1, -1):
            c = self.coeff(j)
            if c.is_zero():
                continue
            if j == 0:
                s = str(c)
                if "+" in s:
                    s = f"({s})"
                parts.append(s)
            else:
                tp = "T" if j == 1 else f"T^{j}"
                if c.is_one():
                    parts.append(tp)
                elif c.in_prime_field():
                    parts.append(f"{c.code}*{tp}")
                else:
                    parts.append(f"({c})*{tp}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self}, q={self.ctx.q})"


def special_modulus(ctx, d):
    """The congruence modulus T^(q^d) - T."""
    if d < 1:
        raise BadDegree(f"d = {d} must be at least 1")
    return Poly.from_pairs(ctx, [(ctx.q ** d, 1), (1, ctx.p - 1)])


def lcm_monics(ctx, d):
    """Least common multiple of all monic polynomials of degree d,
    the product of T^(q^i) - T for i = 1 .. d."""
    if d < 0:
        raise BadDegree(f"d = {d} must be nonnegative")
    out = Poly.one(ctx)
    for i in range(1, d + 1):
        out = out * special_modulus(ctx, i)
    return out


# ---------------------------------------------------------------------------
# Rational functions


class RatFunc:
    """Element of F_q(T), stored as a reduced fraction with monic
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, FqElem)):
            raise TypeError("wrap scalars with RatFunc.constant(ctx, c)")
        ctx = num.ctx
        if den is None:
            den = Poly.one(ctx)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Poly.one(ctx)
            return
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if not den.lead.is_one():
                inv = den.lead.inverse()
                num = num._scale(inv)
                den = den._scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def _reduced(cls, num, den):
        # internal: fraction already in lowest terms with monic denominator
        self = object.__new__(cls)
        self.num = num
        self.den = den
        return self

    @classmethod
    def constant(cls, ctx, c):
        return cls._reduced(Poly.constant(ctx, c), Poly.one(ctx))

    @property
    def ctx(self):
        return self.num.ctx

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_integral(self):
        """True when the value lies in F_q[T]."""
        return self.den.is_one()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            _same_ctx(self.num, other.num)
            return other
        if isinstance(other, Poly):
            _same_ctx(self.num, other)
            return RatFunc._reduced(other, Poly.one(self.ctx))
        if isinstance(other, (int, FqElem)):
            return RatFunc.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatFunc._reduced(self.num + other.num, self.den)
        num = self.num * other.den + other.num * self.den
        return RatFunc(num, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatFunc._reduced(self.num - other.num, self.den)
        num = self.num * other.den - other.num * self.den
        return RatFunc(num, self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFunc._reduced(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatFunc._reduced(self.num * other.num, self.den)
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1 = self.num if g1.is_one() else self.num // g1
        d2 = other.den if g1.is_one() else other.den // g1
        n2 = other.num if g2.is_one() else other.num // g2
        d1 = self.den if g2.is_one() else self.den // g2
        return RatFunc._reduced(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        acc = RatFunc.constant(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, FqElem, Poly)):
            other = self._coerce(other)
        return (isinstance(other, RatFunc) and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self}, q={self.ctx.q})"


# ---------------------------------------------------------------------------
# Canonical text parsing (accepts exactly the emitted grammar, with
# flexible whitespace)

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([Tw])|(\^)|(\*)|(\+)|(\()|(\))|(/))")


def _tokenize(s):
    tokens = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if m is None:
            rest = s[pos:].strip()
            if not rest:
                break
            raise ValueError(f"cannot tokenize {rest[:12]!r}")
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        else:
            tokens.append((m.group(0).strip(), None))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, ctx, tokens):
        self.ctx = ctx
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self, kind=None):
        if self.pos >= len(self.toks):
            raise ValueError("unexpected end of input")
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    def parse_int(self):
        tok = self.take("int")
        return tok[1]

    def parse_wpart(self):
        # "w" with an optional exponent; returns the power of w
        self.take("w")
        if self.peek() == "^":
            self.take("^")
            return self.parse_int()
        return 1

    def parse_wmono(self):
        # single monomial in w; returns an FqElem
        ctx = self.ctx
        if self.peek() == "int":
            c = self.parse_int()
            if self.peek() == "*":
                save = self.pos
                self.take("*")
                if self.peek() == "w":
                    i = self.parse_wpart()
                    return self._w_power(i) * ctx.element(c)
                self.pos = save
            return ctx.element(c)
        i = self.parse_wpart()
        return self._w_power(i)

    def _w_power(self, i):
        ctx = self.ctx
        if ctx.r == 1:
            raise ValueError("generator w is not available over a prime field")
        if i >= ctx.r:
            raise ValueError(f"w^{i} is not a reduced coordinate expression")
        coords = [0] * ctx.r
        coords[i] = 1
        return ctx.element(coords)

    def parse_wpoly(self):
        acc = self.parse_wmono()
        while self.peek() == "+":
            self.take("+")
            acc = acc + self.parse_wmono()
        return acc

    def parse_tpow(self):
        self.take("T")
        if self.peek() == "^":
            self.take("^")
            return self.parse_int()
        return 1

    def parse_pterm(self):
        # returns (exponent of T, FqElem coefficient)
        ctx = self.ctx
        head = self.peek()
        if head == "(":
            self.take("(")
            c = self.parse_wpoly()
            self.take(")")
            if self.peek() == "*":
                self.take("*")
                return self.parse_tpow(), c
            return 0, c
        if head == "T":
            return self.parse_tpow(), ctx.one()
        if head == "w":
            return 0, self._w_power(self.parse_wpart())
        if head == "int":
            c = self.parse_int()
            if self.peek() == "*":
                self.take("*")
                if self.peek() == "T":
                    return self.parse_tpow(), ctx.element(c)
                if self.peek() == "w":
                    return 0, self._w_power(self.parse_wpart()) * ctx.element(c)
                raise ValueError("expected T or w after '*'")
            return 0, ctx.element(c)
        raise ValueError(f"unexpected token {head!r} in polynomial")

    def parse_poly(self):
        pairs = [self.parse_pterm()]
        while self.peek() == "+":
            self.take("+")
            pairs.append(self.parse_pterm())
        return Poly.from_pairs(self.ctx, pairs)


def poly_parse(ctx, text):
    """Parse the canonical polynomial rendering back into a Poly."""
    parser = _PolyParser(ctx, _tokenize(text))
    out = parser.parse_poly()
    if parser.pos != len(parser.toks):
        raise ValueError(f"trailing input near token {parser.pos}")
    return out


def ratfunc_parse(ctx, text):
    """Parse either a polynomial or the "(num)/(den)" rendering."""
    tokens = _tokenize(text)
    if tokens and tokens[0][0] == "(":
        depth = 0
        for idx, (kind, _) in enumerate(tokens):
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
                if depth == 0:
                    close = idx
                    break
        else:
            raise ValueError("unbalanced parentheses")
        if close + 1 < len(tokens) and tokens[close + 1][0] == "/":
            nump = _PolyParser(ctx, tokens[1:close])
            num = nump.parse_poly()
            if nump.pos != close - 1:
                raise ValueError("bad numerator")
            if (tokens[close + 2][0] != "(" or tokens[-1][0] != ")"):
                raise ValueError("denominator must be parenthesized")
            denp = _PolyParser(ctx, tokens[close + 3:-1])
            den = denp.parse_poly()
            if denp.pos != len(tokens) - close - 4:
                raise ValueError("bad denominator")
            return RatFunc(num, den)
    parser = _PolyParser(ctx, tokens)
    out = parser.parse_poly()
    if parser.pos != len(tokens):
        raise ValueError(f"trailing input near token {parser.pos}")
    return RatFunc(out)


# ---------------------------------------------------------------------------
# Matrices over F_q(T)


class Matrix:
    """Immutable dense matrix over F_q(T)."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx, entries):
        entries = tuple(tuple(self._entry(ctx, e) for e in row)
                        for row in entries)
        self.ctx = ctx
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        if any(len(row) != self.cols for row in entries):
            raise ValueError("ragged rows")
        self.entries = entries

    @staticmethod
    def _entry(ctx, e):
        if isinstance(e, RatFunc):
            return e
        if isinstance(e, Poly):
            return RatFunc(e)
        return RatFunc.constant(ctx, e)

    @classmethod
    def identity(cls, ctx, n):
        one = RatFunc.constant(ctx, 1)
        zero = RatFunc.constant(ctx, 0)
        return cls(ctx, [[one if i == j else zero for j in range(n)]
                         for i in range(n)])

    def row(self, i):
        return self.entries[i]

    def transpose(self):
        return Matrix(self.ctx, [[self.entries[i][j]
                                  for i in range(self.rows)]
                                 for j in range(self.cols)])

    def rref(self):
        """Reduced row echelon form with unit pivots; returns the echelon
        matrix and the tuple of pivot columns."""
        rows = [list(r) for r in self.entries]
        pivots = []
        pr = 0
        for pc in range(self.cols):
            hit = None
            for i in range(pr, len(rows)):
                if not rows[i][pc].is_zero():
                    hit = i
                    break
            if hit is None:
                continue
            rows[pr], rows[hit] = rows[hit], rows[pr]
            inv = rows[pr][pc].inverse()
            rows[pr] = [x * inv for x in rows[pr]]
            for i in range(len(rows)):
                if i != pr and not rows[i][pc].is_zero():
                    f = rows[i][pc]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == len(rows):
                break
        return Matrix(self.ctx, rows), tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row)
                         for row in self.entries)
        return f"Matrix[{body}]"


def left_kernel(mat):
    """Canonical echelon basis of the left kernel {v : v M = 0}.

    The returned rows are in reduced row echelon form, each leading entry
    equal to 1, so the output is deterministic.  An empty list means the
    kernel is trivial.
    """
    ctx = mat.ctx
    reduced, pivots = mat.transpose().rref()
    free = [j for j in range(mat.rows) if j not in pivots]
    if not free:
        return []
    zero = RatFunc.constant(ctx, 0)
    one = RatFunc.constant(ctx, 1)
    basis = []
    for j in free:
        v = [zero] * mat.rows
        v[j] = one
        for idx, pc in enumerate(pivots):
            v[pc] = -reduced.entries[idx][j]
        basis.append(v)
    echelon, _ = Matrix(ctx, basis).rref()
    return [list(echelon.row(i)) for i in range(len(basis))]
