"""Truncated Laurent series in the uniformizer u over F_q(T).

A series carries an explicit window [val, prec): coefficients at exponents
below ``val`` are known to vanish, coefficients in the window are stored
exactly, and nothing at all is known from ``prec`` on.  Reading a
coefficient at or beyond ``prec`` raises PrecisionExceeded instead of
returning zero; silent truncation is the dominant failure mode of series
code and is ruled out here by construction.

Precision transfer follows the window semantics exactly:

* add, sub       -> min(prec_f, prec_g)
* mul            -> min(val_f + prec_g, val_g + prec_f)
* inverse        -> the relative precision prec - val is preserved
* substitute_Tz  -> q * prec

Valuations are recomputed after every operation, so leading-term
cancellation tightens the window rather than leaving stale bounds.  Series
over a support class c have all exponents congruent to c mod (q - 1); the
class tag is propagated through arithmetic and checked on construction.
A series is integral when every stored coefficient lies in F_q[T].
"""

from __future__ import annotations

from .errors import MixedField, PrecisionExceeded, ZeroSeries
from .fieldpoly import FqElem, Poly, RatFunc


def _as_ratfunc(ctx, v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, Poly):
        return RatFunc(v)
    return RatFunc.constant(ctx, v)


class USeries:
    """Truncated Laurent series with exponent window [val, prec)."""

    __slots__ = ("ctx", "val", "prec", "coeffs", "support_class", "integral")

    def __init__(self, ctx, coeffs, prec, val=None, support_class=None):
        if not isinstance(prec, int):
            raise TypeError("prec must be an integer")
        items = []
        for e, c in coeffs.items():
            c = _as_ratfunc(ctx, c)
            if not c.is_zero():
                items.append((e, c))
        items.sort()
        if items:
            lo = items[0][0]
            hi = items[-1][0]
            if hi >= prec:
                raise ValueError(f"coefficient at u^{hi} outside prec {prec}")
            if val is not None and lo < val:
                raise ValueError(f"coefficient at u^{lo} below val {val}")
            val = lo
        else:
            if val is None:
                val = prec - 1
            val = min(val, prec - 1)
        if prec <= val:
            raise ValueError(f"empty window: val {val}, prec {prec}")
        if support_class is not None:
            m = ctx.q - 1
            support_class %= m
            for e, _ in items:
                if e % m != support_class:
                    raise ValueError(
                        f"exponent {e} escapes support class "
                        f"{support_class} mod {m}")
        self.ctx = ctx
        self.val = val
        self.prec = prec
        self.coeffs = dict(items)
        self.support_class = support_class
        self.integral = all(c.is_integral() for _, c in items)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ctx, prec):
        return cls(ctx, {}, prec)

    @classmethod
    def one(cls, ctx, prec, support_class=None):
        return cls(ctx, {0: RatFunc.constant(ctx, 1)}, prec,
                   support_class=support_class)

    @classmethod
    def monomial(cls, ctx, coeff, exp, prec, support_class=None):
        return cls(ctx, {exp: coeff}, prec, support_class=support_class)

    # -- bookkeeping ----------------------------------------------------
    def _check(self, other):
        if self.ctx.key != other.ctx.key:
            raise MixedField("series over different fields")

    def _eff_val(self):
        # tight valuation bound: prec itself for a window of zeros
        return self.val if self.coeffs else self.prec

    def is_zero(self):
        return not self.coeffs

    def terms(self):
        """Stored (exponent, coefficient) pairs, exponents ascending."""
        return list(self.coeffs.items())

    def coeff(self, e):
        """Coefficient at u^e; raises beyond the precision window."""
        if e >= self.prec:
            raise PrecisionExceeded(
                f"coefficient of u^{e} requested, precision is {self.prec}")
        return self.coeffs.get(e) or RatFunc.constant(self.ctx, 0)

    def truncate(self, prec):
        """Forget coefficients at exponents >= prec."""
        if prec > self.prec:
            raise PrecisionExceeded(
                f"cannot extend precision {self.prec} to {prec}")
        if prec == self.prec:
            return self
        kept = {e: c for e, c in self.coeffs.items() if e < prec}
        return USeries(self.ctx, kept, prec,
                       val=min(self.val, prec - 1),
                       support_class=self.support_class)

    def shift(self, k):
        """Multiply by u^k (exact exponent shift)."""
        if k == 0:
            return self
        sc = self.support_class
        if sc is not None:
            sc = (sc + k) % (self.ctx.q - 1)
        return USeries(self.ctx, {e + k: c for e, c in self.coeffs.items()},
                       self.prec + k, val=self.val + k, support_class=sc)

    # -- ring operations -------------------------------------------------
    def _merged_class(self, other):
        if self.is_zero():
            return other.support_class
        if other.is_zero():
            return self.support_class
        if self.support_class is None or other.support_class is None:
            return None
        return (self.support_class if self.support_class ==
                other.support_class else None)

    def __add__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        self._check(other)
        prec = min(self.prec, other.prec)
        out = {e: c for e, c in self.coeffs.items() if e < prec}
        for e, c in other.coeffs.items():
            if e >= prec:
                continue
            prev = out.get(e)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return USeries(self.ctx, out, prec,
                       val=min(self.val, other.val, prec - 1),
                       support_class=self._merged_class(other))

    def __sub__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return USeries(self.ctx, {e: -c for e, c in self.coeffs.items()},
                       self.prec, val=self.val,
                       support_class=self.support_class)

    def scale(self, s):
        """Multiply every coefficient by a scalar from F_q(T)."""
        s = _as_ratfunc(self.ctx, s)
        if s.is_zero():
            return USeries.zero(self.ctx, self.prec)
        return USeries(self.ctx, {e: c * s for e, c in self.coeffs.items()},
                       self.prec, val=self.val,
                       support_class=self.support_class)

    def __mul__(self, other):
        if isinstance(other, USeries):
            self._check(other)
            prec = min(self._eff_val() + other.prec,
                       other._eff_val() + self.prec)
            fast = self.integral and other.integral
            rhs = other.terms()
            acc = {}
            for e1, c1 in self.coeffs.items():
                n1 = c1.num if fast else c1
                for e2, c2 in rhs:
                    e = e1 + e2
                    if e >= prec:
                        break
                    v = n1 * (c2.num if fast else c2)
                    prev = acc.get(e)
                    acc[e] = v if prev is None else prev + v
            one = Poly.one(self.ctx)
            if fast:
                out = {e: RatFunc._reduced(v, one)
                       for e, v in acc.items() if not v.is_zero()}
            else:
                out = acc
            sc = None
            if (self.support_class is not None
                    and other.support_class is not None):
                sc = ((self.support_class + other.support_class)
                      % (self.ctx.q - 1))
            return USeries(self.ctx, out, prec,
                           val=min(self._eff_val() + other._eff_val(),
                                   prec - 1),
                           support_class=sc)
        if isinstance(other, (RatFunc, Poly, FqElem, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFunc, Poly, FqElem, int)):
            return self.scale(other)
        return NotImplemented

    def inverse(self):
        """Multiplicative inverse; the relative precision is preserved."""
        if not self.coeffs:
            raise ZeroSeries("cannot invert a series with no nonzero "
                             "coefficient below its precision")
        v = self.val
        rel = self.prec - v
        a = {e - v: c for e, c in self.coeffs.items()}
        a0 = a.pop(0)
        # unit leading coefficients keep the recurrence in F_q[T]
        fast = (self.integral and a0.num.degree == 0
                and all(c.is_integral() for c in a.values()))
        if fast:
            lead = a0.num.lead
            a0i_el = lead.inverse()
            a_items = sorted((k, c.num) for k, c in a.items())
            b = {0: Poly.constant(self.ctx, a0i_el)}
        else:
            a0i = a0.inverse()
            a_items = sorted(a.items())
            b = {0: a0i}
        out = None
        if a_items:
            step = 0
            for k, _ in a_items:
                step = k if step == 0 else _gcd(step, k)
            for n in range(step, rel, step):
                s = None
                for k, ak in a_items:
                    if k > n:
                        break
                    bk = b.get(n - k)
                    if bk is None:
                        continue
                    t = ak * bk
                    s = t if s is None else s + t
                if s is None or s.is_zero():
                    continue
                if fast:
                    b[n] = -(s._scale(a0i_el))
                else:
                    b[n] = -(a0i * s)
        if fast:
            one = Poly.one(self.ctx)
            out = {e: RatFunc._reduced(c, one) for e, c in b.items()
                   if not c.is_zero()}
        else:
            out = {e: c for e, c in b.items() if not c.is_zero()}
        sc = None
        if self.support_class is not None:
            sc = (-self.support_class) % (self.ctx.q - 1)
        return USeries(self.ctx, {e - v: c for e, c in out.items()},
                       rel - v, val=-v, support_class=sc)

    def __pow__(self, n):
        """Integer power by binary powering; negative powers invert first."""
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            rel = max(self.prec - self._eff_val(), 1)
            sc = 0 if self.support_class is not None else None
            return USeries.one(self.ctx, rel, support_class=sc)
        acc = None
        base = self
        while True:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if not n:
                return acc
            base = base * base

    # -- substitution u -> u(Tz) ------------------------------------------
    def substitute_Tz(self, out_prec=None):
        """Pull back the expansion along z -> Tz.

        Substitutes u -> u(Tz) = u^q / (1 + T u^(q-1)); the output window is
        q * prec, or a caller-supplied smaller one.  Negative exponents use
        the exact identity u(Tz)^(-1) = (1 + T u^(q-1)) u^(-q).
        """
        ctx = self.ctx
        q = ctx.q
        full = q * self.prec
        if out_prec is None:
            out_prec = full
        elif out_prec > full:
            raise PrecisionExceeded(
                f"substitution from precision {self.prec} only supports "
                f"output precision {full}")
        if not self.coeffs:
            return USeries.zero(ctx, out_prec)
        T = Poly.T(ctx)
        parts = []
        pos = []
        for e, c in self.coeffs.items():
            if e < 0:
                # exact: c * (1 + T u^(q-1))^|e| * u^(qe)
                m = -e
                pw = _binomial_power(ctx, T, m)
                terms = {q * e + j: cf * c for j, cf in pw.items()
                         if q * e + j < out_prec}
                parts.append(USeries(ctx, terms, out_prec))
            elif e == 0:
                parts.append(USeries(ctx, {0: c}, out_prec))
            elif q * e < out_prec:
                pos.append((e, c))
        if pos:
            e0 = pos[0][0]
            rel0 = out_prec - q * e0
            base_terms = {0: RatFunc.constant(ctx, 1)}
            if q - 1 < rel0:
                base_terms[q - 1] = RatFunc(T)
            base = USeries(ctx, base_terms, rel0)
            binv = base.inverse()
            cur_e = e0
            cur = binv ** e0
            deltas = {}
            for e, c in pos:
                if e != cur_e:
                    d = e - cur_e
                    dp = deltas.get(d)
                    if dp is None:
                        dp = binv ** d
                        deltas[d] = dp
                    cur = (cur * dp).truncate(out_prec - q * e)
                    cur_e = e
                parts.append(cur.scale(c).shift(q * e).truncate(out_prec))
        acc = USeries.zero(ctx, out_prec)
        for part in parts:
            acc = acc + part
        if self.support_class is not None:
            # q = 1 mod (q-1), so classes are preserved
            acc = USeries(ctx, acc.coeffs, acc.prec, val=acc.val,
                          support_class=self.support_class)
        return acc

    # -- comparison, rendering, serialization ----------------------------
    def agrees_with(self, other, upto=None):
        """Coefficientwise equality on the common window (below ``upto``)."""
        self._check(other)
        bound = min(self.prec, other.prec)
        if upto is not None:
            bound = min(bound, upto)
        exps = set(self.coeffs) | set(other.coeffs)
        for e in exps:
            if e >= bound:
                continue
            if self.coeff(e) != other.coeff(e):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, USeries) and self.ctx.key == other.ctx.key
                and self.prec == other.prec and self.val == other.val
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx.key, self.val, self.prec,
                     tuple(self.coeffs.items())))

    def json_dict(self):
        """Stable serialization: terms sorted by exponent."""
        return {
            "val": self.val,
            "prec": self.prec,
            "terms": [{"exp": e, "coeff": str(c)}
                      for e, c in self.coeffs.items()],
        }

    def __str__(self):
        if not self.coeffs:
            return f"O(u^{self.prec})"
        body = " + ".join(f"({c})*u^{e}" for e, c in self.coeffs.items())
        return f"{body} + O(u^{self.prec})"

    def __repr__(self):
        return f"USeries({self}, q={self.ctx.q})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _binomial_power(ctx, T, m):
    """Coefficients of (1 + T u^(q-1))^m as {exponent: RatFunc}."""
    q = ctx.q
    out = {0: RatFunc.constant(ctx, 1)}
    cur = {0: Poly.one(ctx)}
    base = {0: Poly.one(ctx), q - 1: Poly.T(ctx)}
    n = m
    # binary powering over plain dicts; everything here is a polynomial
    def mul(x, y):
        z = {}
        for e1, c1 in x.items():
            for e2, c2 in y.items():
                e = e1 + e2
                v = c1 * c2
                z[e] = z.get(e, Poly.zero(ctx)) + v
        return {e: c for e, c in z.items() if not c.is_zero()}

    acc = None
    b = base
    while n:
        if n & 1:
            acc = b if acc is None else mul(acc, b)
        n >>= 1
        if n:
            b = mul(b, b)
    if acc is None:
        acc = cur
    return {e: RatFunc(c) for e, c in acc.items()}
