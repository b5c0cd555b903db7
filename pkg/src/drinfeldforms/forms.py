"""Named Drinfeld modular forms for Gamma_0(T), the spaces M_{k,l}, and a
small expression language over the generators.

Generators and their u-expansions:

* E        weight 2, type 1: the false Eisenstein series
           sum over monic a of a * u(az); not modular on its own.
* E_T      weight 2, type 1: E(z) - T E(Tz), modular of level T.
* g1       weight q-1, type 0: normalized Eisenstein series, built from the
           period-free identity g1 = 1 - (T^q - T) * sum over monic a of
           u(az)^(q-1).
* Delta_T  weight q-1, type 0: (g1(Tz) - g1(z)) / (T^q - T); vanishes only
           at the cusp at infinity.
* Delta_W  weight q-1, type 0: g1 + T^q Delta_T; vanishes only at the
           cusp 0.
* h        weight q+1, type 1: the cusp form -Delta_W * E_T.

Every space M_{k,l}(Gamma_0(T)) with k = 2l mod (q-1) has dimension
1 + r where r = (k - 2l)/(q - 1), with the monomial basis
Delta_W^(r-j) Delta_T^j E_T^l for j = 0..r.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass

from .carlitz import monic_series_sum
from .errors import (
    BadWeight,
    DivisionNotExact,
    EmptySpace,
    ExprError,
)
from .fieldpoly import FieldCtx, Poly, RatFunc, special_modulus
from .useries import USeries

GENERATOR_NAMES = ("Delta_W", "Delta_T", "E_T", "g1", "h", "E")


def generator_weight(ctx, name):
    if name in ("E", "E_T"):
        return 2
    if name == "h":
        return ctx.q + 1
    return ctx.q - 1


def generator_type(ctx, name):
    return 1 if name in ("E", "E_T", "h") else 0


def generator_valuation(ctx, name):
    if name in ("E", "E_T", "h"):
        return 1
    if name == "Delta_T":
        return ctx.q - 1
    return 0


def generator_is_modular(name):
    return name != "E"


# ---------------------------------------------------------------------------
# builders


def build_E(ctx, prec):
    """The false Eisenstein series, sum over monic a of a * u(az)."""
    if prec < 2:
        raise ValueError("prec must be at least 2")
    s = monic_series_sum(ctx, lambda a: a, 1, prec)
    return USeries(ctx, s.coeffs, prec, val=1,
                   support_class=1 % (ctx.q - 1))


def build_ET(ctx, prec):
    """E(z) - T E(Tz), the modular combination of level T."""
    if prec < ctx.q + 1:
        raise ValueError("prec must be at least q + 1")
    e = build_E(ctx, prec)
    return e - e.substitute_Tz(out_prec=prec) * Poly.T(ctx)


def build_g1(ctx, prec):
    """Weight q-1 Eisenstein series normalized to constant term 1."""
    if prec < ctx.q:
        raise ValueError("prec must be at least q")
    q = ctx.q
    s = monic_series_sum(ctx, lambda a: Poly.one(ctx), q - 1, prec)
    bracket = special_modulus(ctx, 1)
    out = USeries.one(ctx, prec, support_class=0) - s * bracket
    return out


def build_DeltaT(ctx, prec):
    """(g1(Tz) - g1(z)) / (T^q - T); the division must be exact."""
    if prec < ctx.q * (ctx.q - 1) + 1:
        raise ValueError("prec must be at least q(q-1) + 1")
    g1 = build_g1(ctx, prec)
    diff = g1.substitute_Tz(out_prec=prec) - g1
    bracket = RatFunc(special_modulus(ctx, 1))
    out = diff * bracket.inverse()
    if not out.integral:
        raise DivisionNotExact(
            "g1(Tz) - g1(z) is not divisible by T^q - T; "
            "this is an internal bug")
    return out


def build_DeltaT_from_monic_sum(ctx, prec):
    """Independent route: sum of u(az)^(q-1) over monic a not divisible
    by T."""
    T = Poly.T(ctx)
    q = ctx.q

    def weight(a):
        return Poly.zero(ctx) if (a % T).is_zero() else Poly.one(ctx)

    s = monic_series_sum(ctx, weight, q - 1, prec)
    return USeries(ctx, s.coeffs, prec, val=min(s.val, prec - 1),
                   support_class=0)


def build_DeltaW(ctx, prec):
    """g1 + T^q Delta_T, the form vanishing only at the cusp 0."""
    inner = max(prec, ctx.q * (ctx.q - 1) + 1)
    tq = Poly.T(ctx) ** ctx.q
    out = build_g1(ctx, inner) + build_DeltaT(ctx, inner) * tq
    return out.truncate(prec)


def build_h(ctx, prec):
    """The cusp form of weight q+1 and type 1, -Delta_W * E_T."""
    inner = max(prec, ctx.q * (ctx.q - 1) + 1)
    out = -(build_DeltaW(ctx, inner) * build_ET(ctx, inner))
    return out.truncate(prec)


_BUILDERS = {
    "E": build_E,
    "E_T": build_ET,
    "g1": build_g1,
    "Delta_T": build_DeltaT,
    "Delta_W": build_DeltaW,
    "h": build_h,
}

_MIN_PREC = {
    "E": lambda q: 2,
    "E_T": lambda q: q + 1,
    "g1": lambda q: q,
    "Delta_T": lambda q: q * (q - 1) + 1,
    "Delta_W": lambda q: q * (q - 1) + 1,
    "h": lambda q: (q - 1) ** 2 + 2,
}


class _FormCache:
    """Grow-only cache of generator series and their powers per field.

    Series are cached at the largest precision requested so far and served
    by truncation, which is observationally identical to a fresh build.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._gens = {}    # (ctx.key, name) -> USeries
        self._powers = {}  # (ctx.key, name, exp) -> USeries

    def generator(self, ctx, name, prec):
        if name not in _BUILDERS:
            raise ExprError(f"unknown generator {name!r}")
        prec = max(prec, _MIN_PREC[name](ctx.q))
        key = (ctx.key, name)
        cached = self._gens.get(key)
        if cached is None or cached.prec < prec:
            with self._lock:
                cached = self._gens.get(key)
                if cached is None or cached.prec < prec:
                    target = max(prec, int(1.5 * cached.prec) if cached
                                 else prec)
                    cached = _BUILDERS[name](ctx, target)
                    self._gens[key] = cached
                    stale = [k for k in self._powers
                             if k[0] == ctx.key and k[1] == name]
                    for k in stale:
                        del self._powers[k]
        return cached.truncate(prec)

    def power(self, ctx, name, exp, prec):
        """name^exp to absolute precision prec (negative exp allowed)."""
        v = generator_valuation(ctx, name)
        rel = prec - exp * v
        if rel < 1:
            rel = 1
        key = (ctx.key, name, exp)
        cached = self._powers.get(key)
        if cached is not None and cached.prec >= prec:
            return cached.truncate(prec)
        base = self.generator(ctx, name, v + rel)
        if exp == 0:
            out = USeries.one(ctx, rel, support_class=0)
        elif exp > 0:
            out = base ** exp
        else:
            out = base.inverse() ** (-exp)
        with self._lock:
            self._powers[key] = out
        return out.truncate(min(prec, out.prec))

    def clear(self):
        with self._lock:
            self._gens.clear()
            self._powers.clear()


_CACHE = _FormCache()


def get_form(ctx, name, prec):
    """Cached generator series at the requested precision."""
    return _CACHE.generator(ctx, name, prec)


def get_form_power(ctx, name, exp, prec):
    """Cached generator power at the requested absolute precision."""
    return _CACHE.power(ctx, name, exp, prec)


def clear_form_cache():
    _CACHE.clear()


# ---------------------------------------------------------------------------
# weight/type bookkeeping and monomial bases


@dataclass(frozen=True)
class FormSpec:
    """Weight k and type l (lifted to [0, q-2]) of a space
    M_{k,l}(Gamma_0(T))."""

    ctx: FieldCtx
    k: int
    l: int

    def __post_init__(self):
        q = self.ctx.q
        if not 0 <= self.l <= q - 2:
            raise BadWeight(f"type l = {self.l} outside [0, {q - 2}]")
        if self.k < 0:
            raise BadWeight(f"weight k = {self.k} is negative")

    @property
    def congruent(self):
        return (self.k - 2 * self.l) % (self.ctx.q - 1) == 0

    @property
    def r(self):
        if not self.congruent:
            raise BadWeight(
                f"k = {self.k} is not congruent to 2l = {2 * self.l} "
                f"mod {self.ctx.q - 1}")
        return (self.k - 2 * self.l) // (self.ctx.q - 1)

    @property
    def dim(self):
        if not self.congruent or self.r < 0:
            return 0
        return 1 + self.r


def space_dim(ctx, k, l):
    """dim M_{k,l}(Gamma_0(T)): 1 + (k-2l)/(q-1) when defined, else 0."""
    if not 0 <= l <= ctx.q - 2 or k < 0:
        return 0
    return FormSpec(ctx, k, l).dim


@dataclass(frozen=True)
class BasisMonomial:
    """Delta_W^e_W * Delta_T^e_T * E_T^e_E."""

    e_W: int
    e_T: int
    e_E: int

    def weight(self, ctx):
        return (ctx.q - 1) * (self.e_W + self.e_T) + 2 * self.e_E

    def type_lift(self, ctx):
        return self.e_E % (ctx.q - 1)

    def label(self):
        parts = []
        for name, e in (("Delta_W", self.e_W), ("Delta_T", self.e_T),
                        ("E_T", self.e_E)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def expr(self, ctx):
        out = FormExpr.one(ctx)
        for name, e in (("Delta_W", self.e_W), ("Delta_T", self.e_T),
                        ("E_T", self.e_E)):
            if e:
                out = out * FormExpr.generator(ctx, name) ** e
        return out


def basis(ctx, k, l):
    """Monomial basis Delta_W^(r-j) Delta_T^j E_T^l, j = 0..r."""
    spec = FormSpec(ctx, k, l)
    if spec.dim == 0:
        raise EmptySpace(f"M_{{{k},{l}}} is zero over F_{ctx.q}")
    r = spec.r
    return [BasisMonomial(r - j, j, l) for j in range(r + 1)]


def basis_series(ctx, k, l, prec):
    """u-expansions of the monomial basis of M_{k,l}, each to ``prec``."""
    return [expand(m.expr(ctx), prec) for m in basis(ctx, k, l)]


# ---------------------------------------------------------------------------
# form expressions


class FormExpr:
    """Formal sum of scaled monomials in the named generators.

    Terms are kept canonical: monomials sorted, like terms combined, zero
    coefficients dropped.  Exponents may be negative, so an expression can
    denote a Laurent quotient of modular forms.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        canon = {}
        for coef, mono in terms:
            mono = tuple(sorted((n, e) for n, e in mono if e != 0))
            for name, _ in mono:
                if name not in GENERATOR_NAMES:
                    raise ExprError(f"unknown generator {name!r}")
            prev = canon.get(mono)
            coef = coef if prev is None else prev + coef
            canon[mono] = coef
        self.ctx = ctx
        self.terms = tuple(sorted(
            ((c, m) for m, c in canon.items() if not c.is_zero()),
            key=lambda t: t[1]))

    # -- constructors --------------------------------------------------
    @classmethod
    def generator(cls, ctx, name):
        return cls(ctx, [(RatFunc.constant(ctx, 1), ((name, 1),))])

    @classmethod
    def scalar(cls, ctx, c):
        if isinstance(c, Poly):
            c = RatFunc(c)
        elif not isinstance(c, RatFunc):
            c = RatFunc.constant(ctx, c)
        return cls(ctx, [(c, ())])

    @classmethod
    def one(cls, ctx):
        return cls.scalar(ctx, 1)

    def is_zero(self):
        return not self.terms

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        return FormExpr(self.ctx, self.terms + other.terms)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __neg__(self):
        return FormExpr(self.ctx, [(-c, m) for c, m in self.terms])

    def __mul__(self, other):
        other = self._coerce(other)
        out = []
        for c1, m1 in self.terms:
            for c2, m2 in other.terms:
                powers = dict(m1)
                for name, e in m2:
                    powers[name] = powers.get(name, 0) + e
                out.append((c1 * c2, tuple(powers.items())))
        return FormExpr(self.ctx, out)

    def __pow__(self, n):
        if n == 0:
            return FormExpr.one(self.ctx)
        if n < 0:
            if len(self.terms) != 1:
                raise ExprError(
                    "negative powers need a single-monomial base")
            c, m = self.terms[0]
            inv = FormExpr(self.ctx,
                           [(c.inverse(), tuple((g, -e) for g, e in m))])
            return inv ** (-n)
        acc = self
        for _ in range(n - 1):
            acc = acc * self
        return acc

    def _coerce(self, other):
        if isinstance(other, FormExpr):
            if other.ctx.key != self.ctx.key:
                raise ExprError("expressions over different fields")
            return other
        return FormExpr.scalar(self.ctx, other)

    # -- weight and type --------------------------------------------------
    def weight(self):
        """Common weight of all terms; raises BadWeight when mixed."""
        if not self.terms:
            raise BadWeight("the zero expression has no weight")
        weights = {sum(e * generator_weight(self.ctx, n) for n, e in m)
                   for _, m in self.terms}
        if len(weights) != 1:
            raise BadWeight(f"mixed weights {sorted(weights)}")
        return weights.pop()

    def type_lift(self):
        """Common type mod (q-1), lifted to [0, q-2]."""
        if not self.terms:
            raise BadWeight("the zero expression has no type")
        m1 = self.ctx.q - 1
        types = {sum(e * generator_type(self.ctx, n) for n, e in m) % m1
                 for _, m in self.terms}
        if len(types) != 1:
            raise BadWeight(f"mixed types {sorted(types)}")
        return types.pop()

    def is_modular(self):
        """True when no term involves the non-modular generator E."""
        return all(n != "E" for _, m in self.terms for n, _ in m)

    def check_in_space(self, k, l):
        """Verify the expression denotes a form in M_{k,l}."""
        if not self.is_modular():
            raise BadWeight("expression involves the non-modular E")
        if self.weight() != k:
            raise BadWeight(
                f"expression has weight {self.weight()}, expected {k}")
        if self.type_lift() != l % (self.ctx.q - 1):
            raise BadWeight(
                f"expression has type {self.type_lift()}, expected "
                f"{l % (self.ctx.q - 1)}")

    # -- rendering --------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        order = {n: i for i, n in enumerate(GENERATOR_NAMES)}
        for c, mono in self.terms:
            factors = []
            if not c.is_one() or not mono:
                s = str(c)
                if " " in s or ("+" in s and not s.startswith("(")):
                    s = f"({s})"
                factors.append(s)
            for name, e in sorted(mono, key=lambda t: order[t[0]]):
                factors.append(name if e == 1 else f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"FormExpr({self})"

    # -- parsing ----------------------------------------------------------
    @classmethod
    def parse(cls, ctx, text):
        return _ExprParser(ctx, text).parse()


_EXPR_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>Delta_W|Delta_T|E_T|g1|h|E|T|w)"
    r"|(?P<op>[-+*^()/]))")


class _ExprParser:
    """Recursive descent over: expr := term (('+'|'-') term)*,
    term := factor ('*' factor)*, factor := atom ('^' int)?,
    atom := generator | scalar | '(' expr ')'."""

    def __init__(self, ctx, text):
        self.ctx = ctx
        self.text = text
        self.toks = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        toks = []
        pos = 0
        while pos < len(text):
            m = _EXPR_TOKEN_RE.match(text, pos)
            if m is None:
                rest = text[pos:].strip()
                if not rest:
                    break
                raise ExprError(f"cannot tokenize {rest[:16]!r}")
            if m.group("int") is not None:
                toks.append(("int", int(m.group("int"))))
            elif m.group("name") is not None:
                toks.append(("name", m.group("name")))
            else:
                toks.append((m.group("op"), None))
            pos = m.end()
        return toks

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None,
                                                                      None)

    def _take(self, kind=None):
        tok = self._peek()
        if tok[0] is None:
            raise ExprError("unexpected end of expression")
        if kind is not None and tok[0] != kind:
            raise ExprError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    def parse(self):
        out = self._expr()
        if self.pos != len(self.toks):
            raise ExprError(
                f"trailing input after position {self.pos} in "
                f"{self.text!r}")
        return out

    def _expr(self):
        negate = False
        if self._peek()[0] == "-":
            self._take()
            negate = True
        acc = self._term()
        if negate:
            acc = -acc
        while self._peek()[0] in ("+", "-"):
            op = self._take()[0]
            t = self._term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _term(self):
        acc = self._factor()
        while self._peek()[0] in ("*", "/"):
            op = self._take()[0]
            f = self._factor()
            acc = acc * (f if op == "*" else f ** -1)
        return acc

    def _factor(self):
        base = self._atom()
        if self._peek()[0] == "^":
            self._take()
            sign = 1
            if self._peek()[0] == "-":
                self._take()
                sign = -1
            tok = self._take("int")
            return base ** (sign * tok[1])
        return base

    def _atom(self):
        kind, value = self._peek()
        if kind == "(":
            self._take()
            inner = self._expr()
            self._take(")")
            return inner
        if kind == "int":
            self._take()
            return FormExpr.scalar(self.ctx, value)
        if kind == "name":
            self._take()
            if value == "T":
                return FormExpr.scalar(self.ctx, Poly.T(self.ctx))
            if value == "w":
                if self.ctx.r == 1:
                    raise ExprError("w is not defined over a prime field")
                coords = [0] * self.ctx.r
                coords[1] = 1
                return FormExpr.scalar(
                    self.ctx,
                    Poly.constant(self.ctx, self.ctx.element(coords)))
            return FormExpr.generator(self.ctx, value)
        raise ExprError(f"unexpected token {kind!r}")


# ---------------------------------------------------------------------------
# evaluation


def expand(expr, prec):
    """Evaluate a form expression as a u-series, exact below ``prec``.

    Input precisions are derived per term from the requested window plus
    one (q-1)-block of slack, so every reported coefficient is sound.
    """
    ctx = expr.ctx
    q = ctx.q
    out = USeries.zero(ctx, prec)
    for coef, mono in expr.terms:
        v = sum(e * generator_valuation(ctx, n) for n, e in mono)
        if v >= prec:
            continue
        rel = prec - v + (q - 1)
        part = None
        for name, e in mono:
            fs = get_form_power(ctx, name, e,
                                e * generator_valuation(ctx, name) + rel)
            part = fs if part is None else part * fs
        if part is None:
            part = USeries.one(ctx, prec, support_class=0)
        part = part.scale(coef)
        if part.prec > prec:
            part = part.truncate(prec)
        out = out + part
    return out.truncate(prec) if out.prec > prec else out
