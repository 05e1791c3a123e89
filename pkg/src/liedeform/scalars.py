"""Exact scalar tower: rationals, multivariate polynomials, rational functions.

Rationals are plain :class:`fractions.Fraction`.  Polynomials live in a
:class:`PolyRing` whose generators are deformation parameters ``t1, t2, ...``
followed by ``x1, x2, ...``; every exponent vector of a polynomial has one
slot per generator of its ring.

Canonical printing lists terms by increasing total degree and, inside one
degree, by decreasing exponent vector, so ``1 + t1`` and ``t1*t4 + t3*t5``
print the way they are usually written.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple

from .errors import DenominatorVanishes, DimensionMismatch, MissingAssignment, ParseError

_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")
_RATIONAL_RE = re.compile(r"^\s*([-−]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (decimal integers, optional leading minus)."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational literals must be strings, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    value = Fraction(int(num), int(den) if den else 1)
    return -value if sign else value


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ParamName(NamedTuple):
    symbol: str
    index: int

    def __str__(self):
        return f"{self.symbol}{self.index}"

    def pretty(self):
        return self.symbol + str(self.index).translate(_SUPERSCRIPTS)

    @property
    def sort_key(self):
        return (0 if self.symbol == "t" else 1, self.symbol, self.index)


def param(name) -> ParamName:
    """``param("t3")`` -> ``ParamName("t", 3)``."""
    if isinstance(name, ParamName):
        return name
    m = re.fullmatch(r"([tx])(\d+)", str(name).strip())
    if not m or int(m.group(2)) < 1:
        raise ParseError(f"bad parameter name {name!r}")
    return ParamName(m.group(1), int(m.group(2)))


def t_params(n) -> tuple[ParamName, ...]:
    return tuple(ParamName("t", i) for i in range(1, n + 1))


def x_params(n) -> tuple[ParamName, ...]:
    return tuple(ParamName("x", i) for i in range(1, n + 1))


class PolyRing:
    """Polynomial ring over Q in an ordered tuple of parameters."""

    __slots__ = ("gens", "_index")

    def __init__(self, gens: Iterable = ()):
        names = sorted({param(g) for g in gens}, key=lambda p: p.sort_key)
        self.gens = tuple(names)
        self._index = {g: i for i, g in enumerate(self.gens)}

    @classmethod
    def of(cls, *names):
        return cls(param(n) for n in names)

    @property
    def nvars(self):
        return len(self.gens)

    def index(self, name) -> int:
        try:
            return self._index[param(name)]
        except KeyError:
            raise MissingAssignment(f"{name} is not a generator of {self}") from None

    def __contains__(self, name):
        return param(name) in self._index

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "QQ[" + ", ".join(map(str, self.gens)) + "]"

    def union(self, other: PolyRing) -> PolyRing:
        return PolyRing(self.gens + other.gens)

    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    def one(self) -> MultiPoly:
        return self.const(1)

    def const(self, c) -> MultiPoly:
        return MultiPoly(self, {(0,) * self.nvars: Fraction(c)})

    def gen(self, name) -> MultiPoly:
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return MultiPoly(self, {tuple(exps): Fraction(1)})

    def gens_dict(self) -> dict[str, MultiPoly]:
        return {str(g): self.gen(g) for g in self.gens}

    def coerce(self, value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            if value.ring == self:
                return value
            return value.embed(self)
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")


def _term_key(exps):
    # ascending total degree, then descending exponent vector
    return (sum(exps), tuple(-e for e in exps))


def _grlex(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial with Fraction coefficients; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object] | None = None):
        self.ring = ring
        clean = {}
        n = ring.nvars
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise DimensionMismatch(f"exponent vector {exps} does not match {ring}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # -- coercion helpers -------------------------------------------------
    def _other(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise DimensionMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def embed(self, ring: PolyRing) -> MultiPoly:
        """Re-express in a ring containing all generators used by ``self``."""
        if ring == self.ring:
            return self
        slots = []
        for i, g in enumerate(self.ring.gens):
            if g in ring:
                slots.append((i, ring.index(g)))
        out = {}
        used = set()
        for exps, c in self.terms.items():
            new = [0] * ring.nvars
            for i, e in enumerate(exps):
                if e:
                    used.add(i)
            for i, j in slots:
                new[j] = exps[i]
            out[tuple(new)] = c
        missing = [self.ring.gens[i] for i in used if self.ring.gens[i] not in ring]
        if missing:
            raise DimensionMismatch(f"{missing} not in target ring {ring}")
        return MultiPoly._raw(ring, out)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw(self.ring, {})
            return MultiPoly._raw(self.ring, {e: c * other for e, c in self.terms.items()})
        o = self._other(other)
        if o is None:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return MultiPoly._raw(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DenominatorVanishes("division of a polynomial by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, MultiPoly):
            return RatFun(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(self.ring.const(other), self)
        return NotImplemented

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFun):
            return other == self
        o = self._other(other) if isinstance(other, (MultiPoly, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure --------------------------------------------------------
    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> tuple[ParamName, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.ring.gens[i] for i in sorted(used))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: _term_key(ec[0]))

    def leading(self):
        """Leading (exponents, coefficient) in graded lex order."""
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        num, den = 0, 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> MultiPoly:
        """Integer coefficients with gcd 1; the first printed term is positive."""
        if not self.terms:
            return self
        c = self.content()
        first = self.sorted_terms()[0][1]
        if first < 0:
            c = -c
        return MultiPoly._raw(self.ring, {e: v / c for e, v in self.terms.items()})

    def monomial_gcd(self) -> tuple:
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, exps, negative=False) -> MultiPoly:
        s = -1 if negative else 1
        return MultiPoly._raw(
            self.ring,
            {tuple(a + s * b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def truncate(self, degree: int) -> MultiPoly:
        return MultiPoly._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) <= degree})

    def homogeneous_part(self, degree: int) -> MultiPoly:
        return MultiPoly._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def exact_div(self, other) -> MultiPoly | None:
        """Quotient if ``other`` divides ``self`` exactly, else ``None``."""
        o = self._other(other)
        if not o:
            raise DenominatorVanishes("exact division by the zero polynomial")
        le, lc = o.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem, key=_grlex)
            diff = tuple(a - b for a, b in zip(e, le))
            if min(diff, default=0) < 0:
                return None
            q = rem[e] / lc
            quot[diff] = q
            for oe, oc in o.terms.items():
                k = tuple(a + b for a, b in zip(oe, diff))
                v = rem.get(k, 0) - q * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MultiPoly._raw(self.ring, quot)

    def reduce_by(self, divisors) -> MultiPoly:
        """Remainder of multivariate division by ``divisors`` (graded lex).

        Not a Groebner reduction: a zero remainder proves ideal membership,
        a nonzero one proves nothing.
        """
        divs = [(d.leading(), d) for d in divisors if d]
        rem = dict(self.terms)
        out: dict = {}
        while rem:
            e = max(rem, key=_grlex)
            c = rem[e]
            for (le, lc), d in divs:
                diff = tuple(a - b for a, b in zip(e, le))
                if min(diff, default=0) >= 0:
                    q = c / lc
                    for de, dc in d.terms.items():
                        k = tuple(a + b for a, b in zip(de, diff))
                        v = rem.get(k, 0) - q * dc
                        if v:
                            rem[k] = v
                        else:
                            rem.pop(k, None)
                    break
            else:
                out[e] = c
                del rem[e]
        return MultiPoly._raw(self.ring, out)

    def evaluate(self, point: Mapping) -> Fraction:
        values = [None] * self.ring.nvars
        for k, v in point.items():
            if param(k) in self.ring:
                values[self.ring.index(k)] = Fraction(v)
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if values[i] is None:
                        raise MissingAssignment(f"no value for {self.ring.gens[i]}")
                    term *= values[i] ** k
            total += term
        return total

    def univariate_coeffs(self, var_index: int) -> list[Fraction]:
        """Dense coefficient list (low to high) if only ``var_index`` occurs."""
        deg = max((e[var_index] for e in self.terms), default=0)
        out = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            out[e[var_index]] = c
        return out

    # -- printing / serialization ----------------------------------------
    def _render(self, pretty):
        if not self.terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = []
            for g, k in zip(self.ring.gens, e):
                if not k:
                    continue
                if pretty:
                    mono.append(g.pretty() if k == 1 else f"({g.pretty()}){str(k).translate(_SUPERSCRIPTS)}")
                else:
                    mono.append(str(g) if k == 1 else f"{g}^{k}")
            sign = "-" if c < 0 else "+"
            a = abs(c)
            sep = "" if pretty else "*"
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = sep.join(mono) if not pretty else "".join(mono)
            else:
                coef = format_rational(a)
                body = coef + sep + (sep.join(mono) if not pretty else "".join(mono))
            if idx == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __str__(self):
        return self._render(False)

    def pretty(self):
        return self._render(True)

    def __repr__(self):
        return f"MultiPoly({self})"

    def to_json(self):
        out = []
        for e, c in self.sorted_terms():
            out.append(
                {
                    "coeff": format_rational(c),
                    "exponents": {str(g): k for g, k in zip(self.ring.gens, e) if k},
                }
            )
        return out

    @classmethod
    def from_json(cls, data, ring: PolyRing) -> MultiPoly:
        terms: dict = {}
        for item in data:
            exps = [0] * ring.nvars
            for name, k in item.get("exponents", {}).items():
                exps[ring.index(name)] = int(k)
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + parse_rational(item["coeff"])
        return cls(ring, terms)


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_truncate(p: MultiPoly, degree: int) -> MultiPoly:
    return p.truncate(degree)


def _univariate_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            q = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] -= q * c
            trim(r)
        a, b = b, r
    lc = a[-1]
    return [c / lc for c in a]


class RatFun:
    """Quotient of two polynomials in one ring, reduced as far as cheaply possible.

    Reduction divides out common monomial factors, exact polynomial
    divisibility in either direction, and polynomial gcds when both parts
    involve a single common parameter.  The denominator is made monic in
    graded lex order.  Full multivariate gcds are not computed, so equality
    is decided by cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, ring: PolyRing | None = None):
        if ring is None:
            for v in (num, den):
                if isinstance(v, (MultiPoly, RatFun)):
                    ring = v.ring
                    break
            else:
                ring = PolyRing()
        if isinstance(num, RatFun) or isinstance(den, RatFun):
            n = num if isinstance(num, RatFun) else RatFun(num, ring=ring)
            d = RatFun(1, ring=ring) if den is None else (den if isinstance(den, RatFun) else RatFun(den, ring=ring))
            num, den = n.num * d.den, n.den * d.num
        num = ring.coerce(num)
        den = ring.one() if den is None else ring.coerce(den)
        if not den:
            raise DenominatorVanishes("rational function with zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @property
    def ring(self):
        return self.num.ring

    def _other(self, other):
        if isinstance(other, RatFun):
            if other.ring != self.ring:
                raise DimensionMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (MultiPoly, int, Fraction)):
            return RatFun._raw(self.ring.coerce(other), self.ring.one())
        return None

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num * (1 / self.den.constant_term())

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFun._raw(self.ring.zero(), self.ring.one())
            return RatFun._raw(self.num * other, self.den)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DenominatorVanishes("division by a zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun(self.den**-n, self.num**-n)
        return RatFun._raw(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def __bool__(self):
        return bool(self.num)

    def evaluate(self, point: Mapping) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {dict(point)}")
        return self.num.evaluate(point) / d

    def truncate(self, degree):
        if not self.is_polynomial():
            raise ValueError("truncation is defined for polynomials only")
        return self.as_poly().truncate(degree)

    def _render(self, pretty):
        f = (lambda p: p.pretty()) if pretty else str
        if self.den.is_constant() and self.den.constant_term() == 1:
            return f(self.num)
        n = f(self.num)
        d = f(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or not pretty and not self.den.is_constant():
            d = f"({d})" if len(self.den.terms) > 1 else d
        return f"{n}/{d}"

    def __str__(self):
        return self._render(False)

    def pretty(self):
        return self._render(True)

    def __repr__(self):
        return f"RatFun({self})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _reduce(num: MultiPoly, den: MultiPoly):
    ring = num.ring
    if not num:
        return ring.zero(), ring.one()
    g = tuple(min(a, b) for a, b in zip(num.monomial_gcd(), den.monomial_gcd()))
    if any(g):
        num, den = num.shift(g, negative=True), den.shift(g, negative=True)
    if not den.is_constant():
        q = num.exact_div(den)
        if q is not None:
            num, den = q, ring.one()
        else:
            q = den.exact_div(num)
            if q is not None:
                num, den = ring.one(), q
            else:
                vars_n, vars_d = num.variables(), den.variables()
                if len(vars_d) == 1 and set(vars_n) <= set(vars_d):
                    i = ring.index(vars_d[0])
                    h = _univariate_gcd(num.univariate_coeffs(i), den.univariate_coeffs(i))
                    if len(h) > 1:
                        unit = [0] * ring.nvars
                        terms = {}
                        for k, c in enumerate(h):
                            unit[i] = k
                            terms[tuple(unit)] = c
                        hp = MultiPoly(ring, terms)
                        num, den = num.exact_div(hp), den.exact_div(hp)
    lc = den.leading()[1]
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return num, den


def to_ratfun(value, ring: PolyRing) -> RatFun:
    if isinstance(value, RatFun):
        if value.ring != ring:
            return RatFun(value.num.embed(ring), value.den.embed(ring))
        return value
    return RatFun(ring.coerce(value), ring=ring)


def poly_substitute(p: MultiPoly, assignment: Mapping, ring: PolyRing | None = None, partial=False) -> RatFun:
    """Substitute rational functions for the parameters of ``p``.

    Every parameter occurring in ``p`` must be assigned unless ``partial`` is
    set, in which case unassigned parameters map to themselves (and must then
    exist in the target ring).
    """
    assignment = {param(k): v for k, v in assignment.items()}
    if ring is None:
        for v in assignment.values():
            if isinstance(v, (MultiPoly, RatFun)):
                ring = v.ring
                break
        else:
            ring = p.ring if partial else PolyRing()
    values = []
    all_poly = True
    for g in p.ring.gens:
        if g in assignment:
            v = to_ratfun(assignment[g], ring)
        elif partial:
            v = RatFun(ring.gen(g), ring=ring)
        else:
            v = None
        if v is not None and not v.den.is_constant():
            all_poly = False
        values.append(v)
    for g in p.variables():
        if values[p.ring.index(g)] is None:
            raise MissingAssignment(f"no value assigned to {g}")
    if all_poly:
        polys = [None if v is None else v.as_poly() for v in values]
        total = ring.zero()
        for e, c in p.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * polys[i] ** k
            total = total + term
        return RatFun(total, ring=ring)
    # common denominator: multiply each term through by the needed powers
    maxpow = [max((e[i] for e in p.terms), default=0) for i in range(p.ring.nvars)]
    den = ring.one()
    for i, k in enumerate(maxpow):
        if k and values[i] is not None:
            den = den * values[i].den ** k
    num = ring.zero()
    for e, c in p.terms.items():
        term = ring.const(c)
        for i, k in enumerate(maxpow):
            if values[i] is None or not k:
                continue
            term = term * values[i].num ** e[i] * values[i].den ** (k - e[i])
        num = num + term
    return RatFun(num, den)
