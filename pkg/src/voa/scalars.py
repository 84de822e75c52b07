"""Exact scalars: rational functions in named formal parameters over Q.

A Scalar is a reduced fraction num/den of multivariate polynomials with
Fraction coefficients.  Canonical form: gcd(num, den) = 1 and the leading
coefficient of den (graded lexicographic order, variables sorted
alphabetically) is 1.  Scalars are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce


class DivisionByZero(ZeroDivisionError):
    pass


class PoleAtPoint(ArithmeticError):
    """Raised when a denominator vanishes under a parameter assignment."""


# A monomial is a tuple of (name, exponent) pairs, sorted by name,
# exponents > 0.  The empty tuple is the constant monomial.
Mono = tuple


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(a: Mono) -> int:
    return sum(e for _, e in a)


class Poly:
    """Multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict Mono -> Fraction, zero coefficients removed
        self.terms = terms or {}

    @staticmethod
    def const(c) -> "Poly":
        if not isinstance(c, Fraction):
            c = Fraction(c)
        return Poly({(): c} if c else {})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.terms[()]

    def variables(self):
        vs = set()
        for m in self.terms:
            for v, _ in m:
                vs.add(v)
        return sorted(vs)

    def __add__(self, other: "Poly") -> "Poly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly(t)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly()
        if other.is_constant:
            c = other.constant_value()
            return Poly({m: a * c for m, a in self.terms.items()})
        if self.is_constant:
            c = self.constant_value()
            return Poly({m: a * c for m, a in other.terms.items()})
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly(t)

    def scale(self, c: Fraction) -> "Poly":
        if not c:
            return Poly()
        return Poly({m: a * c for m, a in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of Poly")
        r = Poly.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(_mono_degree(m) for m in self.terms)

    def _grlex_key(self, mono: Mono, varlist) -> tuple:
        exps = dict(mono)
        return (_mono_degree(mono),) + tuple(exps.get(v, 0) for v in varlist)

    def leading(self):
        """Leading (mono, coeff) under grlex with alphabetical variables."""
        varlist = self.variables()
        m = max(self.terms, key=lambda mo: self._grlex_key(mo, varlist))
        return m, self.terms[m]

    def evaluate(self, point: dict) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for name, e in m:
                if name not in point:
                    raise KeyError(f"parameter {name!r} not assigned")
                v *= Fraction(point[name]) ** e
            total += v
        return total

    def substitute(self, point: dict) -> "Poly":
        """Partial substitution of some variables by rationals."""
        out = Poly()
        for m, c in self.terms.items():
            coef = c
            rest = []
            for name, e in m:
                if name in point:
                    coef *= Fraction(point[name]) ** e
                else:
                    rest.append((name, e))
            out = out + Poly({tuple(rest): coef}) if coef else out
        return out

    # --- univariate view (for gcd) -------------------------------------

    def _as_univariate(self, x: str) -> dict:
        """dict degree-in-x -> Poly in remaining variables."""
        out: dict = {}
        for m, c in self.terms.items():
            d = 0
            rest = []
            for v, e in m:
                if v == x:
                    d = e
                else:
                    rest.append((v, e))
            p = out.setdefault(d, Poly())
            t = p.terms.get(tuple(rest), 0) + c
            if t:
                p.terms[tuple(rest)] = t
            else:
                p.terms.pop(tuple(rest), None)
        return {d: p for d, p in out.items() if not p.is_zero}

    @staticmethod
    def _from_univariate(x: str, coeffs: dict) -> "Poly":
        t: dict = {}
        for d, p in coeffs.items():
            for m, c in p.terms.items():
                mono = _mono_mul(m, ((x, d),) if d else ())
                t[mono] = t.get(mono, 0) + c
        return Poly({m: c for m, c in t.items() if c})

    def __repr__(self):
        return f"Poly({render_poly(self)!r})"


def poly_derivative(p: Poly, name: str) -> Poly:
    """Formal partial derivative with respect to one variable."""
    out: dict = {}
    for mono, c in p.terms.items():
        exps = dict(mono)
        e = exps.get(name, 0)
        if not e:
            continue
        exps[name] = e - 1
        new = tuple(sorted((v, k) for v, k in exps.items() if k))
        out[new] = out.get(new, Fraction(0)) + c * e
    return Poly(out)


def _poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises ValueError if not divisible."""
    if b.is_zero:
        raise DivisionByZero("polynomial division by zero")
    if a.is_zero:
        return Poly()
    if b.is_constant:
        return a.scale(1 / b.constant_value())
    x = b.variables()[0]
    ua = a._as_univariate(x)
    ub = b._as_univariate(x)
    db = max(ub)
    lead_b = ub[db]
    q: dict = {}
    rem = dict(ua)
    while rem:
        da = max(rem)
        if da < db:
            raise ValueError("not divisible")
        c = _poly_divexact(rem[da], lead_b)
        q[da - db] = c
        for d, p in ub.items():
            nd = da - db + d
            cur = rem.get(nd, Poly()) - c * p
            if cur.is_zero:
                rem.pop(nd, None)
            else:
                rem[nd] = cur
    return Poly._from_univariate(x, q)


def _content(coeffs) -> Poly:
    return reduce(poly_gcd, coeffs, Poly())


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Multivariate gcd via content / primitive-part recursion.

    Result is normalized to leading coefficient 1 (grlex).
    """
    if a.is_zero and b.is_zero:
        return Poly()
    if a.is_zero:
        return _monic(b)
    if b.is_zero:
        return _monic(a)
    if a.is_constant or b.is_constant:
        return Poly.const(1)
    avars, bvars = a.variables(), b.variables()
    common = [v for v in avars if v in bvars]
    if not common:
        return Poly.const(1)
    x = common[0]
    ua, ub = a._as_univariate(x), b._as_univariate(x)
    ca, cb = _content(list(ua.values())), _content(list(ub.values()))
    pa = {d: _poly_divexact(p, ca) for d, p in ua.items()}
    pb = {d: _poly_divexact(p, cb) for d, p in ub.items()}
    cont = poly_gcd(ca, cb)
    # primitive PRS on pa, pb
    f, g = pa, pb
    if max(f) < max(g):
        f, g = g, f
    while True:
        r = _pseudo_rem(f, g, x)
        if not r:
            break
        cr = _content(list(r.values()))
        r = {d: _poly_divexact(p, cr) for d, p in r.items()}
        f, g = g, r
    gp = Poly._from_univariate(x, g)
    return _monic(cont * gp)


def _pseudo_rem(f: dict, g: dict, x: str) -> dict:
    df, dg = max(f), max(g)
    lg = g[dg]
    rem = dict(f)
    while rem and max(rem) >= dg:
        dr = max(rem)
        lr = rem[dr]
        new: dict = {}
        for d, p in rem.items():
            new[d] = p * lg
        for d, p in g.items():
            nd = dr - dg + d
            cur = new.get(nd, Poly()) - lr * p
            new[nd] = cur
        rem = {d: p for d, p in new.items() if not p.is_zero}
    return rem


def _monic(p: Poly) -> Poly:
    if p.is_zero:
        return p
    _, c = p.leading()
    return p.scale(1 / c)


class Scalar:
    """Reduced rational function in named parameters over Q."""

    __slots__ = ("num", "den", "_frac")

    def __init__(self, num: Poly, den: Poly = None, _canonical=False):
        if den is None:
            den = Poly.const(1)
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if not _canonical:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        # cached plain-rational value, or None when parameters appear
        if num.is_constant and den.is_constant:
            n = num.constant_value()
            d = den.constant_value()
            self._frac = n if d == 1 else n / d
        else:
            self._frac = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_fraction(c) -> "Scalar":
        return Scalar(Poly.const(c), Poly.const(1), _canonical=True)

    @staticmethod
    def param(name: str) -> "Scalar":
        return Scalar(Poly.var(name), Poly.const(1), _canonical=True)

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    # -- predicates -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_rational(self) -> bool:
        return self._frac is not None

    def as_fraction(self) -> Fraction:
        if self._frac is None:
            raise ValueError(f"scalar {self} is not a plain rational")
        return self._frac

    def parameters(self):
        return sorted(set(self.num.variables()) | set(self.den.variables()))

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.from_fraction(x)
        return NotImplemented

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._frac is not None and other._frac is not None:
            return Scalar.from_fraction(self._frac + other._frac)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other._frac == 1:
            return self
        if self._frac == 1:
            return other
        if self._frac is not None and other._frac is not None:
            return Scalar.from_fraction(self._frac * other._frac)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by zero Scalar")
        if self._frac is not None and other._frac is not None:
            return Scalar.from_fraction(self._frac / other._frac)
        return Scalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return Scalar._coerce(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return _ONE
        if n < 0:
            return _ONE / (self ** (-n))
        return Scalar(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.key(), self.den.key()))

    def evaluate(self, point) -> Fraction:
        """Substitute rational values for all parameters and reduce."""
        if isinstance(point, ParamPoint):
            point = point.values
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at {point}")
        return self.num.evaluate(point) / d

    def __repr__(self):
        return f"Scalar({render_scalar(self)})"

    def __str__(self):
        return render_scalar(self)


def _reduce(num: Poly, den: Poly):
    if num.is_zero:
        return Poly(), Poly.const(1)
    if den.is_constant:
        return num.scale(1 / den.constant_value()), Poly.const(1)
    g = poly_gcd(num, den)
    if not (g.is_constant and g.constant_value() == 1):
        num = _poly_divexact(num, g)
        den = _poly_divexact(den, g)
    _, lc = den.leading()
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


_ZERO = Scalar.from_fraction(0)
_ONE = Scalar.from_fraction(1)


class ParamPoint:
    """Assignment of exact rational values to parameter names."""

    __slots__ = ("values",)

    def __init__(self, **values):
        self.values = {k: Fraction(v) for k, v in values.items()}

    def __getitem__(self, name):
        return self.values[name]

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.values.items()))
        return f"ParamPoint({inner})"


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _render_frac(c: Fraction) -> str:
    return str(c)


def _render_mono(m: Mono) -> str:
    parts = []
    for v, e in m:
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    if p.is_zero:
        return "0"
    varlist = p.variables()
    monos = sorted(p.terms, key=lambda mo: p._grlex_key(mo, varlist), reverse=True)
    out = []
    for m in monos:
        c = p.terms[m]
        ms = _render_mono(m)
        if not ms:
            term = _render_frac(c)
        elif c == 1:
            term = ms
        elif c == -1:
            term = f"-{ms}"
        else:
            term = f"{_render_frac(c)}*{ms}"
        if out and not term.startswith("-"):
            out.append("+" + term)
        else:
            out.append(term)
    return "".join(out)


def render_scalar(s: Scalar) -> str:
    # Clear coefficient denominators into the displayed denominator so that
    # c * 1/2 prints as "c/2" rather than "1/2*c".
    from math import lcm, gcd
    denoms = [v.denominator for v in s.num.terms.values()]
    denoms += [v.denominator for v in s.den.terms.values()]
    scale = lcm(*denoms) if denoms else 1
    num, den = s.num.scale(scale), s.den.scale(scale)
    ints = [abs(v.numerator) for v in num.terms.values()]
    ints += [abs(v.numerator) for v in den.terms.values()]
    g = gcd(*ints) if ints else 1
    if g > 1:
        num, den = num.scale(Fraction(1, g)), den.scale(Fraction(1, g))
    ns = render_poly(num)
    if den.is_constant and den.constant_value() == 1:
        return ns
    ds = render_poly(den)
    if len(num.terms) > 1 or "/" in ns:
        ns = f"({ns})"
    if len(den.terms) > 1:
        ds = f"({ds})"
    return f"{ns}/{ds}"


# ---------------------------------------------------------------------------
# Parsing: integers, parameter names, + - * / ^ and parentheses.
# ---------------------------------------------------------------------------

class ScalarParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def parse_scalar(text: str) -> Scalar:
    p = _Parser(text)
    v = p.parse_expr()
    p.skip_ws()
    if p.pos != len(p.text):
        raise ScalarParseError("unexpected trailing input", p.pos)
    return v


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_expr(self) -> Scalar:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            v = -self.parse_term()
        else:
            v = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                v = v + self.parse_term()
            elif ch == "-":
                self.pos += 1
                v = v - self.parse_term()
            else:
                return v

    def parse_term(self) -> Scalar:
        v = self.parse_power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                v = v * self.parse_power()
            elif ch == "/":
                self.pos += 1
                v = v / self.parse_power()
            else:
                return v

    def parse_power(self) -> Scalar:
        v = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            neg = False
            if self.peek() == "-":
                neg = True
                self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                raise ScalarParseError("expected integer exponent", start)
            e = int(self.text[start:self.pos])
            v = v ** (-e if neg else e)
        return v

    def parse_atom(self) -> Scalar:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            v = self.parse_expr()
            if self.peek() != ")":
                raise ScalarParseError("expected ')'", self.pos)
            self.pos += 1
            return v
        if ch == "-":
            self.pos += 1
            return -self.parse_atom()
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Scalar.from_fraction(int(self.text[start:self.pos]))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                    self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            return Scalar.param(self.text[start:self.pos])
        raise ScalarParseError("expected number, name or '('", self.pos)


ZERO = _ZERO
ONE = _ONE
