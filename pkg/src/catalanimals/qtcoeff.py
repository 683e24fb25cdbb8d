"""Exact arithmetic in Z[q^±1, t^±1] and its fraction field Q(q,t).

`QtPoly` is a Laurent polynomial stored as a dict (q-exp, t-exp) -> int.
`QtRational` is a reduced fraction whose denominator is an honest
polynomial with no monomial factor and positive leading coefficient under
graded-lex order; any Laurent shift lives in the numerator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint

_CTX = flint.fmpz_mpoly_ctx.get(("q", "t"), "deglex")


def _gradlex(mono):
    return (mono[0] + mono[1], mono[0])


class QtPoly:
    """Laurent polynomial in q, t with integer coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {k: v for k, v in terms.items() if v}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "QtPoly":
        return cls({(0, 0): c}) if c else cls()

    @classmethod
    def mono(cls, a: int, b: int, c: int = 1) -> "QtPoly":
        return cls({(a, b): c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0, 0): 1}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0, 0), 0)

    def min_exponents(self):
        return (min(a for a, _ in self.terms), min(b for _, b in self.terms))

    def leading(self):
        mono = max(self.terms, key=_gradlex)
        return mono, self.terms[mono]

    def shift(self, a: int, b: int) -> "QtPoly":
        if a == 0 and b == 0:
            return self
        return QtPoly({(x + a, y + b): c for (x, y), c in self.terms.items()})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def scale_div(self, c: int) -> "QtPoly":
        return QtPoly({k: v // c for k, v in self.terms.items()})

    def subs_power(self, k: int) -> "QtPoly":
        """A(q^k, t^k): the k-th Adams operation on a signed alphabet."""
        return QtPoly({(a * k, b * k): c for (a, b), c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, QtPoly):
            if isinstance(other, int):
                other = QtPoly.const(other)
            else:
                return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return QtPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QtPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = QtPoly.const(other)
        if not isinstance(other, QtPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QtPoly({k: v * other for k, v in self.terms.items()})
        if not isinstance(other, QtPoly):
            return NotImplemented
        if len(other.terms) > len(self.terms):
            self, other = other, self
        out: dict = {}
        for (a2, b2), c2 in other.terms.items():
            for (a1, b1), c1 in self.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return QtPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_monomial() or abs(self.leading()[1]) != 1:
                raise ValueError("negative power of a non-unit Laurent polynomial")
            (a, b), c = self.leading()
            return QtPoly({(a * e, b * e): c ** (-e)})
        result = QtPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = QtPoly.const(other)
        if isinstance(other, QtPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def eval_at(self, q0, t0) -> Fraction:
        q0, t0 = Fraction(q0), Fraction(t0)
        total = Fraction(0)
        for (a, b), c in self.terms.items():
            total += c * q0 ** a * t0 ** b
        return total

    def to_flint(self):
        return _CTX.from_dict(self.terms)

    @classmethod
    def from_flint(cls, p) -> "QtPoly":
        return cls({(int(k[0]), int(k[1])): int(v) for k, v in p.to_dict().items()})

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"QtPoly({format_poly(self)!r})"


def _mono_text(a: int, b: int) -> str:
    parts = []
    for name, e in (("q", a), ("t", b)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: QtPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for mono in sorted(p.terms, key=_gradlex):
        c = p.terms[mono]
        m = _mono_text(*mono)
        coeff = f"({c})" if c < 0 else str(c)
        if not m:
            out.append(coeff)
        elif c == 1:
            out.append(m)
        else:
            out.append(f"{coeff}*{m}")
    return " + ".join(out)


class QtRational:
    """Element of Q(q,t) kept in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, _canonical=False):
        if not isinstance(num, QtPoly):
            num = _coerce_poly(num)
        if not isinstance(den, QtPoly):
            den = _coerce_poly(den)
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_fraction(cls, x) -> "QtRational":
        x = Fraction(x)
        return cls(QtPoly.const(x.numerator), QtPoly.const(x.denominator), _canonical=True)

    @classmethod
    def poly(cls, p: QtPoly) -> "QtRational":
        return cls(p, _ONE_POLY, _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def numer_denom_poly(self):
        """Numerator and denominator as honest polynomials (no negative exponents)."""
        if self.num.is_zero():
            return self.num, self.den
        a, b = self.num.min_exponents()
        sa, sb = -min(a, 0), -min(b, 0)
        return self.num.shift(sa, sb), self.den.shift(sa, sb)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return QtRational(self.num + other.num, _ONE_POLY, _canonical=True)
        if self.den == other.den:
            return QtRational(self.num + other.num, self.den)
        return QtRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QtRational(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return QtRational(self.num * other.num, _ONE_POLY, _canonical=True)
        return QtRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(q,t)")
        return QtRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, e: int):
        if e < 0:
            return QtRational(1) / (self ** (-e))
        if self.den.is_one():
            return QtRational(self.num ** e, _ONE_POLY, _canonical=True)
        return QtRational(self.num ** e, self.den ** e, _canonical=True)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def eval_at(self, q0, t0) -> Fraction:
        return eval_at(self, q0, t0)

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"QtRational({format_rational(self)!r})"


_ONE_POLY = QtPoly.const(1)


def _coerce_poly(x) -> QtPoly:
    if isinstance(x, QtPoly):
        return x
    if isinstance(x, int):
        return QtPoly.const(x)
    raise TypeError(f"cannot interpret {x!r} as a polynomial in q,t")


def _coerce(x):
    if isinstance(x, QtRational):
        return x
    if isinstance(x, QtPoly):
        return QtRational.poly(x)
    if isinstance(x, int):
        return QtRational.poly(QtPoly.const(x))
    if isinstance(x, Fraction):
        return QtRational.from_fraction(x)
    return None


def _canonicalize(num: QtPoly, den: QtPoly):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return QtPoly(), _ONE_POLY
    a, b = den.min_exponents()
    den = den.shift(-a, -b)
    num = num.shift(-a, -b)
    if den.is_constant():
        c = den.constant_value()
        g = gcd(num.content(), c)
        if c < 0:
            g = -g
        return num.scale_div(g), QtPoly.const(c // g)
    na, nb = num.min_exponents()
    fn = num.shift(-na, -nb).to_flint()
    fd = den.to_flint()
    g = fn.gcd(fd)
    if not (g.is_one() if hasattr(g, "is_one") else g == 1):
        fn = fn / g
        fd = fd / g
    num = QtPoly.from_flint(fn).shift(na, nb)
    den = QtPoly.from_flint(fd)
    if den.leading()[1] < 0:
        num, den = -num, -den
    return num, den


def qt(x) -> QtRational:
    """Coerce an int, Fraction, QtPoly, QtRational or string to QtRational."""
    if isinstance(x, str):
        return parse_qt(x)
    y = _coerce(x)
    if y is None:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(q,t)")
    return y


ZERO = QtRational(0)
ONE = QtRational(1)
Q = QtRational.poly(QtPoly.mono(1, 0))
T = QtRational.poly(QtPoly.mono(0, 1))


def arith(a, b, op: str) -> QtRational:
    a, b = qt(a), qt(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=None)
def constants():
    """(M, Mhat) with M = (1-q)(1-t) and Mhat = (1 - 1/(qt)) M."""
    m = (ONE - Q) * (ONE - T)
    return m, (ONE - ONE / (Q * T)) * m


def eval_at(x, q0, t0) -> Fraction:
    x = qt(x)
    d = x.den.eval_at(q0, t0)
    if d == 0:
        raise ZeroDivisionError(f"denominator {format_poly(x.den)} vanishes at q={q0}, t={t0}")
    if Fraction(q0) == 0 and any(a < 0 for a, _ in x.num.terms):
        raise ZeroDivisionError("negative power of q evaluated at q=0")
    if Fraction(t0) == 0 and any(b < 0 for _, b in x.num.terms):
        raise ZeroDivisionError("negative power of t evaluated at t=0")
    return x.num.eval_at(q0, t0) / d


def format_rational(x: QtRational) -> str:
    if x.den.is_one():
        return format_poly(x.num)
    return f"({format_poly(x.num)})/({format_poly(x.den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([qt])|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif var is not None:
            out.append(("var", var))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ValueError(f"parse error near token {self.i}: {tok}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            e = self.take("int")[1]
            return base ** (sign * e)
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return QtRational.poly(QtPoly.const(val))
        if kind == "var":
            self.take()
            return Q if val == "q" else T
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise ValueError(f"parse error near token {self.i}: {(kind, val)}")


def parse_qt(text: str) -> QtRational:
    """Parse the textual grammar produced by `format_rational`."""
    p = _Parser(_tokenize(text))
    val = p.expr()
    if p.i != len(p.toks):
        raise ValueError(f"trailing input in {text!r}")
    return val
