"""Symmetric functions over Q(q,t).

A `SymFunc` is a finite map partition -> QtRational tagged with one of the
bases m, e, h, p, s.  Base changes route through the Schur basis using
character values and Kostka numbers, memoized per degree.
"""

from __future__ import annotations

import itertools
import json
import re
import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .qtcoeff import ONE, ZERO, QtPoly, QtRational, format_rational, parse_qt, qt

BASES = ("m", "e", "h", "p", "s")
_ALIASES = {
    "monomial": "m", "elementary": "e", "homogeneous": "h",
    "powersum": "p", "schur": "s",
}


# --- partitions -------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple:
    """Partitions of n in reverse lexicographic order (largest first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def conjugate(lam) -> tuple:
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > j) for j in range(lam[0]))


def z_lambda(lam) -> int:
    out = 1
    for part, group in itertools.groupby(lam):
        k = len(list(group))
        out *= part ** k * factorial(k)
    return out


def dominates(lam, mu) -> bool:
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def _normalize_partition(p) -> tuple:
    p = tuple(int(x) for x in p)
    if any(x < 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"not a partition: {p}")
    while p and p[-1] == 0:
        p = p[:-1]
    return p


@lru_cache(maxsize=None)
def character(lam: tuple, rho: tuple) -> int:
    """Irreducible S_n character value chi^lam(rho) by rim-hook removal."""
    if not rho:
        return 1 if not lam else 0
    r, rest = rho[0], rho[1:]
    ell = len(lam)
    beta = [lam[i] + ell - 1 - i for i in range(ell)]
    occupied = set(beta)
    total = 0
    for idx, x in enumerate(beta):
        y = x - r
        if y < 0 or y in occupied:
            continue
        sign = (-1) ** sum(1 for b in beta if y < b < x)
        new = sorted((b if b != x else y for b in beta), reverse=True)
        mu = tuple(new[i] - (ell - 1 - i) for i in range(ell))
        total += sign * character(_normalize_partition(mu), rest)
    return total


@lru_cache(maxsize=None)
def kostka(lam: tuple, mu: tuple) -> int:
    """Number of SSYT of shape lam and content mu (mu any composition)."""
    if sum(lam) != sum(mu):
        return 0
    if not mu:
        return 1
    k, rest = mu[-1], mu[:-1]
    total = 0
    # remove a horizontal strip of size k from lam
    def strips(i, remaining, cur):
        nonlocal total
        if i == len(lam):
            if remaining == 0:
                total += kostka(_normalize_partition(cur), rest)
            return
        lower = lam[i + 1] if i + 1 < len(lam) else 0
        for take in range(0, min(remaining, lam[i] - lower) + 1):
            strips(i + 1, remaining - take, cur + (lam[i] - take,))

    strips(0, k, ())
    return total


def _inverse(mat):
    """Exact inverse of a square matrix of Fractions (Gauss-Jordan)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


_lock = threading.RLock()
_matrices: dict = {}


def _to_schur_matrix(basis: str, n: int):
    """Dict mu -> {lam: coeff} giving b_mu in the Schur basis."""
    parts = partitions(n)
    if basis == "s":
        return {mu: {mu: Fraction(1)} for mu in parts}
    if basis == "p":
        return {rho: {lam: Fraction(character(lam, rho)) for lam in parts if character(lam, rho)} for rho in parts}
    if basis == "h":
        return {mu: {lam: Fraction(kostka(lam, mu)) for lam in parts if kostka(lam, mu)} for mu in parts}
    if basis == "e":
        return {mu: {lam: Fraction(kostka(conjugate(lam), mu)) for lam in parts if kostka(conjugate(lam), mu)} for mu in parts}
    if basis == "m":
        # s = K m, so m = K^{-1} s
        kmat = [[kostka(lam, mu) for mu in parts] for lam in parts]
        inv = _inverse(kmat)
        return {
            mu: {lam: inv[j][i] for i, lam in enumerate(parts) if inv[j][i]}
            for j, mu in enumerate(parts)
        }
    raise ValueError(basis)


def _from_schur_matrix(basis: str, n: int):
    parts = partitions(n)
    if basis == "s":
        return {mu: {mu: Fraction(1)} for mu in parts}
    if basis == "p":
        return {lam: {rho: Fraction(character(lam, rho), z_lambda(rho)) for rho in parts if character(lam, rho)} for lam in parts}
    if basis == "m":
        return {lam: {mu: Fraction(kostka(lam, mu)) for mu in parts if kostka(lam, mu)} for lam in parts}
    fwd = _to_schur_matrix(basis, n)
    mat = [[fwd[mu].get(lam, 0) for mu in parts] for lam in parts]
    inv = _inverse(mat)
    return {
        lam: {mu: inv[j][i] for j, mu in enumerate(parts) if inv[j][i]}
        for i, lam in enumerate(parts)
    }


def transition(src: str, dst: str, n: int):
    """Matrix as dict: src partition -> {dst partition: Fraction}."""
    key = (src, dst, n)
    mat = _matrices.get(key)
    if mat is not None:
        return mat
    with _lock:
        if key in _matrices:
            return _matrices[key]
        if src == dst:
            mat = {mu: {mu: Fraction(1)} for mu in partitions(n)}
        elif dst == "s":
            mat = _to_schur_matrix(src, n)
        elif src == "s":
            mat = _from_schur_matrix(dst, n)
        else:
            a = transition(src, "s", n)
            b = transition("s", dst, n)
            mat = {}
            for mu, row in a.items():
                acc: dict = {}
                for lam, c in row.items():
                    for nu, d in b[lam].items():
                        acc[nu] = acc.get(nu, 0) + c * d
                mat[mu] = {k: v for k, v in acc.items() if v}
        _matrices[key] = mat
        return mat


# --- the SymFunc type -------------------------------------------------------

def _scale(x: QtRational, c: Fraction) -> QtRational:
    if c.denominator == 1:
        return x * int(c)
    return x * QtRational.from_fraction(c)


class SymFunc:
    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str = "s", coeffs=None):
        basis = _ALIASES.get(basis, basis)
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        out = {}
        for lam, c in (coeffs or {}).items():
            c = qt(c)
            if not c.is_zero():
                out[_normalize_partition(lam)] = c
        self.coeffs = out

    @classmethod
    def single(cls, basis: str, lam, c=1) -> "SymFunc":
        return cls(basis, {tuple(lam): c})

    @classmethod
    def one(cls) -> "SymFunc":
        return cls("s", {(): 1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set:
        return {sum(lam) for lam in self.coeffs}

    def component(self, d: int) -> "SymFunc":
        return SymFunc(self.basis, {k: v for k, v in self.coeffs.items() if sum(k) == d})

    def convert(self, target: str) -> "SymFunc":
        target = _ALIASES.get(target, target)
        if target == self.basis:
            return self
        acc: dict = {}
        for lam, c in self.coeffs.items():
            for mu, f in transition(self.basis, target, sum(lam))[lam].items():
                acc[mu] = acc.get(mu, ZERO) + _scale(c, f)
        return SymFunc(target, acc)

    def __add__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        other = other.convert(self.basis)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return SymFunc(self.basis, out)

    def __neg__(self):
        return SymFunc(self.basis, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymFunc":
        c = qt(c)
        return SymFunc(self.basis, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            a, b = self.convert("p"), other.convert("p")
            out: dict = {}
            for l1, c1 in a.coeffs.items():
                for l2, c2 in b.coeffs.items():
                    key = tuple(sorted(l1 + l2, reverse=True))
                    out[key] = out.get(key, ZERO) + c1 * c2
            return SymFunc("p", out).convert(self.basis)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self.convert("s").coeffs == other.convert("s").coeffs

    def __hash__(self):
        return hash(frozenset(self.convert("s").coeffs.items()))

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"SymFunc({self.basis!r}, {to_text(self)!r})"


def convert(f: SymFunc, target: str) -> SymFunc:
    return f.convert(target)


def omega(f: SymFunc) -> SymFunc:
    s = f.convert("s")
    return SymFunc("s", {conjugate(lam): c for lam, c in s.coeffs.items()}).convert(f.basis)


def _alphabet(a) -> QtPoly:
    if isinstance(a, QtPoly):
        return a
    r = qt(a)
    if not r.is_polynomial():
        raise ValueError("an alphabet must be a signed sum of q,t monomials")
    return r.num


def plethys(f: SymFunc, alphabet) -> QtRational:
    """f[A] for a signed alphabet A of q,t monomials, via p_k -> A(q^k, t^k)."""
    a = _alphabet(alphabet)
    total = ZERO
    powers: dict = {}
    for rho, c in f.convert("p").coeffs.items():
        term = QtPoly.const(1)
        for k in rho:
            if k not in powers:
                powers[k] = a.subs_power(k)
            term = term * powers[k]
        total = total + c * term
    return total


def plethys_scale(f: SymFunc, alphabet) -> SymFunc:
    """f[X * A], i.e. p_k -> A(q^k,t^k) p_k; result in the basis of f."""
    a = _alphabet(alphabet)
    out = {}
    for rho, c in f.convert("p").coeffs.items():
        term = QtPoly.const(1)
        for k in rho:
            term = term * a.subs_power(k)
        out[rho] = c * term
    return SymFunc("p", out).convert(f.basis)


def coproduct_component(f: SymFunc, k: int) -> dict:
    """Bidegree (k, deg-k) part of f[X+Y] as {(mu, nu): coeff} in Schur x Schur."""
    pp: dict = {}
    for rho, c in f.convert("p").coeffs.items():
        d = sum(rho)
        if not 0 <= k <= d:
            continue
        n = len(rho)
        for mask in range(1 << n):
            left = tuple(rho[i] for i in range(n) if mask >> i & 1)
            if sum(left) != k:
                continue
            right = tuple(rho[i] for i in range(n) if not mask >> i & 1)
            key = (left, right)
            pp[key] = pp.get(key, ZERO) + c
    out: dict = {}
    for (left, right), c in pp.items():
        tl = transition("p", "s", sum(left))[left]
        tr = transition("p", "s", sum(right))[right]
        for mu, a in tl.items():
            for nu, b in tr.items():
                key = (mu, nu)
                out[key] = out.get(key, ZERO) + _scale(c, a * b)
    return {key: v for key, v in out.items() if not v.is_zero()}


def expand(f: SymFunc, nvars: int) -> dict:
    """Polynomial in nvars variables: {exponent tuple: coeff}."""
    out = {}
    for mu, c in f.convert("m").coeffs.items():
        if len(mu) > nvars:
            continue
        padded = mu + (0,) * (nvars - len(mu))
        for perm in set(itertools.permutations(padded)):
            out[perm] = c
    return out


def from_polynomial(values: dict, nvars: int, degree: int) -> SymFunc:
    """Read a symmetric function off its expansion in nvars >= degree variables."""
    if nvars < degree:
        raise ValueError("need at least as many variables as the degree")
    coeffs = {}
    counts: dict = {}
    for exps, c in values.items():
        c = qt(c)
        if c.is_zero():
            continue
        if len(exps) != nvars or sum(exps) != degree:
            raise ValueError(f"monomial {exps} is not of degree {degree} in {nvars} variables")
        lam = tuple(sorted(exps, reverse=True))
        base = values.get(lam)
        if base is None or qt(base) != c:
            raise ValueError(f"input is not symmetric: {exps} vs {lam}")
        counts[lam] = counts.get(lam, 0) + 1
        coeffs[_normalize_partition(lam)] = c
    for lam, cnt in counts.items():
        expected = factorial(nvars)
        for _, g in itertools.groupby(lam):
            expected //= factorial(len(list(g)))
        if cnt != expected:
            raise ValueError(f"input is not symmetric: orbit of {lam} incomplete")
    return SymFunc("m", coeffs)


# --- text and JSON ----------------------------------------------------------

def _coeff_text(c: QtRational) -> str:
    s = format_rational(c)
    if " + " in s or "/" in s:
        return f"({s})"
    return s


def to_text(f: SymFunc) -> str:
    if f.is_zero():
        return "0"
    terms = []
    for lam in sorted(f.coeffs, key=lambda p: (sum(p), p), reverse=True):
        c = f.coeffs[lam]
        if not lam:
            terms.append(_coeff_text(c))
            continue
        basis = f"{f.basis}[{','.join(map(str, lam))}]"
        terms.append(basis if c == ONE else f"{_coeff_text(c)}*{basis}")
    return " + ".join(terms)


_TERM = re.compile(r"^(?:(.*)\*)?\s*([mehps])\[([\d,\s]*)\]$")


def _split_terms(text: str):
    depth, start, out = 0, 0, []
    sign = 1
    prev = ""
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in "+-" and depth == 0 and prev not in ("", "^", "*", "/", "+", "-"):
            out.append((sign, text[start:i].strip()))
            sign = 1 if ch == "+" else -1
            start = i + 1
        if not ch.isspace():
            prev = ch
    out.append((sign, text[start:].strip()))
    return out


def from_text(text: str) -> SymFunc:
    """Parse `s[3,1] + (q+t)*s[2,2]` style expansions."""
    text = text.strip()
    if text == "0":
        return SymFunc("s")
    basis = None
    coeffs: dict = {}
    for sign, term in _split_terms(text):
        m = _TERM.match(term)
        if m:
            ctext, b, parts = m.groups()
            lam = tuple(int(x) for x in parts.split(",") if x.strip())
            if basis is None:
                basis = b
            elif b != basis:
                raise ValueError("mixed bases in one expansion")
            c = parse_qt(ctext) if ctext else ONE
        else:
            lam, c = (), parse_qt(term)
        key = _normalize_partition(lam)
        coeffs[key] = coeffs.get(key, ZERO) + (c if sign > 0 else -c)
    return SymFunc(basis or "s", coeffs)


def to_json(f: SymFunc) -> dict:
    return {
        "basis": f.basis,
        "terms": [
            {"partition": list(lam), "coeff": format_rational(c)}
            for lam, c in sorted(f.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        ],
    }


def from_json(data) -> SymFunc:
    if isinstance(data, str):
        data = json.loads(data)
    return SymFunc(data["basis"], {tuple(t["partition"]): parse_qt(t["coeff"]) for t in data["terms"]})
