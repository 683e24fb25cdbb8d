"""Independent nabla oracle built on the modified Macdonald basis.

H~_mu is generated from fillings of the French diagram of mu weighted by
q^inv t^maj; standard fillings give a fundamental quasisymmetric expansion
which is turned into Schur coefficients.  nabla acts diagonally with
eigenvalue t^n(mu) q^n(mu').
"""

from __future__ import annotations

import itertools
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .qtcoeff import ZERO, QtPoly, QtRational, format_rational, parse_qt
from .symfunc import SymFunc, conjugate, partitions, plethys_scale

DEGREE_CAP = 8
CACHE_ENV = "CATALANIMALS_CACHE"


class DegreeCapExceeded(RuntimeError):
    pass


def n_stat(mu) -> int:
    return sum(i * x for i, x in enumerate(mu))


def eigenvalue(mu) -> QtPoly:
    return QtPoly.mono(n_stat(conjugate(tuple(mu))), n_stat(mu))


@dataclass(frozen=True)
class MacdonaldBasis:
    degree: int
    table: dict  # mu -> SymFunc in the Schur basis


def _diagram_data(mu):
    """Cells in reading order plus the inv/maj bookkeeping for fillings."""
    cells = [(r, c) for r in range(len(mu), 0, -1) for c in range(1, mu[r - 1] + 1)]
    pos = {cell: k for k, cell in enumerate(cells)}
    conj = conjugate(mu)
    attack = []
    for a, (r1, c1) in enumerate(cells):
        for b in range(a + 1, len(cells)):
            r2, c2 = cells[b]
            if r1 == r2 or (r1 == r2 + 1 and c1 > c2):
                attack.append((a, b))
    descents = []  # (cell, cell below, leg + 1, arm)
    for (r, c), k in pos.items():
        if r > 1:
            descents.append((k, pos[(r - 1, c)], conj[c - 1] - r + 1, mu[r - 1] - c))
    return len(cells), attack, descents


def _fundamental_expansion(mu) -> dict:
    """{descent bitmask: {(inv, maj): count}} over standard fillings."""
    n, attack, descents = _diagram_data(mu)
    out: dict = {}
    for word in itertools.permutations(range(1, n + 1)):
        inv = sum(1 for a, b in attack if word[a] > word[b])
        maj = 0
        for u, v, legp1, arm in descents:
            if word[u] > word[v]:
                maj += legp1
                inv -= arm
        where = [0] * (n + 1)
        for k, x in enumerate(word):
            where[x] = k
        mask = 0
        for i in range(1, n):
            if where[i + 1] < where[i]:
                mask |= 1 << (i - 1)
        bucket = out.setdefault(mask, {})
        bucket[(inv, maj)] = bucket.get((inv, maj), 0) + 1
    return out


def _compute_htilde(mu) -> SymFunc:
    n = sum(mu)
    fund = _fundamental_expansion(mu)
    coeffs = {}
    for lam in partitions(n):
        allowed = 0
        s = 0
        for part in lam[:-1]:
            s += part
            allowed |= 1 << (s - 1)
        acc: dict = {}
        for mask, poly in fund.items():
            if mask & ~allowed == 0:
                for key, v in poly.items():
                    acc[key] = acc.get(key, 0) + v
        coeffs[lam] = QtRational.poly(QtPoly(acc))
    return SymFunc("m", coeffs).convert("s")


_lock = threading.Lock()
_bases: dict = {}


def _cache_file(d: int):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"htilde_{d}.json"


def _load(d: int):
    path = _cache_file(d)
    if path is None or not path.exists():
        return None
    data = json.loads(path.read_text())
    return {
        tuple(entry["mu"]): SymFunc("s", {tuple(t["partition"]): parse_qt(t["coeff"]) for t in entry["terms"]})
        for entry in data
    }


def _store(d: int, table: dict):
    path = _cache_file(d)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    data = [
        {"mu": list(mu), "terms": [{"partition": list(k), "coeff": format_rational(v)} for k, v in f.coeffs.items()]}
        for mu, f in table.items()
    ]
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data))
    tmp.replace(path)


def modified_macdonald(d: int, cap: int = DEGREE_CAP) -> MacdonaldBasis:
    if d > cap:
        raise DegreeCapExceeded(f"degree {d} exceeds the Macdonald basis cap {cap}")
    with _lock:
        if d in _bases:
            return _bases[d]
        table = _load(d)
        if table is None:
            table = {mu: _compute_htilde(mu) for mu in partitions(d)}
            _store(d, table)
        basis = MacdonaldBasis(d, table)
        _bases[d] = basis
        return basis


_ONE_MINUS_Q = QtPoly.const(1) - QtPoly.mono(1, 0)
_twisted: dict = {}


def _twisted_table(d: int, cap: int):
    """H~_mu[X(1-q)], which is upper triangular in dominance order."""
    if d not in _twisted:
        basis = modified_macdonald(d, cap)
        _twisted[d] = {mu: plethys_scale(f, _ONE_MINUS_Q).coeffs for mu, f in basis.table.items()}
    return _twisted[d]


def expand_in_htilde(f: SymFunc, cap: int = DEGREE_CAP) -> dict:
    """Coefficients c_mu with f = sum c_mu H~_mu, for f homogeneous."""
    degs = f.degrees()
    if not degs:
        return {}
    if len(degs) != 1:
        raise ValueError("expand_in_htilde expects a homogeneous symmetric function")
    d = degs.pop()
    if d == 0:
        return {(): f.convert("s").coeffs[()]}
    table = _twisted_table(d, cap)
    rest = dict(plethys_scale(f.convert("s"), _ONE_MINUS_Q).coeffs)
    out = {}
    for mu in reversed(partitions(d)):  # lex ascending extends dominance
        lead = rest.get(mu, ZERO)
        if lead.is_zero():
            continue
        c = lead / table[mu][mu]
        out[mu] = c
        for lam, v in table[mu].items():
            rest[lam] = rest.get(lam, ZERO) - c * v
    if any(not v.is_zero() for v in rest.values()):
        raise ArithmeticError("triangular solve left a nonzero residue")
    return out


def nabla_pow(f: SymFunc, m: int = 1, cap: int = DEGREE_CAP) -> SymFunc:
    """nabla^m f in the Schur basis; m may be negative."""
    result = SymFunc("s")
    for d in sorted(f.degrees()):
        comp = f.component(d)
        if d == 0:
            result = result + comp.convert("s")
            continue
        table = modified_macdonald(d, cap).table
        for mu, c in expand_in_htilde(comp, cap).items():
            ev = QtRational.poly(eigenvalue(mu)) ** m
            result = result + table[mu].scale(c * ev)
    return result
