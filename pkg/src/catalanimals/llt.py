"""LLT polynomials by tableau enumeration, plus super tableaux and the 1-q value."""

from __future__ import annotations

from typing import NamedTuple

from .qtcoeff import ONE, QtPoly, QtRational
from .shapes import BoxRef, SkewTuple, attacking_pairs, is_lower_ideal
from .symfunc import SymFunc, from_polynomial, omega, partitions, plethys


class SuperLetter(NamedTuple):
    """Ordered so that every positive letter precedes every negative one."""

    negative: bool
    value: int

    def __str__(self):
        return f"{self.value}'" if self.negative else str(self.value)


def _fill_plan(t: SkewTuple):
    """Fill order (row by row inside each shape) with west/south neighbour positions."""
    order = sorted(t.boxes, key=lambda b: (b.shape_index, b.row, b.col))
    pos = {b: k for k, b in enumerate(order)}
    plan = []
    for b in order:
        cells = t.shapes[b.shape_index - 1].cell_set
        west = pos[BoxRef(b.shape_index, b.col - 1, b.row)] if (b.col - 1, b.row) in cells else None
        south = pos[BoxRef(b.shape_index, b.col, b.row - 1)] if (b.col, b.row - 1) in cells else None
        plan.append((west, south))
    pairs = [(pos[t.boxes[i - 1]], pos[t.boxes[j - 1]]) for i, j in attacking_pairs(t)]
    return plan, pairs


def _tableaux(plan, letters, counts=None):
    """Yield semistandard fillings (lists) over the ordered letter list."""
    n = len(plan)
    fill = [None] * n
    rank = {v: k for k, v in enumerate(letters)}

    def rec(k):
        if k == n:
            yield fill
            return
        west, south = plan[k]
        lo = 0
        if west is not None:
            lo = max(lo, rank[fill[west]])
        if south is not None:
            lo = max(lo, rank[fill[south]] + 1)
        for r in range(lo, len(letters)):
            if counts is not None:
                if counts[r] == 0:
                    continue
                counts[r] -= 1
            fill[k] = letters[r]
            yield from rec(k + 1)
            if counts is not None:
                counts[r] += 1

    yield from rec(0)


def _inv(fill, pairs) -> int:
    return sum(1 for a, b in pairs if fill[a] > fill[b])


def llt(t: SkewTuple, nvars: int | None = None, full: bool = False) -> SymFunc:
    """The LLT polynomial of t in the Schur basis.

    By default only tableaux whose content is a partition are enumerated,
    which already determines the monomial expansion.  With ``full=True``
    every tableau with entries <= nvars is enumerated and the symmetric
    function is read off the complete polynomial (symmetry is checked).
    """
    d = len(t)
    if nvars is None:
        nvars = d
    if nvars < d:
        raise ValueError(f"need at least {d} variables, got {nvars}")
    if d == 0:
        return SymFunc.one()
    plan, pairs = _fill_plan(t)
    if full:
        poly: dict = {}
        for fill in _tableaux(plan, list(range(1, nvars + 1))):
            exps = [0] * nvars
            for v in fill:
                exps[v - 1] += 1
            key = tuple(exps)
            poly.setdefault(key, {})
            e = _inv(fill, pairs)
            poly[key][(e, 0)] = poly[key].get((e, 0), 0) + 1
        values = {k: QtRational.poly(QtPoly(v)) for k, v in poly.items()}
        return from_polynomial(values, nvars, d).convert("s")
    coeffs = {}
    for mu in partitions(d):
        acc: dict = {}
        for fill in _tableaux(plan, list(range(1, len(mu) + 1)), list(mu)):
            e = _inv(fill, pairs)
            acc[(e, 0)] = acc.get((e, 0), 0) + 1
        if acc:
            coeffs[mu] = QtRational.poly(QtPoly(acc))
    return SymFunc("m", coeffs).convert("s")


def coproduct_statistic(t: SkewTuple, ideal) -> int:
    """Attacking pairs (a, b) with a outside the lower ideal and b inside it."""
    ideal = set(ideal)
    if not is_lower_ideal(t, ideal):
        raise ValueError(f"{sorted(ideal)} is not a lower order ideal")
    return sum(1 for a, b in attacking_pairs(t) if a not in ideal and b in ideal)


def super_llt(t: SkewTuple, nx: int, ny: int) -> dict:
    """Sum of q^inv x^T+ y^T- over super tableaux; keys (x exponents, y exponents)."""
    plan, pairs = _fill_plan(t)
    letters = [SuperLetter(False, v) for v in range(1, nx + 1)] + [SuperLetter(True, v) for v in range(1, ny + 1)]
    out: dict = {}
    n = len(plan)
    fill = [None] * n

    def rec(k):
        if k == n:
            xs, ys = [0] * nx, [0] * ny
            for v in fill:
                (ys if v.negative else xs)[v.value - 1] += 1
            inv = sum(1 for a, b in pairs if fill[a] > fill[b] or (fill[a] == fill[b] and fill[a].negative))
            key = (tuple(xs), tuple(ys))
            out.setdefault(key, {})
            out[key][(inv, 0)] = out[key].get((inv, 0), 0) + 1
            return
        west, south = plan[k]
        for v in letters:
            if west is not None:
                w = fill[west]
                if v < w or (v == w and v.negative):
                    continue
            if south is not None:
                s = fill[south]
                if v < s or (v == s and not v.negative):
                    continue
            fill[k] = v
            rec(k + 1)

    rec(0)
    return {k: QtPoly(v) for k, v in out.items()}


def llt_at_one_minus_q(t: SkewTuple) -> QtRational:
    """(omega G_t)[1-q]."""
    if len(t) == 0:
        return ONE
    return plethys(omega(llt(t)), QtPoly.const(1) - QtPoly.mono(1, 0))


def is_ribbon_tuple(t: SkewTuple) -> bool:
    """Every component is a disjoint union of ribbons (no 2x2 block)."""
    for sh in t.shapes:
        cells = sh.cell_set
        if any((c + 1, r) in cells and (c, r + 1) in cells and (c + 1, r + 1) in cells for c, r in cells):
            return False
    return True
