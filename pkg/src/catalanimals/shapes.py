"""Tuples of skew shapes: reading order, attacking pairs, statistics, stretching.

Coordinates are French: a box is (col, row) with row 1 at the bottom.
The content of a box is col - row + shift, where `shift` lets a shape be
stored in positive coordinates after an arbitrary diagonal translation.
Boxes of a tuple are numbered 1..l in reading order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import NamedTuple


def _is_partition(p) -> bool:
    return all(x >= 0 for x in p) and all(p[i] >= p[i + 1] for i in range(len(p) - 1))


def _strip(p) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


@dataclass(frozen=True)
class SkewShape:
    outer: tuple
    inner: tuple = ()
    shift: int = 0

    def __post_init__(self):
        outer = tuple(int(x) for x in self.outer)
        inner = tuple(int(x) for x in self.inner)
        if not _is_partition(outer) or not _is_partition(inner):
            raise ValueError(f"not a partition: outer={outer} inner={inner}")
        if len(inner) > len(outer) and any(inner[len(outer):]):
            raise ValueError(f"inner {inner} not contained in outer {outer}")
        inner = inner[: len(outer)] + (0,) * (len(outer) - len(inner))
        if any(i > o for i, o in zip(inner, outer)):
            raise ValueError(f"inner {inner} not contained in outer {outer}")
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)

    @cached_property
    def cells(self) -> tuple:
        """Boxes (col, row) sorted by row then column."""
        return tuple(
            (c, r + 1)
            for r, (o, i) in enumerate(zip(self.outer, self.inner))
            for c in range(i + 1, o + 1)
        )

    @cached_property
    def cell_set(self) -> frozenset:
        return frozenset(self.cells)

    def size(self) -> int:
        return sum(self.outer) - sum(self.inner)

    def content(self, col: int, row: int) -> int:
        return col - row + self.shift

    @classmethod
    def from_cells(cls, cells, shift: int = 0):
        """Build a shape from an arbitrary set of (col,row) cells.

        Returns the shape plus the (dcol, drow) translation that was applied
        to bring the cells to positive coordinates; contents are preserved.
        """
        cells = set(cells)
        if not cells:
            return cls(()), (0, 0)
        dc = min(c for c, _ in cells) - 1
        dr = min(r for _, r in cells) - 1
        moved = {(c - dc, r - dr) for c, r in cells}
        top = max(r for _, r in moved)
        outer, inner = [], []
        for r in range(1, top + 1):
            cols = sorted(c for c, rr in moved if rr == r)
            if cols:
                if cols[-1] - cols[0] + 1 != len(cols):
                    raise ValueError("cells do not form a skew shape (gap in a row)")
                inner.append(cols[0] - 1)
                outer.append(cols[-1])
            else:
                inner.append(None)
                outer.append(None)
        for r in range(top):
            if outer[r] is None:
                v = inner[r - 1]
                inner[r] = outer[r] = v
        shape = cls(tuple(outer), tuple(inner), shift + dc - dr)
        if shape.cell_set != frozenset(moved):
            raise ValueError("cells do not form a skew shape")
        return shape, (dc, dr)

    def to_json(self) -> dict:
        d = {"outer": list(_strip(self.outer)), "inner": list(_strip(self.inner))}
        if self.shift:
            d["shift"] = self.shift
        return d


class BoxRef(NamedTuple):
    shape_index: int
    col: int
    row: int


@dataclass(frozen=True)
class TupleStats:
    gamma: tuple
    n_prime: int
    magic_p: int
    attack_A: int


@dataclass(frozen=True)
class StretchSpec:
    m: int
    offsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        if self.m < 1:
            raise ValueError("stretch factor m must be positive")
        o = self.offsets
        if any(o[i] > o[i + 1] for i in range(len(o) - 1)) or (o and o[-1] >= self.m + o[0]):
            raise ValueError(f"offsets {o} violate o1 <= ... <= ok < m + o1")


@dataclass(frozen=True)
class SkewTuple:
    shapes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "shapes", tuple(self.shapes))

    @classmethod
    def of(cls, *specs) -> "SkewTuple":
        """Convenience constructor: each spec is outer or (outer, inner)."""
        shapes = []
        for s in specs:
            if isinstance(s, SkewShape):
                shapes.append(s)
            elif s and isinstance(s[0], (tuple, list)):
                shapes.append(SkewShape(tuple(s[0]), tuple(s[1]) if len(s) > 1 else ()))
            else:
                shapes.append(SkewShape(tuple(s)))
        return cls(tuple(shapes))

    @property
    def k(self) -> int:
        return len(self.shapes)

    def __len__(self) -> int:
        return len(self.boxes)

    @cached_property
    def boxes(self) -> tuple:
        """Boxes in reading order: (content, shape index), then southwest to northeast."""
        out = []
        for s, sh in enumerate(self.shapes, start=1):
            for c, r in sh.cells:
                out.append((sh.content(c, r), s, c, BoxRef(s, c, r)))
        out.sort()
        return tuple(b for *_, b in out)

    @cached_property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.boxes, start=1)}

    def content(self, b: BoxRef) -> int:
        return self.shapes[b.shape_index - 1].content(b.col, b.row)

    @cached_property
    def adjusted(self) -> tuple:
        """(content, shape_index) per box, in reading order; lexicographic order is c-tilde order."""
        return tuple((self.content(b), b.shape_index) for b in self.boxes)

    @cached_property
    def diagonals(self) -> tuple:
        """Diagonals in reading order, each a tuple of 1-based box indices."""
        groups: dict = {}
        for i, key in enumerate(self.adjusted, start=1):
            groups.setdefault(key, []).append(i)
        return tuple(tuple(groups[k]) for k in sorted(groups))

    @cached_property
    def diagonal_of(self) -> dict:
        return {i: d for d in self.diagonals for i in d}

    @cached_property
    def attacking(self) -> frozenset:
        adj = self.adjusted
        l = len(adj)
        return frozenset(
            (i + 1, j + 1) for i in range(l) for j in range(i + 1, l) if _attacks(adj[i], adj[j])
        )

    def is_row_start(self, b: BoxRef) -> bool:
        return (b.col - 1, b.row) not in self.shapes[b.shape_index - 1].cell_set

    def is_row_end(self, b: BoxRef) -> bool:
        return (b.col + 1, b.row) not in self.shapes[b.shape_index - 1].cell_set

    def to_json(self) -> dict:
        return {"shapes": [s.to_json() for s in self.shapes]}

    @classmethod
    def from_json(cls, data) -> "SkewTuple":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "shapes" not in data:
            raise ValueError('tuple JSON must be an object with a "shapes" list')
        shapes = []
        for s in data["shapes"]:
            if "outer" not in s:
                raise ValueError('each shape needs an "outer" partition')
            shapes.append(SkewShape(tuple(s["outer"]), tuple(s.get("inner", ())), int(s.get("shift", 0))))
        return cls(tuple(shapes))

    def subtuple(self, indices) -> "SkewTuple":
        """The tuple formed by the given boxes (1-based), keeping every shape slot and all contents."""
        chosen = [self.boxes[i - 1] for i in indices]
        shapes = []
        for s, sh in enumerate(self.shapes, start=1):
            cells = [(b.col, b.row) for b in chosen if b.shape_index == s]
            shapes.append(SkewShape.from_cells(cells, sh.shift)[0])
        return SkewTuple(tuple(shapes))

    def __str__(self):
        parts = []
        for sh in self.shapes:
            o = "".join(map(str, _strip(sh.outer))) if all(x < 10 for x in sh.outer) else str(list(_strip(sh.outer)))
            i = _strip(sh.inner)
            parts.append(f"({o})/({''.join(map(str, i))})" if i else f"({o})")
        return "(" + ",".join(parts) + ")"


def reading_order(t: SkewTuple) -> list:
    return list(t.boxes)


def _attacks(ca, cb) -> bool:
    """0 < c~(b) - c~(a) < 1 for adjusted contents given as (content, shape)."""
    (c1, s1), (c2, s2) = ca, cb
    return (c1 == c2 and s1 < s2) or (c2 == c1 + 1 and s1 > s2)


def attacking_pairs(t: SkewTuple) -> frozenset:
    return t.attacking


def stats(t: SkewTuple) -> TupleStats:
    gamma = tuple(len(d) for d in t.diagonals)
    p = sum(
        len(d) for d in t.diagonals if not any(t.is_row_start(t.boxes[i - 1]) for i in d)
    )
    return TupleStats(gamma, sum(comb(g, 2) for g in gamma), p, len(attacking_pairs(t)))


def b_vector(m: int, n: int) -> tuple:
    def ceil_div(a, b):
        return -((-a) // b)

    return tuple(ceil_div(i * n, m) - ceil_div((i - 1) * n, m) for i in range(1, m + 1))


def stretch(t: SkewTuple, s: StretchSpec):
    """m-stretching of t; returns (stretched tuple, map box index -> set of stretched indices)."""
    if len(s.offsets) != t.k:
        raise ValueError(f"need {t.k} offsets, got {len(s.offsets)}")
    m = s.m
    new_shapes, origin = [], []
    for r, (sh, o) in enumerate(zip(t.shapes, s.offsets), start=1):
        cells, src = [], {}
        for col, row in sh.cells:
            c = sh.content(col, row)
            for k in range(m):
                cc = o + m * c - k
                cell = (col, col - cc)
                cells.append(cell)
                src[cell] = BoxRef(r, col, row)
        shape, (dc, dr) = SkewShape.from_cells(cells, 0)
        new_shapes.append(shape)
        origin.append({(c - dc, rr - dr): b for (c, rr), b in src.items()})
    big = SkewTuple(tuple(new_shapes))
    smap: dict = {i: set() for i in range(1, len(t) + 1)}
    for j, b in enumerate(big.boxes, start=1):
        smap[t.index[origin[b.shape_index - 1][(b.col, b.row)]]].add(j)
    return big, {i: frozenset(v) for i, v in smap.items()}


def a_values(t: SkewTuple, s: StretchSpec) -> dict:
    out = {}
    for i, j in attacking_pairs(t):
        r, u = t.boxes[i - 1].shape_index, t.boxes[j - 1].shape_index
        o = s.offsets
        out[(i, j)] = s.m + o[r - 1] - o[u - 1] if r < u else 1 + o[r - 1] - o[u - 1]
    return out


def precedes(a: BoxRef, b: BoxRef) -> bool:
    return a.shape_index == b.shape_index and a.col <= b.col and a.row <= b.row


def is_lower_ideal(t: SkewTuple, indices) -> bool:
    chosen = set(indices)
    for i in chosen:
        b = t.boxes[i - 1]
        cells = t.shapes[b.shape_index - 1].cell_set
        for nb in ((b.col - 1, b.row), (b.col, b.row - 1)):
            if nb in cells and t.index[BoxRef(b.shape_index, *nb)] not in chosen:
                return False
    return True


def lower_ideals(t: SkewTuple) -> list:
    """All lower order ideals, as frozensets of 1-based indices."""
    l = len(t)
    # rows before columns within a shape is a linear extension of the order
    order = sorted(range(1, l + 1), key=lambda i: (t.boxes[i - 1].shape_index, t.boxes[i - 1].row, t.boxes[i - 1].col))
    rank = {v: k for k, v in enumerate(order)}
    preds = []
    for v in order:
        b = t.boxes[v - 1]
        cells = t.shapes[b.shape_index - 1].cell_set
        preds.append([
            rank[t.index[BoxRef(b.shape_index, *nb)]]
            for nb in ((b.col - 1, b.row), (b.col, b.row - 1))
            if nb in cells
        ])
    res = []

    def grow(k, cur):
        if k == l:
            res.append(frozenset(order[j] for j in cur))
            return
        grow(k + 1, cur)
        if all(p in cur for p in preds[k]):
            cur.add(k)
            grow(k + 1, cur)
            cur.discard(k)

    grow(0, set())
    return res
