"""Shared fixtures for the test suite: small tuple families, hypothesis
strategies and independent oracles (written without the library's fast paths)."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from catalanimals.catalanimal import Catalanimal, positive_roots, r_I, restrict
from catalanimals.llt import coproduct_statistic, llt, super_llt
from catalanimals.qtcoeff import ONE, Q, ZERO, QtPoly
from catalanimals.shapes import SkewShape, SkewTuple, StretchSpec, a_values, attacking_pairs, lower_ideals, stretch
from catalanimals.symfunc import SymFunc, coproduct_component, expand, omega, partitions

SHAPE_433 = SkewTuple.of((4, 3, 3))
SKEW_PAIR = SkewTuple.of(((3, 2), (1, 0)), ((3, 3), (1, 1)))
SHAPE_444_1 = SkewTuple.of(((4, 4, 4), (1,)))
SHAPE_444_1_11 = SkewTuple.of(((4, 4, 4), (1,)), (1, 1))
ROW_PAIR = SkewTuple.of((2,), (1,))
STRETCH_EXAMPLE = SkewTuple.of((3, 2), (2,))

FOUR_BOX = Catalanimal(
    4,
    frozenset({(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)}),
    frozenset({(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)}),
    frozenset({(1, 4)}),
    (2, 1, 1, 0),
)


def basic_shapes(max_size: int, box: int | None = None) -> list:
    """Skew shapes of size 1..max_size with no empty row or column, one per cell set."""
    box = box or max_size
    parts = [p for n in range(box * box + 1) for p in partitions(n) if len(p) <= box and (not p or p[0] <= box)]
    found = {}
    for lam in parts:
        for mu in parts:
            if len(mu) > len(lam) or any(mu[i] > lam[i] for i in range(len(mu))):
                continue
            sh = SkewShape(tuple(lam), tuple(mu))
            if not 1 <= sh.size() <= max_size:
                continue
            cells = sh.cell_set
            if {r for _, r in cells} != set(range(1, len(lam) + 1)):
                continue
            if {c for c, _ in cells} != set(range(1, lam[0] + 1)):
                continue
            found.setdefault(cells, sh)
    return sorted(found.values(), key=lambda s: (s.size(), s.outer, s.inner))


def tuple_family(max_boxes: int, shapes, shifts=(-1, 0, 1)) -> list:
    """Every tuple of the given shapes with at most max_boxes boxes; later
    components are translated along the content axis by each shift."""
    out = []

    def rec(cur, left):
        if cur:
            out.append(SkewTuple(tuple(cur)))
        for s in shapes:
            if s.size() <= left:
                for sh in (shifts if cur else (0,)):
                    rec(cur + [SkewShape(s.outer, s.inner, sh)], left - s.size())

    rec([], max_boxes)
    return out


SMALL_SHAPES = basic_shapes(3)


@st.composite
def skew_tuples(draw, max_boxes=5, min_boxes=1, max_shift=2, shapes=None):
    pool = shapes or SMALL_SHAPES
    comps, total = [], 0
    while True:
        room = [s for s in pool if total + s.size() <= max_boxes]
        if not room or (total >= min_boxes and draw(st.booleans())):
            break
        s = draw(st.sampled_from(room))
        shift = draw(st.integers(-max_shift, max_shift)) if comps else 0
        comps.append(SkewShape(s.outer, s.inner, shift))
        total += s.size()
    return SkewTuple(tuple(comps))


@st.composite
def stretch_specs(draw, k: int, max_m=3):
    m = draw(st.integers(1, max_m))
    base = draw(st.integers(-3, 3))
    offs = sorted(draw(st.lists(st.integers(base, base + m - 1), min_size=k, max_size=k)))
    return m, tuple(offs)


@st.composite
def catalanimals_nested(draw, max_l=5):
    """Random Catalanimals with R+ >= Rq >= Rt >= Rqt."""
    l = draw(st.integers(1, max_l))
    roots = positive_roots(l)
    levels = draw(st.lists(st.integers(0, 3), min_size=len(roots), max_size=len(roots)))
    rq = frozenset(r for r, v in zip(roots, levels) if v >= 1)
    rt = frozenset(r for r, v in zip(roots, levels) if v >= 2)
    rqt = frozenset(r for r, v in zip(roots, levels) if v >= 3)
    lam = tuple(draw(st.lists(st.integers(-2, 2), min_size=l, max_size=l)))
    return Catalanimal(l, rq, rt, rqt, lam)


@st.composite
def catalanimals_any(draw, max_l=5):
    l = draw(st.integers(1, max_l))
    roots = positive_roots(l)
    sets = [frozenset(r for r in roots if draw(st.booleans())) for _ in range(3)]
    lam = tuple(draw(st.lists(st.integers(-2, 2), min_size=l, max_size=l)))
    return Catalanimal(l, *sets, lam)


# --- oracles ----------------------------------------------------------------

def _truncated_product(factors, K):
    """Coefficients (list of QtPoly) of x^0..x^K of a product of polynomials in x."""
    out = [QtPoly.const(1)] + [QtPoly() for _ in range(K)]
    for f in factors:
        new = [QtPoly() for _ in range(K + 1)]
        for i, a in enumerate(out):
            if a.is_zero():
                continue
            for j, b in enumerate(f):
                if i + j <= K and not b.is_zero():
                    new[i + j] = new[i + j] + a * b
        out = new
    return out


def root_factor(in_q: bool, in_t: bool, in_qt: bool, K: int):
    geo_q = [QtPoly.mono(k, 0) for k in range(K + 1)]
    geo_t = [QtPoly.mono(0, k) for k in range(K + 1)]
    factors = []
    if in_q:
        factors.append(geo_q)
    if in_t:
        factors.append(geo_t)
    if in_qt:
        factors.append([QtPoly.const(1), QtPoly.mono(1, 1, -1)])
    return _truncated_product(factors, K)


def hpol_truncated(c: Catalanimal, K: int) -> dict:
    """Polynomial part computed from the raising-operator series with every
    geometric factor cut at degree K, then straightened one monomial at a time."""
    l = c.l
    rho = [l - 1 - i for i in range(l)]
    top = sum(c.lam) + l - 1  # largest entry of mu + rho for any target mu
    series = {tuple(c.lam): QtPoly.const(1)}
    for i in range(1, l + 1):
        # row i only raises coordinate i; afterwards it never changes again
        for j in range(i + 1, l + 1):
            coeffs = root_factor((i, j) in c.Rq, (i, j) in c.Rt, (i, j) in c.Rqt, K)
            nxt: dict = {}
            for w, p in series.items():
                for k, f in enumerate(coeffs):
                    if f.is_zero():
                        continue
                    if w[i - 1] + k + rho[i - 1] > top:
                        break
                    w2 = list(w)
                    w2[i - 1] += k
                    w2[j - 1] -= k
                    key = tuple(w2)
                    nxt[key] = nxt.get(key, QtPoly()) + p * f
            series = {w: p for w, p in nxt.items() if not p.is_zero()}
        done = {}
        for w, p in series.items():
            fixed = [w[x] + rho[x] for x in range(i)]
            if fixed[-1] >= 0 and len(set(fixed)) == i:
                done[w] = p
        series = done
    out: dict = {}
    for w, p in series.items():
        v = [w[x] + rho[x] for x in range(l)]
        if min(v) < 0 or len(set(v)) < l:
            continue
        inversions = sum(1 for a, b in itertools.combinations(range(l), 2) if v[a] < v[b])
        srt = sorted(v, reverse=True)
        mu = tuple(x for x in (srt[x] - rho[x] for x in range(l)) if x)
        out[mu] = out.get(mu, QtPoly()) + (p * (-1 if inversions % 2 else 1))
    return {mu: p for mu, p in out.items() if not p.is_zero()}


def hpol_stable(c: Catalanimal, min_k: int = 2, max_k: int = 10) -> dict:
    """Truncated result once caps K and K+1 agree (K >= min_k)."""
    prev = hpol_truncated(c, min_k)
    for K in range(min_k + 1, max_k + 1):
        cur = hpol_truncated(c, K)
        if cur == prev:
            return cur
        prev = cur
    raise AssertionError("truncation did not stabilize")


def magic_sum(t: SkewTuple) -> int:
    """Sum over diagonals D of strictly-southwest pairs (d, e) with e on the next diagonal."""
    total = 0
    for a in t.boxes:
        for b in t.boxes:
            if a.shape_index != b.shape_index or a == b:
                continue
            if t.content(b) != t.content(a) + 1:
                continue
            if a.col <= b.col and a.row <= b.row:
                total += 1
    return total


def ribbon_value(t: SkewTuple):
    """Product over connected ribbons of (-q)^(columns - 1) (1 - q)."""
    val = ONE
    for sh in t.shapes:
        cells = set(sh.cell_set)
        while cells:
            stack, comp = [cells.pop()], set()
            while stack:
                c, r = stack.pop()
                comp.add((c, r))
                for nb in ((c + 1, r), (c - 1, r), (c, r + 1), (c, r - 1)):
                    if nb in cells:
                        cells.remove(nb)
                        stack.append(nb)
            cols = len({c for c, _ in comp})
            val = val * (-Q) ** (cols - 1) * (ONE - Q)
    return val


def coproduct_holds(t: SkewTuple) -> bool:
    """Each graded piece of the coproduct of G_t is the q-weighted sum over lower ideals."""
    g = llt(t)
    d = len(t)
    for k in range(d + 1):
        expected: dict = {}
        for ideal in lower_ideals(t):
            if len(ideal) != k:
                continue
            comp = [i for i in range(1, d + 1) if i not in ideal]
            w = Q ** coproduct_statistic(t, ideal)
            lo, hi = llt(t.subtuple(sorted(ideal))), llt(t.subtuple(comp))
            for mu, a in lo.coeffs.items():
                for nu, b in hi.coeffs.items():
                    expected[(mu, nu)] = expected.get((mu, nu), ZERO) + w * a * b
        expected = {key: v for key, v in expected.items() if not v.is_zero()}
        if coproduct_component(g, k) != expected:
            return False
    return True


def super_holds(t: SkewTuple, nx: int = 2, ny: int = 2) -> bool:
    """Super tableaux count G_t[X + Y] with the Y half twisted by omega."""
    g = llt(t)
    want: dict = {}
    for k in range(len(t) + 1):
        for (mu, nu), c in coproduct_component(g, k).items():
            xs = expand(SymFunc.single("s", mu), nx) if mu else {(0,) * nx: ONE}
            ys = expand(omega(SymFunc.single("s", nu)), ny) if nu else {(0,) * ny: ONE}
            for ex, a in xs.items():
                for ey, b in ys.items():
                    want[(ex, ey)] = want.get((ex, ey), ZERO) + c * a * b
    want = {key: v.num for key, v in want.items() if not v.is_zero()}
    return super_llt(t, nx, ny) == want


def stretched_attacks_hold(t: SkewTuple, m: int, offs) -> bool:
    """Attacks between stretched copies of boxes i < j number a_ij - 1, or zero if a_ij is undefined."""
    spec = StretchSpec(m, tuple(offs))
    big, smap = stretch(t, spec)
    big_pairs = attacking_pairs(big)
    avals = a_values(t, spec)
    for i in range(1, len(t) + 1):
        for j in range(i + 1, len(t) + 1):
            if (i, j) in avals:
                crossing = sum(1 for a, b in big_pairs if a in smap[j] and b in smap[i])
                if crossing != avals[(i, j)] - 1:
                    return False
            else:
                both = smap[i] | smap[j]
                if any(a in both and b in both for a, b in big_pairs):
                    return False
    return True


def restricted_values_hold(c: Catalanimal, I, J, K) -> bool:
    """Subset values survive restriction to I (for J inside I) and to its complement (for K outside I)."""
    I = sorted(I)
    c1, c2 = restrict(c, I)
    pos = {v: k for k, v in enumerate(I, start=1)}
    Ic = [i for i in range(1, c.l + 1) if i not in I]
    posc = {v: k for k, v in enumerate(Ic, start=1)}
    ok1 = r_I(c1, [pos[j] for j in sorted(J)]) == r_I(c, sorted(J))
    ok2 = r_I(c2, [posc[k] for k in sorted(K)]) == r_I(c, sorted(set(I) | set(K))) - r_I(c, I)
    return ok1 and ok2


# --- seeded generators (no hypothesis) for the acceptance sweeps -----------

def random_tuple(rng: random.Random, max_boxes: int, min_boxes: int = 1, max_shift: int = 2, shapes=None) -> SkewTuple:
    pool = shapes or SMALL_SHAPES
    comps, total = [], 0
    while True:
        room = [s for s in pool if total + s.size() <= max_boxes]
        if not room or (total >= min_boxes and rng.random() < 0.5):
            break
        s = rng.choice(room)
        shift = rng.randint(-max_shift, max_shift) if comps else 0
        comps.append(SkewShape(s.outer, s.inner, shift))
        total += s.size()
    return SkewTuple(tuple(comps))


def random_stretch(rng: random.Random, k: int, max_m: int = 3):
    m = rng.randint(1, max_m)
    base = rng.randint(-3, 3)
    return m, tuple(sorted(rng.randint(base, base + m - 1) for _ in range(k)))


def random_catalanimal(rng: random.Random, max_l: int, nested: bool = False) -> Catalanimal:
    l = rng.randint(1, max_l)
    roots = positive_roots(l)
    if nested:
        levels = [rng.randint(0, 3) for _ in roots]
        sets = [frozenset(r for r, v in zip(roots, levels) if v >= k) for k in (1, 2, 3)]
    else:
        sets = [frozenset(r for r in roots if rng.random() < 0.5) for _ in range(3)]
    return Catalanimal(l, *sets, tuple(rng.randint(-2, 2) for _ in range(l)))


# filled by the acceptance tests, printed by conftest at the end of the run
ACCEPTANCE_LINES: list = []
