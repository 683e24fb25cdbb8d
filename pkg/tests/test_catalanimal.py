import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from catalanimals.catalanimal import (
    SUBSET_SCAN_CAP,
    CapExceeded,
    Catalanimal,
    SingularPoint,
    build_llt,
    build_llt_mn,
    check_cuddly,
    coprod_coefficient,
    coprod_coefficient_nested,
    eval_forms,
    expected_cub,
    exponent_a,
    h_pol,
    is_tame,
    join,
    lambda_I,
    positive_roots,
    principal_spec,
    r_I,
    random_rational,
    render,
    restrict,
    shuffle_eval,
    sigma_eval,
    verify_cub,
    weight_identities_check,
    wheel_check,
)
from catalanimals.llt import llt
from catalanimals.macnabla import nabla_pow
from catalanimals.qtcoeff import ONE, Q, T, QtPoly, parse_qt
from catalanimals.shapes import SkewTuple, StretchSpec, lower_ideals, stats, stretch
from catalanimals.symfunc import SymFunc, omega
from support import (
    SHAPE_433,
    SKEW_PAIR,
    ROW_PAIR,
    FOUR_BOX,
    SHAPE_444_1,
    SHAPE_444_1_11,
    STRETCH_EXAMPLE,
    catalanimals_any,
    catalanimals_nested,
    hpol_stable,
    restricted_values_hold,
    skew_tuples,
    stretch_specs,
)

ALL = "all"


def roots(l):
    return frozenset(positive_roots(l))


def s(*lam, c=1):
    return SymFunc.single("s", lam, c)


def random_point(rng, l):
    return [random_rational(rng) for _ in range(l)], random_rational(rng), random_rational(rng)


# --- construction ------------------------------------------------------------

def test_column_of_three():
    c = build_llt(SkewTuple.of((1, 1, 1)))
    assert c.Rq == c.Rt == roots(3)
    assert c.Rqt == {(1, 3)}
    assert c.lam == (0, 0, 0)


def test_single_ribbon_roots():
    c = build_llt(SkewTuple.of(((3, 2), (1,))))
    assert c.Rq == c.Rt == roots(4)
    assert c.Rqt == {(i, j) for i, j in roots(4) if j - i > 1}


def test_weight_along_diagonals():
    assert build_llt(SHAPE_444_1).lam == (1, 1, 1, 0, 0, 0, 0, 0, -1, -1, -1)
    assert build_llt_mn(SKEW_PAIR, 1, 1).lam == (2, 0, 2, 2, 1, 1, 0, 0)


def test_stretched_weights():
    c = build_llt_mn(ROW_PAIR, 3, 2, (-2, -2))
    assert c.l == 9 and c.lam == (1, 1, 1, 1, 1, 0, 0, 1, 0)
    big = build_llt_mn(STRETCH_EXAMPLE, 3, 2, (-4, -2))
    assert big.lam == (1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0)


def test_trivial_stretch_is_plain_construction():
    for t in (SHAPE_433, SKEW_PAIR, SHAPE_444_1_11):
        assert build_llt_mn(t, 1, 0) == build_llt(t)


def test_construction_errors():
    with pytest.raises(ValueError):
        build_llt(SkewTuple(()))
    with pytest.raises(ValueError):
        build_llt_mn(ROW_PAIR, 2, 2)
    with pytest.raises(ValueError):
        build_llt_mn(ROW_PAIR, 3, 2, (0, 3))
    with pytest.raises(ValueError):
        Catalanimal(2, {(2, 1)}, set(), set(), (0, 0))
    with pytest.raises(ValueError):
        Catalanimal(2, set(), set(), set(), (0,))


def test_json_round_trip():
    for c in (FOUR_BOX, build_llt_mn(ROW_PAIR, 3, 2, (-2, -2)), Catalanimal.empty()):
        assert Catalanimal.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        Catalanimal.from_json({"l": 1})


def test_matrix_view():
    m = FOUR_BOX.matrix("Rqt")
    assert m[0][3] and sum(map(sum, m)) == 1


def test_weight_identities_examples():
    assert weight_identities_check(SkewTuple.of((1, 1, 1)))
    assert weight_identities_check(SHAPE_444_1_11)


@settings(max_examples=100, deadline=None)
@given(skew_tuples(max_boxes=7))
def test_weight_identities(t):
    assert weight_identities_check(t)


# --- subsets and cuddliness ------------------------------------------------

def test_four_box_subset_values():
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert [r_I(FOUR_BOX, I) for I in pairs] == [2, 1, 0, 0, 2, 1]
    assert lambda_I(FOUR_BOX, (1, 3)) == (1, 2, 0, 1)
    assert r_I(FOUR_BOX, ()) == 0
    assert r_I(FOUR_BOX, (1, 2, 3, 4)) == 4


def test_four_box_is_cuddly():
    rep = check_cuddly(FOUR_BOX, 1, 1)
    assert rep.tame and rep.degree_ok and rep.cuddly
    assert rep.tight_subsets == [(), (2,), (1, 2), (2, 4), (1, 2, 4), (1, 2, 3, 4)]


def test_tampered_weight_fails():
    bad = Catalanimal(4, FOUR_BOX.Rq, FOUR_BOX.Rt, FOUR_BOX.Rqt, (3, 1, 1, 0))
    rep = check_cuddly(bad, 1, 1)
    assert not rep.cuddly
    assert ((1, 2), 3, Fraction(2)) in rep.violations
    assert all(len(I) >= 2 for I, _, _ in rep.violations)


def test_degree_condition():
    rep = check_cuddly(FOUR_BOX, 1, 2)
    assert not rep.degree_ok and not rep.cuddly


def test_subset_cap():
    l = SUBSET_SCAN_CAP + 1
    with pytest.raises(CapExceeded):
        check_cuddly(Catalanimal(l, set(), set(), set(), (0,) * l), 1, 0)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_llt_catalanimals_are_tame(data):
    t = data.draw(skew_tuples(max_boxes=6))
    m, offs = data.draw(stretch_specs(t.k))
    assert is_tame(build_llt(t))
    assert is_tame(build_llt_mn(t, m, 1, offs))


@settings(max_examples=40, deadline=None)
@given(skew_tuples(max_boxes=12, shapes=None))
def test_tight_subsets_are_lower_ideals(t):
    rep = check_cuddly(build_llt(t), 1, 0)
    assert rep.cuddly
    assert {frozenset(I) for I in rep.tight_subsets} == set(lower_ideals(t))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_tight_subsets_are_stretched_ideals(data):
    t = data.draw(skew_tuples(max_boxes=4))
    m, offs = data.draw(stretch_specs(t.k))
    n = data.draw(st.sampled_from([n for n in range(-3, 4) if math.gcd(m, n) == 1]))
    _, smap = stretch(t, StretchSpec(m, offs))
    rep = check_cuddly(build_llt_mn(t, m, n, offs), m, n)
    assert rep.cuddly
    want = {frozenset().union(*(smap[i] for i in J)) for J in lower_ideals(t)}
    assert {frozenset(I) for I in rep.tight_subsets} == want


def test_tame_check_rejects():
    c = Catalanimal(3, {(1, 2)}, {(2, 3)}, set(), (0, 0, 0))
    assert not is_tame(c)


@settings(max_examples=100, deadline=None)
@given(catalanimals_any(max_l=6), st.data())
def test_restricted_subset_values(c, data):
    I = sorted(data.draw(st.sets(st.integers(1, c.l))))
    J = sorted(data.draw(st.sets(st.sampled_from(I)))) if I else []
    Ic = [i for i in range(1, c.l + 1) if i not in I]
    K = sorted(data.draw(st.sets(st.sampled_from(Ic)))) if Ic else []
    assert restricted_values_hold(c, I, J, K)


# --- restriction and join ----------------------------------------------------

def test_restrict_everything():
    c1, c2 = restrict(FOUR_BOX, range(1, 5))
    assert c1 == FOUR_BOX and c2 == Catalanimal.empty()


@settings(max_examples=50, deadline=None)
@given(skew_tuples(max_boxes=6))
def test_restriction_to_ideal_is_subtuple(t):
    c = build_llt(t)
    for ideal in lower_ideals(t):
        if 0 < len(ideal) < len(t):
            comp = [i for i in range(1, len(t) + 1) if i not in ideal]
            c1, c2 = restrict(c, ideal)
            assert c1 == build_llt(t.subtuple(sorted(ideal)))
            assert c2 == build_llt(t.subtuple(comp))


def test_stretched_restriction():
    t, m, n, offs = ROW_PAIR, 3, 2, (-2, -2)
    _, smap = stretch(t, StretchSpec(m, offs))
    c = build_llt_mn(t, m, n, offs)
    for J in lower_ideals(t):
        if 0 < len(J) < len(t):
            I = sorted(set().union(*(smap[i] for i in J)))
            Jc = [i for i in range(1, len(t) + 1) if i not in J]
            c1, c2 = restrict(c, I)
            assert c1 == build_llt_mn(t.subtuple(sorted(J)), m, n, offs)
            assert c2 == build_llt_mn(t.subtuple(Jc), m, n, offs)


def test_join_basics():
    j = join(FOUR_BOX, build_llt(ROW_PAIR))
    assert j.l == 7
    assert join(FOUR_BOX, Catalanimal.empty()) == FOUR_BOX
    assert join(Catalanimal.empty(), FOUR_BOX) == FOUR_BOX


@settings(max_examples=15, deadline=None)
@given(catalanimals_nested(max_l=3), catalanimals_nested(max_l=2), st.integers(0, 10**6))
def test_join_is_shuffle_product(c1, c2, seed):
    rng = random.Random(seed)
    done = 0
    while done < 20:
        z, q0, t0 = random_point(rng, c1.l + c2.l)
        try:
            a = shuffle_eval(c1, c2, "hat", z, q0, t0)
            b = eval_forms(join(c1, c2), "H", z, q0, t0)
        except SingularPoint:
            continue
        assert a == b
        done += 1


def test_shuffle_with_empty_factor():
    rng = random.Random(3)
    z, q0, t0 = random_point(rng, 4)
    assert shuffle_eval(FOUR_BOX, Catalanimal.empty(), "hat", z, q0, t0) == eval_forms(FOUR_BOX, "H", z, q0, t0)


def test_tilde_shuffle_matches_join():
    rng = random.Random(5)
    c1, c2 = build_llt(ROW_PAIR), build_llt(SkewTuple.of((1,)))
    for _ in range(5):
        z, q0, t0 = random_point(rng, 4)
        assert shuffle_eval(c1, c2, "tilde", z, q0, t0) == eval_forms(join(c1, c2), "g", z, q0, t0)


# --- numeric forms -------------------------------------------------------------

def test_length_one_form():
    c = Catalanimal(1, set(), set(), set(), (3,))
    assert eval_forms(c, "H", [Fraction(2, 3)], 5, 7) == Fraction(8, 27)


def test_singular_point_reported():
    with pytest.raises(SingularPoint):
        eval_forms(FOUR_BOX, "H", [1, 1, 2, 3], 5, 7)


@settings(max_examples=20, deadline=None)
@given(catalanimals_nested(max_l=5), st.integers(0, 10**6))
def test_symmetrizations(c, seed):
    rng = random.Random(seed)
    done = 0
    while done < 20:
        z, q0, t0 = random_point(rng, c.l)
        try:
            h = eval_forms(c, "H", z, q0, t0)
            g = eval_forms(c, "g", z, q0, t0)
            sh, sg = sigma_eval(c, "hat", z, q0, t0), sigma_eval(c, "tilde", z, q0, t0)
        except SingularPoint:
            continue
        assert sh == h and sg == g
        done += 1


@pytest.mark.parametrize("t", [SkewTuple.of((2, 1), (1,)), SkewTuple.of((3,), (1, 1)), SkewTuple.of(((3, 2), (1,)), (2,))])
def test_wheel_condition_for_llt(t):
    # exact vanishing at random points, tuples up to six boxes
    assert wheel_check(build_llt(t), trials=3 if len(t) > 5 else 8, seed=1)


def test_wheel_vacuous_and_failure():
    assert wheel_check(Catalanimal(1, set(), set(), set(), (2,)))
    bad = Catalanimal(3, {(1, 2)}, {(2, 3)}, set(), (0, 0, 0))
    assert not wheel_check(bad, trials=3)


@settings(max_examples=30, deadline=None)
@given(skew_tuples(max_boxes=4), st.integers(0, 1000))
def test_wheel_condition_random(t, seed):
    assert wheel_check(build_llt(t), trials=2, seed=seed)


# --- principal specialization -------------------------------------------------

@pytest.mark.parametrize("shape", [(3,), (1, 1, 1), ((3, 2), (1,)), ((2, 2), (1,)), (2, 1)])
@pytest.mark.parametrize("m,n", [(1, 0), (1, 1), (2, 1), (3, 2), (2, -1)])
def test_ribbon_principal_specialization(shape, m, n):
    t = SkewTuple.of(shape)
    c = build_llt_mn(t, m, n)
    big, _ = stretch(t, StretchSpec(m, (0,)))
    a = exponent_a(len(t), m, n)
    want = T ** (a - stats(big).magic_p) / (ONE - Q) ** (c.l - 1)
    assert principal_spec(c) == want


def test_attacking_tuple_specializes_to_zero():
    assert principal_spec(build_llt(SkewTuple.of((1,), (1,)))).is_zero()
    assert principal_spec(build_llt(SkewTuple.of((2, 2)))).is_zero()


def test_principal_specialization_matches_cub():
    scalar, f = expected_cub(ROW_PAIR, 3, 2, (-2, -2))
    c = build_llt_mn(ROW_PAIR, 3, 2, (-2, -2))
    a = exponent_a(2, 3, 2)
    from catalanimals.symfunc import plethys

    rhs = T**a * plethys(omega(f), QtPoly.const(1) - QtPoly.mono(1, 0)) / (ONE - Q) ** c.l
    assert principal_spec(c) == rhs


# --- polynomial part -----------------------------------------------------------

def test_hpol_trivial():
    c = Catalanimal(1, set(), set(), set(), (2,))
    assert h_pol(c).coeffs == {(2,): ONE}
    neg = Catalanimal(2, set(), set(), set(), (-1, 0))
    assert h_pol(neg).coeffs == {}


def test_hpol_column_of_three():
    c = build_llt(SkewTuple.of((1, 1, 1)))
    shifted = Catalanimal(3, c.Rq, c.Rt, c.Rqt, tuple(x + 1 for x in c.lam))
    want = s(1, 1, 1) + s(2, 1, c=parse_qt("q + t + q^2 + q*t + t^2")) + s(3, c=parse_qt("q*t + q^3 + q^2*t + q*t^2 + t^3"))
    assert h_pol(shifted).to_symfunc() == want


def test_hpol_four_box_matches_truncation():
    got = {mu: c.num for mu, c in h_pol(FOUR_BOX).coeffs.items()}
    assert got == hpol_stable(FOUR_BOX)


def test_hpol_parallel_matches_serial():
    c = build_llt_mn(SKEW_PAIR, 1, 1)
    assert h_pol(c, jobs=2).coeffs == h_pol(c).coeffs


@settings(max_examples=60, deadline=None)
@given(catalanimals_nested(max_l=6))
def test_hpol_homogeneous_and_integral(c):
    res = h_pol(c)
    for mu, v in res.coeffs.items():
        assert sum(mu) == sum(c.lam) and len(mu) <= c.l
        assert v.is_polynomial()


@settings(max_examples=25, deadline=None)
@given(catalanimals_nested(max_l=4))
def test_hpol_matches_truncation_random(c):
    assume(sum(c.lam) >= 0)
    got = {mu: v.num for mu, v in h_pol(c).coeffs.items()}
    assert got == hpol_stable(c)


# --- cubs ----------------------------------------------------------------------

def test_exponent_additivity():
    for m in range(1, 5):
        for n in range(-3, 4):
            if math.gcd(m, n) != 1:
                continue
            for d1 in range(1, 9):
                for d2 in range(1, 9 - d1):
                    assert exponent_a(d1 + d2, m, n) == exponent_a(d1, m, n) + exponent_a(d2, m, n) + d1 * d2 * m * n


def test_expected_scalars():
    assert expected_cub(ROW_PAIR, 3, 2, (-2, -2))[0] == -(Q**-5) * T**-1
    assert expected_cub(SKEW_PAIR, 1, 1)[0] == -(Q**-11) * T**-4
    assert expected_cub(SHAPE_433, 1, 1)[0] == (Q * T) ** -9
    scalar, f = expected_cub(SKEW_PAIR, 1, 0)
    st_ = stats(SKEW_PAIR)
    assert scalar == (-1) ** st_.magic_p * (Q * T) ** (-st_.magic_p - st_.n_prime) * Q ** (-st_.attack_A)
    assert f == llt(SKEW_PAIR).scale(scalar)


def test_row_pair_cub():
    tr = verify_cub(ROW_PAIR, 3, 2, (-2, -2))
    assert tr.ok, tr.text()
    assert tr.text().endswith("RESULT PASS")


def test_one_box_cub():
    for m, n in [(1, 0), (1, 1), (2, 1), (3, -1)]:
        assert verify_cub(SkewTuple.of((1,)), m, n).ok


@settings(max_examples=60, deadline=None)
@given(catalanimals_nested(max_l=6), st.data())
def test_coefficient_two_ways(c, data):
    I = data.draw(st.sets(st.integers(1, c.l)))
    assert coprod_coefficient(c, I) == coprod_coefficient_nested(c, I)


def test_shape_433_catalanimal_side():
    # the degree-10 example is checked on the Catalanimal side only
    st_ = stats(SHAPE_433)
    assert (st_.magic_p, st_.n_prime, st_.attack_A) == (4, 5, 0)
    assert check_cuddly(build_llt_mn(SHAPE_433, 1, 1), 1, 1).cuddly


@settings(max_examples=12, deadline=None)
@given(st.data())
def test_nonconstant_offsets_nabla(data):
    t = data.draw(skew_tuples(max_boxes=3, min_boxes=2))
    assume(t.k >= 2)
    m = 2
    offs = tuple(sorted(data.draw(st.lists(st.integers(0, 1), min_size=t.k, max_size=t.k))))
    assume(len(set(offs)) > 1)
    scalar, _ = expected_cub(t, m, 1, offs)
    via_h = h_pol(build_llt_mn(t, m, 1, offs)).to_symfunc().scale(1 / scalar)
    assert via_h == omega(nabla_pow(llt(t), m))


def test_render():
    assert render(Catalanimal(1, set(), set(), set(), (5,))) == "5"
    pic = render(FOUR_BOX).splitlines()
    assert pic[0].split() == ["2", "o", "o", "."]
    assert pic[1].split() == ["1", "#", "o"]
    assert pic[3].split() == ["0"]
