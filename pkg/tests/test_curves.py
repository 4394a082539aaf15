import itertools
import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from strongweil.catalog import get_entry, instantiate
from strongweil.curves import (
    Curve,
    ReductionType,
    add_points,
    change_coordinates,
    check_congruence,
    count_points,
    frobenius_image,
    frobenius_minimal_form,
    group_structure,
    hasse_invariant,
    invariants,
    is_frobenius_minimal,
    is_isomorphic,
    pole_orders,
    quadratic_twist,
    rational_points,
    reduce_at,
    reduction_profile,
    short_form,
)
from strongweil.errors import ConstantJInvariant, SingularCurve, WrongCharacteristic
from strongweil.expr import parse_ratfunc
from strongweil.funcfield import Place, is_pth_power, valuation
from strongweil.gf import field_for_q


def fq_curve(q, *coeffs):
    F = field_for_q(q)
    return Curve.over_fq(F, *(F(c) for c in coeffs))


def eq(text, q, **b):
    return Curve.from_equation(text, field_for_q(q), b or None)


# ---- invariants ------------------------------------------------------------

def test_j_of_222_star():
    for q in (7, 11, 13):
        E = eq("Y^2=X*(X+T)*(X+T^2)", q)
        assert invariants(E).j == parse_ratfunc("2^8*(T^2-T+1)^3/(T^2*(T-1)^2)", E.ctx)


def test_j_char2_t3_family():
    F = field_for_q(8)
    for c in F.elements()[1:]:
        E = eq("Y^2+X*Y=X^3+c/T^4", 8, c=c)
        inv = invariants(E)
        assert inv.c4 == 1 and inv.delta == E.a6
        assert inv.j == parse_ratfunc("T^4/c", F, {"c": c})


def test_singular_rejected():
    E = eq("Y^2=X^3", 5)
    assert invariants(E).delta == 0
    with pytest.raises(SingularCurve):
        invariants(E, require_nonsingular=True)


_A = sympy.symbols("a1 a2 a3 a4 a6")


def _sympy_invariants():
    a1, a2, a3, a4, a6 = _A
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    c4 = b2 ** 2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    delta = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    return [sympy.expand(x) for x in (b2, b4, b6, b8, c4, c6, delta)]


_ORACLE = _sympy_invariants()


@settings(max_examples=150, deadline=None)
@given(st.sampled_from((2, 3, 5, 7, 11, 13)), st.lists(st.integers(0, 12), min_size=5, max_size=5))
def test_invariants_match_symbolic_expansion(p, coeffs):
    E = fq_curve(p, *coeffs)
    inv = invariants(E)
    subs = dict(zip(_A, coeffs))
    want = [int(x.subs(subs)) % p for x in _ORACLE]
    got = [x.code for x in (inv.b2, inv.b4, inv.b6, inv.b8, inv.c4, inv.c6, inv.delta)]
    assert got == want
    # identities valid in every characteristic
    assert 4 * inv.b8 == inv.b2 * inv.b6 - inv.b4 ** 2
    assert 1728 * inv.delta == inv.c4 ** 3 - inv.c6 ** 2
    if inv.delta != 0:
        assert inv.j * inv.delta == inv.c4 ** 3


# ---- counting and groups ---------------------------------------------------

def test_count_examples():
    assert count_points(fq_curve(2, 0, 0, 1, 0, 0)) == 3
    assert count_points(fq_curve(5, 0, 0, 0, 1, 0)) == 4
    # with a6 = 1 the model Y^2 = X^3 + 3X + a6 is singular over F_5
    with pytest.raises(SingularCurve):
        count_points(fq_curve(5, 0, 0, 0, 3, 1))
    assert count_points(fq_curve(5, 0, 0, 0, 3, 2)) % 5 == 0


def test_group_examples():
    G = group_structure(fq_curve(5, 0, 0, 0, 1, 0))
    assert (G.m, G.n, G.order) == (2, 2, 4)
    G = group_structure(fq_curve(2, 0, 0, 1, 0, 0))
    assert (G.m, G.n) == (1, 3)
    G = group_structure(fq_curve(4, 1, 0, 0, 0, 1))
    assert G.n % 4 == 0


def _all_curves(q, limit=None):
    F = field_for_q(q)
    codes = range(q)
    for c in itertools.islice(itertools.product(codes, repeat=5), 0, limit, 7):
        E = Curve.over_fq(F, *(F(x) for x in c))
        if invariants(E).delta != 0:
            yield E


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_counts_and_group_law(q):
    for E in _all_curves(q, limit=3000):
        n = count_points(E)
        assert abs(q + 1 - n) <= 2 * math.isqrt(q) + 1 and (q + 1 - n) ** 2 <= 4 * q
        pts = rational_points(E)
        assert len(pts) == n
        G = group_structure(E)
        assert G.m * G.n == n and G.n % G.m == 0 and (q - 1) % G.m == 0
        P, Q = pts[-1], pts[len(pts) // 2]
        assert add_points(E, P, Q) == add_points(E, Q, P)


def test_counts_invariant_under_coordinate_change():
    F = field_for_q(7)
    E = fq_curve(7, 1, 2, 3, 4, 5)
    E2 = change_coordinates(E, F(3), F(2), F(5), F(1))
    assert count_points(E2) == count_points(E)
    assert invariants(E2).j == invariants(E).j


def test_quadratic_twist_char2():
    for q in (2, 4, 8):
        for E in _all_curves(q, limit=2000):
            if E.a1 != 0 or E.a3 != 0:
                assert count_points(E) + count_points(quadratic_twist(E)) == 2 * q + 2


# ---- reduction -------------------------------------------------------------

def test_222_star_reductions():
    E = eq("Y^2=X*(X+T)*(X+T^2)", 7)
    F = E.ctx
    for a in F.elements():
        r = reduce_at(E, Place(a))
        if a in (0, 1):
            assert r.type is not ReductionType.GOOD
        else:
            assert r.type is ReductionType.GOOD
    r0 = reduce_at(E, Place(F(0)))
    assert r0.type is ReductionType.ADDITIVE and r0.count == 7


def test_thm21a_profile_q4():
    E = instantiate(get_entry("Thm2.1a"), 4, {"c": field_for_q(4).one})
    prof = reduction_profile(E)
    types = [e.type for e in prof.entries]
    assert types == [ReductionType.ADDITIVE] + [ReductionType.GOOD] * 3 + [ReductionType.SPLIT]


def test_e4_profile_q7():
    E = instantiate(get_entry("E4-11"), 7)
    prof = reduction_profile(E)
    F = E.ctx
    assert prof.at(Place(F(0))).type is ReductionType.ADDITIVE
    assert prof.at(Place(F(1))).type.multiplicative
    assert prof.infinity.type is ReductionType.SPLIT
    assert sum(1 for e in prof.finite() if e.type is ReductionType.GOOD) == 5
    # split or not at T - 1 is decided by the smooth count
    assert prof.at(Place(F(1))).type is ReductionType.NONSPLIT


def test_frobenius_31_at_t_minus_1_q2():
    E = instantiate(get_entry("Thm2.4a-strong"), 2)
    r = reduce_at(E, Place(E.ctx(1)))
    assert r.type is ReductionType.NONSPLIT and r.count == 3
    assert reduce_at(E, Place(E.ctx(0))).type is ReductionType.ADDITIVE


def test_9111_profile_q4():
    E = instantiate(get_entry("Ex3.1-9111"), 4)
    prof = reduction_profile(E)
    assert [e.type for e in prof.entries[1:]] == [ReductionType.SPLIT] * 4
    assert prof.entries[0].type is ReductionType.GOOD
    assert sorted(pole_orders(E).values()) == [1, 1, 1, 9]


def test_smooth_count_trichotomy_over_catalog(catalog_profiles):
    for prof in catalog_profiles:
        q = prof.q
        for e in prof.entries:
            expected = {ReductionType.SPLIT: q - 1, ReductionType.NONSPLIT: q + 1, ReductionType.ADDITIVE: q}
            if e.type in expected:
                assert e.count == expected[e.type]
            else:
                assert e.lam == q + 1 - e.count


@pytest.fixture(scope="module")
def catalog_profiles():
    from conftest import catalog_runs

    return [rep.analysis.profile for _, _, rep in catalog_runs() if rep.analysis is not None]


# ---- Frobenius -------------------------------------------------------------

def test_frobenius_image_examples():
    F = field_for_q(4)
    c = F.gen
    E = eq("Y^2+X*Y=X^3+c/T", 4, c=c)
    assert frobenius_image(E) == eq("Y^2+X*Y=X^3+c/T^2", 4, c=c * c)
    assert frobenius_image(E, 2) == eq("Y^2+X*Y=X^3+c/T^4", 4, c=c ** 4)
    F9 = field_for_q(9)
    c = F9.gen
    E = eq("Y^2=X^3+X^2-c/T", 9, c=c)
    assert frobenius_image(E) == eq("Y^2=X^3+X^2-c/T^3", 9, c=c ** 3)
    # constants return after e steps
    E = eq("Y^2+X*Y=X^3+c", 4, c=field_for_q(4).gen)
    assert frobenius_image(E, 2) == E


def test_j_of_frobenius_is_pth_power(catalog_curves):
    for E in catalog_curves:
        F1 = frobenius_image(E)
        assert invariants(F1).j == invariants(E).j ** E.p
        ok, w = is_pth_power(invariants(F1).j)
        assert ok and w == invariants(E).j
        assert not is_frobenius_minimal(F1)
        E_min, depth = frobenius_minimal_form(F1)
        assert depth >= 1 and is_isomorphic(frobenius_image(E_min, depth), F1)


@pytest.fixture(scope="module")
def catalog_curves():
    from conftest import catalog_runs

    seen = {}
    for entry, q, rep in catalog_runs():
        if rep.analysis is not None and q <= 9:
            seen.setdefault((entry.id, q), rep.analysis.curve)
    return list(seen.values())


def test_frobenius_minimality_examples():
    assert is_frobenius_minimal(eq("Y^2=X*(X+T)*(X+T^2)", 7))
    assert not is_frobenius_minimal(eq("Y^2+X*Y=X^3+1/T^4", 2))
    assert not is_frobenius_minimal(eq("Y^2=X^3+X^2-1/T^3", 3))
    with pytest.raises(ConstantJInvariant):
        is_frobenius_minimal(eq("Y^2=X^3+T^6", 7))


# ---- Hasse invariant ---------------------------------------------------------

def test_hasse_char5_torsion_model_is_constant_one():
    E = eq("Y^2=X^3+3*X+T^2+2", 5)
    assert hasse_invariant(E).to_expr() == "1"


def test_hasse_222_star_char5():
    A = hasse_invariant(eq("Y^2=X*(X+T)*(X+T^2)", 5))
    target = parse_ratfunc("T^2*(T^2-T+1)", field_for_q(5)).num
    assert A.degree() == 4 and A.monic() == target


def test_hasse_needs_p_at_least_five():
    with pytest.raises(WrongCharacteristic):
        hasse_invariant(eq("Y^2=X^3+X^2+T", 3))


@pytest.mark.parametrize("q", [5, 7, 25])
def test_hasse_congruence_at_good_places(q):
    ids = ["E1-222*", "E1-411*", "E2-12", "E2-21", "E3-13", "E3-31", "E4-11"]
    for entry_id in ids:
        E = instantiate(get_entry(entry_id), q)
        prof = reduction_profile(E)
        for a in E.ctx.elements():
            if prof.at(Place(a)).type is ReductionType.GOOD and invariants(E).delta.num(a) != 0:
                assert check_congruence(E, a)


# ---- coordinate normal forms ---------------------------------------------

def test_short_form_is_isomorphic():
    E = eq("Y^2+T*X*Y+3*Y=X^3+X^2+T", 7)
    S = short_form(E)
    assert S.a1 == 0 and S.a3 == 0 and S.a2 == 0
    assert invariants(S).j == invariants(E).j
    assert valuation(invariants(S).delta / invariants(E).delta, Place(None)) % 12 == 0
