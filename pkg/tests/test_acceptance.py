"""Acceptance criteria 1 to 11.

Each test records its outcome in ``conftest.ACCEPTANCE``; the terminal summary
prints one line per criterion.  Running this file directly does the same.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import conftest
from conftest import Q_MATRIX, catalog_runs
from strongweil.catalog import (
    class_candidates,
    classes_distinguished,
    get_entry,
    instantiate,
    isogeny_class_consistency,
    load_catalog,
    verify_entry,
)
from strongweil.curves import (
    Curve,
    ReductionType,
    add_points,
    check_congruence,
    count_points,
    frobenius_image,
    invariants,
    is_frobenius_minimal,
    multiply_point,
    pole_orders,
    quadratic_twist,
    rational_points,
    reduction_profile,
    substitute_affine,
    torsion_by_group,
    torsion_by_model,
    triple_x,
)
from strongweil.errors import DenominatorVanishes
from strongweil.funcfield import Place, Poly, Splitting, classify_conductor
from strongweil.gf import cube_root_of_unity, field_for_q
from strongweil.homology import (
    analyze,
    build_graph,
    genus,
    min_positive_pairing,
    pole_order_basis,
    pole_order_gcd_route,
    same_class_data,
)


def record(n):
    """Decorator: store PASS/FAIL for criterion n, re-raising failures."""
    def wrap(fn):
        def test(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                first = (str(exc).splitlines() or [""])[0]
                conftest.ACCEPTANCE[n] = ("FAIL", f"{type(exc).__name__}: {first[:160]}")
                raise
            conftest.ACCEPTANCE[n] = ("PASS", detail or "")
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return wrap


def eq(text, F, **b):
    return Curve.from_equation(text, F, b or None)


def analyze_entry(entry_id, F, params=None):
    e = get_entry(entry_id)
    params = params if params is not None else e.parameter_choices(F)[0]
    return analyze(instantiate(e, F, params), candidates=class_candidates(e, F, params, load_catalog()))


# ---- 1 ---------------------------------------------------------------------

@record(1)
def test_c1_conductor_cube_families():
    n = 0
    for q in (2, 4, 8):
        F = field_for_q(q)
        for c in F.elements()[1:]:
            rep = analyze(eq("Y^2+X*Y=X^3+c/T", F, c=c))
            assert rep.pole_order == 4
            assert rep.strong_weil == eq("Y^2+X*Y=X^3+c/T^4", F, c=c ** 4)
            n += 1
    for q in (3, 9):
        F = field_for_q(q)
        for c in F.elements()[1:]:
            rep = analyze(eq("Y^2=X^3+X^2-c/T", F, c=c))
            assert rep.pole_order == 3
            assert rep.strong_weil == eq("Y^2=X^3+X^2-c/T^3", F, c=c ** 3)
            n += 1
    return f"{n} curves, pole orders 4 (char 2) and 3 (char 3)"


# ---- 2 ---------------------------------------------------------------------

STATED_CHAR2 = "Y^2+X*Y=X^3+(1/T^2)*X^2+(T-1)^2/T^8"


@record(2)
def test_c2_char2_square_times_linear():
    for q in (2, 4, 8):
        F = field_for_q(q)
        target = frobenius_image(instantiate(get_entry("Thm2.4a-31"), F))
        for entry_id in ("Thm2.4a-13", "Thm2.4a-31", "Thm2.4a-strong"):
            rep = analyze_entry(entry_id, F)
            assert rep.pole_order == 6
            assert rep.strong_weil == target
        stated = analyze(eq(STATED_CHAR2, F))
        via_entry = analyze_entry("Thm2.4a-strong", F)
        assert stated.strong_weil == target and stated.frobenius_offset == 1
        for attr in ("pole_order", "self_pairing", "deg_pi", "frobenius_offset"):
            assert getattr(stated, attr) == getattr(via_entry, attr)
        assert stated.cycle.as_dict() == via_entry.cycle.as_dict()
    return "pole order 6 at q = 2, 4, 8; strong curve is the Frobenius of (31)"


# ---- 3 ---------------------------------------------------------------------

CHAR3_STRONG = {"Y^2=X^3+T*(T+1)*X^2+T^2*X": 4, "Y^2=X^3+T^2*X^2+T*X": 6}


@record(3)
def test_c3_char3_two_classes():
    for q in (3, 9):
        F = field_for_q(q)
        members = [e for e in load_catalog()
                   if e.char == "3" and e.expected["conductor"] == "T^2*(T-1)"]
        reports = {e.id: analyze_entry(e.id, F) for e in members}
        classes = []
        for entry_id, rep in reports.items():
            for cls in classes:
                if same_class_data(reports[cls[0]].profile, rep.profile):
                    cls.append(entry_id)
                    break
            else:
                classes.append([entry_id])
        assert len(classes) == 2, classes
        found = {}
        for cls in classes:
            strong = {reports[i].strong_weil for i in cls}
            poles = {reports[i].pole_order for i in cls}
            assert len(strong) == 1 and len(poles) == 1
            found[strong.pop()] = poles.pop()
        assert found == {eq(text, F): pole for text, pole in CHAR3_STRONG.items()}
    return "two classes at q = 3, 9 with pole orders 4 and 6"


# ---- 4 ---------------------------------------------------------------------

LAST_ROW = {"E1": ("E1-411*", 4), "E2": ("E2-21", 2), "E3": ("E3-31", 3), "E4": ("E4-11", 1)}


@record(4)
def test_c4_large_characteristic_boxes():
    for q in (7, 11, 13):
        F = field_for_q(q)
        for e in load_catalog():
            if e.char != ">=5":
                continue
            if e.isogeny_class not in LAST_ROW:
                continue
            last, pole = LAST_ROW[e.isogeny_class]
            rep = analyze_entry(e.id, F)
            assert rep.pole_order == pole, (q, e.id)
            assert rep.strong_weil == instantiate(get_entry(last), F), (q, e.id)
    for q in (5, 25):
        F = field_for_q(q)
        rep = analyze_entry("E4-11", F)
        assert rep.pole_order == 5
        assert rep.strong_weil == eq("Y^2=X^3+3*T^4*X-T*(T-2)^5", F)
    return "last rows at q = 7, 11, 13 with poles 4, 2, 3, 1; E4 pole 5 at q = 5, 25"


# ---- 5 ---------------------------------------------------------------------

@record(5)
def test_c5_j_invariants_and_classes():
    cat = load_catalog()
    boxes = {}
    for e in cat:
        if e.char == ">=5" and e.isogeny_class in LAST_ROW:
            boxes.setdefault(e.isogeny_class, []).append(e)
    for q in (7, 11):
        for cls, entries in boxes.items():
            for e in entries:
                assert verify_entry(e, q).checks["j"] is True, (q, e.id)
            if len(entries) > 1:
                assert isogeny_class_consistency(entries, q), (q, cls)
        for a, b in itertools.combinations(sorted(boxes), 2):
            assert classes_distinguished(boxes[a][0], boxes[b][0], q), (q, a, b)
            assert not isogeny_class_consistency([boxes[a][0], boxes[b][0]], q)
    return "closed-form j over F_7 and F_11; boxes consistent and pairwise distinct"


# ---- 6 ---------------------------------------------------------------------

EX31 = {"Ex3.1-3333": (3, 3, 3, 3), "Ex3.1-9111": (9, 1, 1, 1), "Ex3.1-5511": (5, 5, 1, 1),
        "Ex3.1-5115": (5, 1, 1, 5), "Ex3.1-5151": (5, 1, 5, 1)}


@record(6)
def test_c6_five_curves_over_f4():
    F = field_for_q(4)
    s = cube_root_of_unity(F)
    where = (Place(None), Place(F.one), Place(s), Place(s * s))
    findings, offsets = [], []
    for entry_id, vector in EX31.items():
        E = instantiate(get_entry(entry_id), F)
        poles = pole_orders(E)
        assert tuple(poles.get(v, 0) for v in where) == vector, entry_id
        report = verify_entry(get_entry(entry_id), F)
        assert report.passed, (entry_id, report.checks)
        findings += report.findings
        a = report.analysis
        assert a.strong_weil is not None
        offsets.append(f"{entry_id[6:]}:{a.frobenius_offset if a.frobenius_offset is not None else a.strong_source}")
    for f in findings:
        print("finding:", f)
    return "offsets " + ", ".join(offsets) + (f"; {len(findings)} finding(s)" if findings else "; no findings")


# ---- 7 ---------------------------------------------------------------------

@record(7)
def test_c7_three_linear_degree_four():
    F = field_for_q(4)
    s = cube_root_of_unity(F)
    v = s * s
    want = classify_conductor(Poly.linear(F.zero) * Poly.linear(F.one) * Poly.linear(v))
    seen = []
    for entry_id in ("Ex3.1-9111", "Ex3.1-5511", "Ex3.1-5115", "Ex3.1-5151"):
        # T -> s^2 T + 1 carries the roots 0, 1, s^2 to 1, s, s^2
        E = substitute_affine(instantiate(get_entry(entry_id), F), v, F.one)
        rep = analyze(E, shape=want)
        assert rep.deg_pi == 4, (entry_id, rep.deg_pi)
        seen.append(rep.pole_order)
    return f"deg_pi = 4 for all four classes (pole orders {seen})"


# ---- 8 ---------------------------------------------------------------------

@record(8)
def test_c8_semistable_strong_curves():
    n = 0
    for e, q, rep in catalog_runs():
        a = rep.analysis
        if not e.expected.get("semistable") or a.strong_weil is None:
            continue
        p = field_for_q(q).p
        assert a.pole_order % p != 0, (e.id, q)
        assert is_frobenius_minimal(a.strong_weil), (e.id, q)
        n += 1
    assert n > 0
    return f"{n} semistable runs"


# ---- 9 ---------------------------------------------------------------------

@record(9)
def test_c9_degree_bounds():
    runs = catalog_runs()
    for e, q, rep in runs:
        a = rep.analysis
        assert 2 * a.deg_pi >= q, (e.id, q)
        assert a.pole_order * a.deg_pi == a.self_pairing <= 4 * q * q + q + 1, (e.id, q)
    return f"{len(runs)} analyses over q in {list(Q_MATRIX)}"


# ---- 10 --------------------------------------------------------------------

def _torsion_models(q):
    """All coefficient tuples for q <= 5; the normal-form families beyond that."""
    F = field_for_q(q)
    els = F.elements()
    if q <= 5:
        yield from itertools.product(els, repeat=5)
        return
    z, o = F.zero, F.one
    if F.p == 2:
        for a2, a6 in itertools.product(els, repeat=2):
            yield o, a2, z, z, a6
        for a3, a4, a6 in itertools.product(els, repeat=3):
            yield z, z, a3, a4, a6
    else:
        for a2, a6 in itertools.product(els, repeat=2):
            yield z, a2, z, z, a6
        for a4, a6 in itertools.product(els, repeat=2):
            yield z, z, z, a4, a6


def _pole_routes():
    n = 0
    for e, q, rep in catalog_runs():
        a = rep.analysis
        basis = pole_order_basis(a.cycle, a.context)
        assert basis == pole_order_gcd_route(a.profile) == a.pole_order, (e.id, q)
        assert min_positive_pairing(a.cycle, a.context) == basis, (e.id, q)
        n += 1
    return n


def _torsion():
    n = 0
    for q in (2, 4, 8, 3, 9, 5):
        F = field_for_q(q)
        for coeffs in _torsion_models(q):
            E = Curve.over_fq(F, *coeffs)
            if invariants(E).delta == 0:
                continue
            assert torsion_by_model(E) == torsion_by_group(E), (q, E.to_expr())
            n += 1
    return n


def _tripling():
    for q in (3, 9):
        F = field_for_q(q)
        for a6 in F.elements()[1:]:
            E = Curve.over_fq(F, 0, 1, 0, 0, a6)
            for P in rational_points(E):
                if P is None:
                    continue
                x = P[0]
                if x ** 3 + a6 == 0:
                    with pytest.raises(DenominatorVanishes):
                        triple_x(E, x)
                    assert multiply_point(E, 3, P) is None
                    continue
                P3 = multiply_point(E, 3, P)
                assert P3 is not None and triple_x(E, x) == P3[0]
    F3 = field_for_q(3)
    assert triple_x(Curve.over_fq(F3, 0, 1, 0, 0, 1), F3.zero) == 1


def _twists():
    for q in range(3, 26, 2):
        if not _is_prime_power(q):
            continue
        F = field_for_q(q)
        for a2, a4, a6 in itertools.islice(itertools.product(F.elements(), repeat=3), 0, None, 5):
            E = Curve.over_fq(F, 0, a2, 0, a4, a6)
            if invariants(E).delta == 0:
                continue
            assert count_points(E) + count_points(quadratic_twist(E)) == 2 * q + 2, (q, E.to_expr())


def _is_prime_power(n):
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def _hasse():
    ids = ("E1-222*", "E1-114*", "E1-141*", "E1-411*", "E2-12", "E2-21", "E3-13", "E3-31", "E4-11")
    for q in (5, 7, 25):
        F = field_for_q(q)
        for entry_id in ids:
            E = instantiate(get_entry(entry_id), F)
            prof = reduction_profile(E)
            delta = invariants(E).delta
            for a in F.elements():
                if prof.at(Place(a)).type is ReductionType.GOOD and delta.num(a) != 0:
                    assert check_congruence(E, a), (q, entry_id, a.to_expr())


@record(10)
def test_c10_oracle_equivalences():
    runs = _pole_routes()
    curves = _torsion()
    _tripling()
    _twists()
    _hasse()
    return f"pole routes on {runs} analyses; torsion on {curves} curves; tripling, twists, Hasse"


@settings(max_examples=150, deadline=None)
@given(st.sampled_from((3, 9)), st.data())
def test_c10_tripling_matches_group_law_random(q, data):
    F = field_for_q(q)
    a6 = F(data.draw(st.integers(1, q - 1)))
    E = Curve.over_fq(F, 0, 1, 0, 0, a6)
    pts = [P for P in rational_points(E) if P is not None]
    P = data.draw(st.sampled_from(pts))
    if P[0] ** 3 + a6 == 0:
        return
    assert triple_x(E, P[0]) == add_points(E, P, add_points(E, P, P))[0]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from((3, 5, 7, 9, 11, 13, 17, 19, 23, 25)), st.data())
def test_c10_twist_counts_random(q, data):
    F = field_for_q(q)
    coeffs = [F(data.draw(st.integers(0, q - 1))) for _ in range(5)]
    E = Curve.over_fq(F, *coeffs)
    if invariants(E).delta == 0:
        return
    assert count_points(E) + count_points(quadratic_twist(E)) == 2 * q + 2


# ---- 11 --------------------------------------------------------------------

def _irreducible(F, degree):
    """Least monic irreducible of degree 2 or 3 (no roots suffices)."""
    for tail in itertools.product(F.elements(), repeat=degree):
        f = Poly(F, list(tail) + [F.one])
        if all(f(x) != 0 for x in F.elements()):
            return f
    raise AssertionError("no irreducible polynomial found")


def _shapes(F):
    lin = Poly.linear
    z, o = F.zero, F.one
    out = {
        Splitting.CUBE: lin(z) ** 3,
        Splitting.SQUARE_TIMES_LINEAR: lin(z) ** 2 * lin(o),
        Splitting.LINEAR_TIMES_QUADRATIC: lin(z) * _irreducible(F, 2),
        Splitting.IRREDUCIBLE_CUBIC: _irreducible(F, 3),
    }
    if F.q >= 3:
        out[Splitting.THREE_DISTINCT_LINEAR] = lin(z) * lin(o) * lin(F.elements()[2])
    return out


@record(11)
def test_c11_graph_betti_numbers():
    n = 0
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13):
        F = field_for_q(q)
        for kind, f in _shapes(F).items():
            shape = classify_conductor(f)
            assert shape.splitting is kind
            g = build_graph(shape, F)
            want = q if shape.square_free else q - 1
            assert g.betti_number == genus(shape) == want, (q, kind)
            n += 1
    return f"{n} (shape, q) pairs; three linear factors need q >= 3"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-W", "ignore::pytest.PytestAssertRewriteWarning"]))
