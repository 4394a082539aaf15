"""Quotient graph, harmonic cycles and the strong Weil locator for deg(n) = 3.

A cycle is stored by its values on the q+1 edges at the vertex ``e01``; these
are indexed by P^1(F_q) in canonical order (field enumeration, then infinity).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curves import (
    Curve,
    ReductionProfile,
    ReductionType,
    frobenius_image,
    frobenius_minimal_form,
    invariants,
    is_frobenius_minimal,
    reduction_profile,
    simplify_model,
)
from .errors import (
    ContextMismatch,
    NonIntegralDegree,
    OffsetNotPowerOfP,
    ProfileInconsistent,
    ZeroCycle,
)
from .funcfield import ConductorShape, Place, places, shape_from_places, valuation
from .gf import FieldCtx


def genus(shape: ConductorShape) -> int:
    return shape.q if shape.square_free else shape.q - 1


# ---- the graph ----------------------------------------------------------

def _node_label(ctx, a):
    return "inf" if a is None else str(a.code)


@dataclass(frozen=True)
class QuotientGraph:
    q: int
    vertices: tuple
    edges: tuple  # (tail, head, place label); parallel edges repeat
    cusps: tuple  # (vertex, place label)

    @property
    def betti_number(self):
        return len(self.edges) - len(self.vertices) + 1

    def to_dict(self):
        return {
            "q": self.q,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "cusps": [list(c) for c in self.cusps],
            "betti_number": self.betti_number,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self):
        lines = ["graph quotient {", f'  label="b1={self.betti_number}";']
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for tail, head, lab in self.edges:
            lines.append(f'  "{tail}" -- "{head}" [label="{lab}"];')
        for i, (v, lab) in enumerate(self.cusps):
            c = f"cusp_{i}"
            lines.append(f'  "{c}" [shape=point];')
            lines.append(f'  "{v}" -- "{c}" [style=dashed, label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(shape: ConductorShape, ctx: FieldCtx) -> QuotientGraph:
    vertices = ["e01", "e11"]
    edges = []
    cusps = []
    path_places = sorted(shape.simple_linear_roots, key=lambda a: a.code) + [None]
    for a in ctx.elements():
        if not shape.divides(a):
            edges.append(("e01", "e11", a.to_machine()))
    for a in path_places:
        lab = _node_label(ctx, a)
        shown = "inf" if a is None else a.to_machine()
        n1, n2 = f"pth_{lab}_1", f"pth_{lab}_2"
        vertices += [n1, n2]
        edges += [("e01", n1, shown), (n1, n2, shown), (n2, "e11", shown)]
        cusps += [(n1, shown), (n2, shown)]
    if shape.multiple_root is not None:
        shown = shape.multiple_root.to_machine()
        cusps += [("e01", shown), ("e11", shown)]
    g = QuotientGraph(ctx.q, tuple(vertices), tuple(edges), tuple(cusps))
    assert g.betti_number == genus(shape)
    return g


# ---- cycles and pairing -------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    ctx: FieldCtx
    values: tuple  # aligned with places(ctx)

    def __getitem__(self, v: Place):
        if v.is_infinite:
            return self.values[-1]
        return self.values[v.a.code]

    def is_zero(self):
        return not any(self.values)

    def as_dict(self):
        return {v.label(): x for v, x in zip(places(self.ctx), self.values)}


@dataclass(frozen=True)
class GraphContext:
    shape: ConductorShape
    ctx: FieldCtx
    weights: tuple  # aligned with places(ctx)
    genus: int
    basis: tuple  # field elements a indexing delta_a - delta_inf

    @property
    def q(self):
        return self.ctx.q

    def basis_cycle(self, a):
        vals = [0] * (self.q + 1)
        vals[a.code] = 1
        vals[-1] = -1
        return Cycle(self.ctx, tuple(vals))

    def check(self, c: Cycle):
        if c.ctx != self.ctx or len(c.values) != self.q + 1:
            raise ContextMismatch("cycle lives over a different field")
        if sum(c.values) != 0:
            raise ContextMismatch("cycle is not harmonic at e01")
        m = self.shape.multiple_root
        if m is not None and c.values[m.code] != 0:
            raise ContextMismatch("cycle is nonzero on the multiple root")


def graph_context(shape: ConductorShape, profile: ReductionProfile) -> GraphContext:
    q = profile.q
    weights = tuple(q + 1 if e.type.multiplicative else 1 for e in profile.entries)
    basis = tuple(a for a in profile.ctx.elements() if a != shape.multiple_root)
    return GraphContext(shape, profile.ctx, weights, genus(shape), basis)


def _check_profile_matches(profile: ReductionProfile, shape: ConductorShape):
    profile.require_split_at_infinity()
    for e in profile.finite():
        a = e.place.a
        if a == shape.multiple_root:
            ok = e.type is ReductionType.ADDITIVE
        elif a in shape.simple_linear_roots:
            ok = e.type.multiplicative
        else:
            ok = e.type is ReductionType.GOOD
        if not ok:
            raise ProfileInconsistent(
                f"reduction at T-({a.to_expr()}) is {e.type.value}, "
                f"incompatible with conductor {shape.describe()}")


def build_cycle(profile: ReductionProfile, shape: ConductorShape) -> Cycle:
    _check_profile_matches(profile, shape)
    vals = []
    for e in profile.entries:
        if e.type is ReductionType.GOOD:
            vals.append(-e.lam)
        elif e.type is ReductionType.SPLIT:
            vals.append(-1)
        elif e.type is ReductionType.NONSPLIT:
            vals.append(1)
        else:
            vals.append(0)
    assert vals[-1] == -1
    if sum(vals) != 0:
        raise ProfileInconsistent(f"cycle values sum to {sum(vals)}, not 0")
    return Cycle(profile.ctx, tuple(vals))


def pairing(phi: Cycle, psi: Cycle, ctx: GraphContext) -> int:
    ctx.check(phi)
    ctx.check(psi)
    return sum(w * x * y for w, x, y in zip(ctx.weights, phi.values, psi.values))


def basis_pairings(phi: Cycle, ctx: GraphContext) -> list:
    """<phi, delta_a - delta_inf> = w_a phi(a) - w_inf phi(inf) over the basis."""
    ctx.check(phi)
    w_inf, phi_inf = ctx.weights[-1], phi.values[-1]
    return [ctx.weights[a.code] * phi.values[a.code] - w_inf * phi_inf for a in ctx.basis]


def pole_order_basis(phi: Cycle, ctx: GraphContext) -> int:
    if phi.is_zero():
        raise ZeroCycle("the zero cycle has no pole order")
    g = 0
    for x in basis_pairings(phi, ctx):
        g = math.gcd(g, abs(x))
    return g


def pole_order_gcd_route(profile: ReductionProfile) -> int:
    """gcd of good-place counts, combined with 2q+2 when a linear place is non-split."""
    profile.require_split_at_infinity()
    N = 0
    for c in profile.good_counts():
        N = math.gcd(N, c)
    if profile.places_of(ReductionType.NONSPLIT):
        N = math.gcd(N, 2 * profile.q + 2)
    if N == 0:
        raise ProfileInconsistent("no good or non-split linear place to bound the pole order")
    return N


def min_positive_pairing(phi: Cycle, ctx: GraphContext, bound: int = 3) -> Optional[int]:
    """Least positive <phi, psi> over cycles psi with every |psi(a)| <= bound.

    Dynamic programme over (sum of basis coordinates, pairing value); the
    value at infinity is minus that sum and is bounded as well.
    """
    g = basis_pairings(phi, ctx)
    n = len(g)
    smax = bound * n
    vmax = bound * sum(abs(x) for x in g)
    reach = np.zeros((2 * smax + 1, 2 * vmax + 1), dtype=bool)
    reach[smax, vmax] = True
    for gi in g:
        nxt = np.zeros_like(reach)
        for c in range(-bound, bound + 1):
            ds, dv = c, c * gi
            src = reach[max(0, -ds):reach.shape[0] - max(0, ds), max(0, -dv):reach.shape[1] - max(0, dv)]
            nxt[max(0, ds):max(0, ds) + src.shape[0], max(0, dv):max(0, dv) + src.shape[1]] |= src
        reach = nxt
    admissible = reach[smax - bound:smax + bound + 1, vmax + 1:]
    hits = np.nonzero(admissible.any(axis=0))[0]
    return int(hits[0]) + 1 if hits.size else None


# ---- analysis -----------------------------------------------------------

@dataclass
class AnalysisReport:
    curve: Curve
    profile: ReductionProfile
    shape: ConductorShape
    context: GraphContext
    cycle: Cycle
    N: int
    pole_order: int
    pole_order_gcd: int
    self_pairing: int
    deg_pi: int
    frobenius_minimal: bool
    input_frobenius_depth: int  # input is this many Frobenius steps above its minimal form
    minimal_pole_order: int
    frobenius_offset: Optional[int]
    strong_weil: Optional[Curve]
    strong_source: str  # "input chain", "candidate <id>" or "none"
    class_membership: str = "unverified"
    notes: list = field(default_factory=list)

    @property
    def q(self):
        return self.profile.q

    @property
    def genus(self):
        return self.context.genus

    def degree_bounds_hold(self):
        q = self.q
        return 2 * self.deg_pi >= q and self.pole_order * self.deg_pi == self.self_pairing <= 4 * q * q + q + 1


def _pole_at_infinity(E: Curve) -> int:
    return -valuation(invariants(E).j, Place(None))


def _offset(pole, m0, p):
    if m0 <= 0 or pole % m0:
        return None
    r = pole // m0
    k = 0
    while r % p == 0:
        r //= p
        k += 1
    return k if r == 1 else None


def same_class_data(profile_a: ReductionProfile, profile_b: ReductionProfile) -> bool:
    """Equal counts at every good finite place and equal bad-place layout."""
    for ea, eb in zip(profile_a.finite(), profile_b.finite()):
        if (ea.type is ReductionType.GOOD) != (eb.type is ReductionType.GOOD):
            return False
        if ea.type is ReductionType.GOOD and ea.count != eb.count:
            return False
    return True


def analyze(E: Curve, shape: Optional[ConductorShape] = None, candidates=(),
            strict: bool = False, class_membership: str = "unverified") -> AnalysisReport:
    """Full analysis of a curve with split multiplicative reduction at infinity.

    ``candidates`` are (label, Curve) pairs tried when the strong curve is not
    in the Frobenius chain of the input (the class may contain several
    Frobenius-minimal curves).
    """
    profile = reduction_profile(E)
    profile.require_split_at_infinity()
    inferred = shape_from_places(
        E.ctx,
        profile.places_of(ReductionType.SPLIT, ReductionType.NONSPLIT),
        profile.places_of(ReductionType.ADDITIVE),
    )
    if shape is None:
        shape = inferred
    elif (shape.simple_linear_roots != inferred.simple_linear_roots
          or shape.multiple_root != inferred.multiple_root
          or shape.splitting is not inferred.splitting):
        raise ProfileInconsistent(
            f"curve has conductor shape {inferred.describe()}, not {shape.describe()}")
    phi = build_cycle(profile, shape)
    gctx = graph_context(shape, profile)
    pole = pole_order_basis(phi, gctx)
    pole_gcd = pole_order_gcd_route(profile)
    if pole != pole_gcd:
        raise ProfileInconsistent(f"pole order routes disagree: basis {pole}, gcd {pole_gcd}")
    N = 0
    for c in profile.good_counts():
        N = math.gcd(N, c)
    sp = pairing(phi, phi, gctx)
    if sp % pole:
        raise NonIntegralDegree(f"<phi,phi> = {sp} is not divisible by the pole order {pole}")
    deg_pi = sp // pole

    p = E.ctx.p
    minimal = is_frobenius_minimal(E)
    E_min, depth = frobenius_minimal_form(E)
    m0 = _pole_at_infinity(E_min)
    offset = _offset(pole, m0, p)
    strong, source = None, "none"
    notes = []
    if offset is not None:
        source = "input chain"
        strong = E if offset == depth else simplify_model(frobenius_image(E_min, offset))
    else:
        for label, C in candidates:
            try:
                prof_c = reduction_profile(C)
            except Exception:  # candidate not admissible here
                continue
            if not prof_c.split_at_infinity or not same_class_data(profile, prof_c):
                continue
            C_min, c_depth = frobenius_minimal_form(C)
            k = _offset(pole, _pole_at_infinity(C_min), p)
            if k is None:
                continue
            strong = C if k == c_depth else simplify_model(frobenius_image(C_min, k))
            source = f"candidate {label}"
            notes.append(f"strong curve is {k} Frobenius step(s) above the minimal form of {label}")
            break
        if strong is None:
            msg = (f"pole order {pole} is not a p-power multiple of the minimal pole order {m0}; "
                   "the strong curve lies outside the input's Frobenius chain")
            if strict:
                raise OffsetNotPowerOfP(msg)
            notes.append(msg)
    report = AnalysisReport(
        curve=E, profile=profile, shape=shape, context=gctx, cycle=phi, N=N,
        pole_order=pole, pole_order_gcd=pole_gcd, self_pairing=sp, deg_pi=deg_pi,
        frobenius_minimal=minimal, input_frobenius_depth=depth, minimal_pole_order=m0,
        frobenius_offset=offset, strong_weil=strong, strong_source=source,
        class_membership=class_membership, notes=notes,
    )
    if strong is not None:
        assert _pole_at_infinity(strong) == pole
    return report


def strong_weil_curve(E: Curve, shape: Optional[ConductorShape] = None, candidates=()) -> Curve:
    rep = analyze(E, shape, candidates)
    if rep.strong_weil is None:
        raise OffsetNotPowerOfP(rep.notes[-1])
    return rep.strong_weil
