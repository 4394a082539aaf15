"""Named curve families with expected invariants, and their verifier.

The data lives in ``catalog.json`` next to this module.  Equations, conductors
and closed-form j-invariants are strings in the expression grammar; parameter
names (``c``, ``s``) are bound per instantiation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .curves import (
    Curve,
    ReductionType,
    invariants,
    is_isomorphic,
    pole_orders,
    reduction_profile,
)
from .errors import ConstraintViolated, StrongWeilError
from .expr import parse_poly, parse_ratfunc
from .funcfield import Place, classify_conductor
from .gf import FieldCtx, cube_root_of_unity, field_for_q
from .homology import AnalysisReport, analyze

SCHEMA_VERSION = "1"


def _by_p(value, p):
    """Resolve a per-characteristic override ``{"5": x, "default": y}``."""
    if isinstance(value, dict):
        return value.get(str(p), value.get("default"))
    return value


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    char: str  # "2", "3", "5" or ">=5"
    q_constraint: str  # "any", "q = 1 mod 3" or "q = 4^m"
    params: dict  # name -> kind
    equation: str
    expected: dict

    @classmethod
    def from_dict(cls, d):
        return cls(d["id"], d["char"], d["q_constraint"], dict(d["params"]), d["equation"], dict(d["expected"]))

    def to_dict(self):
        return {
            "id": self.id,
            "char": self.char,
            "q_constraint": self.q_constraint,
            "params": self.params,
            "equation": self.equation,
            "expected": self.expected,
        }

    @property
    def isogeny_class(self):
        return self.expected["class"]

    def admits(self, ctx: FieldCtx) -> Optional[str]:
        """None when (p, q) satisfies the constraints, else the reason."""
        p, q = ctx.p, ctx.q
        if self.char.startswith(">="):
            if p < int(self.char[2:]):
                return f"needs characteristic {self.char}"
        elif p != int(self.char):
            return f"needs characteristic {self.char}"
        if self.q_constraint == "q = 1 mod 3" and q % 3 != 1:
            return "needs q = 1 mod 3"
        if self.q_constraint == "q = 4^m" and (p != 2 or ctx.e % 2):
            return "needs q a power of 4"
        return None

    def parameter_choices(self, ctx: FieldCtx) -> list:
        """All admissible bindings in canonical order (the first is the default)."""
        choices = [{}]
        for name, kind in self.params.items():
            if kind == "nonzero":
                values = [c for c in ctx.elements() if c != 0]
            elif kind == "noncube":
                values = [c for c in ctx.elements() if c != 0 and not _is_cube(c)]
            elif kind == "cube_root_of_unity":
                values = [cube_root_of_unity(ctx)]
            else:
                raise ValueError(f"unknown parameter kind {kind!r}")
            choices = [dict(b, **{name: v}) for b in choices for v in values]
        return choices

    def strong_flag(self, p):
        return _by_p(self.expected.get("strong_weil"), p)

    def class_pole_order(self, p):
        return _by_p(self.expected.get("class_pole_order"), p)


def _is_cube(c):
    q = c.ctx.q
    if (q - 1) % 3:
        return True
    return c ** ((q - 1) // 3) == 1


def _check_params(entry, ctx, params):
    for name, kind in entry.params.items():
        if name not in params:
            raise ConstraintViolated(f"{entry.id} needs parameter {name}")
        c = params[name]
        if kind == "nonzero" and c == 0:
            raise ConstraintViolated(f"{name} must be nonzero")
        if kind == "noncube" and (c == 0 or _is_cube(c)):
            raise ConstraintViolated(f"{name} must be a non-cube")
        if kind == "cube_root_of_unity" and (c * c + c + 1 != 0):
            raise ConstraintViolated(f"{name} must be a primitive cube root of unity")


def instantiate(entry: CatalogEntry, q_or_ctx, params=None) -> Curve:
    ctx = q_or_ctx if isinstance(q_or_ctx, FieldCtx) else field_for_q(q_or_ctx)
    reason = entry.admits(ctx)
    if reason:
        raise ConstraintViolated(f"{entry.id} at q={ctx.q}: {reason}")
    if params is None:
        params = entry.parameter_choices(ctx)[0]
    _check_params(entry, ctx, params)
    E = Curve.from_equation(entry.equation, ctx, params)
    invariants(E, require_nonsingular=True)
    return E


# ---- loading and saving -------------------------------------------------

def _catalog_text():
    return resources.files(__package__).joinpath("catalog.json").read_text(encoding="utf-8")


def dump_catalog(entries) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "entries": [e.to_dict() for e in entries]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_catalog(text: str) -> list:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported catalog schema {doc.get('schema_version')!r}")
    return [CatalogEntry.from_dict(d) for d in doc["entries"]]


def load_catalog() -> list:
    return parse_catalog(_catalog_text())


def get_entry(entry_id: str, catalog=None) -> CatalogEntry:
    for e in catalog or load_catalog():
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)


# ---- verification -------------------------------------------------------

def _place_from_label(label, ctx, params) -> Place:
    if label == "inf":
        return Place(None)
    v = parse_ratfunc(label, ctx, params)
    return Place(v.constant_value())


def class_members(entry: CatalogEntry, ctx: FieldCtx, catalog) -> list:
    return [e for e in catalog
            if e.isogeny_class == entry.isogeny_class and e.admits(ctx) is None]


def class_candidates(entry, ctx, params, catalog):
    out = []
    for e in class_members(entry, ctx, catalog):
        if e.id == entry.id or set(e.params) != set(entry.params):
            continue
        try:
            out.append((e.id, instantiate(e, ctx, params)))
        except StrongWeilError:
            continue
    return out


@dataclass
class VerificationReport:
    entry_id: str
    q: int
    params: dict
    checks: dict  # name -> True / False / None (not applicable)
    findings: list = field(default_factory=list)
    analysis: Optional[AnalysisReport] = None
    error: Optional[str] = None

    @property
    def passed(self):
        return self.error is None and all(v is not False for v in self.checks.values())

    def params_text(self):
        return ",".join(f"{k}={v.to_machine()}" for k, v in self.params.items())


def verify_entry(entry: CatalogEntry, q, params=None, catalog=None) -> VerificationReport:
    catalog = catalog if catalog is not None else load_catalog()
    ctx = q if isinstance(q, FieldCtx) else field_for_q(q)
    if params is None:
        params = entry.parameter_choices(ctx)[0]
    E = instantiate(entry, ctx, params)
    exp = entry.expected
    p = ctx.p
    checks = {}
    findings = []
    candidates = class_candidates(entry, ctx, params, catalog)
    rep = analyze(E, candidates=candidates, class_membership="catalog")

    expected_shape = classify_conductor(parse_poly(exp["conductor"], ctx, params))
    checks["conductor"] = (
        rep.shape.splitting is expected_shape.splitting
        and rep.shape.simple_linear_roots == expected_shape.simple_linear_roots
        and rep.shape.multiple_root == expected_shape.multiple_root
    )
    want_poles = {_place_from_label(k, ctx, params): v for k, v in exp["poles"].items()}
    checks["poles"] = pole_orders(E) == want_poles
    if exp.get("j") is not None:
        checks["j"] = invariants(E).j == parse_ratfunc(exp["j"], ctx, params)
    else:
        checks["j"] = None

    class_pole = entry.class_pole_order(p)
    checks["class_pole_order"] = None if class_pole is None else rep.pole_order == class_pole

    own_pole = want_poles.get(Place(None))
    computed_strong = rep.pole_order == own_pole
    flag = entry.strong_flag(p)
    if flag is None:
        checks["strong_weil"] = None
    elif exp.get("strong_check") == "finding":
        checks["strong_weil"] = None
        if computed_strong != flag:
            findings.append(
                f"{entry.id}: listed as {'strong' if flag else 'not strong'}, "
                f"but the computed class pole order is {rep.pole_order} against {own_pole}")
    else:
        checks["strong_weil"] = computed_strong == flag

    # the located strong curve must match the entry flagged strong in this class
    flagged = [e for e in class_members(entry, ctx, catalog)
               if e.strong_flag(p) and set(e.params) == set(entry.params)]
    if rep.strong_weil is None:
        checks["strong_curve"] = False if flagged else None
        if not flagged:
            findings.append(f"{entry.id}: strong curve not located ({'; '.join(rep.notes)})")
    elif flagged:
        target = instantiate(flagged[0], ctx, params)
        checks["strong_curve"] = is_isomorphic(rep.strong_weil, target)
    else:
        checks["strong_curve"] = None
    checks["offset"] = None if not computed_strong else rep.frobenius_offset == rep.input_frobenius_depth
    checks["bounds"] = rep.degree_bounds_hold()
    return VerificationReport(entry.id, ctx.q, dict(params), checks, findings, rep)


def verify_catalog(q_list, entry_id=None, all_params=False, catalog=None):
    """Yield (entry, q, VerificationReport or skip reason) in catalog order."""
    catalog = catalog if catalog is not None else load_catalog()
    for entry in catalog:
        if entry_id is not None and entry.id != entry_id:
            continue
        for q in q_list:
            ctx = field_for_q(q)
            reason = entry.admits(ctx)
            if reason:
                yield entry, q, reason
                continue
            choices = entry.parameter_choices(ctx)
            if not choices:
                yield entry, q, "no admissible parameter"
                continue
            for params in (choices if all_params else choices[:1]):
                try:
                    yield entry, q, verify_entry(entry, ctx, params, catalog)
                except StrongWeilError as exc:
                    yield entry, q, VerificationReport(entry.id, q, dict(params), {}, [],
                                                       None, f"{type(exc).__name__}: {exc}")


# ---- isogeny classes ----------------------------------------------------

def _good_counts(E):
    prof = reduction_profile(E)
    return [(e.place, e.type is ReductionType.GOOD, e.count if e.type is ReductionType.GOOD else None)
            for e in prof.finite()]


def _smooth_ratio(a, b, p):
    big, small = max(a, b), min(a, b)
    if big % small:
        return False
    r = big // small
    for ell in (2, 3, p):
        while r % ell == 0:
            r //= ell
    return r == 1


def isogeny_class_consistency(entries, q, params=None) -> bool:
    """Equal good-place counts across the entries and pole ratios built from 2, 3 and p."""
    ctx = field_for_q(q)
    if len(entries) < 2:
        raise ValueError("need at least two entries")
    curves = [instantiate(e, ctx, params if e.params else {}) for e in entries]
    data = [_good_counts(E) for E in curves]
    if any(d != data[0] for d in data[1:]):
        return False
    poles = [pole_orders(E) for E in curves]
    for i in range(len(curves)):
        for k in range(i + 1, len(curves)):
            for v in set(poles[i]) | set(poles[k]):
                a, b = poles[i].get(v), poles[k].get(v)
                if a is None or b is None or not _smooth_ratio(a, b, ctx.p):
                    return False
    return True


def classes_distinguished(entry_a, entry_b, q, params=None) -> bool:
    """True when some good linear place has different point counts."""
    ctx = field_for_q(q)
    Ea = instantiate(entry_a, ctx, params if entry_a.params else {})
    Eb = instantiate(entry_b, ctx, params if entry_b.params else {})
    for (va, ga, ca), (vb, gb, cb) in zip(_good_counts(Ea), _good_counts(Eb)):
        if ga and gb and ca != cb:
            return True
    return False
