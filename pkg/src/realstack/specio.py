"""JSON forms of groups, spaces, curve specs and gerbes.

Parsing reports the location of a problem as a path into the document,
e.g. ``$.components[2].loops[0]``.
"""
from __future__ import annotations

import json
from pathlib import Path

from .group_core import (
    Automorphism,
    FiniteGroup,
    GGroup,
    GroupError,
    by_name,
    involutions,
    make_automorphism,
    make_group,
)
from .quotient_stack import FiniteGSpace
from .split_gerbe import Base, GerbeError, MonodromyGerbe, RealComponentGerbe, validate
from .stacky_curve import BranchPoint, RealComponentSpec, StackyCurveSpec

SCHEMA = "realstack/v1"


class SpecError(ValueError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class Malformed(SpecError):
    pass


class InvariantViolated(SpecError):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _get(doc, key, path, kind=None, default=...):
    if not isinstance(doc, dict):
        raise Malformed(path, "expected an object")
    if key not in doc:
        if default is ...:
            raise Malformed(f"{path}.{key}", "missing field")
        return default
    val = doc[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise Malformed(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return val


def _int_list(val, path):
    if not isinstance(val, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                            for v in val):
        raise Malformed(path, "expected a list of integers")
    return val


# groups

def parse_group(doc, path="$") -> FiniteGroup:
    if isinstance(doc, str):
        try:
            return by_name(doc)
        except GroupError as exc:
            raise InvariantViolated(path, str(exc)) from None
    order = _get(doc, "order", path, int)
    table = _get(doc, "table", path, list)
    if len(table) != order:
        raise Malformed(f"{path}.table", f"expected {order} rows")
    for i, row in enumerate(table):
        _int_list(row, f"{path}.table[{i}]")
        if len(row) != order:
            raise Malformed(f"{path}.table[{i}]", f"expected {order} entries")
    try:
        return make_group(table)
    except GroupError as exc:
        raise InvariantViolated(f"{path}.table", str(exc)) from None


def group_to_json(group: FiniteGroup) -> dict:
    return {"order": group.order, "table": group.table.tolist()}


def parse_sigma(group: FiniteGroup, doc, path="$") -> Automorphism:
    """``"id"``, an explicit permutation, or an index into the involution list."""
    try:
        if doc == "id":
            return Automorphism.identity(group.order)
        if isinstance(doc, int) and not isinstance(doc, bool):
            invs = involutions(group)
            if not 0 <= doc < len(invs):
                raise InvariantViolated(path, f"involution index {doc} out of range")
            return invs[doc]
        return make_automorphism(group, _int_list(doc, path))
    except GroupError as exc:
        raise InvariantViolated(path, str(exc)) from None


def parse_ggroup(group_doc, sigma_doc, path="$", sigma_path=None) -> GGroup:
    group = parse_group(group_doc, path)
    sigma = parse_sigma(group, sigma_doc, sigma_path or path)
    try:
        return GGroup(group, sigma)
    except GroupError as exc:
        raise InvariantViolated(sigma_path or path, str(exc)) from None


# spaces

def parse_space(doc, path="$") -> FiniteGSpace:
    gg = parse_ggroup(_get(doc, "group", path), _get(doc, "sigma_group", path, default="id"),
                      f"{path}.group", f"{path}.sigma_group")
    m = _get(doc, "carrier", path, int)
    sigma_x = _int_list(_get(doc, "sigma_x", path), f"{path}.sigma_x")
    action = _get(doc, "action", path, list)
    for i, row in enumerate(action):
        _int_list(row, f"{path}.action[{i}]")
    if len(sigma_x) != m:
        raise Malformed(f"{path}.sigma_x", f"expected {m} entries")
    try:
        return FiniteGSpace(gg, tuple(sigma_x), tuple(tuple(r) for r in action))
    except GroupError as exc:
        raise InvariantViolated(path, str(exc)) from None


def space_to_json(space: FiniteGSpace) -> dict:
    return {
        "group": group_to_json(space.gg.group),
        "sigma_group": list(space.gg.sigma.perm),
        "carrier": space.carrier,
        "sigma_x": list(space.sigma_x),
        "action": [list(r) for r in space.action],
    }


# curves

def parse_curve(doc, path="$"):
    """A :class:`StackyCurveSpec`, or the dict itself for ``abelian_inversion`` specs."""
    kind = _get(doc, "kind", path, str, default="stacky_curve")
    if kind == "abelian_inversion":
        for key in ("g", "k"):
            _get(doc, key, path, int)
        return doc
    if kind != "stacky_curve":
        raise Malformed(f"{path}.kind", f"unknown curve kind {kind!r}")
    bps = []
    for i, b in enumerate(_get(doc, "branch_points", path, list, default=[])):
        p = f"{path}.branch_points[{i}]"
        kernel = _get(b, "kernel", p, default=None)
        if kernel is not None:
            kernel = tuple(_int_list(kernel, f"{p}.kernel"))
        bps.append(BranchPoint(parse_group(_get(b, "stabilizer", p), f"{p}.stabilizer"),
                               bool(_get(b, "real", p, bool, default=False)), kernel))
    comps = []
    for i, c in enumerate(_get(doc, "real_components", path, list, default=[])):
        p = f"{path}.real_components[{i}]"
        try:
            comps.append(RealComponentSpec(_get(c, "shape", p, str),
                                           _get(c, "special_points", p, int, default=0)))
        except GroupError as exc:
            raise InvariantViolated(p, str(exc)) from None
    qrc = _get(doc, "quotient_real_components", path, list, default=None)
    try:
        return StackyCurveSpec(
            h_star_M_complex=_get(doc, "h_star_M_complex", path, int, default=None),
            kernel_order=_get(doc, "kernel_order", path, int, default=1),
            branch_points=tuple(bps),
            real_components=tuple(comps),
            faithful=_get(doc, "faithful", path, bool, default=True),
            proper=_get(doc, "proper", path, bool, default=False),
            genus=_get(doc, "genus", path, int, default=None),
            gamma_abelian=_get(doc, "gamma_abelian", path, bool, default=False),
            quotient_real_components=tuple(qrc) if qrc is not None else None,
        )
    except GroupError as exc:
        raise InvariantViolated(path, str(exc)) from None


# gerbes

def _table(doc, path):
    if doc is None:
        return None
    if not isinstance(doc, dict):
        raise Malformed(path, "expected an object keyed by orbit size")
    out = {}
    for k, v in doc.items():
        try:
            out[int(k)] = int(v)
        except (TypeError, ValueError):
            raise Malformed(f"{path}.{k}", "expected integer keys and values") from None
    return out


def parse_gerbe(doc, path="$") -> MonodromyGerbe:
    fiber = parse_ggroup(_get(doc, "fiber", path), _get(doc, "sigma", path, default="id"),
                         f"{path}.fiber", f"{path}.sigma")
    G = fiber.group

    def auto(d, p):
        try:
            return make_automorphism(G, _int_list(d, p))
        except GroupError as exc:
            raise InvariantViolated(p, str(exc)) from None

    gens = tuple(auto(d, f"{path}.global_generators[{i}]")
                 for i, d in enumerate(_get(doc, "global_generators", path, list, default=[])))
    bdoc = _get(doc, "base", path, dict)
    try:
        base = Base(_get(bdoc, "kind", f"{path}.base", str),
                    _get(bdoc, "genus", f"{path}.base", int, default=None),
                    _table(_get(bdoc, "complex_table", f"{path}.base", default=None),
                           f"{path}.base.complex_table"))
    except GroupError as exc:
        raise InvariantViolated(f"{path}.base", str(exc)) from None
    comps = []
    for i, c in enumerate(_get(doc, "components", path, list, default=[])):
        p = f"{path}.components[{i}]"
        loops = tuple(auto(d, f"{p}.loops[{j}]")
                      for j, d in enumerate(_get(c, "loops", p, list, default=[])))
        comps.append(RealComponentGerbe(
            shape=_get(c, "shape", p, str),
            loop_generators=loops,
            omega=tuple(_int_list(_get(c, "omega", p, default=[]), f"{p}.omega")),
            real_table=_table(_get(c, "real_table", p, default=None), f"{p}.real_table"),
            name=_get(c, "name", p, str, default=""),
        ))
    gerbe = MonodromyGerbe(fiber, gens, base, tuple(comps),
                           _get(doc, "surface_generators", path, bool, default=False))
    try:
        validate(gerbe)
    except GerbeError as exc:
        where = path if exc.component is None else f"{path}.components[{exc.component}]"
        raise InvariantViolated(where, f"{type(exc).__name__}: {exc}") from None
    return gerbe


def gerbe_to_json(gerbe: MonodromyGerbe) -> dict:
    base = {"kind": gerbe.base.kind}
    if gerbe.base.genus is not None:
        base["genus"] = gerbe.base.genus
    if gerbe.base.complex_table is not None:
        base["complex_table"] = {str(k): v for k, v in gerbe.base.complex_table.items()}
    comps = []
    for c in gerbe.components:
        d = {"shape": c.shape, "loops": [list(a.perm) for a in c.loop_generators],
             "omega": list(c.omega)}
        if c.real_table is not None:
            d["real_table"] = {str(k): v for k, v in c.real_table.items()}
        if c.name:
            d["name"] = c.name
        comps.append(d)
    return {
        "fiber": group_to_json(gerbe.fiber.group),
        "sigma": list(gerbe.fiber.sigma.perm),
        "global_generators": [list(a.perm) for a in gerbe.global_generators],
        "base": base,
        "surface_generators": gerbe.surface_generators,
        "components": comps,
    }


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise Malformed("$", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise Malformed("$", f"cannot read {path}: {exc.strerror}") from None
