"""Verification campaigns over generated instances.

Every instance is drawn from its own generator keyed by ``(seed, index)``,
so a campaign can be split across processes at any boundary and still
produce the same stream, and any single instance can be regenerated alone.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import specio
from .galois_h1 import h1
from .group_core import (
    Automorphism,
    GGroup,
    catalog,
    automorphisms,
    elementary_abelian_2,
    involutions,
)
from .quotient_stack import (
    SpaceSampler,
    canonical_key,
    real_locus,
    smith_thom_finite,
    torsor_oracle,
)
from .split_gerbe import Base, MonodromyGerbe, RealComponentGerbe, smith_thom_gerbe

KINDS = ("bgamma", "quotient", "gerbe2torsion")


@dataclass
class Campaign:
    kind: str
    seed: int = 0
    count: int = 1000
    max_order: int = 8
    max_carrier: int = 6
    max_rank: int = 3
    max_genus: int = 4
    workers: int = 1
    out_dir: str | None = None  # where replay files for violations go

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown campaign kind {self.kind!r}")


@dataclass
class Violation:
    kind: str
    index: int
    instance: dict
    values: dict
    campaign: dict = field(default_factory=dict)


@dataclass
class Summary:
    kind: str
    checked: int
    unique: int
    violations: list
    wall_time_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "checked": self.checked,
            "unique": self.unique,
            "violations": [asdict(v) for v in self.violations],
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


# single-instance checkers: instance json -> (ok, values)

def check_bgamma(inst: dict):
    gg = specio.parse_ggroup(inst["group"], inst["sigma"])
    n_h1 = h1(gg).count
    n_cc = gg.group.class_count
    return n_h1 <= n_cc, {"h1": n_h1, "conjugacy_classes": n_cc}


def check_quotient(inst: dict):
    space = specio.parse_space(inst)
    rep = smith_thom_finite(space)
    dec = real_locus(space)
    oracle = torsor_oracle(space)
    per = oracle.per_class()
    classwise = all(per.get(c.class_id, 0) == c.count for c in dec.components)
    ok = rep.holds and dec.total == oracle.count and classwise
    return ok, {"real": rep.real, "inertia": rep.inertia, "oracle": oracle.count,
                "classwise": classwise}


def check_gerbe(inst: dict):
    gerbe = specio.parse_gerbe(inst)
    rep = smith_thom_gerbe(gerbe)
    ok = rep.holds and rep.orbit_holds == rep.holds
    return ok, {"real": rep.real, "inertia": rep.inertia,
                "orbit_lhs": rep.orbit_lhs, "orbit_rhs": rep.orbit_rhs}


CHECKERS = {"bgamma": check_bgamma, "quotient": check_quotient, "gerbe2torsion": check_gerbe}


def replay(violation: Violation | dict, checker=None) -> bool:
    """True when the stored instance still fails its check."""
    if isinstance(violation, dict):
        violation = Violation(**violation)
    checker = checker or CHECKERS[violation.kind]
    ok, _ = checker(violation.instance)
    return not ok


# instance generators

@lru_cache(maxsize=None)
def _catalog_items(max_order: int):
    return tuple(catalog(max_order).items())


@lru_cache(maxsize=None)
def _involutions(name: str, max_order: int):
    return tuple(involutions(dict(_catalog_items(max_order))[name]))


@lru_cache(maxsize=None)
def _samplers(name: str, max_order: int, max_carrier: int, sigma_index: int):
    group = dict(_catalog_items(max_order))[name]
    gg = GGroup(group, _involutions(name, max_order)[sigma_index])
    return SpaceSampler(gg, max_carrier)


def quotient_instance(campaign: Campaign, index: int) -> dict:
    rng = instance_rng(campaign.seed, index)
    items = _catalog_items(campaign.max_order)
    name, _ = items[int(rng.integers(len(items)))]
    s = int(rng.integers(len(_involutions(name, campaign.max_order))))
    space = _samplers(name, campaign.max_order, campaign.max_carrier, s).sample(rng)
    return specio.space_to_json(space)


@lru_cache(maxsize=None)
def _gl2(n: int):
    group = elementary_abelian_2(n)
    autos = tuple(automorphisms(group))
    invs = tuple(a for a in autos if a.compose(a).is_identity)
    return group, autos, invs


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def nec_gerbe(rng, n: int, genus_max: int) -> MonodromyGerbe:
    """A gerbe with fiber ``(Z/2)^n`` over a real curve of genus ``<= genus_max``.

    The data come from a homomorphism of the orbifold fundamental group of
    ``X/σ`` (a non-Euclidean crystallographic group) into ``GL_n(F_2)``, so
    they are realizable by an actual local system on a real curve.  With
    ``k`` ovals and ``γ`` the genus of the quotient surface:

    * separating type, ``g = 2γ + k - 1``: generators ``a_j, b_j, e_i, c_i`` with
      ``c_i^2 = 1``, ``[e_i, c_i] = 1`` and ``Π e_i Π [a_j, b_j] = 1``;
    * non-separating type, ``g = γ + k - 1`` with ``γ >= 1``: generators
      ``d_j, e_i, c_i`` with ``Π e_i Π d_j^2 = 1``.

    The curve's fundamental group is the orientation-preserving half; its
    generators come from the transversal ``{1, c_1}``.  Oval ``i`` gets the
    Galois action ``C_i``, loop ``E_i`` and base-change word for ``c_i c_1``.
    """
    group, autos, invs = _gl2(n)
    ident = Automorphism.identity(group.order)
    options = []
    for k in range(1, genus_max + 2):
        for gam in range(0, genus_max + 1):
            if 2 * gam + k - 1 <= genus_max:
                options.append(("sep", gam, k))
            if gam >= 1 and gam + k - 1 <= genus_max:
                options.append(("nonsep", gam, k))
    kind, gam, k = _pick(rng, options)
    genus = 2 * gam + k - 1 if kind == "sep" else gam + k - 1

    def centralizer(c):
        return [a for a in autos if a.compose(c) == c.compose(a)]

    for _ in range(50):
        C = [_pick(rng, invs) for _ in range(k)]
        E = [_pick(rng, centralizer(C[i])) for i in range(k - 1)]
        if kind == "sep":
            A = [_pick(rng, autos) for _ in range(gam)]
            B = [_pick(rng, autos) for _ in range(gam)]
            rest = ident
            for a, b in zip(A, B):
                rest = rest.compose(a.compose(b).compose(a.inverse()).compose(b.inverse()))
            D = []
        else:
            D = [_pick(rng, autos) for _ in range(gam)]
            rest = ident
            for d in D:
                rest = rest.compose(d.compose(d))
            A = B = []
        head = ident
        for e in E:
            head = head.compose(e)
        # e_1 ... e_k * rest = 1  =>  e_k = (e_1 ... e_{k-1})^-1 rest^-1
        last = head.inverse().compose(rest.inverse())
        if last.compose(C[-1]) == C[-1].compose(last):
            E.append(last)
            break
    else:
        C, E, A, B, D = [ident] * k, [ident] * k, [ident] * len(A), [ident] * len(B), [ident] * len(D)

    c1 = C[0]
    gens = []
    for x in list(A) + list(B) + list(E):
        gens += [x, c1.compose(x).compose(c1)]
    omega_index = {}
    for i, c in enumerate(C[1:], start=1):
        gens.append(c.compose(c1))
        omega_index[i] = len(gens)
        gens.append(c1.compose(c))
    for d in D:
        gens += [d.compose(c1), c1.compose(d)]
    comps = []
    for i in range(k):
        omega = () if i == 0 else (omega_index[i],)
        comps.append(RealComponentGerbe("circle", (E[i],), omega, name=f"oval{i + 1}"))
    return MonodromyGerbe(GGroup(group, c1), tuple(gens), Base("proper_curve", genus),
                          tuple(comps))


def gerbe_instance(campaign: Campaign, index: int) -> dict:
    rng = instance_rng(campaign.seed, index)
    n = int(rng.integers(0, campaign.max_rank + 1))
    return specio.gerbe_to_json(nec_gerbe(rng, n, campaign.max_genus))


def bgamma_instances(campaign: Campaign) -> list:
    out = []
    for name, group in _catalog_items(campaign.max_order):
        for sigma in _involutions(name, campaign.max_order):
            out.append({"group": name, "sigma": list(sigma.perm)})
    return out


def _instance_key(kind: str, inst: dict):
    if kind == "quotient":
        return canonical_key(specio.parse_space(inst))
    return json.dumps(inst, sort_keys=True)


def _run_chunk(campaign_dict: dict, start: int, stop: int, instances=None):
    campaign = Campaign(**campaign_dict)
    checker = CHECKERS[campaign.kind]
    out = []
    for index in range(start, stop):
        if instances is not None:
            inst = instances[index - start]
        elif campaign.kind == "quotient":
            inst = quotient_instance(campaign, index)
        else:
            inst = gerbe_instance(campaign, index)
        ok, values = checker(inst)
        out.append((index, _instance_key(campaign.kind, inst), ok, values, inst))
    return out


def _run(campaign: Campaign, total: int, instances=None) -> Summary:
    t0 = time.perf_counter()
    cdict = asdict(campaign)
    workers = max(1, campaign.workers)
    bounds = np.linspace(0, total, min(total, workers * 4) + 1 if total else 1).astype(int)
    chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def chunk_instances(a, b):
        return instances[a:b] if instances is not None else None

    if workers == 1 or len(chunks) <= 1:
        results = [_run_chunk(cdict, a, b, chunk_instances(a, b)) for a, b in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, cdict, a, b, chunk_instances(a, b))
                       for a, b in chunks]
            results = [f.result() for f in futures]
    keys = set()
    violations = []
    checked = 0
    for chunk in results:
        for index, key, ok, values, inst in chunk:
            checked += 1
            keys.add(key)
            if not ok:
                violations.append(Violation(campaign.kind, index, inst, values, cdict))
    if campaign.out_dir and violations:
        out = Path(campaign.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for v in violations:
            path = out / f"violation_{v.kind}_{campaign.seed}_{v.index}.json"
            path.write_text(specio.dumps(asdict(v)))
    return Summary(campaign.kind, checked, len(keys), violations,
                   (time.perf_counter() - t0) * 1000)


def run_bgamma(campaign: Campaign) -> Summary:
    insts = bgamma_instances(campaign)
    return _run(campaign, len(insts), insts)


def run_quotient(campaign: Campaign) -> Summary:
    return _run(campaign, campaign.count)


def run_gerbe2torsion(campaign: Campaign) -> Summary:
    return _run(campaign, campaign.count)


RUNNERS = {"bgamma": run_bgamma, "quotient": run_quotient, "gerbe2torsion": run_gerbe2torsion}


def run(campaign: Campaign) -> Summary:
    return RUNNERS[campaign.kind](campaign)
