"""Finite models of quotient stacks ``[X/Γ]`` with a real structure.

``X`` is a finite set with an involution ``σ_X`` and a compatible left
action of a G-group ``Γ``: ``σ_X(g·x) = σ(g)·σ_X(x)``.  Such a space is the
same thing as an action of the semidirect product ``Γ ⋊ <σ>``, which is how
random and exhaustive instances are produced.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._unionfind import UnionFind
from .galois_h1 import h1, twist_ggroup
from .group_core import (
    Automorphism,
    FiniteGroup,
    GGroup,
    GroupError,
    make_group,
    semidirect_with_sigma,
    subgroups,
)


class InvalidSpace(GroupError):
    pass


class Unsupported(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGSpace:
    gg: GGroup
    sigma_x: tuple
    action: tuple  # action[g][x] = g·x

    def __post_init__(self):
        G = self.gg.group
        m = len(self.sigma_x)
        if len(self.action) != G.order or any(len(row) != m for row in self.action):
            raise InvalidSpace(f"action table must be {G.order} x {m}")
        for g, row in enumerate(self.action):
            for x, y in enumerate(row):
                if not 0 <= y < m:
                    raise InvalidSpace(f"action[{g}][{x}] = {y} is out of range")
        if sorted(self.sigma_x) != list(range(m)):
            raise InvalidSpace("sigma_x is not a permutation")
        for x in range(m):
            if self.sigma_x[self.sigma_x[x]] != x:
                raise InvalidSpace(f"sigma_x is not involutive at {x}")
            if self.action[0][x] != x:
                raise InvalidSpace(f"identity moves point {x}")
        for g, h in itertools.product(range(G.order), repeat=2):
            gh = G.mul(g, h)
            for x in range(m):
                if self.action[gh][x] != self.action[g][self.action[h][x]]:
                    raise InvalidSpace(f"(g h)·x != g·(h·x) at g={g}, h={h}, x={x}")
        for g in range(G.order):
            sg = self.gg.sigma(g)
            for x in range(m):
                if self.sigma_x[self.action[g][x]] != self.action[sg][self.sigma_x[x]]:
                    raise InvalidSpace(
                        f"sigma_x(g·x) != sigma(g)·sigma_x(x) at g={g}, x={x}")

    @property
    def carrier(self) -> int:
        return len(self.sigma_x)

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def stabilizer(self, x: int) -> list:
        return [g for g in range(self.gg.order) if self.action[g][x] == x]

    def orbits(self) -> list:
        uf = UnionFind(self.carrier)
        for row in self.action:
            for x, y in enumerate(row):
                uf.union(x, y)
        return uf.blocks()


@dataclass(frozen=True)
class TwistComponent:
    gamma: int
    class_id: int
    fixed: tuple
    real_group: tuple
    orbits: tuple

    @property
    def count(self) -> int:
        return len(self.orbits)


@dataclass(frozen=True)
class RealLocusDecomposition:
    components: tuple

    @property
    def total(self) -> int:
        return sum(c.count for c in self.components)


def _orbits_on(points, group_elems, act):
    pos = {x: i for i, x in enumerate(points)}
    uf = UnionFind(len(points))
    for g in group_elems:
        for i, x in enumerate(points):
            uf.union(i, pos[act(g, x)])
    return tuple(tuple(points[i] for i in b) for b in uf.blocks())


def real_locus(space: FiniteGSpace) -> RealLocusDecomposition:
    classes = h1(space.gg)
    comps = []
    for cid, gamma in enumerate(classes.representatives):
        tw = twist_ggroup(space.gg, gamma)
        fixed = tuple(x for x in range(space.carrier)
                      if space.act(gamma, space.sigma_x[x]) == x)
        real_group = tuple(tw.real_subgroup())
        orbits = _orbits_on(list(fixed), real_group, space.act)
        comps.append(TwistComponent(gamma, cid, fixed, real_group, orbits))
    return RealLocusDecomposition(tuple(comps))


@dataclass(frozen=True)
class OracleResult:
    """Isomorphism classes of pairs (torsor, equivariant real map).

    A torsor is written as ``Γ`` with involution ``g -> σ(g) δ``; the map is
    ``g -> g·y``.  ``witnesses`` holds the least pair ``(δ, y)`` of each class.
    """

    witnesses: tuple
    class_of_witness: tuple  # H^1 class id of δ^-1 for each witness

    @property
    def count(self) -> int:
        return len(self.witnesses)

    def per_class(self) -> dict:
        out = {}
        for cid in self.class_of_witness:
            out[cid] = out.get(cid, 0) + 1
        return out


def torsor_oracle(space: FiniteGSpace) -> OracleResult:
    gg = space.gg
    G = gg.group
    n, m = G.order, space.carrier
    deltas = []
    for d in range(n):
        phi = [G.mul(gg.sigma(g), d) for g in range(n)]
        if all(phi[phi[g]] == g for g in range(n)):
            deltas.append(d)
    pairs = []
    for d in deltas:
        for y in range(m):
            # f(g) = g·y must satisfy f(σ(g) δ) = σ_X(f(g)) for every g
            if all(space.act(G.mul(gg.sigma(g), d), y) == space.sigma_x[space.act(g, y)]
                   for g in range(n)):
                pairs.append((d, y))
    pos = {p: i for i, p in enumerate(pairs)}
    uf = UnionFind(len(pairs))
    for c in range(n):
        ci = G.inv(c)
        sci = G.inv(gg.sigma(c))
        for i, (d, y) in enumerate(pairs):
            uf.union(i, pos[(G.product(sci, d, c), space.act(ci, y))])
    witnesses = tuple(pairs[b[0]] for b in uf.blocks())
    classes = h1(gg)
    labels = tuple(classes.class_of[G.inv(d)] for d, _ in witnesses)
    return OracleResult(witnesses, labels)


@dataclass(frozen=True)
class InertiaSet:
    classes: tuple  # each class a tuple of (x, g) pairs

    @property
    def count(self) -> int:
        return len(self.classes)


def inertia_complex(space: FiniteGSpace) -> InertiaSet:
    G = space.gg.group
    pairs = [(x, g) for x in range(space.carrier) for g in range(G.order)
             if space.act(g, x) == x]
    pos = {p: i for i, p in enumerate(pairs)}
    uf = UnionFind(len(pairs))
    for h in range(G.order):
        for i, (x, g) in enumerate(pairs):
            uf.union(i, pos[(space.act(h, x), G.conj(h, g))])
    return InertiaSet(tuple(tuple(pairs[i] for i in b) for b in uf.blocks()))


@dataclass(frozen=True)
class SmithThomReport:
    real: int
    inertia: int

    @property
    def holds(self) -> bool:
        return self.real <= self.inertia


def smith_thom_finite(space: FiniteGSpace) -> SmithThomReport:
    return SmithThomReport(real_locus(space).total, inertia_complex(space).count)


def coarse_real_orbits(space: FiniteGSpace) -> list:
    """Γ-orbits of ``X`` mapped to themselves by ``σ_X``."""
    return [o for o in space.orbits() if space.sigma_x[o[0]] in o]


def stabilizer_ggroup(space: FiniteGSpace, x: int, sigma: Automorphism | None = None) -> GGroup:
    """``Stab(x)`` relabelled as a standalone G-group, with ``sigma`` restricted."""
    G = space.gg.group
    sigma = sigma or space.gg.sigma
    stab = space.stabilizer(x)
    pos = {g: i for i, g in enumerate(stab)}
    if any(sigma(g) not in pos for g in stab):
        raise Unsupported(f"sigma does not preserve the stabilizer of {x}")
    table = [[pos[G.mul(a, b)] for b in stab] for a in stab]
    return GGroup(make_group(table), Automorphism(tuple(pos[sigma(g)] for g in stab)))


def fiber_sizes(space: FiniteGSpace, decomposition: RealLocusDecomposition | None = None) -> dict:
    """Number of real classes lying over each Γ-orbit, keyed by its least point."""
    dec = decomposition or real_locus(space)
    orbit_of = {}
    for o in space.orbits():
        for x in o:
            orbit_of[x] = o[0]
    out = {}
    for comp in dec.components:
        for orb in comp.orbits:
            key = orbit_of[orb[0]]
            out[key] = out.get(key, 0) + 1
    return out


def fiber_law_violations(space: FiniteGSpace) -> list:
    """Real classes whose fiber count disagrees with ``#H^1`` of the
    stabilizer of a representative, taken with the twisted involution."""
    dec = real_locus(space)
    sizes = fiber_sizes(space, dec)
    orbit_of = {x: o[0] for o in space.orbits() for x in o}
    bad = []
    for comp in dec.components:
        tw = twist_ggroup(space.gg, comp.gamma)
        for orb in comp.orbits:
            y = orb[0]
            expect = h1(stabilizer_ggroup(space, y, tw.sigma)).count
            if sizes[orbit_of[y]] != expect:
                bad.append((comp.gamma, y, sizes[orbit_of[y]], expect))
    return bad


# building spaces from actions of Γ ⋊ <σ>

def coset_action(E: FiniteGroup, H) -> list:
    """Left action of ``E`` on ``E/H``; cosets numbered by least element.

    Returns ``perm`` with ``perm[e][i]`` the coset of ``e`` times coset ``i``.
    """
    H = sorted(H)
    coset_of = {}
    reps = []
    for x in range(E.order):
        if x not in coset_of:
            for h in H:
                coset_of[E.mul(x, h)] = len(reps)
            reps.append(x)
    return [[coset_of[E.mul(e, r)] for r in reps] for e in range(E.order)]


def space_from_eset(gg: GGroup, E: FiniteGroup, blocks) -> FiniteGSpace:
    """Disjoint union of coset spaces ``E/H`` for ``H`` in ``blocks``."""
    n = gg.order
    action = [[] for _ in range(n)]
    sigma_x = []
    offset = 0
    for H in blocks:
        perm = coset_action(E, H)
        k = len(perm[0])
        for g in range(n):
            action[g].extend(offset + y for y in perm[g])
        sigma_x.extend(offset + y for y in perm[n])  # (e, σ) sits at index n
        offset += k
    return FiniteGSpace(gg, tuple(sigma_x), tuple(tuple(r) for r in action))


def transitive_types(gg: GGroup, max_carrier: int) -> tuple:
    """``(E, [H, ...])``: one subgroup of ``Γ ⋊ <σ>`` per conjugacy class with
    index at most ``max_carrier``."""
    E = semidirect_with_sigma(gg)
    seen = set()
    reps = []
    for H in subgroups(E):
        if E.order // len(H) > max_carrier or H in seen:
            continue
        reps.append(H)
        for e in range(E.order):
            seen.add(tuple(sorted(E.conj(e, h) for h in H)))
    return E, reps


def enumerate_spaces(gg: GGroup, max_carrier: int):
    """Every space with carrier size ``<= max_carrier`` up to isomorphism,
    the empty space included."""
    E, reps = transitive_types(gg, max_carrier)
    sizes = [E.order // len(H) for H in reps]

    def rec(start, budget, chosen):
        yield list(chosen)
        for i in range(start, len(reps)):
            if sizes[i] <= budget:
                chosen.append(reps[i])
                yield from rec(i, budget - sizes[i], chosen)
                chosen.pop()

    for blocks in rec(0, max_carrier, []):
        yield space_from_eset(gg, E, blocks)


@dataclass
class SpaceSampler:
    """Random spaces over a fixed G-group, drawn from a numpy generator."""

    gg: GGroup
    max_carrier: int = 6
    _types: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self._types = transitive_types(self.gg, self.max_carrier)

    def sample(self, rng) -> FiniteGSpace:
        E, reps = self._types
        budget = int(rng.integers(0, self.max_carrier + 1))
        blocks = []
        while True:
            fits = [H for H in reps if E.order // len(H) <= budget]
            if not fits or rng.random() < 0.15:
                break
            H = fits[int(rng.integers(len(fits)))]
            # conjugate so that labels vary, not only isomorphism types
            e = int(rng.integers(E.order))
            blocks.append(tuple(sorted(E.conj(e, h) for h in H)))
            budget -= E.order // len(H)
        space = space_from_eset(self.gg, E, blocks)
        return relabel_space(space, rng.permutation(space.carrier).tolist())


def relabel_space(space: FiniteGSpace, perm) -> FiniteGSpace:
    """Transport the structure along the bijection ``x -> perm[x]``."""
    m = space.carrier
    inv = [0] * m
    for x, y in enumerate(perm):
        inv[y] = x
    sigma_x = tuple(perm[space.sigma_x[inv[y]]] for y in range(m))
    action = tuple(tuple(perm[row[inv[y]]] for y in range(m)) for row in space.action)
    return FiniteGSpace(space.gg, sigma_x, action)


def canonical_key(space: FiniteGSpace, budget: int = 720) -> tuple:
    """Least serialization over at most ``budget`` relabelings.

    Exact for carriers up to 6; for larger carriers two isomorphic spaces may
    get different keys, which only costs a recheck.
    """
    m = space.carrier
    best = None
    for k, perm in enumerate(itertools.permutations(range(m))):
        if k >= budget:
            break
        r = relabel_space(space, perm) if m else space
        key = (r.sigma_x, r.action)
        if best is None or key < best:
            best = key
    return (space.gg.group.table.tobytes(), space.gg.sigma.perm, m, best)
