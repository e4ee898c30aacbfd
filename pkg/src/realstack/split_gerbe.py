"""Split gerbes over a base with monodromy, at the level of finite images.

The fiber over a base point ``p`` is a G-group ``A`` with involution
``σ_p``.  Fundamental group elements are represented only by the
automorphisms of ``A`` they induce.  A real component ``C_i`` of the base
carries

* ``omega``: a word in the global generators (the base-change loop), so that
  the Galois action at a point of ``C_i`` is ``ρ(ω)∘σ_p``;
* ``loop_generators``: images of the loops of ``C_i``.

Omega words follow the usual convention: entry ``i`` (1-based) is the
``i``-th global generator, ``-i`` its inverse, and the word ``[w1, w2]``
evaluates to ``ρ(w1)∘ρ(w2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ._unionfind import UnionFind
from .galois_h1 import H1Classes, commutes_with_sigma, h1, h1_action
from .group_core import Automorphism, GGroup, GroupError, is_automorphism

CIRCLE, INTERVAL, TABLE = "circle", "interval", "table_driven"
PROPER, OPEN, TABLE_BASE = "proper_curve", "open_curve", "table_driven"


class GerbeError(GroupError):
    component = None  # index of the offending real component, when there is one


class LoopNotEquivariant(GerbeError):
    pass


class OmegaNotCocycle(GerbeError):
    pass


class SurfaceRelationBroken(GerbeError):
    pass


class MissingTableEntry(GerbeError):
    pass


class OpenCurveUnsupported(GerbeError):
    pass


class ImageNotSigmaStable(GerbeError):
    pass


@dataclass(frozen=True)
class Base:
    kind: str
    genus: int | None = None
    complex_table: dict | None = None  # orbit size -> h* of that cover component

    def __post_init__(self):
        if self.kind not in (PROPER, OPEN, TABLE_BASE):
            raise GerbeError(f"unknown base kind {self.kind!r}")
        if self.kind == PROPER and (self.genus is None or self.genus < 0):
            raise GerbeError("a proper curve base needs a genus >= 0")
        if self.kind == TABLE_BASE and self.complex_table is None:
            raise GerbeError("a table-driven base needs a complex table")


@dataclass(frozen=True)
class RealComponentGerbe:
    shape: str
    loop_generators: tuple = ()
    omega: tuple = ()
    real_table: dict | None = None
    name: str = ""


@dataclass(frozen=True)
class MonodromyGerbe:
    fiber: GGroup
    global_generators: tuple
    base: Base
    components: tuple = ()
    surface_generators: bool = False  # global generators are a1, b1, ..., ag, bg


def word_action(gerbe: MonodromyGerbe, word) -> Automorphism:
    out = Automorphism.identity(gerbe.fiber.order)
    for w in word:
        i = abs(int(w)) - 1
        if w == 0 or i >= len(gerbe.global_generators):
            raise GerbeError(f"word entry {w} does not name a global generator")
        a = gerbe.global_generators[i]
        out = out.compose(a if w > 0 else a.inverse())
    return out


def base_change_sigma(fiber: GGroup, omega_action: Automorphism) -> Automorphism:
    """The Galois involution ``h -> ρ(ω)(σ_p(h))`` at the new base point."""
    s = omega_action.compose(fiber.sigma)
    if not s.compose(s).is_identity:
        raise OmegaNotCocycle("ρ(ω)∘σ_p is not an involution")
    return s


def effective_sigma(gerbe: MonodromyGerbe, index: int) -> Automorphism:
    return base_change_sigma(gerbe.fiber, word_action(gerbe, gerbe.components[index].omega))


def _commutator(a: Automorphism, b: Automorphism) -> Automorphism:
    return a.compose(b).compose(a.inverse()).compose(b.inverse())


def validate(gerbe: MonodromyGerbe) -> None:
    """Raise on the first violated invariant."""
    G = gerbe.fiber.group
    for i, a in enumerate(gerbe.global_generators):
        if not is_automorphism(G, a.perm):
            raise GerbeError(f"global generator {i + 1} is not an automorphism of the fiber")
    base = gerbe.base
    if gerbe.surface_generators:
        if base.kind != PROPER or len(gerbe.global_generators) != 2 * base.genus:
            raise SurfaceRelationBroken("surface generators need a proper base with 2g of them")
        prod = Automorphism.identity(G.order)
        gens = gerbe.global_generators
        for j in range(base.genus):
            prod = prod.compose(_commutator(gens[2 * j], gens[2 * j + 1]))
        if not prod.is_identity:
            raise SurfaceRelationBroken("product of commutators acts nontrivially")
    for i, comp in enumerate(gerbe.components):
        try:
            _validate_component(gerbe, i)
        except GerbeError as exc:
            exc.component = i
            raise


def _validate_component(gerbe: MonodromyGerbe, i: int) -> None:
    G = gerbe.fiber.group
    base = gerbe.base
    comp = gerbe.components[i]
    where = f"component {i}"
    if comp.shape not in (CIRCLE, INTERVAL, TABLE):
        raise GerbeError(f"{where}: unknown shape {comp.shape!r}")
    if (comp.shape == TABLE) != (base.kind == TABLE_BASE):
        raise GerbeError(f"{where}: table-driven components go with table-driven bases")
    if base.kind == PROPER and comp.shape != CIRCLE:
        raise GerbeError(f"{where}: real components of a proper curve are circles")
    if comp.shape == INTERVAL and comp.loop_generators:
        raise GerbeError(f"{where}: an interval has no loops")
    if comp.shape == TABLE and comp.real_table is None:
        raise GerbeError(f"{where}: missing real table")
    for a in comp.loop_generators:
        if not is_automorphism(G, a.perm):
            raise GerbeError(f"{where}: loop is not an automorphism of the fiber")
    try:
        sigma = effective_sigma(gerbe, i)
    except OmegaNotCocycle as exc:
        raise OmegaNotCocycle(f"{where}: {exc}") from None
    eff = GGroup(G, sigma)
    for j, a in enumerate(comp.loop_generators):
        if not commutes_with_sigma(eff, a):
            raise LoopNotEquivariant(
                f"{where}: loop {j} does not commute with the effective involution")


def _orbits_of_perms(n: int, perms) -> list:
    uf = UnionFind(n)
    for p in perms:
        for x in range(n):
            uf.union(x, p[x])
    return uf.blocks()


@dataclass(frozen=True)
class CoverOrbits:
    classes: H1Classes
    orbits: tuple  # tuples of class ids

    @property
    def sizes(self) -> list:
        return sorted((len(o) for o in self.orbits), reverse=True)


def real_cover(gerbe: MonodromyGerbe, index: int) -> CoverOrbits:
    comp = gerbe.components[index]
    eff = GGroup(gerbe.fiber.group, effective_sigma(gerbe, index))
    classes = h1(eff)
    perms = [h1_action(eff, a, classes) for a in comp.loop_generators]
    orbits = _orbits_of_perms(classes.count, perms)
    return CoverOrbits(classes, tuple(tuple(o) for o in orbits))


def _table_lookup(table: dict, size: int, what: str) -> int:
    if size not in table:
        raise MissingTableEntry(f"{what} table has no entry for orbit size {size}")
    return table[size]


def component_real_h_star(gerbe: MonodromyGerbe, index: int) -> int:
    comp = gerbe.components[index]
    cover = real_cover(gerbe, index)
    if comp.shape == CIRCLE:
        return 2 * len(cover.orbits)
    if comp.shape == INTERVAL:
        return cover.classes.count
    return sum(_table_lookup(comp.real_table, len(o), "real") for o in cover.orbits)


def real_h_star(gerbe: MonodromyGerbe) -> int:
    return sum(component_real_h_star(gerbe, i) for i in range(len(gerbe.components)))


@dataclass(frozen=True)
class InertiaOrbits:
    conjugacy_classes: tuple
    orbits: tuple  # tuples of conjugacy class ids

    @property
    def sizes(self) -> list:
        return sorted((len(o) for o in self.orbits), reverse=True)


def inertia_cover(gerbe: MonodromyGerbe) -> InertiaOrbits:
    G = gerbe.fiber.group
    classes = G.conjugacy_classes
    class_of = {}
    for cid, c in enumerate(classes):
        for x in c:
            class_of[x] = cid
    perms = [[class_of[a(c[0])] for c in classes] for a in gerbe.global_generators]
    orbits = _orbits_of_perms(len(classes), perms)
    return InertiaOrbits(tuple(tuple(c) for c in classes), tuple(tuple(o) for o in orbits))


def inertia_h_star(gerbe: MonodromyGerbe) -> int:
    base = gerbe.base
    orbits = inertia_cover(gerbe).orbits
    if base.kind == PROPER:
        g = base.genus
        # a connected degree-d unramified cover of a genus-g surface has genus d(g-1)+1
        return sum(2 + 2 * (len(D) * (g - 1) + 1) for D in orbits)
    if base.kind == TABLE_BASE:
        return sum(_table_lookup(base.complex_table, len(D), "complex") for D in orbits)
    raise OpenCurveUnsupported("inertia of a gerbe over an open curve needs external totals")


@dataclass(frozen=True)
class GerbeReport:
    real: int
    inertia: int
    orbit_lhs: int | None = None
    orbit_rhs: int | None = None

    @property
    def holds(self) -> bool:
        return self.real <= self.inertia

    @property
    def orbit_holds(self) -> bool | None:
        if self.orbit_lhs is None:
            return None
        return self.orbit_lhs <= self.orbit_rhs


def smith_thom_gerbe(gerbe: MonodromyGerbe) -> GerbeReport:
    real = real_h_star(gerbe)
    inertia = inertia_h_star(gerbe)
    if gerbe.base.kind != PROPER:
        return GerbeReport(real, inertia)
    lhs = sum(len(real_cover(gerbe, i).orbits) for i in range(len(gerbe.components)))
    n_orbits = len(inertia_cover(gerbe).orbits)
    rhs = 2 * n_orbits + (gerbe.base.genus - 1) * gerbe.fiber.group.class_count
    return GerbeReport(real, inertia, lhs, rhs)


def monodromy_image(gerbe: MonodromyGerbe) -> list:
    """Elements of the group generated by the global generators, sorted."""
    ident = Automorphism.identity(gerbe.fiber.order)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for a in gerbe.global_generators:
                y = x.compose(a)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda a: a.perm)


@dataclass(frozen=True)
class SectionClass:
    representative: Automorphism
    orbit: tuple = field(default=())


def section_class(gerbe: MonodromyGerbe, omega_word) -> SectionClass:
    """Class of ``ω`` under ``ω -> α ω σ(α)^-1`` for ``α`` in the monodromy
    image, with ``σ(α) = σ_p∘α∘σ_p``.

    Classes live in the finite image, so distinct upstream classes may merge.
    """
    sigma = gerbe.fiber.sigma
    image = monodromy_image(gerbe)
    members = set(image)
    omega = word_action(gerbe, omega_word)
    if omega not in members:
        raise GerbeError("omega does not lie in the monodromy image")
    for a in image:
        if sigma.compose(a).compose(sigma) not in members:
            raise ImageNotSigmaStable("conjugation by sigma does not preserve the image")
    orbit = {omega}
    frontier = [omega]
    while frontier:
        nxt = []
        for w in frontier:
            for a in image:
                sa = sigma.compose(a).compose(sigma)
                y = a.compose(w).compose(sa.inverse())
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    ordered = tuple(sorted(orbit, key=lambda a: a.perm))
    return SectionClass(ordered[0], ordered)
