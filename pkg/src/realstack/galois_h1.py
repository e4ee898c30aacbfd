"""Nonabelian H^1 of Z/2 with coefficients in a G-group.

A cocycle is an element ``γ`` with ``γ σ(γ) = e``; two cocycles are
equivalent when ``γ' = β γ σ(β)^-1`` for some ``β``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._unionfind import UnionFind
from .group_core import Automorphism, GGroup, GroupError


class NotACocycle(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class NotEquivariant(GroupError):
    pass


def is_cocycle(gg: GGroup, gamma: int) -> bool:
    return gg.group.mul(gamma, gg.sigma(gamma)) == 0


def z1(gg: GGroup) -> list:
    return [g for g in range(gg.order) if is_cocycle(gg, g)]


def twisted_conjugate(gg: GGroup, beta: int, gamma: int) -> int:
    """``β γ σ(β)^-1``."""
    G = gg.group
    return G.product(beta, gamma, G.inv(gg.sigma(beta)))


@dataclass(frozen=True)
class H1Classes:
    z1: tuple
    class_of: dict
    representatives: tuple

    @property
    def count(self) -> int:
        return len(self.representatives)

    def __len__(self):
        return self.count

    def members(self, cid: int) -> list:
        return [g for g in self.z1 if self.class_of[g] == cid]

    def classes(self) -> list:
        return [self.members(i) for i in range(self.count)]


@lru_cache(maxsize=4096)
def h1(gg: GGroup) -> H1Classes:
    cocycles = z1(gg)
    pos = {g: i for i, g in enumerate(cocycles)}
    uf = UnionFind(len(cocycles))
    for beta in range(gg.order):
        for g in cocycles:
            uf.union(pos[g], pos[twisted_conjugate(gg, beta, g)])
    # blocks come back sorted by least index, so e (index 0) lands in class 0
    blocks = uf.blocks()
    class_of = {}
    reps = []
    for cid, block in enumerate(blocks):
        reps.append(cocycles[block[0]])
        for i in block:
            class_of[cocycles[i]] = cid
    return H1Classes(tuple(cocycles), class_of, tuple(reps))


def h1_abelian(gg: GGroup) -> int:
    """``#(ker N / im(1 - σ))`` for abelian groups, with ``N(a) = a σ(a)``."""
    G = gg.group
    if not G.is_abelian:
        raise NotAbelian("h1_abelian needs an abelian group")
    kernel = [a for a in range(G.order) if G.mul(a, gg.sigma(a)) == 0]
    image = {G.mul(a, G.inv(gg.sigma(a))) for a in range(G.order)}
    return len(kernel) // len(image)


@dataclass(frozen=True)
class TwistedGGroup:
    base: GGroup
    gamma: int
    twisted: GGroup

    @property
    def sigma(self) -> Automorphism:
        return self.twisted.sigma

    def real_subgroup(self) -> list:
        """``Fix(σ^γ)``."""
        return self.twisted.fixed_points()


def _require_cocycle(gg, gamma):
    if not 0 <= gamma < gg.order or not is_cocycle(gg, gamma):
        raise NotACocycle(f"element {gamma} does not satisfy γσ(γ) = e")


def twist_ggroup(gg: GGroup, gamma: int) -> TwistedGGroup:
    _require_cocycle(gg, gamma)
    G = gg.group
    perm = tuple(G.conj(gamma, gg.sigma(g)) for g in range(G.order))
    return TwistedGGroup(gg, gamma, GGroup(G, Automorphism(perm)))


def torsor_involution(gg: GGroup, gamma: int) -> tuple:
    """The permutation ``g -> σ(g) γ^-1`` of the underlying set."""
    _require_cocycle(gg, gamma)
    G = gg.group
    ginv = G.inv(gamma)
    perm = tuple(G.mul(gg.sigma(g), ginv) for g in range(G.order))
    assert all(perm[perm[i]] == i for i in range(len(perm)))
    return perm


def commutes_with_sigma(gg: GGroup, alpha: Automorphism) -> bool:
    return alpha.compose(gg.sigma) == gg.sigma.compose(alpha)


def h1_action(gg: GGroup, alpha: Automorphism, classes: H1Classes | None = None) -> tuple:
    """Permutation of class ids induced by ``γ -> α(γ)``."""
    if not commutes_with_sigma(gg, alpha):
        raise NotEquivariant("automorphism does not commute with sigma")
    classes = classes or h1(gg)
    out = []
    for rep in classes.representatives:
        out.append(classes.class_of[alpha(rep)])
    return tuple(out)
