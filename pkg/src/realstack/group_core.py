"""Finite groups as Cayley tables, their automorphisms, and G-groups.

Elements of a group of order ``n`` are the integers ``0..n-1``; index 0 is
always the identity. Catalog constructors fix the following orderings:

* ``cyclic(n)``: index ``i`` is ``g**i``; the generator ``g`` sits at index 1.
* ``dihedral(n)``: order ``2n``; index ``i + n*j`` is ``r**i s**j`` with
  ``s r s = r**-1``.  ``r`` is at index 1, ``s`` at index ``n``.
* ``elementary_abelian_2(k)``: index is the bit mask of the coordinate vector;
  the group law is XOR.
* ``symmetric(n)``: permutations of ``range(n)`` in lexicographic order, with
  product ``(p*q)(i) = p[q[i]]``.
* ``quaternion()``: ``1, -1, i, -i, j, -j, k, -k``.
* ``direct_product(a, b)``: ``(x, y)`` sits at index ``x + a.order * y``.

Groups compare equal iff their tables are equal; no isomorphism testing is
implied by ``==``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._unionfind import UnionFind

ASSOCIATIVITY_CHECK_LIMIT = 128
CATALOG_ORDER_LIMIT = 128
AUTOMORPHISM_ORDER_LIMIT = 64


class GroupError(ValueError):
    """Base class for invalid group data."""


class NotClosed(GroupError):
    pass


class NoIdentityAtZero(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NoInverse(GroupError):
    pass


class SizeLimitExceeded(GroupError):
    pass


class InvalidAutomorphism(GroupError):
    pass


class NotInvolutive(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated Cayley table.  Build through :func:`make_group`."""

    table: np.ndarray
    inverse: np.ndarray

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    @cached_property
    def rows(self) -> tuple:
        """The table as nested tuples of ints, for fast scalar lookups."""
        return tuple(tuple(int(v) for v in row) for row in self.table)

    @cached_property
    def inverses(self) -> tuple:
        return tuple(int(v) for v in self.inverse)

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def product(self, *elems: int) -> int:
        rows = self.rows
        out = 0
        for x in elems:
            out = rows[out][x]
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.rows[self.rows[g][x]][self.inverses[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    @cached_property
    def element_orders(self) -> tuple:
        return tuple(self.element_order(a) for a in range(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugacy_classes(self) -> list:
        """Conjugacy classes as sorted lists, ordered by least element."""
        n = self.order
        uf = UnionFind(n)
        for g in range(n):
            for x in range(n):
                uf.union(x, self.conj(g, x))
        return uf.blocks()

    @property
    def class_count(self) -> int:
        return len(self.conjugacy_classes)

    def span(self, gens) -> list:
        """Sorted elements of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, picked greedily by decreasing element order."""
        by_order = sorted(range(1, self.order), key=lambda a: (-self.element_orders[a], a))
        gens, current = [], {0}
        for a in by_order:
            if len(current) == self.order:
                break
            if a not in current:
                gens.append(a)
                current = set(self.span(gens))
        return tuple(gens)

    def centralizer(self, x: int) -> list:
        return [g for g in range(self.order) if self.table[g, x] == self.table[x, g]]

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        return 0 in s and all(self.table[a, b] in s for a in s for b in s)


def make_group(table) -> FiniteGroup:
    """Validate a Cayley table and wrap it.

    Associativity is checked exhaustively up to order 128 and skipped above.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError(f"table must be a non-empty square array, got shape {t.shape}")
    if not np.issubdtype(t.dtype, np.integer):
        raise GroupError("table entries must be integers")
    n = t.shape[0]
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = map(int, bad[0])
        raise NotClosed(f"entry ({i}, {j}) = {int(t[i, j])} is not an element index < {n}")
    t = t.astype(np.int64)
    for x in range(n):
        if t[0, x] != x or t[x, 0] != x:
            raise NoIdentityAtZero(f"index 0 is not an identity: fails at element {x}")
    inverse = np.empty(n, dtype=np.int64)
    for a in range(n):
        right = np.flatnonzero(t[a] == 0)
        cands = [int(b) for b in right if t[b, a] == 0]
        if not cands:
            raise NoInverse(f"element {a} has no two-sided inverse")
        inverse[a] = cands[0]
    if n <= ASSOCIATIVITY_CHECK_LIMIT:
        left = t[t]  # left[a, b, c] = (a b) c
        right = t[:, t]  # right[a, b, c] = a (b c)
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = map(int, bad[0])
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")
    t.setflags(write=False)
    inverse.setflags(write=False)
    return FiniteGroup(t, inverse)


def _check_size(n):
    if n > CATALOG_ORDER_LIMIT:
        raise SizeLimitExceeded(f"order {n} exceeds catalog limit {CATALOG_ORDER_LIMIT}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    _check_size(n)
    a = np.arange(n)
    return make_group((a[:, None] + a[None, :]) % n)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, of order 2n."""
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")
    _check_size(2 * n)
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for x, y in itertools.product(range(2 * n), repeat=2):
        a, b = x % n, x // n
        c, d = y % n, y // n
        table[x, y] = (a + (-c if b else c)) % n + n * ((b + d) % 2)
    return make_group(table)


def elementary_abelian_2(k: int) -> FiniteGroup:
    if k < 0:
        raise GroupError("elementary_abelian_2(k) needs k >= 0")
    _check_size(2**k)
    a = np.arange(2**k)
    return make_group(a[:, None] ^ a[None, :])


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 4:
        raise SizeLimitExceeded("symmetric(n) is provided for 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return make_group(table)


def quaternion() -> FiniteGroup:
    # unit product table on 1, i, j, k with signs
    units = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def decode(x):
        return (1 if x % 2 == 0 else -1), x // 2

    def encode(sign, unit):
        return 2 * unit + (0 if sign == 1 else 1)

    table = np.empty((8, 8), dtype=np.int64)
    for x, y in itertools.product(range(8), repeat=2):
        sx, ux = decode(x)
        sy, uy = decode(y)
        s, u = units[(ux, uy)]
        table[x, y] = encode(sx * sy * s, u)
    return make_group(table)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    n1, n2 = g1.order, g2.order
    _check_size(n1 * n2)
    idx = np.arange(n1 * n2)
    x1, x2 = idx % n1, idx // n1
    table = g1.table[x1[:, None], x1[None, :]] + n1 * g2.table[x2[:, None], x2[None, :]]
    return make_group(table)


def quotient_group(group: FiniteGroup, normal: list):
    """Quotient by a normal subgroup.

    Returns ``(quotient, coset_of)`` where ``coset_of[x]`` is the quotient
    index of ``x``.  Cosets are numbered by least element, so the identity coset is 0.
    """
    normal = sorted(set(normal))
    if not group.is_subgroup(normal):
        raise GroupError("not a subgroup")
    for g in range(group.order):
        for k in normal:
            if group.conj(g, k) not in normal:
                raise GroupError(f"subgroup is not normal: {g} conjugates {k} outside it")
    coset_of = [-1] * group.order
    reps = []
    for x in range(group.order):
        if coset_of[x] < 0:
            for k in normal:
                coset_of[group.mul(x, k)] = len(reps)
            reps.append(x)
    table = [[coset_of[group.mul(a, b)] for b in reps] for a in reps]
    return make_group(table), coset_of


def subgroups(group: FiniteGroup) -> list:
    """All subgroups as sorted tuples, by joining cyclic subgroups to closure."""
    cyclic_subs = {tuple(group.span([a])) for a in range(group.order)}
    found = set(cyclic_subs)
    frontier = set(cyclic_subs)
    while frontier:
        nxt = set()
        for h in frontier:
            for c in cyclic_subs:
                if not set(c) <= set(h):
                    j = tuple(group.span(list(h) + list(c)))
                    if j not in found:
                        found.add(j)
                        nxt.add(j)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s))


_NAME = re.compile(r"^(C|D|S)(\d+)$|^V4$|^Q8$|^C2\^(\d+)$")


def by_name(name: str) -> FiniteGroup:
    """Catalog lookup: ``C4``, ``D3``, ``V4``, ``S3``, ``Q8``, ``C2^3``, ``A4`` and
    ``x``-separated direct products such as ``C2xC4``."""
    parts = name.strip().split("x")
    if len(parts) > 1:
        out = by_name(parts[0])
        for p in parts[1:]:
            out = direct_product(out, by_name(p))
        return out
    if name.strip() == "A4":
        return alternating4()
    m = _NAME.match(name.strip())
    if not m:
        raise GroupError(f"unknown catalog group {name!r}")
    if name == "V4":
        return elementary_abelian_2(2)
    if name == "Q8":
        return quaternion()
    if m.group(3) is not None:
        return elementary_abelian_2(int(m.group(3)))
    kind, n = m.group(1), int(m.group(2))
    return {"C": cyclic, "D": dihedral, "S": symmetric}[kind](n)


# groups of order <= 24, one name per table; isomorphic duplicates (D3 = S3) are kept
# because their element labelings differ
CATALOG_NAMES = (
    "C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "D3", "C7", "C8", "C2xC4", "C2^3",
    "D4", "Q8", "C9", "C3xC3", "C10", "D5", "C11", "C12", "C2xC6", "D6", "C13", "C14",
    "D7", "C15", "C16", "C4xC4", "C2xC8", "C2^4", "D8", "C2xD4", "C2xQ8", "C17", "C18",
    "C3xC6", "D9", "C19", "C20", "C2xC10", "D10", "C21", "C22", "D11", "C23",
    "C24", "C2xC12", "C2xC2xC6", "D12", "S4", "C2xA4", "C3xQ8",
)


def alternating4() -> FiniteGroup:
    s4 = symmetric(4)
    perms = list(itertools.permutations(range(4)))

    def even(p):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        return inv % 2 == 0

    keep = [i for i, p in enumerate(perms) if even(p)]
    pos = {x: i for i, x in enumerate(keep)}
    return make_group([[pos[s4.mul(a, b)] for b in keep] for a in keep])


def catalog(max_order: int = 24) -> dict:
    """Named catalog groups of order <= ``max_order``."""
    out = {}
    for name in CATALOG_NAMES:
        g = by_name(name)
        if g.order <= max_order:
            out[name] = g
    return out


@dataclass(frozen=True)
class Automorphism:
    """A permutation of element indices; validated against a group by
    :func:`make_automorphism`."""

    perm: tuple

    def __call__(self, x: int) -> int:
        return self.perm[x]

    def __len__(self):
        return len(self.perm)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self ∘ other``."""
        return Automorphism(tuple(self.perm[i] for i in other.perm))

    def inverse(self) -> "Automorphism":
        out = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            out[j] = i
        return Automorphism(tuple(out))

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity:
            cur = cur.compose(self)
            k += 1
        return k

    @staticmethod
    def identity(n: int) -> "Automorphism":
        return Automorphism(tuple(range(n)))


def is_automorphism(group: FiniteGroup, perm) -> bool:
    p = np.asarray(perm)
    n = group.order
    if p.shape != (n,) or sorted(p.tolist()) != list(range(n)) or p[0] != 0:
        return False
    return bool(np.array_equal(p[group.table], group.table[p[:, None], p[None, :]]))


def make_automorphism(group: FiniteGroup, perm) -> Automorphism:
    p = [int(x) for x in perm]
    n = group.order
    if len(p) != n or sorted(p) != list(range(n)):
        raise InvalidAutomorphism(f"not a permutation of 0..{n - 1}: {p}")
    if p[0] != 0:
        raise InvalidAutomorphism("automorphism must fix the identity")
    for x, y in itertools.product(range(n), repeat=2):
        if p[group.mul(x, y)] != group.mul(p[x], p[y]):
            raise InvalidAutomorphism(f"fails to be multiplicative at ({x}, {y})")
    return Automorphism(tuple(p))


def isomorphisms(source: FiniteGroup, target: FiniteGroup, limit: int | None = None):
    """All isomorphisms ``source -> target`` as index permutations.

    Images are assigned to a generating set of ``source`` one generator at a
    time; each partial assignment is extended over the subgroup generated so
    far and abandoned at the first inconsistency.
    """
    if source.order != target.order:
        return []
    gens = source.generators
    n = source.order
    src, tgt = source.table, target.table
    results = []

    def extend(phi, image_of, gens_done, new_gen, new_img):
        phi = dict(phi)
        image_of = dict(image_of)
        if new_gen in phi:
            return (phi, image_of) if phi[new_gen] == new_img else None
        phi[new_gen] = new_img
        if new_img in image_of:
            return None
        image_of[new_img] = new_gen
        active = gens_done + [new_gen]
        frontier = list(phi)
        while frontier:
            nxt = []
            for x in frontier:
                for g in active:
                    y = int(src[x, g])
                    fy = int(tgt[phi[x], phi[g]])
                    if y in phi:
                        if phi[y] != fy:
                            return None
                    else:
                        if fy in image_of:
                            return None
                        phi[y] = fy
                        image_of[fy] = y
                        nxt.append(y)
            frontier = nxt
        return phi, image_of

    def search(j, phi, image_of):
        if limit is not None and len(results) >= limit:
            return
        if j == len(gens):
            if len(phi) == n:
                results.append(tuple(phi[i] for i in range(n)))
            return
        g = gens[j]
        want = source.element_orders[g]
        for t in range(n):
            if target.element_orders[t] != want or t in image_of:
                continue
            nxt = extend(phi, image_of, list(gens[:j]), g, t)
            if nxt is not None:
                search(j + 1, *nxt)

    search(0, {0: 0}, {0: 0})
    return sorted(results)


def automorphisms(group: FiniteGroup, max_order: int = AUTOMORPHISM_ORDER_LIMIT) -> list:
    """Every automorphism of ``group``; the identity comes first."""
    if group.order > max_order:
        raise SizeLimitExceeded(f"automorphism search limited to order {max_order}")
    if group.order == 1:
        return [Automorphism((0,))]
    return [Automorphism(p) for p in isomorphisms(group, group)]


def involutions(group: FiniteGroup, max_order: int = AUTOMORPHISM_ORDER_LIMIT) -> list:
    """Automorphisms ``s`` with ``s∘s = id``, identity included."""
    return [a for a in automorphisms(group, max_order) if a.compose(a).is_identity]


def inner_automorphism(group: FiniteGroup, g: int) -> Automorphism:
    return Automorphism(tuple(group.conj(g, x) for x in range(group.order)))


@dataclass(frozen=True, eq=False)
class GGroup:
    """A finite group with an involutive automorphism (the Galois action)."""

    group: FiniteGroup
    sigma: Automorphism

    def __post_init__(self):
        if not is_automorphism(self.group, self.sigma.perm):
            raise InvalidAutomorphism("sigma is not an automorphism of the group")
        if not self.sigma.compose(self.sigma).is_identity:
            raise NotInvolutive("sigma∘sigma is not the identity")

    def __eq__(self, other):
        return isinstance(other, GGroup) and self.group == other.group and self.sigma == other.sigma

    def __hash__(self):
        return hash((self.group, self.sigma))

    @property
    def order(self) -> int:
        return self.group.order

    def fixed_points(self) -> list:
        return [g for g in range(self.order) if self.sigma(g) == g]

    @staticmethod
    def trivial_action(group: FiniteGroup) -> "GGroup":
        return GGroup(group, Automorphism.identity(group.order))


def inversion(group: FiniteGroup) -> Automorphism:
    """``x -> x^-1``; an automorphism only for abelian groups."""
    return make_automorphism(group, group.inverse.tolist())


def semidirect_with_sigma(gg: GGroup) -> FiniteGroup:
    """``Γ ⋊ <σ>``: ``(g, s)`` at index ``g + n*s`` with
    ``(g, s)(h, t) = (g σ^s(h), s + t)``."""
    n = gg.order
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for x, y in itertools.product(range(2 * n), repeat=2):
        g, s = x % n, x // n
        h, t = y % n, y // n
        hh = gg.sigma(h) if s else h
        table[x, y] = gg.group.mul(g, hh) + n * ((s + t) % 2)
    return make_group(table)
