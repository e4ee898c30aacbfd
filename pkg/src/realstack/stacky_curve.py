"""Betti-number bookkeeping for quotient stacks of curves.

A spec records the data that the counts depend on: ``h*(M(C))`` of the
coarse curve, the order of the kernel ``K`` of the action, the stabilizers of
the branch points, and the real components of ``M(R)`` with the number of
special points on each (real points whose stabilizer has two twisted forms).
All cohomology is with ``Z/2`` coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from ._unionfind import UnionFind
from .galois_h1 import h1
from .group_core import FiniteGroup, GroupError, cyclic, inversion, GGroup, quotient_group

SHAPES = ("circle", "open_interval", "half_open_interval", "closed_interval")
PROPER_SHAPES = ("circle", "closed_interval")


class CurveSpecError(GroupError):
    pass


class NegativeResult(CurveSpecError):
    pass


class NotFaithful(CurveSpecError):
    pass


class NotAbelianStabilizer(CurveSpecError):
    pass


class Unsupported(CurveSpecError):
    pass


def h1_of_mu_n(n: int) -> int:
    """Number of real forms of a point with stabilizer ``μ_n``."""
    if n < 1:
        raise ValueError("n must be positive")
    return 2 if n % 2 == 0 else 1


def h1_of_mu_n_enumerated(n: int) -> int:
    """Same count, through cohomology of ``Z/n`` with the inversion action."""
    g = cyclic(n)
    return h1(GGroup(g, inversion(g))).count


@dataclass(frozen=True)
class BranchPoint:
    stabilizer: FiniteGroup
    is_real: bool = False
    kernel: tuple | None = None  # elements of the marked central subgroup K

    @property
    def order(self) -> int:
        return self.stabilizer.order

    @property
    def class_count(self) -> int:
        return self.stabilizer.class_count

    @property
    def is_cyclic(self) -> bool:
        return self.order in self.stabilizer.element_orders

    @property
    def h1(self) -> int | None:
        if self.is_real and self.is_cyclic:
            return h1_of_mu_n(self.order)
        return None

    def kernel_subgroup(self, k: int) -> list:
        if self.kernel is not None:
            if len(self.kernel) != k:
                raise CurveSpecError("marked kernel has the wrong order")
            return sorted(self.kernel)
        if k == 1:
            return [0]
        if not self.is_cyclic or self.order % k:
            raise CurveSpecError(
                f"cannot locate a kernel of order {k} in a stabilizer of order {self.order}")
        gen = self.stabilizer.element_orders.index(self.order)
        return self.stabilizer.span([self.stabilizer.power(gen, self.order // k)])


@dataclass(frozen=True)
class RealComponentSpec:
    shape: str
    special_points: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise CurveSpecError(f"unknown component shape {self.shape!r}")
        if self.special_points < 0:
            raise CurveSpecError("special_points must be nonnegative")


@dataclass(frozen=True)
class StackyCurveSpec:
    """Data of a quotient stack of a curve.

    Give either ``h_star_M_complex`` or, for proper curves, ``genus``.
    ``quotient_real_components`` optionally lists the shapes of the components
    of the real locus of the faithful quotient; when absent they are derived
    from ``real_components`` by cutting at special points.
    """

    h_star_M_complex: int | None = None
    kernel_order: int = 1
    branch_points: tuple = ()
    real_components: tuple = ()
    faithful: bool = True
    proper: bool = False
    genus: int | None = None
    gamma_abelian: bool = False
    quotient_real_components: tuple | None = None

    def __post_init__(self):
        if self.h_star_M_complex is None:
            if self.genus is None:
                raise CurveSpecError("need h_star_M_complex or genus")
            object.__setattr__(self, "h_star_M_complex", 2 + 2 * self.genus)
        if self.h_star_M_complex < 0:
            raise CurveSpecError("h_star_M_complex must be nonnegative")
        if self.kernel_order < 1:
            raise CurveSpecError("kernel_order must be positive")
        if self.faithful and self.kernel_order != 1:
            raise CurveSpecError("a faithful spec has kernel_order 1")
        for i, bp in enumerate(self.branch_points):
            if bp.order % self.kernel_order:
                raise CurveSpecError(
                    f"branch point {i}: kernel order {self.kernel_order} "
                    f"does not divide stabilizer order {bp.order}")
        if self.proper:
            for i, c in enumerate(self.real_components):
                if c.shape not in PROPER_SHAPES:
                    raise CurveSpecError(f"component {i}: proper curves have no {c.shape}")


def inertia_h_star(spec: StackyCurveSpec) -> int:
    k = spec.kernel_order
    total = (k * spec.h_star_M_complex
             + sum(bp.class_count for bp in spec.branch_points)
             - len(spec.branch_points) * k)
    if total < 0:
        raise NegativeResult(f"inertia count came out as {total}")
    return total


def faithful_quotient(spec: StackyCurveSpec) -> StackyCurveSpec:
    """The spec of ``[X/Q]`` with stabilizers ``Γ_y / K``."""
    bps = []
    for bp in spec.branch_points:
        K = bp.kernel_subgroup(spec.kernel_order)
        q, _ = quotient_group(bp.stabilizer, K)
        bps.append(BranchPoint(q, bp.is_real))
    return replace(spec, kernel_order=1, faithful=True, branch_points=tuple(bps),
                   quotient_real_components=None)


def inertia_factorization_check(spec: StackyCurveSpec) -> bool:
    for i, bp in enumerate(spec.branch_points):
        if not bp.stabilizer.is_abelian:
            raise NotAbelianStabilizer(f"branch point {i} has a nonabelian stabilizer")
    return inertia_h_star(spec) == spec.kernel_order * inertia_h_star(faithful_quotient(spec))


def component_pieces(comp: RealComponentSpec) -> int:
    """Contractible pieces (or 2 for an uncut circle) left after cutting."""
    s = comp.special_points
    if comp.shape == "circle":
        return 2 if s == 0 else s
    return s + 1


def real_h_star_faithful(spec: StackyCurveSpec) -> int:
    if not spec.faithful:
        raise NotFaithful("the spec has a nontrivial kernel")
    return sum(component_pieces(c) for c in spec.real_components)


def cut_components(components) -> list:
    """Shapes of the pieces produced by cutting each component at its special points."""
    out = []
    for c in components:
        if c.shape == "circle" and c.special_points == 0:
            out.append("circle")
        else:
            out.extend(["closed_interval"] * component_pieces(c))
    return out


def real_h_star_abelian_bound(spec: StackyCurveSpec, faithful_real_components=None) -> int:
    """Upper bound on ``h*`` of the real locus for abelian ``Γ``.

    ``faithful_real_components`` are the shapes of the components of the real
    locus of ``[X/Q]``; by default they come from the spec.
    """
    shapes = faithful_real_components
    if shapes is None:
        shapes = spec.quotient_real_components
    if shapes is None:
        shapes = cut_components(spec.real_components)
    k = spec.kernel_order
    return sum(2 * k if s == "circle" else k for s in shapes)


@dataclass(frozen=True)
class CurveReport:
    real: int
    inertia: int
    real_is_bound: bool

    @property
    def holds(self) -> bool:
        return self.real <= self.inertia


def smith_thom_curve(spec: StackyCurveSpec) -> CurveReport:
    inertia = inertia_h_star(spec)
    if spec.faithful:
        return CurveReport(real_h_star_faithful(spec), inertia, False)
    if spec.gamma_abelian:
        return CurveReport(real_h_star_abelian_bound(spec), inertia, True)
    raise Unsupported("needs a faithful action or an abelian group")


def simulate_cuts(comp: RealComponentSpec, positions=None) -> int:
    """``b0 + b1`` of a component after doubling every special point.

    The component is a cycle (circle) or a path (interval) on ``2s + 2``
    vertices; the special points sit at ``positions`` (default: odd vertices).
    Each special vertex is split into two, one per incident edge, and the
    resulting graph's Betti numbers are counted with union-find.
    """
    s = comp.special_points
    L = 2 * s + 2
    positions = sorted(positions) if positions is not None else [2 * i + 1 for i in range(s)]
    special = set(positions)
    closed = comp.shape == "circle"
    # vertex v -> (left copy, right copy); ordinary vertices have one copy
    ids = {}
    for v in range(L):
        if v in special:
            ids[v] = (len(ids) * 2, len(ids) * 2 + 1)
        else:
            ids[v] = (len(ids) * 2, len(ids) * 2)
    nv = 2 * L
    used = set()
    edges = []
    for v in range(L if closed else L - 1):
        w = (v + 1) % L
        a, b = ids[v][1], ids[w][0]
        edges.append((a, b))
        used.update((a, b))
    if not closed:
        used.add(ids[0][0])
        used.add(ids[L - 1][1])
    uf = UnionFind(nv)
    for a, b in edges:
        uf.union(a, b)
    b0 = len({uf.find(x) for x in used})
    b1 = len(edges) - len(used) + b0
    return b0 + b1


def abelian_inversion_real_h_star(g: int, k: int) -> int:
    """``h*`` of the real locus of ``[A/±1]`` for a real abelian variety of
    dimension 1 or 2 whose real locus has ``2^k`` components.

    The real locus is two copies of ``A(R)/±1``, which is ``2^k`` intervals
    for ``g = 1`` and ``2^k`` spheres for ``g = 2``.
    """
    if g not in (1, 2) or not 0 <= k <= g:
        raise CurveSpecError("formula covers g in {1, 2} and 0 <= k <= g")
    per_piece = 1 if g == 1 else 2
    return 2 * (2**k) * per_piece
