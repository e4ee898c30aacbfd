"""Seeded instance generators shared by the property and acceptance suites."""

import numpy as np

from realstack.group_core import (
    Automorphism,
    GGroup,
    automorphisms,
    catalog,
    cyclic,
    direct_product,
    elementary_abelian_2,
    involutions,
    subgroups,
    symmetric,
)
from realstack.split_gerbe import Base, MonodromyGerbe
from realstack.stacky_curve import BranchPoint, RealComponentSpec, StackyCurveSpec, SHAPES


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _commutator(a, b):
    return a.compose(b).compose(a.inverse()).compose(b.inverse())


def surface_gerbe(rng, genus: int, fiber=None) -> MonodromyGerbe:
    """A gerbe over a genus-g surface given by images of a_1, b_1, ..., a_g, b_g."""
    if fiber is None:
        fiber = _pick(rng, [elementary_abelian_2(1), elementary_abelian_2(2),
                            elementary_abelian_2(3), symmetric(3), cyclic(4)])
    autos = automorphisms(fiber)
    ident = Automorphism.identity(fiber.order)
    if genus == 0:
        return MonodromyGerbe(GGroup.trivial_action(fiber), (), Base("proper_curve", 0),
                              surface_generators=True)
    while True:
        gens = [_pick(rng, autos) for _ in range(2 * genus - 2)]
        rest = ident
        for j in range(genus - 1):
            rest = rest.compose(_commutator(gens[2 * j], gens[2 * j + 1]))
        want = rest.inverse()
        pairs = [(a, b) for a in autos for b in autos if _commutator(a, b) == want]
        if pairs:
            gens += list(_pick(rng, pairs))
            return MonodromyGerbe(GGroup.trivial_action(fiber), tuple(gens),
                                  Base("proper_curve", genus), surface_generators=True)


def abelian_curve_spec(rng) -> StackyCurveSpec:
    """A non-faithful spec whose stabilizers are all abelian, with a central kernel marked."""
    k = int(_pick(rng, [1, 2, 3, 4]))
    bps = []
    for _ in range(int(rng.integers(0, 5))):
        m = int(rng.integers(1, 4))
        if rng.random() < 0.5:
            group = cyclic(k * m)
        else:
            group = direct_product(cyclic(k), cyclic(m))
        kernels = [s for s in subgroups(group) if len(s) == k]
        bps.append(BranchPoint(group, bool(rng.random() < 0.5), tuple(_pick(rng, kernels))))
    comps = tuple(RealComponentSpec(_pick(rng, SHAPES), int(rng.integers(0, 4)))
                  for _ in range(int(rng.integers(0, 3))))
    return StackyCurveSpec(h_star_M_complex=int(rng.integers(0, 9)), kernel_order=k,
                           branch_points=tuple(bps), real_components=comps,
                           faithful=(k == 1), gamma_abelian=True)


def base_change_pair(rng, max_order: int = 8):
    """A fiber G-group and a loop action ω for which ω∘σ is again an involution."""
    groups = list(catalog(max_order).values())
    group = _pick(rng, groups)
    sigma = _pick(rng, involutions(group))
    tau = _pick(rng, involutions(group))
    return GGroup(group, sigma), tau.compose(sigma.inverse())


def rng(seed: int):
    return np.random.default_rng(seed)

