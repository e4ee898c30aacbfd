import pytest

from realstack.galois_h1 import (
    NotAbelian,
    NotACocycle,
    NotEquivariant,
    h1,
    h1_abelian,
    h1_action,
    torsor_involution,
    twist_ggroup,
    z1,
)
from realstack.group_core import (
    Automorphism,
    GGroup,
    catalog,
    cyclic,
    elementary_abelian_2,
    inner_automorphism,
    inversion,
    involutions,
    symmetric,
)

SWAP = Automorphism((0, 2, 1, 3))


def brute_h1_count(gg):
    """Classes by repeated closure, without union-find."""
    G = gg.group
    cocycles = [g for g in range(G.order) if G.mul(g, gg.sigma(g)) == 0]
    left = set(cocycles)
    count = 0
    while left:
        g = min(left)
        cls = {G.product(b, g, G.inv(gg.sigma(b))) for b in range(G.order)}
        left -= cls
        count += 1
    return count


def triv(g):
    return GGroup.trivial_action(g)


def test_z1_examples():
    assert z1(triv(cyclic(2))) == [0, 1]
    assert z1(GGroup(elementary_abelian_2(2), SWAP)) == [0, 3]
    assert z1(triv(cyclic(1))) == [0]


def test_h1_examples():
    assert h1(triv(cyclic(2))).count == 2
    assert h1(GGroup(elementary_abelian_2(2), SWAP)).count == 1
    assert h1(GGroup(cyclic(3), inversion(cyclic(3)))).count == 1
    assert h1(GGroup(cyclic(4), inversion(cyclic(4)))).count == 2


def test_h1_shape():
    c = h1(triv(symmetric(3)))
    assert c.representatives[0] == 0 and c.class_of[0] == 0
    # identity plus the transposition class
    assert c.count == 2
    assert sorted(x for cls in c.classes() for x in cls) == sorted(c.z1)
    for cid, rep in enumerate(c.representatives):
        assert rep == min(c.members(cid))


def test_h1_abelian_examples():
    assert h1_abelian(GGroup(cyclic(4), inversion(cyclic(4)))) == 2
    assert h1_abelian(triv(elementary_abelian_2(2))) == 4
    assert h1_abelian(triv(cyclic(3))) == 1
    with pytest.raises(NotAbelian):
        h1_abelian(triv(symmetric(3)))


def test_twist_examples():
    v = GGroup(elementary_abelian_2(2), SWAP)
    assert twist_ggroup(v, 3).sigma == SWAP
    s3 = triv(symmetric(3))
    assert twist_ggroup(s3, 0).twisted == s3
    transposition = 1  # (0, 2, 1) in lexicographic order
    tw = twist_ggroup(s3, transposition)
    assert tw.sigma == inner_automorphism(s3.group, transposition)
    assert len(tw.real_subgroup()) == 2
    with pytest.raises(NotACocycle):
        twist_ggroup(s3, 3)  # a 3-cycle does not square to e


def test_torsor_involution_examples():
    assert torsor_involution(triv(cyclic(3)), 0) == (0, 1, 2)
    assert torsor_involution(triv(cyclic(2)), 1) == (1, 0)
    v = GGroup(elementary_abelian_2(2), SWAP)
    perm = torsor_involution(v, 3)
    # (a, b) -> (b + 1, a + 1) with index a + 2b
    expect = []
    for x in range(4):
        a, b = x & 1, x >> 1
        expect.append(((b + 1) % 2) + 2 * ((a + 1) % 2))
    assert perm == tuple(expect)
    assert all(perm[perm[i]] == i for i in range(4))
    # H^1 is trivial here, so this torsor has real points: (1, 0) and (0, 1)
    assert [i for i in range(4) if perm[i] == i] == [1, 2]


def test_h1_action_examples():
    v = triv(elementary_abelian_2(2))
    assert h1_action(v, Automorphism.identity(4)) == (0, 1, 2, 3)
    perm = h1_action(v, SWAP)
    assert sum(1 for i, j in enumerate(perm) if i == j) == 2
    assert h1_action(GGroup(elementary_abelian_2(2), SWAP), SWAP) == (0,)
    c4 = GGroup(cyclic(4), inversion(cyclic(4)))
    with pytest.raises(NotEquivariant):
        h1_action(GGroup(elementary_abelian_2(2), SWAP), Automorphism((0, 1, 3, 2)))
    assert h1_action(c4, inversion(cyclic(4))) == (0, 1)


def all_ggroups(max_order):
    for name, g in catalog(max_order).items():
        for s in involutions(g):
            yield name, GGroup(g, s)


@pytest.mark.parametrize("name, gg", list(all_ggroups(12)))
def test_h1_against_brute_force(name, gg):
    c = h1(gg)
    assert c.count == brute_h1_count(gg)
    assert c.count <= gg.group.class_count
    if gg.group.is_abelian:
        assert c.count == h1_abelian(gg)
    if gg.order % 2:
        assert c.count == 1


def test_action_is_multiplicative():
    v = triv(elementary_abelian_2(3))
    autos = [a for a in involutions(v.group)][:6]
    for a in autos:
        for b in autos:
            pa, pb = h1_action(v, a), h1_action(v, b)
            assert h1_action(v, a.compose(b)) == tuple(pa[pb[i]] for i in range(len(pb)))
