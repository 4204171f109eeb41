from __future__ import annotations

from fractions import Fraction

import pytest

from blocktool.blocks import (
    BlockContext,
    brauer_hom,
    class_algebra_product,
    defect_groups,
    dict_conjugate,
    dict_convolve,
    dict_equal,
    frobenius_dict,
    fusion_category,
    fusion_equal,
    relative_subpair_block,
    subpair_family,
    v_p,
)
from blocktool.cyclo import CyclotomicNumber, in_subfield
from blocktool.perm import Group, Perm, sylow_subgroup
from conftest import corpus_group
from oracle_center import CenterAlgebraOracle

Z = CyclotomicNumber.zeta


@pytest.fixture(scope="module")
def c6_ctx():
    return BlockContext(corpus_group("C6"), 2)


def test_c6_partition_p2(c6_ctx):
    blocks = c6_ctx.blocks()
    assert len(blocks) == 3
    assert all(len(b.irr_rows) == 2 for b in blocks)
    assert all(b.defect == 1 for b in blocks)
    # each block pairs the two characters sharing a restriction to C3
    T = c6_ctx.table
    G = c6_ctx.group
    g2 = next(x for x in G.elements if x.order() == 3)
    i3 = G.class_of(g2)
    for b in blocks:
        r1, r2 = b.irr_rows
        assert T.values[r1][i3] == T.values[r2][i3]


def test_s3_single_block_p3():
    ctx = BlockContext(corpus_group("S3"), 3)
    blocks = ctx.blocks()
    assert len(blocks) == 1
    assert blocks[0].irr_rows == (0, 1, 2)
    assert blocks[0].defect == 1


def test_semisimple_case_every_char_own_block():
    ctx = BlockContext(corpus_group("S3"), 5)
    blocks = ctx.blocks()
    assert len(blocks) == 3
    assert all(b.defect == 0 for b in blocks)


def test_c3_trivial_block_coefficients():
    C3 = Group(3, [Perm.from_cycles(3, (1, 2, 3))], name="C3")
    ctx = BlockContext(C3, 2)
    principal = next(b for b in ctx.blocks()
                     if any(all(v == 1 for v in ctx.table.values[r])
                            for r in b.irr_rows))
    # the trivial character alone: e = (1/3)(1 + g + g^2)
    assert principal.irr_rows == tuple(
        r for r in range(3) if all(v == 1 for v in ctx.table.values[r]))
    assert all(c == Fraction(1, 3) for c in principal.coeffs)


def test_c6_omega_block_coefficients(c6_ctx):
    T = c6_ctx.table
    G = c6_ctx.group
    g = next(x for x in G.elements if x.order() == 6)
    gi = G.class_of(g)
    b_omega = next(b for b in c6_ctx.blocks()
                   if any(T.values[r][gi] == Z(6, 1) for r in b.irr_rows))
    for i, c in enumerate(b_omega.coeffs):
        cls = T.classes[i]
        if cls.rep_order in (1, 3):
            assert not c.is_zero()
            assert c.coeffs[0].denominator in (1, 3)
            assert in_subfield(c, 3)
        else:
            assert c.is_zero()


@pytest.mark.parametrize("name,p", [("C6", 2), ("S3", 2), ("S3", 3),
                                    ("A4", 2), ("A4", 3), ("D8", 2),
                                    ("Q8", 2), ("D10", 2), ("D10", 5),
                                    ("S4", 2), ("S4", 3), ("C5C4", 2),
                                    ("C5C4", 5), ("C7C3", 3), ("C7C3", 7)])
def test_block_oracle_equivalence(name, p):
    """Central-character partition == independent idempotent splitting."""
    G = corpus_group(name)
    ctx = BlockContext(G, p)
    mine = sorted(tuple(b.residue_coeffs) for b in ctx.blocks())
    oracle = CenterAlgebraOracle(ctx.field, G)
    theirs = oracle.primitive_idempotents()
    assert mine == theirs


def test_galois_swap_on_c6(c6_ctx):
    T = c6_ctx.table
    G = c6_ctx.group
    g = next(x for x in G.elements if x.order() == 6)
    gi = G.class_of(g)
    b_omega = next(b for b in c6_ctx.blocks()
                   if any(T.values[r][gi] == Z(6, 1) for r in b.irr_rows))
    image = c6_ctx.galois_image(b_omega)
    assert image.index != b_omega.index
    assert c6_ctx.galois_image(image).index == b_omega.index
    orbits = c6_ctx.galois_orbits()
    assert sorted(len(o) for o in orbits) == [1, 2]


def test_rational_table_gives_singleton_orbits():
    ctx = BlockContext(corpus_group("S4"), 2)
    assert all(len(o) == 1 for o in ctx.galois_orbits())


def test_galois_orbit_power_is_identity():
    ctx = BlockContext(corpus_group("C7C3"), 3)
    for b in ctx.blocks():
        L = ctx.orbit_length(b)
        assert ctx.galois_image(b, L).index == b.index


def test_defect_principal_block():
    for name, p in (("S4", 2), ("A4", 2), ("A5", 2), ("Q8", 2)):
        G = corpus_group(name)
        ctx = BlockContext(G, p)
        principal = next(b for b in ctx.blocks()
                         if any(all(v == 1 for v in ctx.table.values[r])
                                for r in b.irr_rows))
        assert principal.defect == v_p(G.order, p)


def test_defect_zero_block_a5_p5():
    ctx = BlockContext(corpus_group("A5"), 5)
    sizes = sorted((b.defect, len(b.irr_rows)) for b in ctx.blocks())
    # A5 at p=5: principal block of defect 1 and the 5-dim character alone
    assert (0, 1) in sizes
    d0 = next(b for b in ctx.blocks() if b.defect == 0)
    assert defect_groups(ctx, d0)[0].order == 1


def test_brauer_hom_basics(c6_ctx):
    G = c6_ctx.group
    F = c6_ctx.field
    b = c6_ctx.blocks()[0]
    bdict = c6_ctx.residue_dict(b)
    triv = G.trivial_subgroup()
    assert dict_equal(brauer_hom(c6_ctx, bdict, triv), bdict)
    # sigma-equivariance: frobenius(Br_Q(a)) = Br_Q(frobenius(a))
    P = sylow_subgroup(G, 2)
    lhs = frobenius_dict(F, brauer_hom(c6_ctx, bdict, P))
    rhs = brauer_hom(c6_ctx, frobenius_dict(F, bdict), P)
    assert dict_equal(lhs, rhs)


def test_brauer_hom_kills_outside_support():
    G = corpus_group("S4")
    ctx = BlockContext(G, 2)
    P = sylow_subgroup(G, 2)
    # class sum of 3-cycles is P-fixed but its support misses C_G(P)
    three_cycle_class = next(c for c in G.conjugacy_classes() if c.rep_order == 3)
    elem = {g: ctx.field.one for g in three_cycle_class.elements}
    assert brauer_hom(ctx, elem, P) == {}


def test_defect_groups_examples():
    G = corpus_group("S4")
    ctx = BlockContext(G, 2)
    principal = next(b for b in ctx.blocks() if b.defect == v_p(G.order, 2))
    D = defect_groups(ctx, principal)
    assert len(D) == 1 and D[0].order == 8
    c6 = BlockContext(corpus_group("C6"), 2)
    for b in c6.blocks():
        D = defect_groups(c6, b)
        assert D[0].order == 2
        assert all(x.order() in (1, 2) for x in D[0].elements)


def test_subpair_family_c6(c6_ctx):
    T = c6_ctx.table
    G = c6_ctx.group
    g = next(x for x in G.elements if x.order() == 6)
    gi = G.class_of(g)
    b_omega = next(b for b in c6_ctx.blocks()
                   if any(T.values[r][gi] == Z(6, 1) for r in b.irr_rows))
    fam = subpair_family(c6_ctx, b_omega)
    assert fam.P.order == 2
    # C_G(P) = C6, so e_P is b_omega itself
    assert fam.e_P.irr_rows == b_omega.irr_rows
    assert fam.block_at(fam.P).irr_rows == b_omega.irr_rows
    assert fam.block_at(G.trivial_subgroup()).irr_rows == b_omega.irr_rows


def test_subpair_family_poset_iso_under_galois():
    for name, p in (("C6", 2), ("A4", 2), ("C7C3", 3)):
        ctx = BlockContext(corpus_group(name), p)
        for b in ctx.blocks():
            fam = subpair_family(ctx, b)
            sb = ctx.galois_image(b)
            sub_P, _ = ctx.centralizer_context(fam.P)
            fam2 = subpair_family(ctx, sb, P=fam.P,
                                  e_P=sub_P.galois_image(fam.e_P))
            for Q in fam.subgroups():
                sub_Q, _ = ctx.centralizer_context(Q)
                assert fam2.block_at(Q).index == \
                    sub_Q.galois_image(fam.block_at(Q)).index


def test_fusion_abelian_is_trivial(c6_ctx):
    b = c6_ctx.blocks()[0]
    fam = subpair_family(c6_ctx, b)
    F = fusion_category(c6_ctx, fam)
    for (Qk, Rk), homs in F.morphisms.items():
        Q = next(S for S, _ in fam.assignment.values() if S.key() == Qk)
        R = next(S for S, _ in fam.assignment.values() if S.key() == Rk)
        if all(x in R for x in Q.elements):
            assert len(homs) == 1  # the inclusion only
        else:
            assert homs == ()


def test_fusion_contains_p_conjugations():
    G = corpus_group("S4")
    ctx = BlockContext(G, 2)
    principal = next(b for b in ctx.blocks() if b.defect == 3)
    fam = subpair_family(ctx, principal)
    F = fusion_category(ctx, fam)
    for Q in fam.subgroups():
        for x in fam.P.elements:
            R = Q.conjugate_by(x)
            xinv = x.inverse()
            enc = tuple((x * g * xinv).img for g in Q.elements)
            assert enc in F.hom(Q.key(), R.key())


def test_fusion_equal_and_corruption_witness(c6_ctx):
    T = c6_ctx.table
    G = c6_ctx.group
    g = next(x for x in G.elements if x.order() == 6)
    gi = G.class_of(g)
    b_omega = next(b for b in c6_ctx.blocks()
                   if any(T.values[r][gi] == Z(6, 1) for r in b.irr_rows))
    fam = subpair_family(c6_ctx, b_omega)
    F1 = fusion_category(c6_ctx, fam)
    ok, witness = fusion_equal(F1, F1)
    assert ok and witness is None
    # corrupt the family: replace e_Q at Q=P by a different block of kC_G(P)
    sub_P, _ = c6_ctx.centralizer_context(fam.P)
    other = next(f for f in sub_P.blocks() if f.index != fam.e_P.index)
    corrupted_assignment = dict(fam.assignment)
    corrupted_assignment[fam.P.key()] = (fam.P, other)
    from blocktool.blocks import SubpairFamily
    corrupted = SubpairFamily(fam.P, fam.e_P, corrupted_assignment)
    F2 = fusion_category(c6_ctx, corrupted)
    ok, witness = fusion_equal(F1, F2)
    assert not ok
    assert witness is not None and "morphism" in witness or "pair" in witness


def test_chain_independence_of_subpair_blocks():
    # recompute e_Q through a second chain when one exists: in S4 with P = D8,
    # any order-2 subgroup Q of the center chain vs direct normalizer chain
    G = corpus_group("S4")
    ctx = BlockContext(G, 2)
    principal = next(b for b in ctx.blocks() if b.defect == 3)
    fam = subpair_family(ctx, principal)
    P = fam.P
    from blocktool.perm import all_subgroups
    for Q in all_subgroups(P):
        # path 1: the family (normalizer chain inside P)
        via_family = fam.block_at(Q)
        # path 2: descend through any intermediate R with Q normal in R <= P
        for R in all_subgroups(P):
            if R.order <= Q.order or R.order == P.order:
                continue
            if not all(x in R for x in Q.elements):
                continue
            if not all(r * q * r.inverse() in Q for r in R.elements
                       for q in Q.elements):
                continue
            e_R = fam.block_at(R)
            via_R = relative_subpair_block(ctx, R, e_R, Q)
            assert via_R.index == via_family.index


def test_class_algebra_product_matches_convolution(c6_ctx):
    # multiply two block idempotents elementwise over F_q and compare with
    # the exact class-algebra route reduced mod P
    b0, b1 = c6_ctx.blocks()[0], c6_ctx.blocks()[1]
    F = c6_ctx.field
    conv = dict_convolve(F, c6_ctx.residue_dict(b0), c6_ctx.residue_dict(b1))
    assert conv == {}
    exact = class_algebra_product(c6_ctx.table, b0.coeffs, b1.coeffs)
    assert all(c.is_zero() for c in exact)
