"""p-blocks: partition, idempotents, Galois action, defect groups, Brauer
pairs, and fusion data.

A BlockContext bundles one (group, prime) session: the character table,
the p-adic oracle (shared with all centralizer sub-sessions so every
residue lands in the same F_q), and the computed blocks. Blocks are cut
out by the residues of central characters and their idempotents are
rebuilt from the character sums, then every textbook property is checked
exactly before the objects are released: idempotency, orthogonality,
p-regular support, rationality over the p'-part cyclotomics, and
p-integrality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import InputError, InternalCheckError
from .chartab import CharacterTable, character_table
from .cyclo import frobenius_lift, in_subfield, rational
from .localfield import NotIntegralError, PadicOracle, split_prime_part
from .perm import (
    DEFAULT_SYLOW_CAP,
    Group,
    Perm,
    Subgroup,
    all_subgroups,
    centralizer_of_subgroup,
    p_subgroups_up_to_conjugacy,
)

DEFAULT_FUSION_CAP = 16


def v_p(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class BlockIdempotent:
    """A primitive central idempotent of the group algebra, with its exact
    cyclotomic class coefficients and their residues in F_q."""
    index: int
    irr_rows: tuple[int, ...]
    coeffs: tuple              # CyclotomicNumber per class
    residue_coeffs: tuple      # F_q element per class
    defect: int

    def __repr__(self):
        return (f"Block#{self.index}(chars={list(self.irr_rows)}, "
                f"defect={self.defect})")


class BlockContext:
    """All block-theoretic data for one (group, prime) pair."""

    def __init__(self, G: Group, p: int, cache_dir=None, oracle=None,
                 modulus_seed: int = 0, precision: int | None = None,
                 sylow_cap: int = DEFAULT_SYLOW_CAP,
                 fusion_cap: int = DEFAULT_FUSION_CAP):
        self.group = G
        self.p = p
        self.cache_dir = cache_dir
        self.sylow_cap = sylow_cap
        self.fusion_cap = fusion_cap
        self.table = character_table(G, cache_dir=cache_dir)
        if oracle is None:
            oracle = PadicOracle(p, self.table.conductor, group_order=G.order,
                                 M0=precision, modulus_seed=modulus_seed)
        else:
            if oracle.N % self.table.conductor:
                raise InputError("shared oracle conductor too small for subgroup")
        self.oracle = oracle
        self.field = oracle.field
        self.sigma = frobenius_lift(p, self.table.conductor)
        self._blocks = None
        self._residue_dicts = {}
        self._centralizer_ctxs = {}
        self._relative_cache = {}

    # -- block partition and idempotents ------------------------------------

    def blocks(self) -> tuple[BlockIdempotent, ...]:
        if self._blocks is None:
            self._blocks = self._compute_blocks()
        return self._blocks

    def _compute_blocks(self) -> tuple[BlockIdempotent, ...]:
        T = self.table
        r = T.n_classes
        vectors = {}
        for row in range(r):
            try:
                vec = tuple(self.oracle.residue(T.central_character(row, i))
                            for i in range(r))
            except NotIntegralError as exc:
                raise InternalCheckError(
                    f"central character not integral: {exc}") from exc
            vectors.setdefault(vec, []).append(row)
        groups = sorted(vectors.values(), key=min)
        blocks = []
        for idx, rows in enumerate(groups):
            blocks.append(self._build_idempotent(idx, tuple(rows)))
        self._verify_orthogonal_decomposition(blocks)
        return tuple(blocks)

    def _build_idempotent(self, idx: int, rows: tuple[int, ...]) -> BlockIdempotent:
        T = self.table
        G = self.group
        coeffs = []
        for i in range(T.n_classes):
            inv_i = T.inverse_map[i]
            acc = rational(0)
            for row in rows:
                acc = acc + T.values[row][inv_i] * Fraction(T.degree(row), G.order)
            coeffs.append(acc)
        self._verify_idempotent(coeffs)
        n_prime = split_prime_part(T.conductor, self.p)[1]
        residues = []
        for i, c in enumerate(coeffs):
            if not T.classes[i].is_p_regular(self.p):
                if not c.is_zero():
                    raise InternalCheckError(
                        f"block coefficient nonzero on p-singular class {i}")
            if not in_subfield(c, n_prime):
                raise InternalCheckError(
                    "block coefficient outside the p'-part cyclotomic field")
            try:
                residues.append(self.oracle.residue(c))
            except NotIntegralError as exc:
                raise InternalCheckError(
                    f"block coefficient not p-integral: {exc}") from exc
        defect = v_p(G.order, self.p) - min(v_p(T.degree(row), self.p)
                                            for row in rows)
        return BlockIdempotent(idx, rows, tuple(coeffs), tuple(residues), defect)

    def _verify_idempotent(self, coeffs) -> None:
        prod = class_algebra_product(self.table, coeffs, coeffs)
        if any(a != b for a, b in zip(prod, coeffs)):
            raise InternalCheckError("block candidate is not idempotent")

    def _verify_orthogonal_decomposition(self, blocks) -> None:
        T = self.table
        total = [rational(0)] * T.n_classes
        for b in blocks:
            total = [a + c for a, c in zip(total, b.coeffs)]
        want = [rational(1 if i == 0 else 0) for i in range(T.n_classes)]
        if any(a != w for a, w in zip(total, want)):
            raise InternalCheckError("block idempotents do not sum to 1")
        for i, a in enumerate(blocks):
            for b in blocks[i + 1:]:
                prod = class_algebra_product(T, a.coeffs, b.coeffs)
                if any(not c.is_zero() for c in prod):
                    raise InternalCheckError("distinct blocks multiply nonzero")

    def block_of_row(self, row: int) -> BlockIdempotent:
        for b in self.blocks():
            if row in b.irr_rows:
                return b
        raise InputError(f"row {row} not in any block")

    # -- Galois action -------------------------------------------------------

    def galois_image(self, b: BlockIdempotent, n: int = 1) -> BlockIdempotent:
        """sigma^n(b): verified to be one of the blocks, with residues equal
        to the coefficientwise p^n-th power of the residues of b."""
        sigma_n = self.sigma.power(n)
        mapped = [sigma_n.apply(c) for c in b.coeffs]
        for cand in self.blocks():
            if all(x == y for x, y in zip(cand.coeffs, mapped)):
                F = self.field
                expect = tuple(F.pow(c, self.p**n) for c in b.residue_coeffs)
                if tuple(cand.residue_coeffs) != expect:
                    raise InternalCheckError(
                        "Galois image residues are not p^n-th powers")
                return cand
        raise InternalCheckError("Galois image of a block is not a block")

    def galois_orbits(self) -> list[list[int]]:
        seen = set()
        orbits = []
        for b in self.blocks():
            if b.index in seen:
                continue
            orbit = [b.index]
            seen.add(b.index)
            cur = self.galois_image(b)
            while cur.index != b.index:
                orbit.append(cur.index)
                seen.add(cur.index)
                cur = self.galois_image(cur)
            orbits.append(orbit)
        return orbits

    def orbit_length(self, b: BlockIdempotent) -> int:
        for orbit in self.galois_orbits():
            if b.index in orbit:
                return len(orbit)
        raise InternalCheckError("block missing from orbit partition")

    # -- residues and centralizer sessions ----------------------------------

    def residue_dict(self, b: BlockIdempotent) -> dict:
        """The residue idempotent as an element-indexed dictionary over F_q."""
        if b.index not in self._residue_dicts:
            G = self.group
            out = {}
            for g in G.elements:
                c = b.residue_coeffs[G.class_of(g)]
                if any(c):
                    out[g] = c
            self._residue_dicts[b.index] = out
        return self._residue_dicts[b.index]

    def centralizer_context(self, Q: Subgroup) -> tuple[BlockContext, Subgroup]:
        """Session for C_G(Q), sharing this session's oracle and residue field."""
        key = Q.key()
        if key not in self._centralizer_ctxs:
            C = centralizer_of_subgroup(self.group, Q)
            sub = BlockContext(C.as_group(name=f"{self.group.name}-cent"),
                               self.p, cache_dir=self.cache_dir,
                               oracle=self.oracle, sylow_cap=self.sylow_cap,
                               fusion_cap=self.fusion_cap)
            self._centralizer_ctxs[key] = (sub, C)
        return self._centralizer_ctxs[key]


def class_algebra_product(table: CharacterTable, ca, cb) -> list:
    """Product of two center elements in class-sum coordinates (exact)."""
    a = table.class_matrices()
    r = table.n_classes
    out = [rational(0) for _ in range(r)]
    for i, x in enumerate(ca):
        if x.is_zero():
            continue
        for j, y in enumerate(cb):
            if y.is_zero():
                continue
            xy = x * y
            row = a[i][j]
            for k in range(r):
                if row[k]:
                    out[k] = out[k] + xy * row[k]
    return out


def block_partition(ctx: BlockContext) -> list[tuple[int, ...]]:
    """Rows of Irr grouped into blocks, by residues of central characters."""
    return [b.irr_rows for b in ctx.blocks()]


def block_idempotent_coeffs(ctx: BlockContext, b: BlockIdempotent) -> dict:
    """Class-index -> exact cyclotomic coefficient map of the idempotent."""
    return {i: c for i, c in enumerate(b.coeffs) if not c.is_zero()}


def defect(b: BlockIdempotent) -> int:
    return b.defect


# ---------------------------------------------------------------------------
# group-algebra dictionaries over F_q

def dict_conjugate(a: dict, g: Perm) -> dict:
    ginv = g.inverse()
    return {g * h * ginv: v for h, v in a.items()}


def dict_convolve(field, a: dict, b: dict) -> dict:
    out = {}
    for g, va in a.items():
        for h, vb in b.items():
            gh = g * h
            prod = field.mul(va, vb)
            if gh in out:
                out[gh] = field.add(out[gh], prod)
            else:
                out[gh] = prod
    return {g: v for g, v in out.items() if any(v)}


def dict_equal(a: dict, b: dict) -> bool:
    return {g: v for g, v in a.items() if any(v)} == \
        {g: v for g, v in b.items() if any(v)}


def frobenius_dict(field, a: dict, n: int = 1) -> dict:
    """Coefficientwise p^n-th power (the ring endomorphism of kG)."""
    q = field.char**n
    return {g: field.pow(v, q) for g, v in a.items()}


def brauer_hom(ctx: BlockContext, a: dict, Q: Subgroup) -> dict:
    """Br_Q: truncate a Q-fixed element of F_qG to its C_G(Q) support."""
    gens = Q.generators or Q.elements
    for t in gens:
        if not dict_equal(dict_conjugate(a, t), a):
            raise InputError("element is not Q-conjugation-fixed")
    C = centralizer_of_subgroup(ctx.group, Q)
    return {g: v for g, v in a.items() if g in C}


def is_stable_under(a: dict, S: Subgroup) -> bool:
    gens = S.generators or S.elements
    return all(dict_equal(dict_conjugate(a, t), a) for t in gens)


# ---------------------------------------------------------------------------
# defect groups and subpair families

def defect_groups(ctx: BlockContext, b: BlockIdempotent) -> list[Subgroup]:
    """Maximal p-subgroups (up to conjugacy) with Br_Q(b) nonzero."""
    bdict = ctx.residue_dict(b)
    nonzero = []
    for S in p_subgroups_up_to_conjugacy(ctx.group, ctx.p, ctx.sylow_cap):
        if brauer_hom(ctx, bdict, S):
            nonzero.append(S)
    top = max(S.order for S in nonzero)
    cands = [S for S in nonzero if S.order == top]
    if top != ctx.p**b.defect:
        raise InternalCheckError(
            f"defect group order {top} != p^defect {ctx.p**b.defect}")
    if len(cands) != 1:
        raise InternalCheckError("defect groups split into several classes")
    return cands


@dataclass(frozen=True)
class SubpairFamily:
    """The maximal pair (P, e_P) and the induced block e_Q for every Q <= P."""
    P: Subgroup
    e_P: BlockIdempotent
    assignment: dict  # Q.key() -> (Subgroup, BlockIdempotent of kC_G(Q))

    def block_at(self, Q: Subgroup) -> BlockIdempotent:
        return self.assignment[Q.key()][1]

    def subgroups(self) -> list[Subgroup]:
        return [q for q, _ in sorted(self.assignment.values(),
                                     key=lambda t: (t[0].order, t[0].key()))]


def _normal_descend(ctx: BlockContext, Tbig: Subgroup, e_big_dict: dict,
                    Tsmall: Subgroup) -> BlockIdempotent:
    """The unique Tbig-stable block f of kC_G(Tsmall) with Br_Tbig(f) e = e.

    This is the normal-inclusion step for Brauer pairs; zero or several
    candidates would contradict the uniqueness in the inclusion theory.
    """
    sub, C = ctx.centralizer_context(Tsmall)
    hits = []
    for f in sub.blocks():
        fdict = sub_residue_dict(ctx, sub, f)
        if not is_stable_under(fdict, Tbig):
            continue
        br = {g: v for g, v in fdict.items()
              if all(g * t == t * g for t in (Tbig.generators or Tbig.elements))}
        prod = dict_convolve(ctx.field, br, e_big_dict)
        if dict_equal(prod, e_big_dict):
            hits.append(f)
    if len(hits) != 1:
        raise InternalCheckError(
            f"normal subpair inclusion has {len(hits)} candidates, expected 1")
    return hits[0]


def sub_residue_dict(root: BlockContext, sub: BlockContext,
                     b: BlockIdempotent) -> dict:
    return sub.residue_dict(b)


def _normalizer_within(G: Group, R: Subgroup, T: Subgroup) -> Subgroup:
    elems = tuple(r for r in R.elements
                  if all(r * t * r.inverse() in T for t in T.elements))
    return Subgroup(G, elems, elems)


def _normalizer_chain(G: Group, S: Subgroup, R: Subgroup) -> list[Subgroup]:
    """S = T_0 normal in T_1 normal in ... normal in T_k = R inside the
    p-group R, via iterated normalizers."""
    chain = [S]
    cur = S
    while cur.key() != R.key():
        nxt = _normalizer_within(G, R, cur)
        if nxt.order == cur.order:
            raise InternalCheckError("normalizer chain stalled below the top")
        chain.append(nxt)
        cur = nxt
    return chain


def relative_subpair_block(ctx: BlockContext, R: Subgroup,
                           e_R: BlockIdempotent, S: Subgroup) -> BlockIdempotent:
    """The unique block f of kC_G(S) with (S, f) <= (R, e_R), S <= R."""
    key = (R.key(), e_R.index, S.key())
    if key in ctx._relative_cache:
        return ctx._relative_cache[key]
    if S.key() == R.key():
        result = e_R
    else:
        chain = _normalizer_chain(ctx.group, S, R)
        sub_top, _ = ctx.centralizer_context(R)
        cur_block = e_R
        cur_sub = sub_top
        for i in range(len(chain) - 2, -1, -1):
            cur_dict = cur_sub.residue_dict(cur_block)
            cur_block = _normal_descend(ctx, chain[i + 1], cur_dict, chain[i])
            cur_sub, _ = ctx.centralizer_context(chain[i])
        result = cur_block
    ctx._relative_cache[key] = result
    return result


def subpair_family(ctx: BlockContext, b: BlockIdempotent,
                   P: Subgroup | None = None,
                   e_P: BlockIdempotent | None = None) -> SubpairFamily:
    """Maximal Brauer pair plus the unique block below it at every Q <= P.

    P defaults to the first defect group and e_P to the first block of
    kC_G(P) covered by Br_P(b); both can be pinned (the Galois-image
    family is anchored at the twisted e_P to compare against sigma of
    the original family).
    """
    if P is None:
        P = defect_groups(ctx, b)[0]
    sub_P, _ = ctx.centralizer_context(P)
    br_b = brauer_hom(ctx, ctx.residue_dict(b), P)
    if e_P is None:
        for f in sub_P.blocks():
            fdict = sub_P.residue_dict(f)
            if dict_equal(dict_convolve(ctx.field, br_b, fdict), fdict):
                e_P = f
                break
        else:
            raise InternalCheckError("no block of kC_G(P) is covered by Br_P(b)")
    else:
        fdict = sub_P.residue_dict(e_P)
        if not dict_equal(dict_convolve(ctx.field, br_b, fdict), fdict):
            raise InternalCheckError("pinned e_P is not covered by Br_P(b)")
    assignment = {}
    for Q in all_subgroups(P):
        block_Q = relative_subpair_block(ctx, P, e_P, Q)
        assignment[Q.key()] = (Q, block_Q)
    fam = SubpairFamily(P, e_P, assignment)
    trivial_key = ctx.group.trivial_subgroup().key()
    if assignment[trivial_key][1].irr_rows != b.irr_rows:
        raise InternalCheckError("subpair family at the trivial subgroup is not b")
    return fam


# ---------------------------------------------------------------------------
# fusion data

@dataclass(frozen=True)
class FusionData:
    """Morphism sets of the fusion category on the subgroups of P.

    Morphisms Q -> R are conjugation maps (encoded by the image tuple of
    the sorted elements of Q) realized by some g in G carrying the
    subpair at Q below the subpair at R. The morphism condition reads
    the printed ^gP in the inclusion as ^gQ; that convention is recorded
    by the certificate emitter.
    """
    P_key: tuple
    morphisms: dict | None  # (Q.key(), R.key()) -> sorted tuple of encodings
    skipped: bool = False

    def hom(self, Qkey, Rkey):
        return self.morphisms.get((Qkey, Rkey), ())


def fusion_category(ctx: BlockContext, fam: SubpairFamily,
                    size_cap: int | None = None) -> FusionData:
    size_cap = ctx.fusion_cap if size_cap is None else size_cap
    if fam.P.order > size_cap:
        return FusionData(fam.P.key(), None, skipped=True)
    G = ctx.group
    subs = all_subgroups(fam.P)
    morphisms = {}
    for Q in subs:
        e_Q = fam.block_at(Q)
        sub_Q, C_Q = ctx.centralizer_context(Q)
        e_Q_dict = sub_Q.residue_dict(e_Q)
        cosets = []
        seen = set()
        for g in G.elements:
            if g in seen:
                continue
            cosets.append(g)
            for c in C_Q.elements:
                seen.add(g * c)
        for R in subs:
            found = set()
            for g in cosets:
                conj_Q = Q.conjugate_by(g)
                if not all(x in R for x in conj_Q.elements):
                    continue
                required = dict_conjugate(e_Q_dict, g)
                actual_block = relative_subpair_block(ctx, R, fam.block_at(R),
                                                      conj_Q)
                sub_cq, _ = ctx.centralizer_context(conj_Q)
                actual = sub_cq.residue_dict(actual_block)
                if dict_equal(required, actual):
                    ginv = g.inverse()
                    found.add(tuple((g * x * ginv).img for x in Q.elements))
            morphisms[(Q.key(), R.key())] = tuple(sorted(found))
    return FusionData(fam.P.key(), morphisms)


def fusion_equal(F1: FusionData, F2: FusionData):
    """Set equality of all morphism sets; returns (bool, witness or None)."""
    if F1.skipped or F2.skipped:
        return True, "skipped"
    if F1.P_key != F2.P_key:
        return False, {"reason": "different maximal subgroups"}
    keys = set(F1.morphisms) | set(F2.morphisms)
    for key in sorted(keys):
        a = set(F1.morphisms.get(key, ()))
        b = set(F2.morphisms.get(key, ()))
        if a != b:
            diff = sorted(a.symmetric_difference(b))[0]
            return False, {"pair": [list(map(list, key[0])), list(map(list, key[1]))],
                           "morphism": [list(img) for img in diff]}
    return True, None
