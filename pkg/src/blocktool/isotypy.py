"""Perfect isometries and isotypies between Galois conjugate blocks.

The isometry under test sends chi to its Galois twist; the verifier
checks, with exact arithmetic throughout:

  * the two-variable character mu(x, y) = sum chi(x) I(chi)(y) is
    divisible by |C_G(x)| at the chosen prime above p (and, in strict
    mode, by |C_H(y)| as well), and vanishes whenever exactly one of
    x, y is p-singular;
  * the fusion data of the block and its twist agree, and the twisted
    subpair family is the Galois image of the original one;
  * for every cyclic subgroup Q = <x> of the defect group, every
    generator x, and every character of the block, the generalized
    decomposition maps commute with the isometries.

Everything is recorded in a certificate with per-check witnesses; the
verdict is "pass" only if every sub-check passed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import InconclusiveError, InputError, InternalCheckError
from .blocks import (
    BlockContext,
    BlockIdempotent,
    SubpairFamily,
    fusion_category,
    fusion_equal,
    subpair_family,
    v_p,
)
from .chartab import CharacterTable, ClassFunction, frobenius_twist_row, regular_classes
from .cyclo import CyclotomicNumber, rational
from .perm import Perm, cyclic_subgroups_with_generators, p_decompose


@dataclass(frozen=True)
class Isometry:
    """A signed bijection Irr(source) -> Irr(target) inside one group."""
    ctx: BlockContext
    source: BlockIdempotent
    target: BlockIdempotent
    power: int
    char_map: dict        # row -> row
    signs: dict           # row -> +1/-1

    def mu(self, class_x: int, class_y: int) -> CyclotomicNumber:
        T = self.ctx.table
        acc = rational(0)
        for row in self.source.irr_rows:
            acc = acc + (T.values[row][class_x]
                         * T.values[self.char_map[row]][class_y]
                         * self.signs[row])
        return acc


def build_isometry(ctx: BlockContext, b: BlockIdempotent, n: int) -> Isometry:
    """chi -> sigma^n(chi) from b to sigma^n(b); all signs +1.

    The image set is verified to be exactly Irr of the target block.
    """
    target = ctx.galois_image(b, n) if n else b
    mapping = {}
    for row in b.irr_rows:
        image = row
        for _ in range(n):
            image = frobenius_twist_row(ctx.table, image, ctx.p)
        mapping[row] = image
    if sorted(mapping.values()) != sorted(target.irr_rows):
        raise InternalCheckError(
            "Galois twist of block characters misses the target block")
    return Isometry(ctx, b, target, n, mapping, {r: 1 for r in b.irr_rows})


def apply_power_isometry(phi: ClassFunction, p: int, n: int = 1) -> ClassFunction:
    """Precompose with g -> g_p * g_p'^(p^n) (full support), or y -> y^(p^n)
    on p-regular support."""
    T = phi.table
    G = T.group
    q = p**n
    if phi.support == "all":
        vals = []
        for c in T.classes:
            g_p, g_pp = p_decompose(c.representative, p)
            vals.append(phi.values[G.class_of(g_p * g_pp**q)])
        return ClassFunction(T, tuple(vals))
    reg = regular_classes(T, p)
    pos = {cls: i for i, cls in enumerate(reg)}
    vals = []
    for cls in reg:
        g = T.classes[cls].representative
        target = G.class_of(g**q)
        vals.append(phi.values[pos[target]])
    return ClassFunction(T, tuple(vals), support="regular", p=p)


def gen_decomp(ctx: BlockContext, table: CharacterTable, row: int, x: Perm,
               cent_ctx: BlockContext,
               e: BlockIdempotent | None) -> ClassFunction:
    """The generalized decomposition map applied to one character:
    y -> sum over h of e_h * chi(x h y), on p-regular classes of C_G(x).

    ``e`` is a block of the centralizer algebra (None means the identity,
    i.e. the plain map). x must be a p-element.
    """
    p = ctx.p
    if not _is_p_element(x, p):
        raise InputError("x is not a p-element")
    T_c = cent_ctx.table
    G = table.group
    reg = regular_classes(T_c, p)
    vals = []
    for cls in reg:
        y = T_c.classes[cls].representative
        if e is None:
            acc = table.values[row][G.class_of(x * y)]
        else:
            acc = rational(0)
            for i, c in enumerate(e.coeffs):
                if c.is_zero():
                    continue
                for h in T_c.classes[i].elements:
                    acc = acc + c * table.values[row][G.class_of(x * h * y)]
        vals.append(acc)
    return ClassFunction(T_c, tuple(vals), support="regular", p=p)


def _is_p_element(x: Perm, p: int) -> bool:
    n = x.order()
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# perfect isometry verification

def verify_perfect_isometry(iso: Isometry, strict: bool = False) -> dict:
    """Check integrality and vanishing of mu on every class pair.

    Returns a report with one record per class pair; "status" is "pass",
    "fail", or "inconclusive".
    """
    ctx = iso.ctx
    T = ctx.table
    oracle = ctx.oracle
    p = ctx.p
    e_ram = oracle.e
    pairs = []
    status = "pass"
    witness = None
    for ix, cx in enumerate(T.classes):
        cent_x = T.group.order // cx.size
        need = e_ram * v_p(cent_x, p)
        for iy, cy in enumerate(T.classes):
            mu = iso.mu(ix, iy)
            rec = {"x": ix, "y": iy, "required": need}
            mixed = cx.is_p_regular(p) != cy.is_p_regular(p)
            if mu.is_zero():
                rec["value"] = "zero"
                rec["ok"] = True
            else:
                if mixed:
                    rec["value"] = "nonzero"
                    rec["ok"] = False
                    status = "fail"
                    witness = witness or {
                        "condition": "vanishing-on-mixed-pairs",
                        "x_class": ix, "y_class": iy,
                        "mu": mu.to_json(),
                    }
                    pairs.append(rec)
                    continue
                try:
                    v = oracle.valuation(mu)
                except InconclusiveError:
                    rec["value"] = "inconclusive"
                    rec["ok"] = False
                    if status != "fail":
                        status = "inconclusive"
                    pairs.append(rec)
                    continue
                rec["valuation"] = v
                checks = [v >= need]
                if strict:
                    cent_y = T.group.order // cy.size
                    need_y = e_ram * v_p(cent_y, p)
                    rec["required_strict"] = need_y
                    checks.append(v >= need_y)
                rec["ok"] = all(checks)
                if not rec["ok"]:
                    status = "fail"
                    witness = witness or {
                        "condition": "centralizer-divisibility",
                        "x_class": ix, "y_class": iy,
                        "valuation": v, "required": need,
                        "mu": mu.to_json(),
                    }
            pairs.append(rec)
    return {"status": status, "pairs": pairs, "witness": witness,
            "strict": strict}


# ---------------------------------------------------------------------------
# the full isotypy certificate

@dataclass
class IsotypyCertificate:
    group_name: str
    group_hash: str
    p: int
    block_index: int
    power: int
    strict: bool
    defect_group: list          # one-based generator images of P
    e_P_index: int
    morphism_convention: str
    fusion: dict = field(default_factory=dict)
    family_twist: dict = field(default_factory=dict)
    cyclic_checks: list = field(default_factory=list)
    verdict: str = "pass"
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "schema": "blocktool-isotypy-v1",
            "group": self.group_name,
            "groupHash": self.group_hash,
            "prime": self.p,
            "block": self.block_index,
            "power": self.power,
            "strict": self.strict,
            "defectGroup": self.defect_group,
            "ePIndex": self.e_P_index,
            "fusion": {"morphism_convention": self.morphism_convention,
                       **self.fusion},
            "familyTwist": self.family_twist,
            "cyclicSubgroups": self.cyclic_checks,
            "verdict": self.verdict,
            "witness": self.witness,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _downgrade(cert: IsotypyCertificate, status: str, witness) -> None:
    order = {"pass": 0, "inconclusive": 1, "fail": 2}
    if order[status] > order[cert.verdict]:
        cert.verdict = status
    if witness is not None and cert.witness is None:
        cert.witness = witness


def verify_isotypy(ctx: BlockContext, b: BlockIdempotent, n: int,
                   strict: bool = False,
                   family: SubpairFamily | None = None,
                   twisted_family: SubpairFamily | None = None) -> IsotypyCertificate:
    """Certify that b and sigma^n(b) are isotypic, via the twist isometries.

    The optional family arguments exist so tests can inject corrupted
    fixtures; by default both subpair families are computed here.
    """
    target = ctx.galois_image(b, n)
    if family is None:
        family = subpair_family(ctx, b)
    P = family.P
    sub_P, _ = ctx.centralizer_context(P)
    if twisted_family is None:
        twisted_family = subpair_family(ctx, target, P=P,
                                        e_P=sub_P.galois_image(family.e_P, n))
    cert = IsotypyCertificate(
        group_name=ctx.group.name,
        group_hash=ctx.group.canonical_hash(),
        p=ctx.p,
        block_index=b.index,
        power=n,
        strict=strict,
        defect_group=[g.one_based() for g in (P.generators or P.elements)],
        e_P_index=family.e_P.index,
        morphism_convention="conjugate-Q",  # the inclusion reads ^gQ, not ^gP
    )

    # (0) the twisted family must be the Galois image of the original one
    twist_ok = True
    twist_witness = None
    for Q in family.subgroups():
        sub_Q, _ = ctx.centralizer_context(Q)
        expected = sub_Q.galois_image(family.block_at(Q), n)
        got = twisted_family.block_at(Q)
        if got.index != expected.index:
            twist_ok = False
            twist_witness = {"Q": [g.one_based() for g in Q.elements],
                             "expected": expected.index, "got": got.index}
            break
    cert.family_twist = {"ok": twist_ok, "witness": twist_witness}
    if not twist_ok:
        _downgrade(cert, "fail", {"condition": "family-twist", **twist_witness})

    # (1) fusion equality
    F1 = fusion_category(ctx, family)
    F2 = fusion_category(ctx, twisted_family)
    eq, fusion_witness = fusion_equal(F1, F2)
    if F1.skipped or F2.skipped:
        cert.fusion = {"ok": True, "skipped": True,
                       "reason": f"|P| > fusion cap {ctx.fusion_cap}"}
    else:
        cert.fusion = {"ok": eq, "skipped": False, "witness": fusion_witness}
        if not eq:
            _downgrade(cert, "fail", {"condition": "fusion-equality",
                                      **fusion_witness})

    # (2) per cyclic subgroup: perfect isometry plus commuting squares
    for Q, generators in cyclic_subgroups_with_generators(P):
        sub_Q, _ = ctx.centralizer_context(Q)
        e_Q = family.block_at(Q)
        f_Q = twisted_family.block_at(Q)
        record = {
            "Q": [g.one_based() for g in Q.elements],
            "generators": [g.one_based() for g in generators],
            "e_Q": e_Q.index, "f_Q": f_Q.index,
        }
        iso_Q = build_isometry(sub_Q, e_Q, n)
        if iso_Q.target.index != f_Q.index:
            _downgrade(cert, "fail", {
                "condition": "cyclic-block-mismatch",
                "Q": record["Q"],
                "expected": f_Q.index,
                "got": iso_Q.target.index})
            record["perfect_isometry"] = {"status": "fail"}
            cert.cyclic_checks.append(record)
            continue
        pi_report = verify_perfect_isometry(iso_Q, strict=strict)
        record["perfect_isometry"] = {
            "status": pi_report["status"],
            "pairs_checked": len(pi_report["pairs"]),
            "witness": pi_report["witness"],
        }
        if pi_report["status"] != "pass":
            _downgrade(cert, pi_report["status"],
                       pi_report["witness"] and
                       {"condition": "perfect-isometry", "Q": record["Q"],
                        **pi_report["witness"]})
        squares = _verify_commuting_squares(ctx, b, target, n, Q, generators,
                                            e_Q, f_Q, sub_Q)
        record["commuting_squares"] = squares
        if squares["status"] != "pass":
            _downgrade(cert, squares["status"],
                       squares.get("witness") and
                       {"condition": "commuting-square", "Q": record["Q"],
                        **squares["witness"]})
        cert.cyclic_checks.append(record)
    return cert


def _verify_commuting_squares(ctx, b, target, n, Q, generators, e_Q, f_Q,
                              sub_Q) -> dict:
    """I^Q_p' after d^(x, e_Q) equals d^(x, sigma^n e_Q) after sigma^n,
    for every generator x of Q and every character in b, checked on every
    p-regular class of C_G(Q)."""
    p = ctx.p
    T = ctx.table
    T_c = sub_Q.table
    checked = 0
    witness = None
    status = "pass"
    twist_row_cache = {}
    for x in generators:
        for row in b.irr_rows:
            lhs = apply_power_isometry(
                gen_decomp(ctx, T, row, x, sub_Q, e_Q), p, n)
            image_row = twist_row_cache.get(row)
            if image_row is None:
                image_row = row
                for _ in range(n):
                    image_row = frobenius_twist_row(T, image_row, p)
                twist_row_cache[row] = image_row
            rhs = gen_decomp(ctx, T, image_row, x, sub_Q, f_Q)
            checked += len(lhs.values)
            if lhs != rhs:
                status = "fail"
                if witness is None:
                    reg = regular_classes(T_c, p)
                    bad = next(i for i, (a, c) in
                               enumerate(zip(lhs.values, rhs.values)) if a != c)
                    witness = {
                        "generator": x.one_based(),
                        "character_row": row,
                        "class_of_C": reg[bad],
                        "lhs": lhs.values[bad].to_json(),
                        "rhs": rhs.values[bad].to_json(),
                    }
    return {"status": status, "values_checked": checked, "witness": witness}


def exit_code_for_verdict(verdict: str) -> int:
    return {"pass": 0, "fail": 1, "inconclusive": 2}[verdict]


def recheck_certificate(ctx: BlockContext, cert: IsotypyCertificate) -> bool:
    """Replay the verification and compare byte-for-byte."""
    again = verify_isotypy(ctx, ctx.blocks()[cert.block_index], cert.power,
                           strict=cert.strict)
    return again.serialize() == cert.serialize()
