"""Independent oracle: primitive idempotents of Z(F_qG) by algebra splitting.

This route never looks at characters: it builds the center from class sums
and structure constants counted directly in the group, then splits the
commutative algebra along eigenspaces of multiplication operators until
every factor is local. Used to cross-check the central-character block
partition.
"""

from __future__ import annotations

from blocktool.ffield import mat_solve, poly_divmod, poly_mul


def _structure_constants(G):
    classes = G.conjugacy_classes()
    r = len(classes)
    lookup = {g: G.class_of(g) for g in G.elements}
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, Ci in enumerate(classes):
        for u in Ci.elements:
            u_inv = u.inverse()
            for k, ck in enumerate(classes):
                j = lookup[u_inv * ck.representative]
                a[i][j][k] += 1
    return a


class CenterAlgebraOracle:
    """Z(F_qG) in class-sum coordinates."""

    def __init__(self, field, G):
        self.field = field
        self.G = G
        self.r = len(G.conjugacy_classes())
        self._a = _structure_constants(G)
        self.unit = [field.one if i == 0 else field.zero for i in range(self.r)]

    def multiply(self, x, y):
        F = self.field
        out = [F.zero] * self.r
        for i, xi in enumerate(x):
            if F.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if F.is_zero(yj):
                    continue
                xy = F.mul(xi, yj)
                row = self._a[i][j]
                for k in range(self.r):
                    if row[k]:
                        out[k] = F.add(out[k], F.mul(xy, F.from_int(row[k])))
        return out

    def class_sum(self, j):
        return [self.field.one if i == j else self.field.zero for i in range(self.r)]

    def _min_poly(self, e, y):
        """Minimal polynomial of y in the unital algebra e*Z (unit e)."""
        F = self.field
        powers = [list(e)]  # y^0 = e
        cur = list(e)
        while True:
            cur = self.multiply(cur, y)
            sol = _solve_in_span(F, powers, cur)
            if sol is not None:
                return [F.neg(c) for c in sol] + [F.one]
            powers.append(cur)

    def split_idempotent(self, e, x):
        """Split e along the spectrum of y = e*x; returns orthogonal
        idempotents summing to e (possibly just [e])."""
        F = self.field
        y = self.multiply(e, x)
        mp = self._min_poly(e, y)
        roots = []
        rest = list(mp)
        for lam in _field_elements(F):
            m = 0
            while True:
                q, r = poly_divmod(F, rest, [F.neg(lam), F.one])
                if r:
                    break
                rest = q
                m += 1
            if m:
                roots.append((lam, m))
            if len(rest) == 1:
                break
        assert len(rest) == 1, "minimal polynomial did not split over F_q"
        if len(roots) == 1:
            return [e]
        out = []
        for lam, m in roots:
            flam = [F.one]
            for mu, k in roots:
                if mu != lam:
                    for _ in range(k):
                        flam = poly_mul(F, flam, [F.neg(mu), F.one])
            # invert flam modulo (t - lam)^m via power series in (t - lam)
            glam = _inverse_mod_power(F, flam, lam, m)
            h = poly_mul(F, flam, glam)
            out.append(self._eval_poly(h, y, e))
        total = [F.zero] * self.r
        for idem in out:
            total = [F.add(a, b) for a, b in zip(total, idem)]
        assert total == list(e)
        return out

    def _eval_poly(self, poly, y, e):
        F = self.field
        acc = [F.zero] * self.r
        power = e
        for c in poly:
            if not F.is_zero(c):
                acc = [F.add(a, F.mul(c, b)) for a, b in zip(acc, power)]
            power = self.multiply(power, y)
        return acc

    def primitive_idempotents(self):
        """Full set, by exhaustive splitting along all class sums."""
        idems = [self.unit]
        changed = True
        while changed:
            changed = False
            nxt = []
            for e in idems:
                pieces = [e]
                for j in range(self.r):
                    new_pieces = []
                    for piece in pieces:
                        new_pieces.extend(self.split_idempotent(piece, self.class_sum(j)))
                    pieces = new_pieces
                if len(pieces) > 1:
                    changed = True
                nxt.extend(pieces)
            idems = nxt
        return sorted(tuple(v) for v in idems)


def _field_elements(F):
    return F.elements()


def _solve_in_span(F, vectors, target):
    """Coefficients expressing target in the given (ordered) vectors, or None."""
    ncols = len(vectors)
    rows = [[vectors[j][i] for j in range(ncols)] for i in range(len(target))]
    return mat_solve(F, rows, list(target))


def _inverse_mod_power(F, poly, lam, m):
    """Inverse of poly modulo (t - lam)^m, by Taylor expansion at lam."""
    # shift: write poly(t) = sum a_i (t - lam)^i; invert the truncated series;
    # shift back
    shifted = _taylor_shift(F, poly, lam)[:m]
    shifted += [F.zero] * (m - len(shifted))
    assert not F.is_zero(shifted[0])
    inv = [F.inv(shifted[0])] + [F.zero] * (m - 1)
    for k in range(1, m):
        acc = F.zero
        for i in range(1, k + 1):
            acc = F.add(acc, F.mul(shifted[i] if i < len(shifted) else F.zero,
                                   inv[k - i]))
        inv[k] = F.neg(F.mul(inv[0], acc))
    return _taylor_shift(F, inv, F.neg(lam))


def _taylor_shift(F, poly, lam):
    """Coefficients of poly(t + lam)."""
    out = [F.zero] * len(poly)
    for c in reversed(poly):
        # out = out * (t + lam) + c
        carry = [F.zero] * len(poly)
        for i in range(len(poly) - 1):
            carry[i + 1] = out[i]
        for i in range(len(poly)):
            carry[i] = F.add(carry[i], F.mul(out[i], lam))
        carry[0] = F.add(carry[0], c)
        out = carry
    return out
