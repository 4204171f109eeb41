"""Finite fields, polynomial arithmetic over them, and exact linear algebra.

Fields are objects carrying the operations; elements are plain data (ints
for prime fields, coefficient tuples for extensions) so they hash and
compare structurally. Linear algebra routines take the field as their
first argument and work over any object with this interface, including
the cyclotomic adapter used for characteristic-zero solves.
"""

from __future__ import annotations

import itertools
import random

from . import BlocktoolError, InputError
from .cyclo import CyclotomicNumber, rational


class PrimeField:
    """F_p with elements 0..p-1 as plain ints."""

    def __init__(self, p: int):
        self.p = p
        self.char = p
        self.size = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def pow(self, a, n: int):
        return pow(a, n, self.p) if n >= 0 else pow(self.inv(a), -n, self.p)

    def frobenius(self, a):
        return a % self.p

    def elements(self):
        return range(self.p)

    def prime_dim(self) -> int:
        return 1

    def to_fp_vector(self, a) -> list[int]:
        return [a % self.p]

    def from_fp_vector(self, vec) -> int:
        return vec[0] % self.p

    def format(self, a) -> str:
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __repr__(self):
        return f"F_{self.p}"


class ExtField:
    """base[y]/(modulus), modulus monic of degree >= 1 over base.

    Elements are tuples of base elements of length deg(modulus).
    """

    def __init__(self, base, modulus: tuple, var: str = "u"):
        if not base.is_zero(base.sub(modulus[-1], base.one)):
            raise InputError("modulus must be monic")
        self.base = base
        self.modulus = tuple(modulus)
        self.deg = len(modulus) - 1
        self.var = var
        self.char = base.char
        self.size = base.size**self.deg
        self.zero = tuple([base.zero] * self.deg)
        self.one = tuple([base.one] + [base.zero] * (self.deg - 1))
        # x^k mod modulus for k up to 2*deg-2
        first = list(self.zero)
        first[0] = base.one
        self._red = [tuple(first)]
        for k in range(1, 2 * self.deg - 1):
            prev = self._red[k - 1]
            shifted = [base.zero] + list(prev[:-1])
            overflow = prev[-1]
            if not base.is_zero(overflow):
                for i in range(self.deg):
                    shifted[i] = base.sub(shifted[i], base.mul(overflow, self.modulus[i]))
            self._red.append(tuple(shifted))

    def gen(self) -> tuple:
        """The class of y."""
        if self.deg == 1:
            # y = -modulus[0]
            return tuple([self.base.neg(self.modulus[0])])
        out = list(self.zero)
        out[1] = self.base.one
        return tuple(out)

    def embed(self, a) -> tuple:
        """Embed a base-field element."""
        return tuple([a] + [self.base.zero] * (self.deg - 1))

    def from_int(self, n: int) -> tuple:
        return self.embed(self.base.from_int(n))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        conv = [base.zero] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    conv[i + j] = base.add(conv[i + j], base.mul(x, y))
        out = list(conv[:self.deg])
        for k in range(self.deg, 2 * self.deg - 1):
            c = conv[k]
            if base.is_zero(c):
                continue
            row = self._red[k]
            for i in range(self.deg):
                out[i] = base.add(out[i], base.mul(c, row[i]))
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0")
        r0 = [c for c in self.modulus]
        r1 = poly_trim(self.base, list(a))
        s0, s1 = [], [self.base.one]
        while len(r1) > 1:
            q, rem = poly_divmod(self.base, r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(self.base, s0, poly_mul(self.base, q, s1))
            if not r1:
                raise BlocktoolError("modulus not coprime to element")
        scale = self.base.inv(r1[0])
        out = [self.base.mul(scale, c) for c in s1]
        out += [self.base.zero] * (self.deg - len(out))
        return tuple(out[:self.deg])

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def frobenius(self, a):
        return self.pow(a, self.char)

    def elements(self):
        for combo in itertools.product(self.base.elements(), repeat=self.deg):
            yield tuple(reversed(combo))

    def prime_dim(self) -> int:
        return self.base.prime_dim() * self.deg

    def to_fp_vector(self, a) -> list[int]:
        out = []
        for c in a:
            out.extend(self.base.to_fp_vector(c))
        return out

    def from_fp_vector(self, vec):
        step = self.base.prime_dim()
        return tuple(self.base.from_fp_vector(vec[i * step:(i + 1) * step])
                     for i in range(self.deg))

    def format(self, a) -> str:
        parts = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            monomial = "1" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = self.base.format(c)
            parts.append(monomial if (cs == "1" and i > 0) else
                         (cs if i == 0 else f"{cs}*{monomial}"))
        return "+".join(parts) if parts else "0"

    def __eq__(self, other):
        return (isinstance(other, ExtField) and other.base == self.base
                and other.modulus == self.modulus)

    def __repr__(self):
        return f"ExtField({self.base!r}, deg={self.deg})"


class CycloField:
    """Field-protocol adapter for exact cyclotomic numbers of one conductor."""

    def __init__(self, N: int):
        self.N = N
        self.char = 0
        self.zero = rational(0).lift(N)
        self.one = rational(1).lift(N)

    def from_int(self, n: int):
        return rational(n).lift(self.N)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def pow(self, a, n):
        return a**n

    def format(self, a) -> str:
        return repr(a)


# ---------------------------------------------------------------------------
# polynomials over a field: dense coefficient lists, constant term first

def poly_trim(field, p: list) -> list:
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def poly_add(field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [field.zero] * (n - len(a))
    b = b + [field.zero] * (n - len(b))
    return poly_trim(field, [field.add(x, y) for x, y in zip(a, b)])


def poly_sub(field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [field.zero] * (n - len(a))
    b = b + [field.zero] * (n - len(b))
    return poly_trim(field, [field.sub(x, y) for x, y in zip(a, b)])


def poly_mul(field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not field.is_zero(y):
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return poly_trim(field, out)


def poly_divmod(field, num: list, den: list) -> tuple[list, list]:
    num = list(num)
    den = poly_trim(field, list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], poly_trim(field, num)
    lead_inv = field.inv(den[-1])
    q = [field.zero] * (len(num) - len(den) + 1)
    for shift in range(len(q) - 1, -1, -1):
        factor = field.mul(num[shift + len(den) - 1], lead_inv)
        if field.is_zero(factor):
            continue
        q[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] = field.sub(num[shift + i], field.mul(factor, c))
    return poly_trim(field, q), poly_trim(field, num[:len(den) - 1])


def poly_mod(field, num: list, den: list) -> list:
    return poly_divmod(field, num, den)[1]


def poly_gcd(field, a: list, b: list) -> list:
    a, b = poly_trim(field, list(a)), poly_trim(field, list(b))
    while b:
        a, b = b, poly_mod(field, a, b)
    if a:
        scale = field.inv(a[-1])
        a = [field.mul(scale, c) for c in a]
    return a


def poly_powmod(field, base: list, n: int, mod: list) -> list:
    result = [field.one]
    base = poly_mod(field, base, mod)
    while n:
        if n & 1:
            result = poly_mod(field, poly_mul(field, result, base), mod)
        base = poly_mod(field, poly_mul(field, base, base), mod)
        n >>= 1
    return result


def poly_eval(field, p: list, x):
    acc = field.zero
    for c in reversed(p):
        acc = field.add(field.mul(acc, x), c)
    return acc


def factor_equal_degree(field: PrimeField, poly: list, d: int,
                        seed: int) -> list[tuple]:
    """All monic irreducible factors of a squarefree polynomial over F_p
    whose factors are known to share the degree d (Cantor-Zassenhaus).

    Returns factor coefficient tuples sorted lexicographically.
    """
    rng = random.Random(seed)
    p = field.p
    done = []
    work = [poly_trim(field, list(poly))]
    scale = field.inv(work[0][-1])
    work = [[field.mul(scale, c) for c in work[0]]]
    while work:
        g = work.pop()
        if len(g) - 1 == d:
            done.append(tuple(g))
            continue
        while True:
            a = [field.from_int(rng.randrange(p)) for _ in range(len(g) - 1)]
            a = poly_trim(field, a)
            if len(a) <= 0:
                continue
            if p == 2:
                # trace map of F_{2^d} over F_2 applied to a, mod g
                t = list(a)
                acc = list(a)
                for _ in range(d - 1):
                    acc = poly_powmod(field, acc, 2, g)
                    t = poly_add(field, t, acc)
                cand = poly_gcd(field, t, g)
            else:
                b = poly_powmod(field, a, (p**d - 1) // 2, g)
                cand = poly_gcd(field, poly_sub(field, b, [field.one]), g)
            if 0 < len(cand) - 1 < len(g) - 1:
                rest, rem = poly_divmod(field, g, cand)
                assert not rem
                work.append(cand)
                work.append(rest)
                break
    return sorted(done)


def find_quadratic_modulus(field) -> tuple:
    """Deterministic monic irreducible quadratic over any finite field.

    Odd characteristic: y^2 - c for the first non-square c.
    Characteristic 2: y^2 + y + c for the first c of absolute trace 1.
    """
    if field.char != 2:
        squares = {field.mul(x, x) for x in field.elements()}
        for c in field.elements():
            if c not in squares:
                return (field.neg(c), field.zero, field.one)
        raise BlocktoolError("no non-square found")
    k = field.prime_dim()
    for c in field.elements():
        tr = c
        acc = c
        for _ in range(k - 1):
            acc = field.mul(acc, acc)
            tr = field.add(tr, acc)
        if not field.is_zero(tr):
            return (c, field.one, field.one)
    raise BlocktoolError("no trace-one element found")


# ---------------------------------------------------------------------------
# dense exact linear algebra over a field object

def mat_rref(field, rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows))
                      if not field.is_zero(rows[i][c])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y))
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def mat_rank(field, rows: list[list]) -> int:
    return len(mat_rref(field, rows)[0])


def mat_kernel(field, rows: list[list], ncols: int) -> list[list]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    rref, pivots = mat_rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(rref[r][fc])
        basis.append(vec)
    return basis


def mat_solve(field, rows: list[list], rhs: list):
    """One solution x of A x = b, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = mat_rref(field, aug)
    ncols = len(rows[0]) if rows else 0
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    return x


def mat_mul_vec(field, rows: list[list], vec: list) -> list:
    out = []
    for row in rows:
        acc = field.zero
        for a, b in zip(row, vec):
            if not (field.is_zero(a) or field.is_zero(b)):
                acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return out


def coords_in_rref_basis(field, rref_rows: list[list], pivots: list[int],
                         vec: list):
    """Coordinates of vec in the span of RREF basis rows, or None."""
    coords = [vec[pc] for pc in pivots]
    check = [field.zero] * len(vec)
    for c, row in zip(coords, rref_rows):
        if field.is_zero(c):
            continue
        check = [field.add(x, field.mul(c, y)) for x, y in zip(check, row)]
    if any(not field.is_zero(field.sub(x, y)) for x, y in zip(check, vec)):
        return None
    return coords
