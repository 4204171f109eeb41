"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Values are residues modulo the N-th cyclotomic polynomial, held as dense
vectors of exact rationals of length phi(N). Mixed conductors are lifted
to the lcm on demand. Everything is exact; there is no floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from . import BlocktoolError, InputError

ZERO = Fraction(0)
ONE = Fraction(1)


def euler_phi(n: int) -> int:
    count = 0
    for k in range(1, n + 1):
        if math.gcd(k, n) == 1:
            count += 1
    return count


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first.

    Computed as (x^n - 1) / prod_{d|n, d<n} Phi_d by exact division.
    """
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        div = cyclotomic_polynomial(d)
        poly = _int_poly_div(poly, div)
    return tuple(poly)


def _int_poly_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(out) - 1, -1, -1):
        lead = num[shift + len(den) - 1]
        q, r = divmod(lead, den[-1])
        assert r == 0
        out[shift] = q
        for i, c in enumerate(den):
            num[shift + i] -= q * c
    assert all(c == 0 for c in num)
    return out


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [ZERO] * (n - len(a))
    b = b + [ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    if len(num) < len(den):
        return [], _poly_trim(num)
    q = [ZERO] * (len(num) - len(den) + 1)
    for shift in range(len(q) - 1, -1, -1):
        factor = num[shift + len(den) - 1] / den[-1]
        if factor:
            q[shift] = factor
            for i, c in enumerate(den):
                num[shift + i] -= factor * c
    return _poly_trim(q), _poly_trim(num[:len(den) - 1])


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """x^e mod Phi_n as integer vectors, for e up to max(n-1, 2*phi(n)-2)."""
    phi = euler_phi(n)
    mod = cyclotomic_polynomial(n)
    top = max(n - 1, 2 * phi - 2)
    rows = []
    current = [0] * phi
    current[0] = 1
    rows.append(tuple(current))
    for _ in range(top):
        shifted = [0] + current[:-1]
        overflow = current[-1]
        if overflow:
            for i in range(phi):
                shifted[i] -= overflow * mod[i]
        current = shifted
        rows.append(tuple(current))
    return tuple(rows)


class CyclotomicNumber:
    """An element of Q(zeta_N) in canonical reduced form.

    Two values with different conductors compare equal iff they agree
    after lifting to the lcm conductor. Instances are immutable (and
    deliberately unhashable, since hashing would have to canonicalize
    conductors).
    """

    __slots__ = ("N", "coeffs")
    __hash__ = None

    def __init__(self, N: int, coeffs):
        self.N = N
        coeffs = tuple(Fraction(c) for c in coeffs)
        phi = euler_phi(N)
        if len(coeffs) != phi:
            raise InputError(f"need {phi} coefficients for conductor {N}")
        self.coeffs = coeffs

    @classmethod
    def from_rational(cls, value, N: int = 1) -> CyclotomicNumber:
        coeffs = [ZERO] * euler_phi(N)
        coeffs[0] = Fraction(value)
        return cls(N, coeffs)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> CyclotomicNumber:
        """zeta_N^k."""
        table = _reduction_table(N)
        return cls(N, table[k % N])

    @classmethod
    def from_exponents(cls, N: int, terms) -> CyclotomicNumber:
        """sum of c * zeta_N^e over (e, c) pairs."""
        table = _reduction_table(N)
        phi = euler_phi(N)
        acc = [ZERO] * phi
        for e, c in terms:
            c = Fraction(c)
            if not c:
                continue
            row = table[e % N]
            for i, r in enumerate(row):
                if r:
                    acc[i] += c * r
        return cls(N, acc)

    def lift(self, M: int) -> CyclotomicNumber:
        """Rewrite in Q(zeta_M) for a conductor M divisible by N."""
        if M == self.N:
            return self
        if M % self.N:
            raise InputError(f"cannot lift conductor {self.N} into {M}")
        step = M // self.N
        return CyclotomicNumber.from_exponents(
            M, ((i * step, c) for i, c in enumerate(self.coeffs) if c))

    def _pair(self, other) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.from_rational(other)
        M = math.lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise BlocktoolError(f"not rational: {self!r}")
        return self.coeffs[0]

    def __add__(self, other):
        a, b = self._pair(other)
        return CyclotomicNumber(a.N, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.N, (-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        return CyclotomicNumber(a.N, (x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber(self.N, (q * c for c in self.coeffs))
        a, b = self._pair(other)
        phi = len(a.coeffs)
        conv = [ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    conv[i + j] += x * y
        table = _reduction_table(a.N)
        out = list(conv[:phi])
        for e in range(phi, 2 * phi - 1):
            c = conv[e]
            if not c:
                continue
            row = table[e]
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
        return CyclotomicNumber(a.N, out)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        """Field inverse via the extended Euclidean algorithm mod Phi_N.

        Phi_N is irreducible over Q, so every nonzero residue is a unit.
        """
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        r0 = [Fraction(c) for c in cyclotomic_polynomial(self.N)]
        r1 = _poly_trim(list(self.coeffs))
        s0, s1 = [ZERO], [ONE]  # invariant: r_i = s_i * self  (mod Phi_N)
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(_poly_sub(s0, _poly_mul(q, s1)))
            if not r1:
                raise BlocktoolError("Phi_N not coprime to nonzero residue")
        inv = [c / r1[0] for c in s1]
        inv += [ZERO] * (len(self.coeffs) - len(inv))
        return CyclotomicNumber(self.N, inv[:len(self.coeffs)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("cyclotomic division by zero")
            return CyclotomicNumber(self.N, (c / q for c in self.coeffs))
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.from_rational(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicNumber.from_rational(1, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def to_json(self) -> dict:
        return {"N": self.N,
                "coeffs": [[str(c.numerator), str(c.denominator)]
                           for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicNumber:
        try:
            return cls(int(data["N"]),
                       [Fraction(int(num), int(den)) for num, den in data["coeffs"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad cyclotomic serialization: {exc}") from exc

    def sort_key(self) -> tuple:
        return tuple((c.numerator, c.denominator) for c in self.coeffs)

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.coeffs[0]})"
        terms = [f"{c}*z{self.N}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Cyc(" + " + ".join(terms) + ")"


def rational(value) -> CyclotomicNumber:
    return CyclotomicNumber.from_rational(value)


class GaloisAutomorphism:
    """zeta_N -> zeta_N^t for t coprime to N; composition multiplies exponents."""

    __slots__ = ("N", "t")

    def __init__(self, N: int, t: int):
        t %= N
        if N > 1 and math.gcd(t, N) != 1:
            raise InputError(f"exponent {t} not invertible mod {N}")
        self.N = N
        self.t = t if N > 1 else 0

    def apply(self, a: CyclotomicNumber) -> CyclotomicNumber:
        """Apply to a value whose conductor divides N (restriction to Q(zeta_M))."""
        if self.N % a.N:
            raise InputError(
                f"value conductor {a.N} does not divide automorphism conductor {self.N}")
        t = self.t % a.N if a.N > 1 else 0
        return CyclotomicNumber.from_exponents(
            a.N, ((i * t, c) for i, c in enumerate(a.coeffs) if c))

    def compose(self, other: GaloisAutomorphism) -> GaloisAutomorphism:
        if self.N != other.N:
            raise InputError("conductor mismatch in composition")
        return GaloisAutomorphism(self.N, self.t * other.t % self.N)

    def power(self, n: int) -> GaloisAutomorphism:
        return GaloisAutomorphism(self.N, pow(self.t, n, self.N) if self.N > 1 else 0)

    def order(self) -> int:
        n, acc = 1, self.t % self.N
        while acc != 1 % self.N:
            acc = acc * self.t % self.N
            n += 1
        return n

    def __eq__(self, other):
        return (isinstance(other, GaloisAutomorphism)
                and (self.N, self.t) == (other.N, other.t))

    def __repr__(self):
        return f"Galois(z{self.N} -> z{self.N}^{self.t})"


def complex_conjugation(N: int) -> GaloisAutomorphism:
    return GaloisAutomorphism(N, -1 % N if N > 1 else 0)


def frobenius_lift(p: int, N: int) -> GaloisAutomorphism:
    """The automorphism acting as eta -> eta^p on p'-roots of unity and as
    the identity on p-power roots: t = p mod N_p', t = 1 mod N_p, by CRT."""
    n_p = 1
    rest = N
    while rest % p == 0:
        rest //= p
        n_p *= p
    # t = p mod rest, t = 1 mod n_p
    if n_p == 1:
        t = p % N if N > 1 else 0
    elif rest == 1:
        t = 1
    else:
        inv = pow(n_p, -1, rest)
        t = (1 + n_p * ((p - 1) * inv % rest)) % N
    return GaloisAutomorphism(N, t)


def in_subfield(a: CyclotomicNumber, d: int) -> bool:
    """True iff a lies in Q(zeta_d), for d dividing the conductor of a."""
    N = a.N
    if N % d:
        raise InputError("subfield conductor must divide the conductor")
    for t in range(1, N + 1):
        if math.gcd(t, N) != 1 or t % d != 1 % d:
            continue
        if GaloisAutomorphism(N, t).apply(a) != a:
            return False
    return True
