"""The completion of Q(zeta_N) at a fixed prime above p.

Write N = p^s * N' with p not dividing N'. The completion L is generated
over Q_p by an unramified part (degree m = order of p mod N', residue
field F_q, q = p^m) and the totally ramified part Q_p(zeta_{p^s}) of
degree e = phi(p^s). Elements are held as polynomials of degree < e in
z = zeta_{p^s} whose coefficients live in the truncated unramified ring
W_M = Z_q / p^M; zeta_{N'} embeds as the Teichmueller lift of a fixed
primitive N'-th root of unity u in F_q.

Valuations are normalized so that v(1 - zeta_{p^s}) = 1 and v(p) = e.
Every element tracks how many p-adic digits of it are still meaningful;
a valuation probe that exhausts them reports "inconclusive" rather than
guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import BlocktoolError, InconclusiveError, InputError, NotIntegralError
from .cyclo import CyclotomicNumber, cyclotomic_polynomial, euler_phi
from .ffield import ExtField, PrimeField, factor_equal_degree, poly_eval

ESCALATION_CAP_FACTOR = 1024  # precision doubles until M > 1024 * e


def split_prime_part(n: int, p: int) -> tuple[int, int]:
    """(p-part, p'-part) of n."""
    np = 1
    while n % p == 0:
        n //= p
        np *= p
    return np, n


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise InputError(f"{a} not invertible mod {n}")
    k, acc = 1, a % n
    while acc != 1:
        acc = acc * a % n
        k += 1
    return k


class ResidueField:
    """F_q = F_p[x]/(h), h an irreducible degree-m factor of Phi_{N'} mod p.

    The class of x is a primitive N'-th root of unity u; the factor h is
    chosen deterministically (least coefficient tuple), and modulus_seed
    rotates through the other factors so that independence of the choice
    of prime above p can be probed.
    """

    def __init__(self, p: int, n_prime: int, modulus_seed: int = 0):
        self.p = p
        self.n_prime = n_prime
        fp = PrimeField(p)
        if n_prime == 1:
            self.m = 1
            factors = [(fp.neg(fp.one), fp.one)]  # x - 1
        else:
            self.m = multiplicative_order(p, n_prime)
            phi = [c % p for c in cyclotomic_polynomial(n_prime)]
            seed = p * 1000003 + n_prime
            factors = factor_equal_degree(fp, phi, self.m, seed=seed)
        self.modulus = factors[modulus_seed % len(factors)]
        self.field = ExtField(fp, self.modulus)
        self.u = self.field.gen()
        order = 1
        acc = self.u
        while acc != self.field.one:
            acc = self.field.mul(acc, self.u)
            order += 1
        if order != n_prime:
            raise BlocktoolError("chosen root does not have order N_p'")

    @property
    def q(self) -> int:
        return self.p**self.m

    def u_power(self, k: int):
        return self.field.pow(self.u, k % self.n_prime if self.n_prime > 1 else 0)

    def reduce_prime_to_p_part(self, a: CyclotomicNumber):
        """Direct reduction Z[zeta_{N'}] -> F_q through h (zeta_{N'} -> u).

        Independent of the Witt-ring path; used to cross-check residues.
        """
        if self.n_prime % a.N:
            raise InputError("conductor does not divide N_p'")
        lifted = a.lift(self.n_prime)
        out = self.field.zero
        step = 1
        for i, c in enumerate(lifted.coeffs):
            if c.denominator % self.p == 0:
                raise NotIntegralError("denominator divisible by p")
            ci = c.numerator * pow(c.denominator, -1, self.p) % self.p
            if ci:
                out = self.field.add(
                    out, self.field.mul(self.field.from_int(ci), self.u_power(i)))
        return out


class WittRing:
    """W_M = (Z/p^M)[x]/(H), H the integer lift of the residue modulus.

    Supports the ring operations, unit inversion, and Teichmueller lifts;
    satisfies enough of the field protocol to serve as an ExtField base.
    """

    def __init__(self, rf: ResidueField, M: int):
        self.rf = rf
        self.p = rf.p
        self.M = M
        self.pM = rf.p**M
        self.m = rf.m
        self.char = rf.p
        self.size = self.pM**self.m
        self.zero = (0,) * self.m
        self.one = (1 % self.pM,) + (0,) * (self.m - 1)
        mod = [c % self.pM for c in rf.modulus]
        self._mod = mod
        first = [0] * self.m
        first[0] = 1 % self.pM
        self._red = [tuple(first)]
        for _ in range(1, max(1, 2 * self.m - 1)):
            prev = self._red[-1]
            shifted = [0] + list(prev[:-1])
            overflow = prev[-1]
            if overflow:
                for i in range(self.m):
                    shifted[i] = (shifted[i] - overflow * mod[i]) % self.pM
            self._red.append(tuple(shifted))

    def from_int(self, n: int):
        return (n % self.pM,) + (0,) * (self.m - 1)

    def from_rational(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise NotIntegralError(f"denominator of {q} divisible by {self.p}")
        return self.from_int(q.numerator * pow(q.denominator, -1, self.pM))

    def add(self, a, b):
        return tuple((x + y) % self.pM for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.pM for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.pM for x in a)

    def mul(self, a, b):
        conv = [0] * (2 * self.m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = [c % self.pM for c in conv[:self.m]]
        for k in range(self.m, 2 * self.m - 1):
            c = conv[k] % self.pM
            if c:
                row = self._red[k]
                for i in range(self.m):
                    out[i] = (out[i] + c * row[i]) % self.pM
        return tuple(out)

    def is_zero(self, a) -> bool:
        return all(x % self.pM == 0 for x in a)

    def pow(self, a, n: int):
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def residue(self, a):
        return tuple(x % self.p for x in a)

    def divisible_by_p(self, a) -> bool:
        return all(x % self.p == 0 for x in a)

    def div_p(self, a):
        assert self.divisible_by_p(a)
        return tuple((x // self.p) % self.pM for x in a)

    def inv_unit(self, a):
        """Inverse of a unit, by Newton lifting from the residue inverse."""
        res = self.rf.field
        r = self.residue(a)
        if res.is_zero(r):
            raise ZeroDivisionError("not a unit in W_M")
        y = res.inv(r)  # coefficients already ints mod p
        cur = tuple(y)
        steps = max(1, (self.M - 1).bit_length() + 1)
        for _ in range(steps):
            # y <- y(2 - a y)
            t = self.sub(self.from_int(2), self.mul(a, cur))
            cur = self.mul(cur, t)
        assert self.mul(a, cur) == self.one
        return cur

    def teichmuller(self, fe):
        """The unique (q-1)-th root of unity congruent to fe mod p."""
        cur = tuple(int(c) % self.pM for c in fe)
        q = self.rf.q
        for _ in range(self.M + 2):
            nxt = self.pow(cur, q)
            if nxt == cur:
                return cur
            cur = nxt
        raise BlocktoolError("Teichmueller iteration failed to converge")


@dataclass(frozen=True)
class LocalElement:
    """An element of O_L / p^M with a count of still-meaningful p-digits."""
    coeffs: tuple  # length e, entries in W_M
    prec: int      # valid p-adic digits remaining (<= M)


class LocalContext:
    """Arithmetic in O_L / p^M for one precision level M.

    The residue field is shared across precision levels so escalation
    never changes the chosen prime above p.
    """

    def __init__(self, p: int, N: int, M: int, rf: ResidueField | None = None,
                 modulus_seed: int = 0):
        self.p = p
        self.N = N
        self.M = M
        n_p, n_prime = split_prime_part(N, p)
        self.n_p = n_p
        self.n_prime = n_prime
        self.s = 0
        while p**(self.s + 1) <= n_p:
            self.s += 1
        self.e = euler_phi(n_p)
        self.rf = rf if rf is not None else ResidueField(p, n_prime, modulus_seed)
        if self.rf.n_prime != n_prime or self.rf.p != p:
            raise InputError("residue field does not match (p, N)")
        self.witt = WittRing(self.rf, M)
        mod = [self.witt.from_int(c) for c in cyclotomic_polynomial(max(n_p, 1))]
        if n_p == 1:
            mod = [self.witt.neg(self.witt.one), self.witt.one]  # z - 1
        self.ring = ExtField(self.witt, tuple(mod), var="z")
        assert self.ring.deg == self.e
        # p / pi as a ring element: with Phi = Phi_{p^s}, p = (1 - z) * Q(z),
        # Q = (Phi(z) - p) / (z - 1); for s = 0 the uniformizer is p itself.
        if self.s >= 1:
            phi_int = list(cyclotomic_polynomial(n_p))
            phi_int[0] -= p
            q_int = self._divide_by_z_minus_one(phi_int)
            self.p_over_pi = tuple(self.witt.from_int(c) for c in q_int)
        else:
            self.p_over_pi = None
        self._zeta_powers = self._build_zeta_powers()

    @staticmethod
    def _divide_by_z_minus_one(poly: list[int]) -> list[int]:
        # poly(1) must be 0; synthetic division by (z - 1)
        out = []
        acc = 0
        for c in reversed(poly):
            acc += c
            out.append(acc)
        assert out[-1] == 0
        out = list(reversed(out[:-1]))
        return out

    def _build_zeta_powers(self):
        ring, witt = self.ring, self.witt
        if self.N == 1:
            return [ring.one]
        # zeta_N = z^{c'} * omega^{c} with c*N_p + c'*N' = 1
        if self.n_prime == 1:
            c_p, c_pp = 0, 1
        elif self.n_p == 1:
            c_p, c_pp = 1, 0
        else:
            c_pp = pow(self.n_prime, -1, self.n_p)
            c_p = (1 - c_pp * self.n_prime) // self.n_p
        omega = witt.teichmuller(self.rf.u) if self.n_prime > 1 else witt.one
        z = ring.gen()
        img = ring.mul(ring.pow(z, c_pp % max(self.n_p, 1)),
                       ring.embed(witt.pow(omega, c_p % self.n_prime
                                           if self.n_prime > 1 else 0)))
        powers = [ring.one]
        for _ in range(1, self.N):
            powers.append(ring.mul(powers[-1], img))
        # img must be a root of Phi_N
        phi_n = [ring.embed(self.witt.from_int(c))
                 for c in cyclotomic_polynomial(self.N)]
        assert ring.is_zero(poly_eval(ring, phi_n, img))
        return powers

    def embed(self, a: CyclotomicNumber) -> LocalElement:
        """Ring homomorphism on values with p-free denominators."""
        if self.N % a.N:
            raise InputError(f"conductor {a.N} does not divide session conductor {self.N}")
        step = self.N // a.N
        acc = self.ring.zero
        for i, c in enumerate(a.coeffs):
            if not c:
                continue
            w = self.witt.from_rational(c)
            term = self.ring.mul(self.ring.embed(w), self._zeta_powers[(i * step) % self.N])
            acc = self.ring.add(acc, term)
        return LocalElement(acc, self.M)

    def add(self, a: LocalElement, b: LocalElement) -> LocalElement:
        return LocalElement(self.ring.add(a.coeffs, b.coeffs), min(a.prec, b.prec))

    def mul(self, a: LocalElement, b: LocalElement) -> LocalElement:
        return LocalElement(self.ring.mul(a.coeffs, b.coeffs), min(a.prec, b.prec))

    def residue_of(self, a: LocalElement):
        """Image in F_q: z -> 1 on the ramified part, W -> F_q on coefficients."""
        if a.prec < 1:
            raise InconclusiveError("no valid digits left for a residue")
        total = self.witt.zero
        for c in a.coeffs:
            total = self.witt.add(total, c)
        return self.witt.residue(total)

    def _evaluate_at_one(self, coeffs):
        total = self.witt.zero
        for c in coeffs:
            total = self.witt.add(total, c)
        return total

    def divide_by_pi(self, a: LocalElement) -> LocalElement:
        """Exact division by the uniformizer; costs one tracked p-digit."""
        if a.prec < 1:
            raise InconclusiveError("no valid digits left to divide")
        if self.s == 0:
            w = a.coeffs[0]
            if not self.witt.divisible_by_p(w):
                raise BlocktoolError("element not divisible by p")
            return LocalElement((self.witt.div_p(w),), a.prec - 1)
        alpha1 = self._evaluate_at_one(a.coeffs)
        if not self.witt.divisible_by_p(alpha1):
            raise BlocktoolError("element not divisible by pi")
        # a = (z-1) q + a(1), so a / (1-z) = -q + (a(1)/p) * (p/pi)
        q = []
        acc = self.witt.zero
        for c in reversed(a.coeffs):
            acc = self.witt.add(acc, c)
            q.append(acc)
        q = list(reversed(q[:-1]))  # (a - a(1)) / (z - 1)
        beta = self.witt.div_p(alpha1)
        out = [self.witt.neg(c) for c in q] + [self.witt.zero]
        for i, c in enumerate(self.p_over_pi):
            out[i] = self.witt.add(out[i], self.witt.mul(beta, c))
        return LocalElement(tuple(out[:self.e]), a.prec - 1)

    def valuation_of(self, a: LocalElement) -> int | None:
        """pi-adic valuation, or None if the tracked digits run out."""
        cur = a
        v = 0
        while True:
            if cur.prec < 1:
                return None
            res = self.residue_of(cur)
            if any(c % self.p for c in res):
                return v
            cur = self.divide_by_pi(cur)
            v += 1


def _denominator_p_power(a: CyclotomicNumber, p: int) -> int:
    t = 0
    for c in a.coeffs:
        den = c.denominator
        k = 0
        while den % p == 0:
            den //= p
            k += 1
        t = max(t, k)
    return t


class PadicOracle:
    """Valuations and residues of exact cyclotomics, with escalation.

    Starts at M0 = e*(v_p(group order) + 4) p-adic digits and doubles on
    an inconclusive probe, up to 1024*e, before giving up.
    """

    def __init__(self, p: int, N: int, group_order: int = 1,
                 M0: int | None = None, modulus_seed: int = 0):
        self.p = p
        self.N = N
        n_p, n_prime = split_prime_part(N, p)
        self.e = euler_phi(n_p)
        if M0 is None:
            vp = 0
            n = group_order
            while n % p == 0:
                n //= p
                vp += 1
            M0 = self.e * (vp + 4)
        self.M0 = max(2, M0)
        self.rf = ResidueField(p, n_prime, modulus_seed)
        self.field = self.rf.field
        self._contexts: dict[int, LocalContext] = {}

    def context(self, M: int | None = None) -> LocalContext:
        M = self.M0 if M is None else M
        if M not in self._contexts:
            self._contexts[M] = LocalContext(self.p, self.N, M, rf=self.rf)
        return self._contexts[M]

    def _probe(self, a: CyclotomicNumber, want_residue: bool):
        shift = _denominator_p_power(a, self.p)
        scaled = a * (Fraction(self.p) ** shift)
        M = self.M0
        while True:
            ctx = self.context(M)
            emb = ctx.embed(scaled)
            v = ctx.valuation_of(emb)
            if v is not None:
                v -= shift * self.e
                if not want_residue:
                    return v, None
                if v < 0:
                    raise NotIntegralError(
                        f"valuation {v} < 0 at the prime above {self.p}")
                if v > 0:
                    return v, self.field.zero
                # divide out the exact p-denominator to read the residue
                cur = emb
                for _ in range(shift * self.e):
                    cur = ctx.divide_by_pi(cur)
                res = ctx.residue_of(cur)
                return v, tuple(res)
            if M >= ESCALATION_CAP_FACTOR * self.e:
                raise InconclusiveError(
                    f"valuation of {a!r} undecided at precision {M}")
            M *= 2

    def valuation(self, a: CyclotomicNumber):
        """v_P(a), with v_P(1 - zeta_{p^s}) = 1; math.inf for exact zero."""
        if a.is_zero():
            return math.inf
        v, _ = self._probe(a, want_residue=False)
        return v

    def residue(self, a: CyclotomicNumber):
        """Reduction to F_q of a P-integral value (NotIntegralError otherwise)."""
        if a.is_zero():
            return self.field.zero
        _, res = self._probe(a, want_residue=True)
        return res

    def is_integral(self, a: CyclotomicNumber) -> bool:
        return a.is_zero() or self.valuation(a) >= 0


def reduce_p_integral(oracle: PadicOracle, a: CyclotomicNumber):
    """Residue of a P-integral cyclotomic; NotIntegralError if v_P(a) < 0."""
    return oracle.residue(a)
