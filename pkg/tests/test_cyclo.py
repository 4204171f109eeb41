from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blocktool.cyclo import (
    CyclotomicNumber,
    GaloisAutomorphism,
    complex_conjugation,
    cyclotomic_polynomial,
    euler_phi,
    frobenius_lift,
    in_subfield,
    rational,
)

Z = CyclotomicNumber.zeta


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_zeta_relations():
    assert Z(3, 1) + Z(3, 2) == -1
    assert Z(4, 1) * Z(4, 1) == -1
    assert Z(6, 3) == -1


def test_product_of_one_minus_zeta3_conjugates():
    # oracle: (1 - z)(1 - z^2) = 1 - z - z^2 + z^3 = 1 - (z + z^2) + 1 = 3
    lhs = (rational(1) - Z(3, 1)) * (rational(1) - Z(3, 2))
    assert lhs == 3


def test_division_and_inverse():
    a = rational(1) + Z(5, 1)
    assert a / a == 1
    assert a * a.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        rational(1) / (Z(3, 1) * 0)


def test_mixed_conductor_arithmetic():
    # zeta_6 = -zeta_3^2
    assert Z(6, 1) == -Z(3, 2)
    assert Z(6, 2) == Z(3, 1)
    assert (Z(4, 1) * Z(3, 1)).N == 12


def test_frobenius_lift_exponents():
    assert frobenius_lift(2, 3).t == 2
    assert frobenius_lift(2, 4).t == 1
    assert frobenius_lift(2, 12).t == 5
    assert frobenius_lift(3, 6).t == 3 % 6 or True  # see explicit check below
    s = frobenius_lift(3, 6)
    # t = 1 mod 3, t = 3 mod 2 i.e. t odd: t = 1 mod 3 and odd -> t = 1 mod 6? no:
    # N=6, p=3: N_p=3, N_p'=2; t = 3 = 1 mod 2 and t = 1 mod 3 -> t = 1
    assert s.t == 1


def test_frobenius_lift_action():
    s = frobenius_lift(2, 3)
    assert s.apply(Z(3, 1)) == Z(3, 2)
    assert s.apply(s.apply(Z(3, 1))) == Z(3, 1)
    assert s.order() == 2
    assert s.apply(rational(Fraction(22, 7))) == Fraction(22, 7)
    s12 = frobenius_lift(2, 12)
    assert s12.apply(Z(12, 1)) == Z(12, 5)
    assert s12.apply(Z(4, 1)) == Z(4, 1)
    assert s12.apply(Z(3, 1)) == Z(3, 2)


def test_restriction_order_matches_multiplicative_order():
    # restriction of frobenius_lift(p, N) to Q(zeta_{N_p'}) has order ord_p
    for p, N in ((2, 12), (2, 30), (3, 30), (5, 30), (3, 21), (7, 21)):
        rest = N
        while rest % p == 0:
            rest //= p
        s = frobenius_lift(p, N)
        if rest == 1:
            continue
        ord_p = 1
        acc = p % rest
        while acc != 1:
            acc = acc * p % rest
            ord_p += 1
        val = Z(rest, 1)
        image = val
        for k in range(1, ord_p + 1):
            image = GaloisAutomorphism(rest, s.t % rest).apply(image)
        assert image == val
        # and no smaller power fixes it
        image = val
        for k in range(1, ord_p):
            image = GaloisAutomorphism(rest, s.t % rest).apply(image)
            assert image != val


small_cyclos = st.builds(
    lambda N, nums: CyclotomicNumber(
        N, [Fraction(n, 3) for n in nums[:euler_phi(N)]]),
    st.sampled_from([1, 3, 4, 6, 8, 12]),
    st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
)


@settings(max_examples=60, deadline=None)
@given(small_cyclos, small_cyclos)
def test_field_automorphism_property(a, b):
    N = math.lcm(a.N, b.N)
    sigma = frobenius_lift(2, N)
    assert sigma.apply(a.lift(N) + b.lift(N)) == sigma.apply(a.lift(N)) + sigma.apply(b.lift(N))
    assert sigma.apply(a.lift(N) * b.lift(N)) == sigma.apply(a.lift(N)) * sigma.apply(b.lift(N))


@settings(max_examples=40, deadline=None)
@given(small_cyclos)
def test_conjugation_fixes_norms(a):
    conj = complex_conjugation(a.N)
    norm = a * conj.apply(a)
    assert conj.apply(norm) == norm


def test_complex_conjugation_on_roots():
    assert complex_conjugation(5).apply(Z(5, 2)) == Z(5, 3)


def test_in_subfield():
    assert in_subfield(Z(6, 2), 3)  # zeta_6^2 = zeta_3
    assert in_subfield(Z(6, 1), 3)  # zeta_6 = -zeta_3^2
    assert not in_subfield(Z(12, 1), 3)
    assert not in_subfield(Z(12, 1), 4)
    assert in_subfield(rational(7).lift(12), 1)


def test_serialization_roundtrip():
    a = CyclotomicNumber(12, [Fraction(1, 2), Fraction(-3), 0, Fraction(5, 7)])
    blob = a.to_json()
    b = CyclotomicNumber.from_json(blob)
    assert a == b and b.to_json() == blob


def test_power_and_sort_key():
    assert Z(5, 1) ** 5 == 1
    assert Z(5, 1) ** -1 == Z(5, 4)
    assert rational(2).sort_key() == ((2, 1), )
