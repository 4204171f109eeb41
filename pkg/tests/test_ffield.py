from __future__ import annotations

import pytest

from blocktool.ffield import (
    CycloField,
    ExtField,
    PrimeField,
    coords_in_rref_basis,
    factor_equal_degree,
    find_quadratic_modulus,
    mat_kernel,
    mat_rank,
    mat_rref,
    mat_solve,
    poly_divmod,
    poly_gcd,
    poly_mul,
)
from blocktool.cyclo import CyclotomicNumber, cyclotomic_polynomial


def f4():
    F2 = PrimeField(2)
    # x^2 + x + 1
    return ExtField(F2, (1, 1, 1))


def test_prime_field_ops():
    F7 = PrimeField(7)
    assert F7.mul(3, 5) == 1
    assert F7.inv(3) == 5
    assert F7.pow(3, -1) == 5
    assert F7.sub(2, 5) == 4


def test_f4_arithmetic():
    F4 = f4()
    u = F4.gen()
    assert F4.mul(u, u) == F4.add(u, F4.one)  # u^2 = u + 1
    assert F4.pow(u, 3) == F4.one
    assert F4.inv(u) == F4.mul(u, u)
    assert len(list(F4.elements())) == 4
    assert F4.frobenius(u) == F4.mul(u, u)


def test_tower_field():
    F4 = f4()
    mod = find_quadratic_modulus(F4)
    F16 = ExtField(F4, mod, var="v")
    assert F16.size == 16
    v = F16.gen()
    # multiplicative order of any nonzero element divides 15
    assert F16.pow(v, 15) == F16.one
    # the embedded F4 generator still has order 3
    u16 = F16.embed(F4.gen())
    assert F16.pow(u16, 3) == F16.one and not F16.is_zero(F16.sub(u16, F16.one))


def test_fp_vector_roundtrip():
    F4 = f4()
    F16 = ExtField(F4, find_quadratic_modulus(F4), var="v")
    assert F16.prime_dim() == 4
    for x in F16.elements():
        vec = F16.to_fp_vector(x)
        assert len(vec) == 4
        assert F16.from_fp_vector(vec) == x


def test_quadratic_modulus_odd_char():
    F3 = PrimeField(3)
    mod = find_quadratic_modulus(F3)
    F9 = ExtField(F3, mod)
    v = F9.gen()
    assert F9.pow(v, 8) == F9.one
    assert all(F9.pow(x, 9) == x for x in F9.elements())


def test_factor_cyclotomic_mod2():
    F2 = PrimeField(2)
    # Phi_15 mod 2 factors into two irreducible quartics
    phi15 = [c % 2 for c in cyclotomic_polynomial(15)]
    factors = factor_equal_degree(F2, phi15, 4, seed=7)
    assert len(factors) == 2
    assert all(len(f) == 5 for f in factors)
    prod = [1]
    for f in factors:
        prod = poly_mul(F2, prod, list(f))
    assert prod == phi15
    assert factors == sorted(factors)


def test_factor_cyclotomic_mod3():
    F3 = PrimeField(3)
    phi7 = [c % 3 for c in cyclotomic_polynomial(7)]
    factors = factor_equal_degree(F3, phi7, 6, seed=1)
    assert len(factors) == 1  # 3 is a primitive root mod 7


def test_factor_determinism():
    F2 = PrimeField(2)
    phi9 = [c % 2 for c in cyclotomic_polynomial(9)]
    a = factor_equal_degree(F2, phi9, 6, seed=5)
    b = factor_equal_degree(F2, phi9, 6, seed=5)
    assert a == b


def test_poly_divmod_gcd():
    F5 = PrimeField(5)
    a = [1, 0, 1]  # x^2 + 1
    b = [2, 1]     # x + 2
    q, r = poly_divmod(F5, a, b)
    recomposed = poly_mul(F5, q, b)
    recomposed = [F5.add(x, y) for x, y in
                  zip(recomposed + [0] * 3, (r + [0] * 3))][:len(a)]
    assert recomposed == a
    # x^2 + 4 = (x+1)(x+4) mod 5
    assert poly_gcd(F5, [4, 0, 1], [4, 1]) == [4, 1]
    assert poly_gcd(F5, [4, 0, 1], [3, 1]) == [1]


def test_rref_kernel_solve():
    F5 = PrimeField(5)
    A = [[1, 2, 3], [2, 4, 1], [0, 0, 4]]
    rref, pivots = mat_rref(F5, A)
    assert pivots == [0, 2]
    assert mat_rank(F5, A) == 2
    ker = mat_kernel(F5, A, 3)
    assert len(ker) == 1
    for row in A:
        s = sum(r * k for r, k in zip(row, ker[0])) % 5
        assert s == 0
    x = mat_solve(F5, A, [1, 2, 0])
    assert x is not None
    for row, want in zip(A, [1, 2, 0]):
        assert sum(r * v for r, v in zip(row, x)) % 5 == want
    assert mat_solve(F5, [[1, 0], [1, 0]], [1, 2]) is None


def test_coords_in_rref_basis():
    F2 = PrimeField(2)
    basis = [[1, 0, 1], [0, 1, 1]]
    rref, pivots = mat_rref(F2, basis)
    assert coords_in_rref_basis(F2, rref, pivots, [1, 1, 0]) == [1, 1]
    assert coords_in_rref_basis(F2, rref, pivots, [0, 0, 1]) is None


def test_cyclo_field_adapter_solve():
    CF = CycloField(3)
    z = CyclotomicNumber.zeta(3).lift(3)
    A = [[CF.one, z], [z, CF.one]]
    rhs = [CF.from_int(1), CF.from_int(0)]
    x = mat_solve(CF, A, rhs)
    assert x is not None
    assert A[0][0] * x[0] + A[0][1] * x[1] == 1
    assert A[1][0] * x[0] + A[1][1] * x[1] == 0
