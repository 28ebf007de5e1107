import itertools

import numpy as np
import pytest

from gftmux import galois
from gftmux.galois import (
    NonPrimitivePolynomial,
    NotADivisor,
    NotPrime,
    build_field,
    compose,
    compose_arr,
    decompose,
    decompose_arr,
    element_of_order,
)


def test_gf8_alpha_period_seven(gf8):
    # enumerate powers of alpha directly; period must be exactly 7
    seen = []
    x = 1
    for _ in range(7):
        seen.append(x)
        x = gf8.mul(x, gf8.alpha)
    assert x == 1
    assert sorted(seen) == list(range(1, 8))
    # alpha^3 = alpha + 1 under X^3 + X + 1
    assert gf8.pow_alpha(3) == 0b011


def test_gf128_period():
    f = build_field(7)
    assert f.order - 1 == 127
    assert sorted(f.antilog_table.tolist()) == list(range(1, 128))


def test_reducible_poly_rejected():
    # X^3 + X^2 + X + 1 = (X + 1)(X^2 + 1)
    with pytest.raises(NonPrimitivePolynomial):
        galois.GaloisField(3, 0b1111)


def test_irreducible_nonprimitive_rejected():
    # X^4 + X^3 + X^2 + X + 1 is irreducible but alpha has order 5
    with pytest.raises(NonPrimitivePolynomial):
        galois.GaloisField(4, 0b11111)


def test_zero_constant_term_rejected():
    with pytest.raises(NonPrimitivePolynomial):
        galois.GaloisField(3, 0b1110)


def test_wrong_degree_rejected():
    with pytest.raises(ValueError):
        galois.GaloisField(4, 0b1011)


@pytest.mark.parametrize("s", [3, 4])
def test_field_axioms_exhaustive(s):
    f = build_field(s)
    elems = range(f.order)
    for a, b, c in itertools.product(elems, repeat=3):
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


def test_inverses(gf16):
    for a in range(1, 16):
        assert gf16.mul(a, gf16.inv(a)) == 1


def test_log_antilog_consistency(gf128):
    q1 = gf128.order - 1
    for x in range(1, gf128.order):
        assert gf128.antilog_table[gf128.log_table[x]] == x
    for i in range(q1):
        assert gf128.log_table[gf128.antilog_table[i]] == i


def test_element_of_order_gf2048():
    f = build_field(11)
    sub = element_of_order(f, 89)
    assert sub.beta == f.pow_alpha(23)        # 2047 = 23 * 89
    assert f.pow(sub.beta, 89) == 1
    for t in range(1, 89):
        assert f.pow(sub.beta, t) != 1


def test_element_of_order_gf128(gf128):
    sub = element_of_order(gf128, 127)
    assert sub.beta == gf128.alpha            # (2^7 - 1)/127 = 1


def test_element_of_order_gf16(gf16):
    sub = element_of_order(gf16, 5)
    assert sub.beta == gf16.pow_alpha(3)      # (2^4 - 1)/5 = 3
    assert gf16.pow(sub.beta, 5) == 1
    assert all(gf16.pow(sub.beta, t) != 1 for t in range(1, 5))


def test_element_of_order_errors(gf16):
    with pytest.raises(NotADivisor):
        element_of_order(gf16, 7)
    f = build_field(4, 0b10011)
    with pytest.raises(NotPrime):
        element_of_order(f, 15)


@pytest.mark.parametrize("s", [3, 4, 7])
def test_subgroup_prime_divisors(s):
    f = build_field(s)
    q1 = f.order - 1
    for n in [p for p in range(2, q1 + 1) if q1 % p == 0 and galois.is_prime(p)]:
        sub = element_of_order(f, n)
        assert f.pow(sub.beta, n) == 1
        assert all(f.pow(sub.beta, t) != 1 for t in range(1, n))
        assert (sub.pow_table[0], sub.pow_table[1 % n]) == (1, sub.beta)


def test_decompose_zero(gf8):
    assert decompose(0, 3).tolist() == [0, 0, 0]


def test_decompose_basis_coordinate(gf8):
    assert decompose(gf8.pow_alpha(2), 3).tolist() == [0, 0, 1]


@pytest.mark.parametrize("s", [3, 4, 7])
def test_decompose_compose_round_trip_exhaustive(s):
    for x in range(1 << s):
        assert compose(decompose(x, s)) == x


def test_decompose_is_gf2_linear(gf16):
    for x in range(16):
        for y in range(16):
            lhs = decompose(x ^ y, 4)
            rhs = decompose(x, 4) ^ decompose(y, 4)
            assert (lhs == rhs).all()


def test_compose_length_mismatch():
    with pytest.raises(ValueError):
        compose_arr(np.zeros((2, 3, 4)))


def test_array_round_trip(gf128):
    rng = np.random.default_rng(3)
    vec = rng.integers(0, 128, size=200)
    layers = decompose_arr(vec, 7)
    assert layers.shape == (7, 200)
    assert (compose_arr(layers) == vec).all()


def test_mul_arr_matches_scalar(gf16):
    rng = np.random.default_rng(4)
    a = rng.integers(0, 16, size=50)
    b = rng.integers(0, 16, size=50)
    expect = [gf16.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert gf16.mul_arr(a, b).tolist() == expect


def test_matmul_matches_naive(gf8):
    from conftest import naive_gf_matmul

    rng = np.random.default_rng(5)
    a = rng.integers(0, 8, size=(4, 6))
    b = rng.integers(0, 8, size=(6, 5))
    assert (gf8.matmul(a, b) == naive_gf_matmul(a, b, gf8)).all()


def test_build_field_needs_poly_for_unknown_s():
    with pytest.raises(ValueError):
        build_field(5)
    f = build_field(5, 0b100101)
    assert f.order == 32
