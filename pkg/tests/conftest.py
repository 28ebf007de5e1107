import numpy as np
import pytest

from gftmux import config, cyclic, galois


@pytest.fixture(scope="session")
def gf8():
    return galois.build_field(3)


@pytest.fixture(scope="session")
def gf16():
    return galois.build_field(4)


@pytest.fixture(scope="session")
def gf128():
    return galois.build_field(7)


@pytest.fixture(scope="session")
def sub7(gf8):
    return galois.element_of_order(gf8, 7)


@pytest.fixture(scope="session")
def desk_spec(gf8, sub7):
    """(7,4) Hamming base code over GF(8): the dense-verification instance."""
    return cyclic.BaseCodeSpec(field=gf8, subgroup=sub7, roots=(1, 2, 4),
                               mode="binary")


@pytest.fixture(scope="session")
def desk_bundle():
    return config.build_system(config.load_preset("desk_gf8"))


@pytest.fixture(scope="session")
def rs5_spec(gf16):
    """Tiny (5,3) RS code over GF(16) for nonbinary unit tests."""
    sub = galois.element_of_order(gf16, 5)
    return cyclic.BaseCodeSpec(field=gf16, subgroup=sub, roots=(1, 2),
                               mode="nonbinary")


def gf2_poly_divisible(dividend_bits, divisor_bits) -> bool:
    """Independent GF(2) polynomial divisibility oracle (ascending coeffs)."""
    r = list(int(b) for b in dividend_bits)
    d = list(int(b) for b in divisor_bits)
    dd = len(d) - 1
    for i in range(len(r) - 1, dd - 1, -1):
        if r[i]:
            for j, c in enumerate(d):
                r[i - dd + j] ^= c
    return not any(r)


def naive_gf_matmul(a, b, field) -> np.ndarray:
    """Triple-loop GF(2^s) matrix product; oracle for the vectorized path."""
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0
            for k in range(a.shape[1]):
                acc ^= field.mul(int(a[i, k]), int(b[k, j]))
            out[i, j] = acc
    return out
