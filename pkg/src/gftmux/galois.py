"""GF(2^s) arithmetic on integer bit-vector elements.

An element is an int in [0, 2^s) whose bit l is the coordinate on
alpha^l in the polynomial basis {1, alpha, ..., alpha^(s-1)}, where
alpha is the class of X modulo the primitive polynomial.  Addition is
XOR; multiplication goes through log/antilog tables, so fields stay
cheap to build for s up to 16.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonPrimitivePolynomial(ValueError):
    """Modulus polynomial does not generate the full multiplicative group."""


class NotADivisor(ValueError):
    """Requested subgroup order does not divide 2^s - 1."""


class NotPrime(ValueError):
    """Requested subgroup order is composite."""


#: Default primitive polynomial per extension degree, as a coefficient
#: bit mask (bit i = coefficient of X^i).  Configs may override.
DEFAULT_PRIMITIVE_POLYS = {
    3: 0b1011,            # X^3 + X + 1
    4: 0b10011,           # X^4 + X + 1
    7: 0b10001001,        # X^7 + X^3 + 1
    11: 0b100000000101,   # X^11 + X^2 + 1
}


class GaloisField:
    """Arithmetic context for GF(2^s).

    Builds log/antilog tables for the primitive element alpha = X and
    rejects any polynomial whose powers of alpha do not cycle with
    period exactly 2^s - 1 (i.e. reducible or non-primitive moduli).
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, s: int, primitive_poly: int):
        if not 3 <= s <= 16:
            raise ValueError(f"extension degree s={s} out of supported range [3, 16]")
        if primitive_poly.bit_length() != s + 1:
            raise ValueError(
                f"polynomial 0x{primitive_poly:x} must have degree exactly s={s}"
            )
        if not primitive_poly & 1:
            raise NonPrimitivePolynomial(
                f"0x{primitive_poly:x} has zero constant term (X divides it)"
            )
        self.s = s
        self.primitive_poly = primitive_poly
        self.order = 1 << s          # number of field elements
        self.alpha = 2               # the class of X
        q1 = self.order - 1

        antilog = np.zeros(q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            if x == 1 and i > 0:
                raise NonPrimitivePolynomial(
                    f"0x{primitive_poly:x}: alpha has period {i} < {q1}"
                )
            antilog[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= primitive_poly
        if x != 1:
            raise NonPrimitivePolynomial(
                f"0x{primitive_poly:x}: alpha powers do not close a period-{q1} cycle"
            )
        self.antilog_table = antilog
        self.log_table = log
        # int32 copies keep the big matmul temporaries half-sized
        self._log32 = log.astype(np.int32)
        self._alog32 = antilog.astype(np.int32)

    # -- scalar ops --------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        q1 = self.order - 1
        return int(self.antilog_table[(self.log_table[a] + self.log_table[b]) % q1])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^s)")
        q1 = self.order - 1
        return int(self.antilog_table[(q1 - self.log_table[a]) % q1])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a**e with e any integer (negative allowed for nonzero a)."""
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0**e undefined for e <= 0")
            return 0
        q1 = self.order - 1
        return int(self.antilog_table[(self.log_table[a] * e) % q1])

    def pow_alpha(self, e: int) -> int:
        """alpha**e for any integer exponent."""
        return int(self.antilog_table[e % (self.order - 1)])

    # -- vectorized ops ----------------------------------------------

    def mul_arr(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable int arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        q1 = self.order - 1
        out = self.antilog_table[(self.log_table[a] + self.log_table[b]) % q1]
        return np.where((a != 0) & (b != 0), out, 0)

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product over GF(2^s) of a (p x r) by b (r x c).

        Builds a (p, r, c) temporary, so keep r*c*p within memory
        reason (fine up to the n=127 scale used here).
        """
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
        q1 = self.order - 1
        expo = (self._log32[a][:, :, None] + self._log32[b][None, :, :]) % q1
        prod = self._alog32[expo]
        nz = (a != 0)[:, :, None] & (b != 0)[None, :, :]
        out = np.bitwise_xor.reduce(np.where(nz, prod, 0), axis=1)
        return out.astype(np.int64)

    def __repr__(self):
        return f"GaloisField(s={self.s}, poly=0x{self.primitive_poly:x})"


def build_field(s: int, primitive_poly: int | None = None) -> GaloisField:
    """Construct GF(2^s), defaulting the modulus when one is shipped for s."""
    if primitive_poly is None:
        try:
            primitive_poly = DEFAULT_PRIMITIVE_POLYS[s]
        except KeyError:
            raise ValueError(
                f"no default primitive polynomial for s={s}; pass one explicitly"
            ) from None
    return GaloisField(s, primitive_poly)


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k < 4:
        return True
    if k % 2 == 0:
        return False
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


@dataclass(eq=False)
class SubgroupGen:
    """Generator beta of the order-n cyclic subgroup of GF(2^s)*.

    pow_table[t] = beta^t for 0 <= t < n; exponent arithmetic mod n is
    enough for every product of subgroup elements.
    """

    field: GaloisField
    beta: int
    n: int
    pow_table: np.ndarray

    def pow_beta(self, e: int) -> int:
        return int(self.pow_table[e % self.n])


def element_of_order(field: GaloisField, n: int) -> SubgroupGen:
    """beta = alpha^((2^s - 1)/n), the canonical element of prime order n."""
    q1 = field.order - 1
    if n < 2 or q1 % n != 0:
        raise NotADivisor(f"n={n} does not divide 2^{field.s} - 1 = {q1}")
    if not is_prime(n):
        raise NotPrime(f"n={n} is composite; subgroup orders must be prime")
    beta = field.pow_alpha(q1 // n)
    pow_table = field.antilog_table[(np.arange(n, dtype=np.int64) * (q1 // n)) % q1]
    return SubgroupGen(field=field, beta=beta, n=n, pow_table=pow_table)


# -- basis decomposition ----------------------------------------------
#
# Bit l of an element is its coordinate on alpha^l, so layer extraction
# is a bit slice and recomposition a shifted OR.


def decompose(x: int, s: int) -> np.ndarray:
    """Coordinates of x over {1, alpha, ..., alpha^(s-1)}, LSB first."""
    return (x >> np.arange(s)) & 1


def compose(bits) -> int:
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1:
        raise ValueError("compose expects a flat bit sequence")
    return int((bits << np.arange(bits.size)).sum())


def decompose_arr(vec, s: int) -> np.ndarray:
    """(s, len(vec)) uint8 array; row l is the coefficient-of-alpha^l layer."""
    vec = np.asarray(vec, dtype=np.int64)
    return ((vec[None, :] >> np.arange(s)[:, None]) & 1).astype(np.uint8)


def compose_arr(layers) -> np.ndarray:
    """Inverse of decompose_arr: stack s bit layers back into elements."""
    layers = np.asarray(layers, dtype=np.int64)
    if layers.ndim != 2:
        raise ValueError("compose_arr expects an (s, n) bit array")
    s = layers.shape[0]
    return (layers << np.arange(s)[:, None]).sum(axis=0)
