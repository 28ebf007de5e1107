"""Prime-length cyclic base codes and their Hadamard equivalents.

The base code C of length n (prime) is fixed by the root exponents
l_0..l_{m-1} of its generator polynomial, taken as powers of the
order-n subgroup generator beta.  Entrywise k-th powers of the root
parity-check matrix give the Hadamard power matrices, whose null
spaces are column permutations of C; the k=0 power is the all-ones
matrix of the (n, n-1) single parity-check code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .galois import GaloisField, SubgroupGen, compose_arr, decompose_arr


class ConjugacyViolation(ValueError):
    """Binary mode requires the root set closed under doubling mod n."""


class DuplicateRoots(ValueError):
    """Root exponents must be distinct mod n."""


class TooLarge(ValueError):
    """Exhaustive enumeration guard tripped."""


@dataclass(eq=False)
class BaseCodeSpec:
    """An (n, n-m) cyclic code given by its generator-polynomial roots.

    mode "binary" means codewords over GF(2) (BCH-style, conjugacy
    closed roots); "nonbinary" means codewords over GF(2^s) (RS-style).
    """

    field: GaloisField
    subgroup: SubgroupGen
    roots: tuple
    mode: str

    def __post_init__(self):
        n = self.subgroup.n
        self.roots = tuple(int(l) % n for l in self.roots)
        if self.mode not in ("binary", "nonbinary"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(set(self.roots)) != len(self.roots):
            raise DuplicateRoots(f"root exponents {self.roots} collide mod n={n}")
        if not 1 <= len(self.roots) < n:
            raise ValueError(f"need 1 <= m < n, got m={len(self.roots)}, n={n}")
        if self.mode == "binary":
            rset = set(self.roots)
            for l in self.roots:
                if (2 * l) % n not in rset:
                    raise ConjugacyViolation(
                        f"binary mode: root set {sorted(rset)} not closed under "
                        f"doubling mod {n} (missing {2 * l % n})"
                    )

    @property
    def n(self) -> int:
        return self.subgroup.n

    @property
    def m(self) -> int:
        return len(self.roots)

    @property
    def s(self) -> int:
        return self.field.s


def conjugacy_closure(exponents, n: int) -> tuple:
    """Smallest doubling-closed superset of the exponents, sorted."""
    out = set()
    for e in exponents:
        e %= n
        while e not in out:
            out.add(e)
            e = (2 * e) % n
    return tuple(sorted(out))


def bch_spec(field, subgroup, designed_distance: int, mode: str = "binary") -> BaseCodeSpec:
    """Spec with roots beta^1..beta^(d-1); binary mode takes the conjugacy closure."""
    if designed_distance < 2:
        raise ValueError("designed distance must be >= 2")
    base = range(1, designed_distance)
    roots = conjugacy_closure(base, subgroup.n) if mode == "binary" else tuple(base)
    return BaseCodeSpec(field=field, subgroup=subgroup, roots=roots, mode=mode)


# -- polynomials over the field (ascending coefficient arrays) ---------


def poly_mul(a, b, field: GaloisField) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(a.size + b.size - 1, dtype=np.int64)
    for i, c in enumerate(a):
        if c:
            out[i : i + b.size] ^= field.mul_arr(c, b)
    return out


def poly_mod(a, g, field: GaloisField) -> np.ndarray:
    """Remainder of a(X) mod g(X); g must be monic."""
    g = np.asarray(g, dtype=np.int64)
    r = np.array(a, dtype=np.int64)
    dg = g.size - 1
    for i in range(r.size - 1, dg - 1, -1):
        c = r[i]
        if c:
            r[i - dg : i + 1] ^= field.mul_arr(c, g)
    return r[:dg]


def poly_eval(coeffs, x: int, field: GaloisField) -> int:
    acc = 0
    for c in reversed(np.asarray(coeffs, dtype=np.int64)):
        acc = field.mul(acc, x) ^ int(c)
    return acc


@dataclass(eq=False)
class GeneratorPoly:
    """Monic degree-m generator polynomial, ascending coefficients."""

    coeffs: np.ndarray
    field: GaloisField
    n: int
    mode: str

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


def generator_poly(spec: BaseCodeSpec) -> GeneratorPoly:
    """Product of (X + beta^l) over the root exponents l."""
    field = spec.field
    g = np.array([1], dtype=np.int64)
    for l in spec.roots:
        g = poly_mul(g, np.array([spec.subgroup.pow_beta(l), 1]), field)
    if spec.mode == "binary" and (g > 1).any():
        raise ConjugacyViolation(
            "generator polynomial has nonbinary coefficients; root set is not "
            "conjugacy closed"
        )
    return GeneratorPoly(coeffs=g, field=field, n=spec.n, mode=spec.mode)


# -- parity-check base matrices and Hadamard permutations --------------


@dataclass(eq=False)
class BaseMatrix:
    """m x n root parity-check matrix, stored as beta exponents.

    Entry (i, j) of the k-th Hadamard power is beta^(k*j*l_i); the
    element value is subgroup.pow_table[exponents[i, j]].
    """

    exponents: np.ndarray
    hadamard_k: int
    subgroup: SubgroupGen

    @property
    def m(self) -> int:
        return self.exponents.shape[0]

    @property
    def n(self) -> int:
        return self.exponents.shape[1]

    def elements(self) -> np.ndarray:
        return self.subgroup.pow_table[self.exponents]


def base_matrix(spec: BaseCodeSpec, k: int = 1) -> BaseMatrix:
    n = spec.n
    if not 0 <= k < n:
        raise ValueError(f"Hadamard power k={k} out of range [0, {n})")
    roots = np.asarray(spec.roots, dtype=np.int64)
    j = np.arange(n, dtype=np.int64)
    expo = (k * j[None, :] * roots[:, None]) % n
    return BaseMatrix(exponents=expo, hadamard_k=k, subgroup=spec.subgroup)


def hadamard_indices(k: int, n: int) -> np.ndarray:
    """Gather indices of the k-th Hadamard permutation: out[t] = v[t*k mod n]."""
    if not 1 <= k < n:
        raise ValueError(f"Hadamard permutation needs 1 <= k < n, got k={k}")
    return (np.arange(n, dtype=np.int64) * k) % n


def hadamard_perm(v, k: int, n: int) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[-1] != n:
        raise ValueError(f"vector length {v.shape[-1]} != n={n}")
    return v[..., hadamard_indices(k, n)]


def code_syndrome(word, bmat: BaseMatrix, field: GaloisField) -> np.ndarray:
    """word . B^T over GF(2^s) for the given Hadamard power matrix."""
    word = np.asarray(word, dtype=np.int64)
    prods = field.mul_arr(word[None, :], bmat.elements())
    return np.bitwise_xor.reduce(prods, axis=1)


# -- encoders -----------------------------------------------------------
#
# Systematic form throughout: message in the n-m high-order positions,
# parity = X^m * msg(X) mod g(X) in the low-order positions.


def encode_binary(msg, g: GeneratorPoly) -> np.ndarray:
    if g.mode != "binary":
        raise ValueError("encode_binary needs a binary-mode generator")
    msg = np.asarray(msg, dtype=np.int64)
    m = g.degree
    if msg.size != g.n - m:
        raise ValueError(f"message length {msg.size} != n - m = {g.n - m}")
    shifted = np.concatenate([np.zeros(m, dtype=np.int64), msg])
    parity = poly_mod(shifted, g.coeffs, g.field)
    cw = shifted
    cw[:m] ^= parity
    return cw.astype(np.uint8)


def encode_nonbinary(msg, g: GeneratorPoly) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.int64)
    m = g.degree
    if msg.size != g.n - m:
        raise ValueError(f"message length {msg.size} != n - m = {g.n - m}")
    if (msg >= g.field.order).any() or (msg < 0).any():
        raise ValueError("message symbol out of field range")
    shifted = np.concatenate([np.zeros(m, dtype=np.int64), msg])
    parity = poly_mod(shifted, g.coeffs, g.field)
    cw = shifted
    cw[:m] ^= parity
    return cw


def encode_spc(msg) -> np.ndarray:
    """Append the XOR-sum parity symbol; works over GF(2) and GF(2^s) alike."""
    msg = np.asarray(msg, dtype=np.int64)
    parity = np.bitwise_xor.reduce(msg) if msg.size else 0
    return np.concatenate([msg, [parity]])


def compose_streams(bitstreams, spec: BaseCodeSpec | None = None,
                    k: int | None = None, verify: bool = False) -> np.ndarray:
    """Stack s binary codewords into one composite GF(2^s) word.

    With verify=True (needs spec and k) the composite is checked against
    the k-th Hadamard power matrix, rejecting mixed-code inputs.
    """
    symbols = compose_arr(bitstreams)
    if verify:
        if spec is None or k is None:
            raise ValueError("verify=True needs spec and k")
        syn = code_syndrome(symbols, base_matrix(spec, k), spec.field)
        if syn.any():
            raise ValueError(f"streams are not all codewords of Hadamard power k={k}")
    return symbols


def generator_matrix(spec: BaseCodeSpec) -> np.ndarray:
    """(n-m) x n systematic generator matrix; rows are unit-message codewords.

    Binary mode yields a 0/1 matrix (encode = msg @ G mod 2); nonbinary
    mode yields field symbols (encode = GF matrix product).
    """
    g = generator_poly(spec)
    kdim = spec.n - spec.m
    rows = np.zeros((kdim, spec.n), dtype=np.int64)
    enc = encode_binary if spec.mode == "binary" else encode_nonbinary
    for t in range(kdim):
        msg = np.zeros(kdim, dtype=np.int64)
        msg[t] = 1
        rows[t] = enc(msg, g)
    return rows


# -- exhaustive nearest-codeword oracle ---------------------------------

_CODEBOOKS: dict = {}


def _codebook(spec: BaseCodeSpec) -> np.ndarray:
    key = (spec.field.s, spec.field.primitive_poly, spec.n, spec.roots, spec.mode)
    cb = _CODEBOOKS.get(key)
    if cb is None:
        kdim = spec.n - spec.m
        gmat = generator_matrix(spec)
        msgs = decompose_arr(np.arange(1 << kdim), kdim).T  # (2^k, kdim), LSB first
        cb = (msgs.astype(np.int64) @ gmat) % 2
        _CODEBOOKS[key] = cb
    return cb


def mld_oracle(received_hard, spec: BaseCodeSpec) -> np.ndarray:
    """Exhaustive minimum-Hamming-distance decoding for tiny binary codes.

    Ties break toward the lowest message index, making results
    deterministic.  Guarded to n <= 15 / binary mode.
    """
    if spec.mode != "binary":
        raise TooLarge("mld_oracle supports binary mode only")
    if spec.n > 15:
        raise TooLarge(f"mld_oracle guard: n={spec.n} > 15")
    received_hard = np.asarray(received_hard, dtype=np.int64)
    cb = _codebook(spec)
    dist = (cb ^ received_hard[None, :]).sum(axis=1)
    return cb[int(np.argmin(dist))].copy()
