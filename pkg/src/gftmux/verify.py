"""Structural verifier battery: every theorem-level claim, scale-aware.

Dense, exhaustive checks run at desk scale (n <= 31); production-scale
configurations get sampled block checks plus the exact global ones
(rank, weights, RC) that stay cheap.  Each check yields a named
pass/fail line so the CLI can report and exit accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import LlrFrame, llr
from .decoder import MsaParams, decode_global
from .geometry import DENSE_LIMIT, girth_lower_bound, rc_check, vandermonde
from .txrx import build_cascaded_ref, verify_similarity


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def _check(name, ok, detail) -> CheckResult:
    return CheckResult(name=name, ok=bool(ok), detail=detail)


def verify_vandermonde(bundle) -> CheckResult:
    sub = bundle.subgroup
    v = vandermonde(sub, "forward").elements()
    vi = vandermonde(sub, "inverse").elements()
    prod = bundle.field.matmul(v, vi)
    ok = (prod == np.eye(sub.n, dtype=np.int64)).all()
    return _check("gft-inverse", ok, f"V x V^-1 == I over GF(2^{bundle.field.s})")


def verify_shape_weights(bundle) -> CheckResult:
    h = bundle.parity_check
    col_w = np.unique(h.column_weights())
    row_w = np.unique(h.row_weights())
    ok = (
        col_w.size == 1 and row_w.size == 1
        and int(col_w[0]) == h.m and int(row_w[0]) == h.n
        and h.n_edges == h.m * h.n * h.n
    )
    detail = f"shape {h.shape[0]}x{h.shape[1]}, weights {h.m}/{h.n}, edges {h.n_edges}"
    exp = bundle.expected
    if exp:
        if "shape" in exp and tuple(exp["shape"]) != h.shape:
            ok, detail = False, detail + f" (expected shape {exp['shape']})"
        if "column_weight" in exp and exp["column_weight"] != h.m:
            ok = False
        if "row_weight" in exp and exp["row_weight"] != h.n:
            ok = False
    return _check("shape-weights", ok, detail)


def verify_rc(bundle) -> CheckResult:
    rep = rc_check(bundle.parity_check)
    how = "algebraic + brute force" if rep.brute_forced else "algebraic"
    detail = f"{how}; no two rows share more than one 1-entry"
    if not rep.ok:
        detail = f"violating blocks (i1,i2,j1,j2)={rep.violation}"
    return _check("rc-constraint", rep.ok, detail)


def verify_girth(bundle) -> CheckResult:
    g = girth_lower_bound(bundle.parity_check)
    exact = bundle.spec.n <= DENSE_LIMIT
    ok = g >= 6
    return _check("girth", ok, f"{'exact BFS girth' if exact else 'RC bound'} = {g}")


def verify_rank(bundle) -> CheckResult:
    h = bundle.parity_check
    rank = bundle.rank
    dim = h.n_vars - rank
    identity = bundle.spec.m * (bundle.spec.n - 1) + 1
    ok = rank == identity
    detail = f"rank {rank}, dimension {dim}, rate {dim / h.n_vars:.6f}"
    exp = bundle.expected
    if exp.get("dimension") is not None and exp["dimension"] != dim:
        ok, detail = False, detail + f" (expected dimension {exp['dimension']})"
    if exp.get("rate") is not None and abs(dim / h.n_vars - exp["rate"]) >= 1e-4:
        ok, detail = False, detail + f" (expected rate {exp['rate']})"
    return _check("rank-dimension", ok, detail)


def verify_eq_similarity(bundle, num_blocks: int = 20, seed: int = 0) -> CheckResult:
    spec = bundle.spec
    dense = spec.n <= DENSE_LIMIT
    ref = build_cascaded_ref(spec, dense=dense)
    rep = verify_similarity(ref, bundle.parity_check, num_blocks=num_blocks,
                            rng=np.random.default_rng(seed))
    scope = "all" if dense else "sampled"
    detail = f"V.D.V^-1 == CPM on {scope} {rep.blocks_checked} blocks"
    if not rep.ok:
        detail = f"mismatch at block {rep.first_mismatch}"
    return _check("transform-similarity", rep.ok, detail)


def verify_layer_decomposition(bundle, random_vectors: int = 1000,
                               tx_frames: int = 10, seed: int = 0) -> CheckResult:
    """GF(2^s) syndrome zero iff every binary layer syndrome is zero."""
    h = bundle.parity_check
    tx = bundle.transceiver
    s, n = bundle.field.s, bundle.spec.n
    rng = np.random.default_rng(seed)
    bad = 0

    vecs = rng.integers(0, bundle.field.order, size=(random_vectors, n * n),
                        dtype=np.int64)
    for vec in vecs:
        gf_zero = h.syndrome_weight(vec) == 0
        layers_zero = all(
            h.syndrome_weight((vec >> l) & 1) == 0 for l in range(s)
        )
        bad += gf_zero != layers_zero
    for _ in range(tx_frames):
        word, _ = tx.transmit(tx.random_streams(rng))
        gf_zero = h.syndrome_weight(word.symbols) == 0
        layers_zero = all(h.syndrome_weight(lay) == 0 for lay in word.layers())
        bad += (not gf_zero) or (not layers_zero) or (gf_zero != layers_zero)
    total = random_vectors + tx_frames
    return _check("layer-decomposition", bad == 0,
                  f"{total} vectors ({tx_frames} transmitter outputs), "
                  f"{bad} counterexamples")


def verify_round_trip(bundle, frames: int = 5, seed: int = 0) -> CheckResult:
    tx = bundle.transceiver
    graph = bundle.graph
    rng = np.random.default_rng(seed)
    params = MsaParams(max_iterations=4, scale=bundle.sim.scale)
    ok = True
    for _ in range(frames):
        streams = tx.random_streams(rng)
        word, x = tx.transmit(streams, verify=True)
        back = tx.receive(word)
        ok &= streams.equal(back)
        frame = LlrFrame(llr(x, 1.0), s=tx.s, n=tx.n)
        word_hat, results = decode_global(frame, graph, params)
        ok &= (word_hat.symbols == word.symbols).all()
        ok &= all(r.converged and r.iterations_used == 1 for r in results)
    return _check("round-trip", ok,
                  f"{frames} random frames: receive(transmit(x)) == x, "
                  f"noiseless decode converges in 1 iteration")


def run_battery(bundle, seed: int = 0) -> list:
    scale_large = bundle.spec.n > DENSE_LIMIT
    checks = [
        verify_vandermonde(bundle),
        verify_shape_weights(bundle),
        verify_rc(bundle),
        verify_girth(bundle),
        verify_rank(bundle),
        verify_eq_similarity(bundle, seed=seed),
        verify_layer_decomposition(
            bundle,
            random_vectors=100 if scale_large else 1000,
            tx_frames=3 if scale_large else 10,
            seed=seed,
        ),
        verify_round_trip(bundle, frames=2 if scale_large else 5, seed=seed),
    ]
    return checks
