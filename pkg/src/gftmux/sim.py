"""Monte Carlo harness: GER/WER/BER sweeps with exact counter identities.

A trial is fully determined by (master seed, trial index): the RNG
substream yields the message bits and a unit-variance noise vector,
which each SNR cell scales by its own sigma.  Cells therefore share
paired channel realizations, results are reproducible bit-for-bit,
and aggregation is an associative integer merge, so the worker count
never changes the outcome.

Word errors are counted per composite codeword after demultiplexing,
global errors per frame, and lambda (mean erroneous composites per
erroneous frame) ties them together exactly:
wer = (lambda/n) * ger by construction of the counters.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .channel import ChannelParams, LlrFrame, llr
from .cyclic import mld_oracle
from .decoder import DecoderGraph, MsaParams, decode_global
from .txrx import Transceiver, bpsk_map

#: 97.5% standard normal quantile for the 95% Wilson interval.
_Z95 = 1.959963984540054

#: Trials evaluated per scheduling block; merging whole blocks in index
#: order keeps the stopping rule independent of the worker count.
BLOCK_SIZE = 256


def confidence_interval(errors: int, trials: int, z: float = _Z95) -> tuple:
    """95% Wilson score interval for an error probability."""
    if trials < 1:
        raise ValueError("need at least one trial")
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = (z / denom) * np.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    low = 0.0 if errors == 0 else max(0.0, center - half)
    high = 1.0 if errors == trials else min(1.0, center + half)
    return low, high


@dataclass(eq=False)
class SimConfig:
    ebn0_db: list
    iterations: list
    scale: float = 0.625
    max_frames: int = 10_000
    target_errors: int = 100
    seed: int = 1
    clip: float | None = None
    verify: bool = True
    baseline: bool = False

    def __post_init__(self):
        if not self.ebn0_db:
            raise ValueError("need at least one SNR point")
        if self.max_frames < 1 or self.target_errors < 1:
            raise ValueError("frame budgets must be positive")


@dataclass
class TrialRecord:
    global_error: bool
    composite_errors: int
    bit_errors: int
    iterations: list
    edge_ops: int
    all_converged: bool


@dataclass
class CellResult:
    """Counters for one (SNR, iteration-limit) sweep cell."""

    ebn0_db: float
    iterations_limit: int
    frames: int = 0
    global_errors: int = 0
    composite_errors: int = 0
    bit_errors: int = 0
    iter_sum: int = 0
    layer_decodes: int = 0
    iter_hist: dict = dc_field(default_factory=dict)
    edge_ops: int = 0
    wall_time: float = 0.0

    def add(self, rec: TrialRecord) -> None:
        self.frames += 1
        self.global_errors += int(rec.global_error)
        self.composite_errors += rec.composite_errors
        self.bit_errors += rec.bit_errors
        self.iter_sum += sum(rec.iterations)
        self.layer_decodes += len(rec.iterations)
        for it in rec.iterations:
            self.iter_hist[it] = self.iter_hist.get(it, 0) + 1
        self.edge_ops += rec.edge_ops

    def merge(self, other: "CellResult") -> "CellResult":
        if (self.ebn0_db, self.iterations_limit) != (
            other.ebn0_db,
            other.iterations_limit,
        ):
            raise ValueError("cannot merge results from different cells")
        out = CellResult(self.ebn0_db, self.iterations_limit)
        out.frames = self.frames + other.frames
        out.global_errors = self.global_errors + other.global_errors
        out.composite_errors = self.composite_errors + other.composite_errors
        out.bit_errors = self.bit_errors + other.bit_errors
        out.iter_sum = self.iter_sum + other.iter_sum
        out.layer_decodes = self.layer_decodes + other.layer_decodes
        hist = dict(self.iter_hist)
        for k, v in other.iter_hist.items():
            hist[k] = hist.get(k, 0) + v
        out.iter_hist = hist
        out.edge_ops = self.edge_ops + other.edge_ops
        out.wall_time = self.wall_time + other.wall_time
        return out

    # -- derived estimators ------------------------------------------

    @property
    def ger(self) -> float:
        return self.global_errors / self.frames if self.frames else 0.0

    def wer(self, n: int) -> float:
        return self.composite_errors / (self.frames * n) if self.frames else 0.0

    def ber(self, info_bits_per_frame: int) -> float:
        total = self.frames * info_bits_per_frame
        return self.bit_errors / total if total else 0.0

    @property
    def lambda_hat(self) -> float | None:
        if self.global_errors == 0:
            return None
        return self.composite_errors / self.global_errors

    @property
    def mean_iterations(self) -> float:
        return self.iter_sum / self.layer_decodes if self.layer_decodes else 0.0

    @property
    def median_iterations(self) -> float:
        if not self.iter_hist:
            return 0.0
        counts = sorted(self.iter_hist.items())
        half = self.layer_decodes / 2
        seen = 0
        for it, c in counts:
            seen += c
            if seen >= half:
                return float(it)
        return float(counts[-1][0])

    def wilson_wer(self, n: int) -> tuple:
        if not self.frames:
            return (0.0, 1.0)
        return confidence_interval(self.composite_errors, self.frames * n)


@dataclass(eq=False)
class SimResult:
    cells: list
    n: int
    info_bits_per_frame: int
    seed: int

    def cell(self, ebn0_db: float, iterations: int) -> CellResult:
        for c in self.cells:
            if c.ebn0_db == ebn0_db and c.iterations_limit == iterations:
                return c
        raise KeyError((ebn0_db, iterations))


# -- single trial ---------------------------------------------------------


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, trial_index])


def run_trial(
    tx: Transceiver,
    graph: DecoderGraph,
    sigma: float,
    params: MsaParams,
    master_seed: int,
    trial_index: int,
    verify: bool = True,
) -> TrialRecord:
    rng = trial_rng(master_seed, trial_index)
    streams = tx.random_streams(rng)
    composites = tx.encode_composites(streams)
    word, x = tx.multiplex(composites)
    noise = rng.standard_normal(x.size)

    y = x + sigma * noise
    frame = LlrFrame(llr(y, sigma), s=tx.s, n=tx.n)
    word_hat, results = decode_global(frame, graph, params)
    comps_hat, streams_hat = tx.demultiplex(word_hat)

    if verify:
        for r in results:
            if r.converged:
                assert graph.syndrome_weight(r.hard_bits) == 0, (
                    "early stop reported convergence on a nonzero syndrome"
                )
    word_errors = int((comps_hat != composites).any(axis=1).sum())
    return TrialRecord(
        global_error=word_errors > 0,
        composite_errors=word_errors,
        bit_errors=streams.bit_errors(streams_hat),
        iterations=[r.iterations_used for r in results],
        edge_ops=sum(r.edge_ops for r in results),
        all_converged=all(r.converged for r in results),
    )


# -- sweep engine -----------------------------------------------------------


@dataclass(eq=False)
class _CellTask:
    """Picklable trial runner for one sweep cell."""

    tx: Transceiver
    graph: DecoderGraph
    sigma: float
    params: MsaParams
    seed: int
    verify: bool

    def block(self, start: int, count: int) -> list:
        return [
            run_trial(self.tx, self.graph, self.sigma, self.params,
                      self.seed, idx, self.verify)
            for idx in range(start, start + count)
        ]


def _run_cell(task: _CellTask, cell: CellResult, cfg: SimConfig, workers: int,
              progress=None) -> CellResult:
    t0 = time.perf_counter()
    done = 0

    def consume(records):
        nonlocal done
        for rec in records:
            cell.add(rec)
            done += 1
            if cell.frames >= cfg.max_frames or cell.global_errors >= cfg.target_errors:
                return True
        return False

    if workers <= 1:
        stop = False
        while not stop:
            count = min(BLOCK_SIZE, cfg.max_frames - done)
            stop = consume(task.block(done, count)) or done >= cfg.max_frames
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {}
            next_start = 0
            next_merge = 0
            stop = False
            while not stop:
                while len(pending) < 2 * workers and next_start < cfg.max_frames:
                    count = min(BLOCK_SIZE, cfg.max_frames - next_start)
                    pending[next_start] = pool.submit(task.block, next_start, count)
                    next_start += count
                if next_merge not in pending:
                    break
                records = pending.pop(next_merge).result()
                next_merge += len(records)
                stop = consume(records) or next_merge >= cfg.max_frames
            for fut in pending.values():
                fut.cancel()
    cell.wall_time = time.perf_counter() - t0
    if progress:
        progress(cell)
    return cell


def monte_carlo(
    tx: Transceiver,
    graph: DecoderGraph,
    cfg: SimConfig,
    rate: float,
    workers: int = 1,
    progress=None,
) -> SimResult:
    """Sweep every (SNR, iteration-limit) cell to its frame/error budget."""
    cells = []
    for ebn0 in cfg.ebn0_db:
        sigma = ChannelParams(ebn0_db=ebn0, rate=rate).sigma
        for iters in cfg.iterations:
            params = MsaParams(max_iterations=iters, scale=cfg.scale, clip=cfg.clip)
            task = _CellTask(tx=tx, graph=graph, sigma=sigma, params=params,
                             seed=cfg.seed, verify=cfg.verify)
            cell = CellResult(ebn0_db=ebn0, iterations_limit=iters)
            cells.append(_run_cell(task, cell, cfg, workers, progress))
    return SimResult(cells=cells, n=tx.n, info_bits_per_frame=tx.info_bits,
                     seed=cfg.seed)


# -- independent single-code baseline ---------------------------------------


def baseline_mld_wer(
    tx: Transceiver,
    ebn0_db: float,
    max_words: int,
    target_errors: int,
    seed: int,
) -> tuple:
    """(errors, words) for the uncoupled base code under hard-decision MLD.

    Each base codeword is transmitted alone at the code's own rate and
    decoded by exhaustive nearest-codeword search; n <= 15 binary codes
    only (enforced by the oracle guard).
    """
    spec = tx.spec
    n, m = spec.n, spec.m
    rate = (n - m) / n
    sigma = ChannelParams(ebn0_db=ebn0_db, rate=rate).sigma
    rng = np.random.default_rng([seed, 0xBA5E, int(round(ebn0_db * 1000)) & 0xFFFF])
    probe = mld_oracle(np.zeros(n, dtype=np.int64), spec)  # trips the guard early
    assert probe.shape == (n,)
    from .cyclic import _codebook, generator_matrix

    codebook = _codebook(spec)
    gmat = generator_matrix(spec)
    errors = 0
    words = 0
    batch = 1024
    while words < max_words and errors < target_errors:
        count = min(batch, max_words - words)
        msgs = rng.integers(0, 2, size=(count, n - m), dtype=np.int64)
        cws = (msgs @ gmat) % 2
        y = bpsk_map(cws) + sigma * rng.standard_normal(cws.shape)
        hard = (y < 0).astype(np.int64)
        dist = (hard[:, None, :] != codebook[None, :, :]).sum(axis=2)
        decoded = codebook[dist.argmin(axis=1)]
        errors += int((decoded != cws).any(axis=1).sum())
        words += count
    return errors, words


# -- CSV output --------------------------------------------------------------

CSV_COLUMNS = [
    "ebn0_db", "iters", "frames", "ger", "wer", "ber",
    "lambda", "ci_low", "ci_high", "mean_iters", "edge_ops",
]


def write_csv(result: SimResult, destination, truncated: bool = False) -> None:
    import csv

    def emit(fh):
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for c in result.cells:
            lo, hi = c.wilson_wer(result.n)
            lam = c.lambda_hat
            w.writerow([
                c.ebn0_db, c.iterations_limit, c.frames,
                repr(c.ger), repr(c.wer(result.n)),
                repr(c.ber(result.info_bits_per_frame)),
                "" if lam is None else repr(lam),
                repr(lo), repr(hi), repr(c.mean_iterations), c.edge_ops,
            ])
        if truncated:
            fh.write("# truncated\n")

    if hasattr(destination, "write"):
        emit(destination)
    else:
        with open(destination, "w", newline="") as fh:
            emit(fh)
