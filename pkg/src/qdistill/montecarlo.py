"""Monte Carlo estimators: distillation failure rates, average channel
fidelity under ancilla saving, an exact fidelity oracle, crossover and
threshold extraction, and the CSV sweep format.

Reproducibility contract: every estimate is a pure function of
(configuration, p, trials, seed).  Trials are cut into fixed-size chunks;
each chunk's uniforms come from an independent counter-based stream keyed
by (seed, purpose, bits of p, chunk index), so totals do not depend on the
number of worker threads or the order chunks complete in.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .classical import ClassicalCode
from .css import CssCode
from .gf2 import BinaryVector, parity, weight
from .pauli import NoiseModel, PauliError, simulate_noisy_prep
from .protocols import DistillationConfig, distill_protocol_I, residual_class

#: Trials per RNG chunk.  Fixed so that results are independent of thread
#: count: chunk c always consumes the same uniform stream.
CHUNK_TRIALS = 8192

_WILSON_Z = 1.959963984540054  # two-sided 95%


class EstimationError(ValueError):
    """An estimator's preconditions (brackets, ranges) are not met."""


def wilson_interval(failures: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise EstimationError("trials must be >= 1")
    z = _WILSON_Z
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(
        phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SweepPoint:
    """One CSV row: `trials` counts the classified blocks at this p."""

    p: float
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, p: float, failures: int, trials: int) -> "SweepPoint":
        lo, hi = wilson_interval(failures, trials)
        return cls(p=p, trials=trials, failures=failures,
                   rate=failures / trials, ci_low=lo, ci_high=hi)


@dataclass
class SweepResult:
    points: list[SweepPoint]
    metadata: dict = field(default_factory=dict)


@dataclass
class TrialReport:
    """Reference-path outcome of a single distillation trial."""

    residuals: list[PauliError]
    failures: list[bool]


CSV_HEADER = "p,trials,failures,rate,ci_low,ci_high"


def write_sweep_csv(result: SweepResult, path: str) -> str:
    """Write the sweep CSV and its JSON metadata sidecar; returns the
    sidecar path (`<csv path minus .csv>.meta.json`)."""
    lines = [CSV_HEADER]
    for pt in result.points:
        lines.append(",".join([
            format(pt.p, ".10g"), str(pt.trials), str(pt.failures),
            format(pt.rate, ".10g"), format(pt.ci_low, ".10g"),
            format(pt.ci_high, ".10g")]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    base = path[:-4] if path.endswith(".csv") else path
    sidecar = base + ".meta.json"
    with open(sidecar, "w") as fh:
        json.dump(result.metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def read_sweep_csv(path: str) -> SweepResult:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise EstimationError(f"{path}: missing header {CSV_HEADER!r}")
    points = []
    for ln in lines[1:]:
        p, trials, failures, rate, lo, hi = ln.split(",")
        points.append(SweepPoint(float(p), int(trials), int(failures),
                                 float(rate), float(lo), float(hi)))
    return SweepResult(points=points)


# --- chunked parallel driver ------------------------------------------------

_PURPOSE_DISTILL = 0
_PURPOSE_NODISTILL = 1
_PURPOSE_FIDELITY = 2


def _n_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("QDISTILL_THREADS", "")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _chunk_rng(seed: int, purpose: int, p: float, chunk: int
               ) -> np.random.Generator:
    pbits = int(np.float64(p).view(np.uint64))
    ss = np.random.SeedSequence((int(seed), purpose, pbits, chunk))
    return np.random.Generator(np.random.PCG64(ss))


def _run_chunked(total_trials: int, draws_per_trial: int, seed: int,
                 purpose: int, p: float, kernel_call, threads: int | None
                 ) -> int:
    """Sum kernel_call(draws) over fixed-size chunks of pre-drawn uniforms."""
    n_chunks = (total_trials + CHUNK_TRIALS - 1) // CHUNK_TRIALS

    def one(chunk: int) -> int:
        n = min(CHUNK_TRIALS, total_trials - chunk * CHUNK_TRIALS)
        draws = _chunk_rng(seed, purpose, p, chunk).random((n, draws_per_trial))
        return int(kernel_call(draws))

    workers = min(_n_threads(threads), n_chunks)
    if workers <= 1:
        return sum(one(c) for c in range(n_chunks))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(one, range(n_chunks)))


def _css_arrays(css: CssCode):
    enc_c, enc_t = css.encoder_cnot_arrays()
    return (enc_c, enc_t, css.hz_masks(), css.hx_masks(),
            np.int64(css.logical_x.mask), np.int64(css.logical_z.mask))


def _ud_arrays(code: ClassicalCode):
    pairs = [(i, code.k + j) for i in range(code.k) for j in range(code.r)
             if code.A.entry(i, j)]
    c = np.array([a for a, _ in pairs], dtype=np.int64)
    t = np.array([b for _, b in pairs], dtype=np.int64)
    return c, t


# --- distillation estimators ------------------------------------------------

def run_protocol_I_trial(cfg: DistillationConfig, noise: NoiseModel,
                         rng: np.random.Generator) -> TrialReport:
    """One trial on the readable reference path (no compiled kernels)."""
    nb = cfg.code_round1.m * cfg.code_round2.m
    pool = [simulate_noisy_prep(cfg.css, cfg.target, noise, rng)
            for _ in range(nb)]
    survivors = distill_protocol_I(pool, cfg)
    flags = [residual_class(s, cfg.css, cfg.target) == "error"
             for s in survivors]
    return TrialReport(residuals=survivors, failures=flags)


def estimate_distillation_rate(cfg: DistillationConfig, p: float, trials: int,
                               seed: int, threads: int | None = None
                               ) -> SweepPoint:
    """Failing-survivor fraction of two-round distillation at noise rate p.

    Each trial prepares m1*m2 noisy blocks and distills them down to k1*k2
    survivors; the returned point counts every survivor, so `rate` is the
    final error rate per output block.
    """
    if trials < 1:
        raise EstimationError("trials must be >= 1")
    css = cfg.css
    c1, c2 = cfg.code_round1, cfg.code_round2
    enc_c, enc_t, hz, hx, logx, logz = _css_arrays(css)
    ud1_c, ud1_t = _ud_arrays(c1)
    # Round 2 couples with the reversed-orientation circuit (parity blocks
    # as controls), so swap the pair order for the kernel.
    ud2_t, ud2_c = _ud_arrays(c2)
    draws_per_trial = c1.m * c2.m * (css.n + len(enc_c))
    target = 0 if cfg.target == "zero_L" else 1

    def call(draws):
        return kernels.distill_rate_kernel(
            draws, p, css.n, enc_c, enc_t,
            c1.m, c1.k, ud1_c, ud1_t, c1.table,
            c2.m, c2.k, ud2_c, ud2_t, c2.table,
            hz, hx, logx, logz, css.coset_x, css.coset_z, target)

    failures = _run_chunked(trials, draws_per_trial, seed,
                            _PURPOSE_DISTILL, p, call, threads)
    return SweepPoint.from_counts(p, failures, trials * c1.k * c2.k)


def no_distillation_reference(css: CssCode, p: float, trials: int, seed: int,
                              target: str = "zero_L",
                              threads: int | None = None) -> SweepPoint:
    """Failure fraction of raw noisy preparations (the dashed reference)."""
    if trials < 1:
        raise EstimationError("trials must be >= 1")
    enc_c, enc_t, hz, hx, logx, logz = _css_arrays(css)
    tgt = 0 if target == "zero_L" else 1

    def call(draws):
        return kernels.no_distill_kernel(draws, p, css.n, enc_c, enc_t,
                                         hz, hx, logx, logz, tgt)

    failures = _run_chunked(trials, css.n + len(enc_c), seed,
                            _PURPOSE_NODISTILL, p, call, threads)
    return SweepPoint.from_counts(p, failures, trials)


# --- channel fidelity -------------------------------------------------------

def _saving_wires(code_d: ClassicalCode) -> np.ndarray:
    """wires[j] = mask of data blocks feeding shared ancilla pair j."""
    wires = np.zeros(code_d.r, dtype=np.int64)
    for j in range(code_d.r):
        mask = 1 << (code_d.k + j)
        for i in range(code_d.k):
            if code_d.A.entry(i, j):
                mask |= 1 << i
        wires[j] = mask
    return wires


def estimate_avg_channel_fidelity(css: CssCode, code_d: ClassicalCode | None,
                                  p: float, trials: int, seed: int,
                                  threads: int | None = None) -> SweepPoint:
    """Average fraction of blocks correctable after one round of syndrome
    extraction, under the X-only channel that flips each qubit w.p. p.

    With `code_d`, syndromes are recovered through the shared-ancilla
    wiring and its classical decoder; without, each block's exact syndrome
    is used.  `rate` in the returned point IS the fidelity estimate (and
    `failures` counts the correctable blocks).
    """
    if trials < 1:
        raise EstimationError("trials must be >= 1")
    hz = css.hz_masks()
    logz = np.int64(css.logical_z.mask)
    if code_d is None:
        m = 1
        wires = np.zeros(0, dtype=np.int64)
        table = np.zeros(1, dtype=np.int64)
        use_saving = 0
    else:
        m = code_d.m
        wires = _saving_wires(code_d)
        table = code_d.table
        use_saving = 1

    def call(draws):
        return kernels.fidelity_kernel(draws, p, css.n, m, 0, wires, table,
                                       hz, logz, css.coset_x, use_saving)

    good = _run_chunked(trials, m * css.n, seed, _PURPOSE_FIDELITY, p,
                        call, threads)
    return SweepPoint.from_counts(p, good, trials * m)


def brute_force_channel_fidelity(css: CssCode, p: float,
                                 cutoff: int | None = None) -> float:
    """Exact correctable-probability of the X-only channel on one block.

    Sums p^w (1-p)^(n-w) over every X pattern whose coset-leader correction
    leaves a residual with zero syndrome and even logical-Z parity.  Full
    2^n enumeration for n <= 20; larger blocks need a weight `cutoff`
    (patterns above it count as uncorrectable, giving a lower bound whose
    gap is the binomial tail beyond the cutoff).
    """
    n = css.n
    logz = css.logical_z.mask
    hz_rows = css.hz.rows

    def correctable(e: int) -> bool:
        syn = 0
        for j, row in enumerate(hz_rows):
            syn |= parity(row & e) << j
        res = e ^ int(css.coset_x[syn])
        if any(parity(row & res) for row in hz_rows):
            return False
        return parity(res & logz) == 0

    total = 0.0
    if n <= 20:
        for e in range(1 << n):
            if correctable(e):
                total += p ** weight(e) * (1.0 - p) ** (n - weight(e))
        return total
    if cutoff is None:
        raise EstimationError(
            f"n = {n} needs a weight cutoff for enumeration")
    for w in range(cutoff + 1):
        pw = p ** w * (1.0 - p) ** (n - w)
        for combo in combinations(range(n), w):
            e = 0
            for i in combo:
                e |= 1 << i
            if correctable(e):
                total += pw
    return total


# --- crossover and threshold ------------------------------------------------

@dataclass(frozen=True)
class CrossoverResult:
    """Outcome of comparing plain extraction against ancilla saving.

    status: "crossover" (p_star set), "no_gain" (saving never wins in the
    range), "always_gain", or "indistinguishable" (difference within noise
    everywhere).
    """

    status: str
    p_star: float | None
    grid: list[float]
    diffs: list[float]


def find_crossover(css: CssCode, code_d: ClassicalCode, p_range: tuple[float, float],
                   trials: int, seed: int, n_grid: int = 13,
                   threads: int | None = None) -> CrossoverResult:
    """Locate p* where saving's effective fidelity meets the plain one.

    Saving runs the m-block protocol at the effective rate (r/m)p, and its
    Monte Carlo fidelity there is compared against the exact one-block
    oracle at p.  A positive difference means saving wins; p* is the
    sign-change point, refined by linear interpolation on the grid.
    """
    lo, hi = p_range
    if not (0.0 < lo < hi < 1.0):
        raise EstimationError(f"bad p range {p_range}")
    factor = code_d.r / code_d.m
    grid = [float(x) for x in np.geomspace(lo, hi, n_grid)]
    diffs = []
    sigmas = []
    for p in grid:
        f_plain = brute_force_channel_fidelity(css, p)
        pt = estimate_avg_channel_fidelity(css, code_d, factor * p, trials,
                                           seed, threads)
        diffs.append(pt.rate - f_plain)
        sigmas.append((pt.ci_high - pt.ci_low) / 2.0)
    gains = [i for i, d in enumerate(diffs) if d > sigmas[i]]
    losses = [i for i, d in enumerate(diffs) if d < -sigmas[i]]
    if not gains and not losses:
        return CrossoverResult("indistinguishable", None, grid, diffs)
    if not gains:
        return CrossoverResult("no_gain", None, grid, diffs)
    if not losses:
        return CrossoverResult("always_gain", None, grid, diffs)
    # Zero of the difference, interpolated in log p from the last
    # significant-gain point onward (robust to noise dips at low p).
    for i in range(max(gains), n_grid - 1):
        if diffs[i] > 0.0 >= diffs[i + 1]:
            x0, x1 = math.log(grid[i]), math.log(grid[i + 1])
            d0, d1 = diffs[i], diffs[i + 1]
            p_star = math.exp(x0 + (x1 - x0) * d0 / (d0 - d1))
            return CrossoverResult("crossover", p_star, grid, diffs)
    raise EstimationError("difference changes sign the wrong way; widen p_range")


def estimate_threshold(sweep: SweepResult, reference: SweepResult) -> float:
    """Crossing point of a distillation curve with the reference curve.

    Both sweeps must share their p grid; the crossing is found by log-log
    linear interpolation of the rate difference.
    """
    ps = [pt.p for pt in sweep.points]
    if ps != [pt.p for pt in reference.points]:
        raise EstimationError("sweep and reference use different p grids")
    logs = []
    for pt, ref in zip(sweep.points, reference.points):
        if pt.rate <= 0.0 or ref.rate <= 0.0:
            continue
        logs.append((math.log(pt.p), math.log(pt.rate) - math.log(ref.rate)))
    for (x0, d0), (x1, d1) in zip(logs, logs[1:]):
        if d0 < 0.0 <= d1 or d0 <= 0.0 < d1:
            return math.exp(x0 + (x1 - x0) * (-d0) / (d1 - d0))
    raise EstimationError("no crossing bracketed by the sweep")


def fit_loglog_slope(points: list[SweepPoint]) -> float:
    """Least-squares slope of log(rate) against log(p)."""
    xs = np.log([pt.p for pt in points if pt.rate > 0.0])
    ys = np.log([pt.rate for pt in points if pt.rate > 0.0])
    if len(xs) < 2:
        raise EstimationError("need at least two nonzero points for a slope")
    return float(np.polyfit(xs, ys, 1)[0])
