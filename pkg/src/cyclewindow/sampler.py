"""Seeded Monte Carlo over cycle types of uniform and Ewens(sigma) permutations.

Only cycle types are ever materialized, never full permutations.  Single
draws follow the constructions stated in the interface contract
(stick-breaking at sigma = 1, Chinese restaurant otherwise); the bulk
estimator uses the equivalent independent-Bernoulli spacing representation
of the Ewens cycle counts, which vectorizes, consumes exactly n uniforms per
draw, and is validated against the single-draw constructions in the tests.

Randomness: Philox counter-based generators.  estimate_pmf(seed, workers)
seeds one SeedSequence(seed), spawns `workers` children in order, and worker
w handles a contiguous block of draws with generator Philox(child_w); tallies
merge in worker order, so results are bit-reproducible for a fixed
(seed, samples, workers) triple.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .exact_finite import normalized_window
from .limit_integrals import Interval

_CHUNK_BUDGET = 8_000_000  # uniforms per vectorized chunk


@dataclass(frozen=True)
class CycleLengths:
    """Cycle type of one sampled permutation of [n]."""

    lengths: tuple
    n: int

    def __post_init__(self):
        if sum(self.lengths) != self.n:
            raise DomainError("cycle lengths must sum to n")


@dataclass(frozen=True)
class EstimateResult:
    """Tally of window cycle counts over repeated draws.

    counts[i] = number of draws with exactly i window cycles; pmf_hat and the
    binomial stderr sqrt(p(1-p)/samples) are per-entry.
    """

    counts: tuple
    samples: int
    pmf_hat: tuple
    stderr: tuple
    seed: int

    def __post_init__(self):
        if sum(self.counts) != self.samples:
            raise DomainError("counts must sum to samples")
        if abs(math.fsum(self.pmf_hat) - 1.0) > 1e-12:
            raise DomainError("pmf_hat must sum to 1")

    @property
    def mean(self):
        return math.fsum(i * p for i, p in enumerate(self.pmf_hat))

    @property
    def mean_stderr(self):
        m = self.mean
        var = math.fsum(i * i * p for i, p in enumerate(self.pmf_hat)) - m * m
        return math.sqrt(max(var, 0.0) / self.samples)


class _Fenwick:
    """Prefix-sum tree over integer weights with O(log n) weighted selection."""

    def __init__(self, cap):
        size = 1
        while size < cap:
            size <<= 1
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, i, v):
        i += 1
        while i <= self.size:
            self.tree[i] += v
            i += i & (-i)

    def search(self, pos):
        # smallest 0-based index whose inclusive prefix sum exceeds pos
        idx, bit = 0, self.size
        while bit:
            nxt = idx + bit
            if nxt <= self.size and self.tree[nxt] <= pos:
                pos -= self.tree[nxt]
                idx = nxt
            bit >>= 1
        return idx


def sample_cycle_lengths(n, sigma, gen):
    """One cycle type of an Ewens(sigma) permutation of [n]; sigma=1 is uniform.

    sigma = 1: stick-breaking, the cycle containing the smallest remaining
    element has length uniform on {1..m} when m elements remain.  Otherwise:
    Chinese restaurant, element j+1 opens a new cycle with probability
    sigma/(sigma+j), else joins an existing cycle with probability
    proportional to its current length (Fenwick-tree selection).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if sigma <= 0:
        raise DomainError(f"need sigma > 0, got {sigma}")
    if sigma == 1:
        lengths = []
        m = n
        while m > 0:
            length = int(gen.integers(1, m + 1))
            lengths.append(length)
            m -= length
        return CycleLengths(tuple(lengths), n)
    tree = _Fenwick(n)
    sizes = []
    for j in range(n):
        if j == 0 or gen.random() * (sigma + j) < sigma:
            tree.add(len(sizes), 1)
            sizes.append(1)
        else:
            # a table weighted by size = a uniformly chosen seated element
            t = tree.search(int(gen.integers(0, j)))
            tree.add(t, 1)
            sizes[t] += 1
    return CycleLengths(tuple(sizes), n)


def _tally_chunk(gen, rows, n, theta, a, b, counts):
    # Bernoulli spacing representation: xi_i ~ Bern(theta/(theta+i-1)) for
    # i = 1..n plus a forced one at n+1; gaps between ones are cycle lengths.
    p = theta / (theta + np.arange(n, dtype=np.float64))
    xi = gen.random((rows, n)) < p
    xi = np.concatenate([xi, np.ones((rows, 1), dtype=bool)], axis=1)
    rr, cc = np.nonzero(xi)
    gaps = np.diff(cc)
    same_row = np.diff(rr) == 0
    lengths = gaps[same_row]
    row_of = rr[1:][same_row]
    assert bool(xi[:, 0].all())
    assert np.all(np.bincount(row_of, weights=lengths, minlength=rows) == n)
    hits = (lengths >= a) & (lengths <= b)
    per_row = np.bincount(row_of[hits], minlength=rows)
    tallied = np.bincount(per_row, minlength=len(counts))
    counts += tallied[: len(counts)]


def _worker_tally(args):
    n, theta, a, b, draws, child, support = args
    gen = np.random.Generator(np.random.Philox(child))
    counts = np.zeros(support, dtype=np.int64)
    rows_per = max(1, _CHUNK_BUDGET // (n + 1))
    left = draws
    while left > 0:
        rows = min(left, rows_per)
        _tally_chunk(gen, rows, n, theta, a, b, counts)
        left -= rows
    return counts


def estimate_pmf(n, iv: Interval, sigma, samples, seed, workers=1):
    """Empirical pmf of the number of cycles with length in [ceil(gamma*n), floor(delta*n)].

    Deterministic for fixed (seed, samples, workers); see the module notes for
    the substream layout.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if sigma <= 0:
        raise DomainError(f"need sigma > 0, got {sigma}")
    if samples < 1:
        raise DomainError(f"need samples >= 1, got {samples}")
    if workers < 1:
        raise DomainError(f"need workers >= 1, got {workers}")
    w = normalized_window(n, iv.gamma, iv.delta)
    support = n // w.a + 1
    children = np.random.SeedSequence(seed).spawn(workers)
    base, rem = divmod(samples, workers)
    jobs = [
        (n, float(sigma), w.a, w.b, base + (i < rem), children[i], support)
        for i in range(workers)
        if base + (i < rem) > 0
    ]
    if len(jobs) == 1:
        tallies = [_worker_tally(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            tallies = list(pool.map(_worker_tally, jobs))
    counts = np.zeros(support, dtype=np.int64)
    for t in tallies:
        counts += t
    pmf_hat = counts / samples
    stderr = np.sqrt(pmf_hat * (1.0 - pmf_hat) / samples)
    return EstimateResult(
        counts=tuple(int(c) for c in counts),
        samples=samples,
        pmf_hat=tuple(float(x) for x in pmf_hat),
        stderr=tuple(float(x) for x in stderr),
        seed=seed,
    )
