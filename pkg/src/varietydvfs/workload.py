"""Synthetic block-partitioned workloads with Zipfian skew.

Each block holds ``records_per_block`` records of two classes: *hits*
(records matching the workload predicate, expensive) and *misses*. Total
hits are spread over ranked blocks with Zipf weights, so block work varies
while block size stays fixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InfeasibleSkewError, InvalidParameterError

# spawn-key tags keep the shuffle and jitter streams independent of each other
_SHUFFLE_STREAM = 0
_JITTER_STREAM = 1


@dataclass(frozen=True)
class ZipfianParams:
    z: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"zipf n must be >= 1, got {self.n}")
        if not self.z >= 0:
            raise InvalidParameterError(f"zipf exponent must be >= 0, got {self.z}")


@dataclass(frozen=True)
class WorkloadSpec:
    n_blocks: int
    records_per_block: int
    total_hit_records: int
    cycles_per_hit: float
    cycles_per_miss: float
    zipf: ZipfianParams
    rng_seed: int = 0
    shuffle: bool = False
    jitter_sigma: float = 0.0

    def __post_init__(self):
        if self.n_blocks < 1:
            raise InvalidParameterError("n_blocks must be >= 1")
        if self.records_per_block < 1:
            raise InvalidParameterError("records_per_block must be >= 1")
        if self.zipf.n != self.n_blocks:
            raise InvalidParameterError(
                f"zipf.n ({self.zipf.n}) must equal n_blocks ({self.n_blocks})"
            )
        if not self.cycles_per_hit >= self.cycles_per_miss >= 0:
            raise InvalidParameterError("need cycles_per_hit >= cycles_per_miss >= 0")
        if not 0 <= self.total_hit_records <= self.n_blocks * self.records_per_block:
            raise InvalidParameterError(
                "total_hit_records must lie in [0, n_blocks * records_per_block]"
            )
        if not self.jitter_sigma >= 0:
            raise InvalidParameterError("jitter_sigma must be >= 0")


@dataclass(frozen=True)
class DataBlock:
    """One equal-size input partition.

    ``id`` is the block's 1-based Zipf rank. With ``jitter_sigma > 0`` every
    record's cost carries a fixed lognormal factor (mean 1) drawn from
    ``jitter_seed``; the realized factors are part of the block's ground truth.
    """

    id: int
    record_count: int
    hit_count: int
    cycles_per_hit: float
    cycles_per_miss: float
    jitter_sigma: float = 0.0
    jitter_seed: int = 0

    def __post_init__(self):
        if not 0 <= self.hit_count <= self.record_count:
            raise InvalidParameterError(
                f"block {self.id}: hit_count must lie in [0, record_count]"
            )


def zipf_weights(params: ZipfianParams) -> np.ndarray:
    """Normalized Zipf frequencies ``k**-z / sum(m**-z)`` for ranks 1..n."""
    if params.n < 1:
        raise InvalidParameterError("zipf n must be >= 1")
    if params.z == 0:
        return np.full(params.n, 1.0 / params.n)
    raw = np.arange(1, params.n + 1, dtype=np.float64) ** (-float(params.z))
    return raw / raw.sum()


def apportion(weights, total: int) -> list[int]:
    """Largest-remainder rounding of ``weights * total`` to integers summing to ``total``.

    Ties in the fractional part go to the lower rank.
    """
    quotas = [float(w) * total for w in weights]
    counts = [math.floor(q) for q in quotas]
    remainder = total - sum(counts)
    fracs = [q - c for q, c in zip(quotas, counts)]
    if remainder > 0:
        order = sorted(range(len(fracs)), key=lambda i: (-fracs[i], i))
        for i in order[:remainder]:
            counts[i] += 1
    elif remainder < 0:
        # float round-off pushed the floors over the total
        order = sorted(range(len(fracs)), key=lambda i: (fracs[i], -i))
        for i in order[: -remainder]:
            counts[i] -= 1
    return counts


def _seed_sequence(seed: int, stream: int, *extra: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32 & 0xFFFFFFFF, stream, *extra])


def generate_blocks(spec: WorkloadSpec) -> list[DataBlock]:
    hits = apportion(zipf_weights(spec.zipf), spec.total_hit_records)
    blocks = []
    for rank, h in enumerate(hits, start=1):
        if h > spec.records_per_block:
            raise InfeasibleSkewError(rank, h, spec.records_per_block)
        jitter_seed = 0
        if spec.jitter_sigma > 0:
            jitter_seed = int(_seed_sequence(spec.rng_seed, _JITTER_STREAM, rank).generate_state(1)[0])
        blocks.append(
            DataBlock(
                id=rank,
                record_count=spec.records_per_block,
                hit_count=h,
                cycles_per_hit=spec.cycles_per_hit,
                cycles_per_miss=spec.cycles_per_miss,
                jitter_sigma=spec.jitter_sigma,
                jitter_seed=jitter_seed,
            )
        )
    if spec.shuffle:
        rng = np.random.default_rng(_seed_sequence(spec.rng_seed, _SHUFFLE_STREAM))
        order = rng.permutation(len(blocks))
        blocks = [blocks[i] for i in order]
    return blocks


@lru_cache(maxsize=32)
def _jitter_factors(n: int, sigma: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    factors = np.exp(sigma * rng.standard_normal(n) - 0.5 * sigma * sigma)
    factors.setflags(write=False)
    return factors


def record_costs(block: DataBlock, index=None) -> np.ndarray:
    """Per-record cycle costs, for all records or for ``index`` only.

    Records ``[0, hit_count)`` are the hits; position is irrelevant under
    uniform sampling.
    """
    if index is None:
        index = np.arange(block.record_count)
    index = np.asarray(index)
    costs = np.where(index < block.hit_count, block.cycles_per_hit, block.cycles_per_miss).astype(
        np.float64
    )
    if block.jitter_sigma > 0:
        costs *= _jitter_factors(block.record_count, block.jitter_sigma, block.jitter_seed)[index]
    return costs


def true_cycles(block: DataBlock) -> float:
    if block.jitter_sigma > 0:
        # exactly rounded, so a full-population sample reproduces it bit for bit
        return math.fsum(record_costs(block))
    misses = block.record_count - block.hit_count
    # correctly rounded, like the fsum above
    return float(Fraction(block.cycles_per_hit) * block.hit_count + Fraction(block.cycles_per_miss) * misses)


def spec_total_cycles(spec: WorkloadSpec) -> float:
    """Total jitter-free work implied by the spec totals alone."""
    misses = spec.n_blocks * spec.records_per_block - spec.total_hit_records
    return spec.total_hit_records * spec.cycles_per_hit + misses * spec.cycles_per_miss


def size_costs(
    reference_deadline: float,
    n_blocks: int,
    records_per_block: int,
    total_hit_records: int,
    f_max_ghz: float,
    base_fill: float,
    hit_fill: float,
) -> tuple[float, float]:
    """Per-record costs from slot-relative fill fractions.

    ``base_fill`` is the share of one slot (at ``f_max``) taken by a block of
    misses only; ``hit_fill`` is the extra hit work over all blocks, in
    slot units. Returns ``(cycles_per_hit, cycles_per_miss)``.
    """
    if reference_deadline <= 0 or base_fill < 0 or hit_fill < 0:
        raise InvalidParameterError("reference_deadline must be > 0 and fills >= 0")
    slot_cycles = reference_deadline / n_blocks * f_max_ghz * 1e9
    per_miss = base_fill * slot_cycles / records_per_block
    extra = hit_fill * slot_cycles / total_hit_records if total_hit_records else 0.0
    return per_miss + extra, per_miss
