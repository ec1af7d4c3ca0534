"""Query drivers used by the benchmark harness.

Each driver returns a WorkloadResult whose checksum is a wrapping 64-bit
fold of everything the queries observed; the harness compares checksums
across codecs to catch decode bugs before timing anything.
"""

from dataclasses import dataclass

from .rng import SplitMix64

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class WorkloadResult:
    name: str
    ops: int
    checksum: int


def binary_search(vec, target):
    """Index of the first entry >= target in a non-decreasing vector.

    Returns (index, accesses); index == len(vec) when every entry is
    smaller. Each probe is one positioned access, so the count is at most
    ceil(log2 n) + 1.
    """
    lo, hi = 0, vec.n
    probes = 0
    while lo < hi:
        mid = (lo + hi) // 2
        v, _ = vec.access(mid)
        probes += 1
        if v < target:
            lo = mid + 1
        else:
            hi = mid
    return lo, probes


def run_seqsum(vec, m):
    """Sum of the first m entries via one access plus cursor steps."""
    if m > vec.n:
        raise ValueError("seqsum length exceeds vector length")
    if m == 0:
        return WorkloadResult("seqsum", 0, 0)
    acc, cur = vec.access(0)
    for _ in range(m - 1):
        acc = (acc + cur.next()) & MASK64
    return WorkloadResult("seqsum", m, acc)


def run_randsum(vec, m, seed):
    """Sum of m uniformly drawn entries (with repetition)."""
    if m and vec.n == 0:
        raise ValueError("randsum needs a non-empty vector")
    rng = SplitMix64(seed)
    n = vec.n
    acc = 0
    for _ in range(m):
        v, _ = vec.access(rng.below(n))
        acc = (acc + v) & MASK64
    return WorkloadResult("randsum", m, acc)


def run_binsearch(vec, m, seed, target_max=None):
    """m lower-bound searches for uniform targets in [0, target_max]."""
    if target_max is None:
        target_max = MASK64 - 1
    rng = SplitMix64(seed)
    acc = 0
    for _ in range(m):
        idx, _ = binary_search(vec, rng.below(target_max + 1))
        acc = (acc + idx) & MASK64
    return WorkloadResult("binsearch", m, acc)


RUNNERS = {
    "seqsum": lambda vec, ops, seed, target_max: run_seqsum(vec, ops),
    "randsum": lambda vec, ops, seed, target_max: run_randsum(vec, ops, seed),
    "binsearch": run_binsearch,
}


def run(name, vec, ops, seed, target_max=None):
    if name not in RUNNERS:
        raise ValueError(f"unknown workload {name!r}")
    return RUNNERS[name](vec, ops, seed, target_max)
