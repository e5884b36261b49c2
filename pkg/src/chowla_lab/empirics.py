"""Block statistics on sequence prefixes.

Block frequencies with overlapping windows, distinct-block complexity
profiles, a finite-scale entropy estimator, the randomized-sign extension
test (does the empirical measure of z give every block B the mass of B^2
split evenly over the 2^|supp B| sign patterns?), and the positive-frequency
block set.

Window counting conventions: a length-ell block in a prefix of length N has
denominator N - ell + 1; blocks are packed as base-3 codes (letter + 1 per
position), which is exact for lengths up to 39.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .seqcore import Block, SignSeq, square_map

MAX_FREQUENCY_ORDER = 24
_BINCOUNT_CODE_LIMIT = 1 << 23  # dense counting below this code range


def block_code(letters) -> int:
    """Base-3 code of a block (little-endian in the position index)."""
    code = 0
    scale = 1
    for v in letters:
        code += (int(v) + 1) * scale
        scale *= 3
    return code


def code_to_block(code: int, length: int) -> Block:
    letters = []
    for _ in range(length):
        code, digit = divmod(code, 3)
        letters.append(digit - 1)
    return Block(tuple(letters))


def _digits(values: np.ndarray) -> np.ndarray:
    return (values.astype(np.int64)) + 1


class EmpiricalMeasure:
    """Observed frequencies of all blocks of length <= max_order in a prefix.

    ``freq`` of an unobserved block is 0.  Internally one sorted code array
    plus counts per length, so memory is proportional to the number of
    distinct observed blocks.
    """

    __slots__ = ("max_order", "window_count", "_tables")

    def __init__(self, max_order: int, window_count: int, tables):
        self.max_order = max_order
        self.window_count = window_count
        self._tables = tables  # {ell: (sorted codes int64, counts int64)}

    def denominator(self, length: int) -> int:
        return self.window_count - length + 1

    def count(self, block) -> int:
        letters = block.letters if isinstance(block, Block) else tuple(block)
        ell = len(letters)
        if not 1 <= ell <= self.max_order:
            raise ValueError(f"block length {ell} outside 1..{self.max_order}")
        return self._count_code(ell, block_code(letters))

    def _count_code(self, ell: int, code: int) -> int:
        codes, counts = self._tables[ell]
        i = np.searchsorted(codes, code)
        if i < codes.size and codes[i] == code:
            return int(counts[i])
        return 0

    def freq(self, block) -> float:
        letters = block.letters if isinstance(block, Block) else tuple(block)
        return self.count(letters) / self.denominator(len(letters))

    def items(self, length: int):
        """Yield (Block, frequency) for every observed block of the length."""
        codes, counts = self._tables[length]
        denom = self.denominator(length)
        for code, cnt in zip(codes.tolist(), counts.tolist()):
            yield code_to_block(code, length), cnt / denom


def block_frequencies(w: SignSeq, k: int) -> EmpiricalMeasure:
    """Overlapping-window frequencies of every block of length <= k.

    freq(B) = #{1 <= n <= N-ell+1 : w[n..n+ell-1] = B} / (N-ell+1).
    """
    if not 1 <= k <= MAX_FREQUENCY_ORDER:
        raise ValueError(f"k must be in 1..{MAX_FREQUENCY_ORDER}, got {k}")
    if len(w) < 10 * k:
        raise ValueError(f"prefix length {len(w)} < 10*k = {10 * k}")
    digits = _digits(w.values)
    N = digits.size
    codes = digits.copy()
    scale = 1
    tables = {}
    for ell in range(1, k + 1):
        size = N - ell + 1
        if ell > 1:
            scale *= 3
            codes[:size] += digits[ell - 1 : ell - 1 + size] * scale
        tables[ell] = _tally(codes[:size], scale * 3)
    return EmpiricalMeasure(max_order=k, window_count=N, tables=tables)


def _tally(codes: np.ndarray, code_range: int):
    if code_range <= _BINCOUNT_CODE_LIMIT:
        bins = np.bincount(codes, minlength=code_range)
        nz = np.flatnonzero(bins)
        return nz.astype(np.int64), bins[nz].astype(np.int64)
    uniq, counts = np.unique(codes, return_counts=True)
    return uniq, counts.astype(np.int64)


@dataclass(frozen=True)
class ComplexityProfile:
    """Distinct-window counts p_n for n = 1..n_max on a fixed prefix."""

    counts: np.ndarray  # counts[i] = p_{i+1}
    prefix_length: int

    @property
    def n_max(self) -> int:
        return int(self.counts.size)

    def p(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n = {n} outside 1..{self.n_max}")
        return int(self.counts[n - 1])

    @property
    def entropy_slope(self) -> np.ndarray:
        n = np.arange(1, self.n_max + 1, dtype=np.float64)
        return np.log2(self.counts.astype(np.float64)) / n


MAX_COMPLEXITY_ORDER = 512


def complexity_profile(w: SignSeq, n_max: int) -> ComplexityProfile:
    """Exact distinct-window counts for n = 1..n_max.

    Windows of successive lengths are renumbered by group refinement
    (rank of the length-n window combined with the next letter), so each
    step is two linear passes and there is no length cap from code packing.
    """
    if not 1 <= n_max <= MAX_COMPLEXITY_ORDER:
        raise ValueError(f"n_max must be in 1..{MAX_COMPLEXITY_ORDER}, got {n_max}")
    values = w.values
    N = values.size
    if n_max > N:
        raise ValueError(f"n_max {n_max} exceeds prefix length {N}")
    digits = (values + 1).astype(np.int64)
    counts = np.empty(n_max, dtype=np.int64)
    key = digits
    p = 0
    ranks = None
    for n in range(1, n_max + 1):
        if n > 1:
            size = N - n + 1
            key = ranks[:size] * 3 + digits[n - 1 : n - 1 + size]
        bins = np.bincount(key, minlength=3 * max(p, 1))
        lut = np.cumsum(bins > 0) - 1
        p = int(lut[-1]) + 1
        ranks = lut[key]
        counts[n - 1] = p
    return ComplexityProfile(counts=counts, prefix_length=N)


@dataclass(frozen=True)
class EntropyEstimate:
    """Finite-scale entropy estimate: a median slope, not the true limit."""

    value: float
    uncertainty: float
    n_lo: int
    n_hi: int


def entropy_estimate(profile: ComplexityProfile, n_lo: int, n_hi: int) -> EntropyEstimate:
    """Median of log2(p_n)/n over n in [n_lo, n_hi]; the reported
    uncertainty is the max-min spread of the slopes over the window."""
    if not 1 <= n_lo < n_hi <= profile.n_max:
        raise ValueError(f"need 1 <= n_lo < n_hi <= {profile.n_max}, got [{n_lo}, {n_hi}]")
    slopes = profile.entropy_slope[n_lo - 1 : n_hi]
    return EntropyEstimate(
        value=float(np.median(slopes)),
        uncertainty=float(slopes.max() - slopes.min()),
        n_lo=n_lo,
        n_hi=n_hi,
    )


@dataclass(frozen=True)
class SignExtensionReport:
    """Result of the randomized-sign extension audit."""

    passed: bool
    max_violation: float
    witness: Block | None
    violations: tuple[tuple[Block, float], ...]
    k: int
    tol: float
    audited_blocks: int

    def violation_lengths(self) -> tuple[int, ...]:
        return tuple(sorted({len(b) for b, _ in self.violations}))


MAX_SIGN_TEST_ORDER = 16
AUDIT_FACTOR = 2.0


def sign_extension_test(
    z: SignSeq, k: int, tol: float, audit_factor: float = AUDIT_FACTOR
) -> SignExtensionReport:
    """Check whether z distributes signs independently over the support of
    its squared word: for every block B of length <= k whose squared block
    has frequency above audit_factor*tol in z^2, the frequency of B in z
    must match 2**(-|supp B|) times that frequency within tol.

    Rare squared blocks (frequency <= audit_factor*tol) are skipped: they
    cannot be statistically resolved at finite scale.  Returns the worst
    deviation, its witness block, and all blocks whose deviation exceeds
    tol.
    """
    if not 1 <= k <= MAX_SIGN_TEST_ORDER:
        raise ValueError(f"k must be in 1..{MAX_SIGN_TEST_ORDER}, got {k}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    measure_z = block_frequencies(z, k)
    measure_z2 = block_frequencies(square_map(z), k)

    max_violation = 0.0
    witness: Block | None = None
    violations: list[tuple[Block, float]] = []
    audited = 0
    for ell in range(1, k + 1):
        for squared, freq2 in measure_z2.items(ell):
            if freq2 <= audit_factor * tol:
                continue
            audited += 1
            support = squared.support
            target = freq2 / 2 ** len(support)
            base = list(squared.letters)
            for signs in itertools.product((-1, 1), repeat=len(support)):
                for pos, sign in zip(support, signs):
                    base[pos] = sign
                block = Block(tuple(base))
                deviation = abs(measure_z.freq(block) - target)
                if deviation > max_violation:
                    max_violation = deviation
                    witness = block
                if deviation > tol:
                    violations.append((block, deviation))
    return SignExtensionReport(
        passed=max_violation <= tol,
        max_violation=max_violation,
        witness=witness,
        violations=tuple(violations),
        k=k,
        tol=tol,
        audited_blocks=audited,
    )


def positive_frequency_blocks(w: SignSeq, n: int, threshold: float) -> set[Block]:
    """Blocks of length n whose empirical frequency exceeds ``threshold``:
    a finite-scale stand-in for the positive-upper-frequency subshift."""
    if not 1 <= n <= MAX_FREQUENCY_ORDER:
        raise ValueError(f"n must be in 1..{MAX_FREQUENCY_ORDER}, got {n}")
    if len(w) < n:
        raise ValueError(f"prefix length {len(w)} < n = {n}")
    digits = _digits(w.values)
    size = digits.size - n + 1
    codes = np.zeros(size, dtype=np.int64)
    scale = 1
    for j in range(n):
        codes += digits[j : j + size] * scale
        scale *= 3
    uniq, counts = np.unique(codes, return_counts=True)
    keep = counts / size > threshold
    return {code_to_block(int(c), n) for c in uniq[keep]}
