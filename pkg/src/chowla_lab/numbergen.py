"""Arithmetic sequence generators via linear sieves.

Provides:
- mobius_prefix(N):    mu(n) for n = 1..N  (mu(n) = (-1)^k for squarefree n
                       with k distinct prime factors, else 0)
- liouville_prefix(N): lambda(n) = (-1)^Omega(n), Omega counting multiplicity
- mu_b_prefix(B, N):   the generalized Mobius function for a set
                       B = {b_k = a_k**2} with pairwise coprime roots a_k:
                       0 when some b_k | n, else (-1)^#{k : a_k | n}
- is_admissible / admissible_block_count: the residue-class admissibility
  test for {0,1} blocks and exact admissible-block counting

All sieves are plain numpy array passes; every multiple/flip step is exact
integer arithmetic, so outputs are exact (no probabilistic factoring).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seqcore import SignSeq


def _primes_upto(limit: int) -> np.ndarray:
    """Primes <= limit by Eratosthenes (bool sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def mobius_prefix(N: int) -> SignSeq:
    """The Mobius function mu(1..N).

    Sign flips once per small prime divisor while a parallel product array
    tracks the small squarefree part; entries with a leftover prime factor
    above sqrt(N) (necessarily single) get one final flip.  O(N log log N).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    mu = np.ones(N + 1, dtype=np.int8)
    prod = np.ones(N + 1, dtype=np.int64)
    for p in _primes_upto(math.isqrt(N)):
        p = int(p)
        mu[p::p] *= -1
        prod[p::p] *= p
        mu[p * p :: p * p] = 0
    leftover = prod != np.arange(N + 1, dtype=np.int64)
    leftover[0] = leftover[1] = False
    np.negative(mu, out=mu, where=leftover)
    return SignSeq._wrap(mu[1:])


def liouville_prefix(N: int) -> SignSeq:
    """The Liouville function lambda(1..N), values in {-1, 1}.

    Flips once per prime-power divisor q = p**k (q <= N, p <= sqrt(N)),
    which counts prime factors with multiplicity; a remainder array detects
    the at-most-one prime factor above sqrt(N).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    lam = np.ones(N + 1, dtype=np.int8)
    rem = np.arange(N + 1, dtype=np.int64)
    for p in _primes_upto(math.isqrt(N)):
        p = int(p)
        q = p
        while q <= N:
            lam[q::q] *= -1
            rem[q::q] //= p
            q *= p
    lam[rem > 1] *= -1
    return SignSeq._wrap(lam[1:])


@dataclass(frozen=True)
class BSet:
    """A set of perfect squares b_k = a_k**2 with pairwise coprime roots.

    ``b_values`` and ``a_values`` are sorted and aligned.  Construct with
    :meth:`from_squares` for an explicit finite set (coprimality checked) or
    :meth:`prime_squares` for {p**2 : p prime <= limit} (coprime by
    construction; for an exact mu_b prefix of length N take limit >= N, so
    that every root that can divide an index is materialized).
    """

    b_values: tuple[int, ...]
    a_values: tuple[int, ...]

    @classmethod
    def from_squares(cls, b_values) -> "BSet":
        bs = sorted(int(b) for b in b_values)
        if not bs:
            raise ValueError("BSet must be nonempty")
        roots = []
        for b in bs:
            if b < 2:
                raise ValueError(f"b values must be >= 2, got {b}")
            a = math.isqrt(b)
            if a * a != b:
                raise ValueError(f"{b} is not a perfect square")
            roots.append(a)
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if math.gcd(roots[i], roots[j]) != 1:
                    raise ValueError(
                        f"roots {roots[i]} and {roots[j]} are not coprime"
                    )
        return cls(tuple(bs), tuple(roots))

    @classmethod
    def prime_squares(cls, limit: int) -> "BSet":
        primes = [int(p) for p in _primes_upto(limit)]
        if not primes:
            raise ValueError(f"no primes <= {limit}")
        return cls(tuple(p * p for p in primes), tuple(primes))

    def __len__(self) -> int:
        return len(self.b_values)


def mu_b_prefix(bset: BSet, N: int) -> SignSeq:
    """Generalized Mobius prefix for ``bset``: zero on multiples of any b_k,
    otherwise (-1) to the number of roots a_k dividing n."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out = np.ones(N + 1, dtype=np.int8)
    for a in bset.a_values:
        if a <= N:
            out[a::a] *= -1
    for b in bset.b_values:
        if b <= N:
            out[b::b] = 0
    return SignSeq._wrap(out[1:])


def is_admissible(block, bset: BSet) -> bool:
    """True iff the support of a {0,1} block misses a residue class mod b
    for every b in ``bset`` with b <= len(block).

    Moduli b > len(block) are vacuously satisfied: at most len(block) < b
    classes can occur.  Accepts a Block, SignSeq, or array of 0/1 letters.
    """
    letters = _as01(block)
    support = np.flatnonzero(letters)
    n = letters.size
    for b in bset.b_values:
        if b > n:
            break
        if np.unique(support % b).size >= b:
            return False
    return True


def _as01(block) -> np.ndarray:
    letters = getattr(block, "as_array", None)
    if letters is not None:
        arr = block.as_array()
    elif isinstance(block, SignSeq):
        arr = block.values
    else:
        arr = np.asarray(block, dtype=np.int8)
    if ((arr != 0) & (arr != 1)).any():
        raise ValueError("admissibility is defined for blocks over {0,1}")
    return arr


ADMISSIBLE_COUNT_LIMIT = 30


def admissible_block_count(n: int, bset: BSet) -> int:
    """Exact number of admissible {0,1} blocks of length n.

    Depth-first extension position by position, pruning any branch whose
    support already occupies all residue classes for some modulus, with
    memoization on (position, occupied-class state).  n is capped at
    ADMISSIBLE_COUNT_LIMIT to bound the search.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > ADMISSIBLE_COUNT_LIMIT:
        raise ValueError(f"n = {n} exceeds exhaustive-search limit {ADMISSIBLE_COUNT_LIMIT}")
    moduli = [b for b in bset.b_values if b <= n]
    if not moduli:
        return 2**n
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def count(pos: int, states: tuple[int, ...]) -> int:
        if pos == n:
            return 1
        key = (pos, states)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = count(pos + 1, states)  # letter 0 never violates
        new_states = []
        ok = True
        for b, occupied in zip(moduli, states):
            occupied |= 1 << (pos % b)
            if occupied == (1 << b) - 1:
                ok = False
                break
            new_states.append(occupied)
        if ok:
            total += count(pos + 1, tuple(new_states))
        memo[key] = total
        return total

    return count(0, tuple(0 for _ in moduli))
