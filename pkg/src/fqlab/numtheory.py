"""Divisor-class sieves and natural-density bookkeeping.

Two families of integer sets drive everything here:

* the *anchored* set for a prime p: integers n such that p divides n
  exactly once and the only divisor of n congruent to 1 mod p is 1;
* the union of those sets over all *admissible* primes for a modulus a,
  where p is admissible when gcd(a, p) = 1 and gcd(a, p - 1) <= 2.

Membership tests work by divisor enumeration; the sieves mark whole
ranges at once and must agree with the pointwise tests bit for bit.
Counts are censused in fixed-size segments so large limits never need a
full membership array in memory, and the segment boundaries cannot
change any count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .budgets import MAX_SIEVE_ARRAY, SEGMENT_SIZE
from .errors import ResourceBudgetError

DEFAULT_FACTOR_BOUND = 2**63 - 1

# Prime cache for trial division; grown on demand, never shrunk.
_PRIME_CACHE: np.ndarray = np.array([2, 3, 5, 7, 11, 13], dtype=np.int64)
_PRIME_CACHE_BOUND = 13
_PRIME_CACHE_MAX = 10**8


@dataclass(frozen=True)
class FactoredInteger:
    """An integer with its full prime factorisation attached.

    ``factors`` holds (prime, exponent) pairs with strictly increasing
    primes and positive exponents; their product must equal ``value``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError(f"value must be positive, got {self.value}")
        prod = 1
        prev = 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"exponent must be >= 1, got {e}")
            if p <= prev:
                raise ValueError("primes must be strictly increasing")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")


@dataclass(frozen=True)
class PrimeList:
    """Ascending primes together with the bound they were sieved to."""

    bound: int
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(int(p) for p in self.primes)


@dataclass(frozen=True)
class Checkpoint:
    limit: int
    count: int
    ratio: str


@dataclass(frozen=True)
class DensitySeries:
    """Cumulative membership counts of a sieved set at increasing limits."""

    set_name: str
    checkpoints: tuple[Checkpoint, ...]

    def __post_init__(self) -> None:
        prev_limit = 0
        prev_count = -1
        for cp in self.checkpoints:
            if cp.limit <= prev_limit:
                raise ValueError("checkpoint limits must be strictly increasing")
            if cp.count < max(prev_count, 0) or cp.count > cp.limit:
                raise ValueError("checkpoint counts must be nondecreasing and <= limit")
            prev_limit, prev_count = cp.limit, cp.count

    def counts(self) -> list[int]:
        return [cp.count for cp in self.checkpoints]

    def ratios(self) -> list[str]:
        return [cp.ratio for cp in self.checkpoints]


def ratio_string(count: int, limit: int) -> str:
    """Exact decimal string for count/limit with six fractional digits.

    Rounds half away from zero using integer arithmetic only, so the
    output is identical on every platform.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    if count < 0:
        raise ValueError("count must be nonnegative")
    scaled, rem = divmod(count * 10**6, limit)
    if 2 * rem >= limit:
        scaled += 1
    return f"{scaled // 10**6}.{scaled % 10**6:06d}"


def _extend_prime_cache(bound: int) -> None:
    global _PRIME_CACHE, _PRIME_CACHE_BOUND
    if bound <= _PRIME_CACHE_BOUND:
        return
    if bound > _PRIME_CACHE_MAX:
        raise ResourceBudgetError(
            f"prime cache bound {bound} exceeds the {_PRIME_CACHE_MAX} budget"
        )
    _PRIME_CACHE = primes_up_to(bound).primes
    _PRIME_CACHE_BOUND = bound


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division over sieved primes."""
    if n < 2:
        return False
    root = math.isqrt(n)
    if root > _PRIME_CACHE_BOUND:
        _extend_prime_cache(max(root, 2 * _PRIME_CACHE_BOUND))
    for p in _PRIME_CACHE:
        p = int(p)
        if p > root:
            break
        if n % p == 0:
            return n == p
    return True


def primes_up_to(limit: int) -> PrimeList:
    """All primes <= limit, ascending."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit + 1 > MAX_SIEVE_ARRAY * 8:
        raise ResourceBudgetError(f"prime sieve to {limit} exceeds the memory budget")
    if limit < 2:
        return PrimeList(limit, np.empty(0, dtype=np.int64))
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return PrimeList(limit, np.flatnonzero(mask).astype(np.int64))


def factor(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> FactoredInteger:
    """Prime factorisation by trial division; 1 factors to the empty product."""
    if n < 1:
        raise ValueError(f"cannot factor {n}: must be >= 1")
    if n > bound:
        raise ValueError(f"{n} exceeds the configured bound {bound}")
    m = n
    out: list[tuple[int, int]] = []
    idx = 0
    while True:
        if idx >= _PRIME_CACHE.size:
            root = math.isqrt(m)
            if root <= _PRIME_CACHE_BOUND:
                break
            _extend_prime_cache(max(root, 2 * _PRIME_CACHE_BOUND))
        p = int(_PRIME_CACHE[idx])
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        idx += 1
    if m > 1:
        out.append((m, 1))
    return FactoredInteger(n, tuple(out))


def divisors(n: int | FactoredInteger) -> list[int]:
    """All positive divisors, ascending."""
    fi = n if isinstance(n, FactoredInteger) else factor(n)
    out = [1]
    for p, e in fi.factors:
        powers = [p**k for k in range(1, e + 1)]
        out += [d * q for d in out for q in powers]
    out.sort()
    return out


def np_contains(n: int, p: int) -> bool:
    """Does p divide n exactly once with no divisor of n above 1 being 1 mod p?

    Divisors of n congruent to 1 mod p are coprime to p, hence exactly the
    divisors of n/p in the same class; scanning those suffices.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if n % p != 0:
        return False
    m = n // p
    if m % p == 0:
        return False
    for d in divisors(m):
        if d != 1 and d % p == 1:
            return False
    return True


def pp_contains(p: int, a: int) -> bool:
    """Is the prime p admissible for modulus a?

    Requires gcd(a, p) = 1 and gcd(a, p - 1) <= 2.  The caller supplies a
    prime; compositeness is not re-checked here.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    return math.gcd(a, p) == 1 and math.gcd(a, p - 1) <= 2


def sp_contains(n: int, a: int) -> bool:
    """Does n lie in the anchored set of some admissible prime for a?

    Only primes dividing n to exact multiplicity 1 can anchor n, so only
    those are tested.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    for p, e in factor(n).factors:
        if e == 1 and pp_contains(p, a) and np_contains(n, p):
            return True
    return False


def _mark_np_window(good: np.ndarray, p: int, mlo: int, mhi: int) -> None:
    """Clear, in the cofactor window m in [mlo, mhi), every m that fails.

    A surviving m means p*m belongs to the anchored set of p.  Cleared are
    multiples of p, every m > 1 with m = 1 mod p, and every multiple k*d
    (k >= 2) of a divisor d > 1 with d = 1 mod p.  Divisors are split at
    the window width: small d are walked directly, large d are reached by
    walking their cofactors k, so the work stays proportional to the
    number of cleared cells.
    """
    first = ((mlo + p - 1) // p) * p
    if first < mhi:
        good[first - mlo :: p] = False
    first = mlo + ((1 - mlo) % p)
    if first == 1:
        first += p
    if first < mhi:
        good[first - mlo :: p] = False
    width = mhi - mlo
    d_small_max = min((mhi - 1) // 2, width)
    for d in range(p + 1, d_small_max + 1, p):
        start = max(2 * d, ((mlo + d - 1) // d) * d)
        if start < mhi:
            good[start - mlo :: d] = False
    if width + 1 <= (mhi - 1) // 2:
        for k in range(2, (mhi - 1) // (width + 1) + 1):
            dmin = max(width + 1, p + 1, (mlo + k - 1) // k)
            dmin += (1 - dmin) % p
            start = k * dmin
            if start < mhi:
                good[start - mlo :: k * p] = False


def _or_np_segment(out: np.ndarray, p: int, lo: int, hi: int) -> None:
    """OR membership bits of p's anchored set for n in [lo, hi) into out."""
    if p * p >= hi:
        # Every multiple p*m below hi has cofactor m < p: no multiple of
        # p*p, and no divisor in the class of 1 mod p other than 1.
        start = max(p, ((lo + p - 1) // p) * p)
        if start < hi:
            out[start - lo :: p] = True
        return
    mlo = max(1, (lo + p - 1) // p)
    mhi = (hi + p - 1) // p
    if mlo >= mhi:
        return
    good = np.ones(mhi - mlo, dtype=bool)
    _mark_np_window(good, p, mlo, mhi)
    out[mlo * p - lo :: p] |= good


@dataclass(frozen=True)
class SieveSet:
    """A named integer set the segmented sieve knows how to enumerate.

    ``kind`` is one of ``all`` (every positive integer), ``np`` (anchored
    set of the prime ``param``) or ``sp`` (union over admissible primes
    for modulus ``param``).
    """

    kind: str
    param: int = 0
    _primes: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind == "all":
            return
        if self.kind == "np":
            if not is_prime(self.param):
                raise ValueError(f"p must be prime, got {self.param}")
        elif self.kind == "sp":
            if self.param < 1:
                raise ValueError(f"a must be >= 1, got {self.param}")
        else:
            raise ValueError(f"unknown set name {self.kind!r}")

    @property
    def name(self) -> str:
        return "all" if self.kind == "all" else f"{self.kind}:{self.param}"

    def contains(self, n: int) -> bool:
        if self.kind == "all":
            return n >= 1
        if self.kind == "np":
            return np_contains(n, self.param)
        return sp_contains(n, self.param)

    def admissible_primes(self, limit: int) -> np.ndarray:
        """Ascending admissible primes up to limit (sp sets only)."""
        ps = primes_up_to(limit).primes
        if ps.size == 0:
            return ps
        a = self.param
        keep = (np.gcd(ps, a) == 1) & (np.gcd(ps - 1, a) <= 2)
        return ps[keep]

    def segment_bits(self, lo: int, hi: int, primes: np.ndarray | None = None) -> np.ndarray:
        """Membership bits for n in [lo, hi); lo >= 1."""
        if lo < 1 or hi <= lo:
            raise ValueError("need 1 <= lo < hi")
        out = np.zeros(hi - lo, dtype=bool)
        if self.kind == "all":
            out[:] = True
            return out
        if self.kind == "np":
            _or_np_segment(out, self.param, lo, hi)
            return out
        if primes is None:
            primes = self.admissible_primes(hi - 1)
        for p in primes:
            p = int(p)
            if p >= hi:
                break
            _or_np_segment(out, p, lo, hi)
        return out


def parse_set_name(name: str) -> SieveSet:
    """Parse ``all``, ``np:<p>`` or ``sp:<a>`` into a SieveSet."""
    if name == "all":
        return SieveSet("all")
    kind, sep, param = name.partition(":")
    if sep != ":" or kind not in ("np", "sp") or not param.isdigit():
        raise ValueError(f"unknown set name {name!r}")
    return SieveSet(kind, int(param))


def sieve_np(p: int, limit: int, segment_size: int = SEGMENT_SIZE) -> np.ndarray:
    """Membership bit array (index n, 1 <= n <= limit) of p's anchored set."""
    return _sieve_set_bits(SieveSet("np", p), limit, segment_size)


def sieve_sp(a: int, limit: int, segment_size: int = SEGMENT_SIZE) -> np.ndarray:
    """Membership bit array (index n, 1 <= n <= limit) of the union set for a."""
    return _sieve_set_bits(SieveSet("sp", a), limit, segment_size)


def _sieve_set_bits(ss: SieveSet, limit: int, segment_size: int) -> np.ndarray:
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit + 1 > MAX_SIEVE_ARRAY:
        raise ResourceBudgetError(
            f"membership array to {limit} exceeds the memory budget; "
            "use density_series for counts at this scale"
        )
    if segment_size < 2:
        raise ValueError("segment_size must be >= 2")
    primes = ss.admissible_primes(limit) if ss.kind == "sp" else None
    bits = np.zeros(limit + 1, dtype=bool)
    for lo in range(1, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        bits[lo:hi] = ss.segment_bits(lo, hi, primes)
    return bits


def density_series(
    sieve_set: SieveSet | str,
    checkpoints: list[int],
    segment_size: int = SEGMENT_SIZE,
    threads: int = 1,
) -> DensitySeries:
    """Count set members at each checkpoint limit.

    Segments are censused independently and merged in ascending order, so
    the result is identical for any segment size or thread count.
    """
    ss = parse_set_name(sieve_set) if isinstance(sieve_set, str) else sieve_set
    if not checkpoints:
        raise ValueError("need at least one checkpoint")
    cps = list(checkpoints)
    if any(c < 1 for c in cps) or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be ascending positive integers")
    if segment_size < 2:
        raise ValueError("segment_size must be >= 2")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    limit = cps[-1]
    primes = ss.admissible_primes(limit) if ss.kind == "sp" else None

    segments = [(lo, min(lo + segment_size, limit + 1)) for lo in range(1, limit + 1, segment_size)]

    def census(seg: tuple[int, int]) -> tuple[int, list[tuple[int, int]]]:
        lo, hi = seg
        bits = ss.segment_bits(lo, hi, primes)
        inner = [(c, int(np.count_nonzero(bits[: c - lo + 1]))) for c in cps if lo <= c < hi]
        return int(np.count_nonzero(bits)), inner

    if threads == 1:
        results = map(census, segments)
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(census, segments)

    running = 0
    at: dict[int, int] = {}
    for total, inner in results:
        for c, prefix in inner:
            at[c] = running + prefix
        running += total
    if threads > 1:
        pool.shutdown()

    out = tuple(Checkpoint(c, at[c], ratio_string(at[c], c)) for c in cps)
    return DensitySeries(ss.name, out)


def witness_primes(
    predicate,
    a: int,
    prime_limit: int,
    search_limit: int,
) -> list[tuple[int, int]]:
    """Admissible primes whose anchored set meets the predicate below a bound.

    Returns (p, n) pairs where n <= search_limit is the smallest witness
    in p's anchored set satisfying the predicate; primes without a
    witness are omitted.
    """
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    if prime_limit < 2 or search_limit < 1:
        return []
    out: list[tuple[int, int]] = []
    for p in primes_up_to(prime_limit):
        if not pp_contains(p, a):
            continue
        for n in range(p, search_limit + 1, p):
            if predicate(n) and np_contains(n, p):
                out.append((p, n))
                break
    return out
