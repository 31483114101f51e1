"""Arbitrary-precision number-theoretic primitives.

Primality testing (exact below a known Miller-Rabin threshold, probabilistic
with a fixed deterministic base battery above it), prime enumeration,
factorization helpers, multiplicative orders, primitive-root testing, CRT
solving, and exponent-space arithmetic for comparing huge powers without
materializing them.
"""

from __future__ import annotations

import itertools
from math import gcd

import mpmath

from .errors import DomainError

# Strong-probable-prime batteries with known exactness thresholds (each base
# tuple is exact for n below the paired bound).  The last row covers
# everything below MR_DETERMINISTIC_LIMIT, which comfortably exceeds 2**64.
_MR_LADDER = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (1_122_004_669_633, (2, 13, 23, 1662803)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3_317_044_064_679_887_385_961_981,
     (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)

MR_DETERMINISTIC_LIMIT = _MR_LADDER[-1][0]
DEFAULT_MR_ROUNDS = 64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97)

# Expanding cache of the first k primes, used for probabilistic MR bases.
_base_primes: list[int] = list(_SMALL_PRIMES)


def _split_two(n: int) -> tuple[int, int]:
    """Write n as d * 2**s with d odd."""
    s = (n & -n).bit_length() - 1
    return n >> s, s


def _is_spsp(n: int, a: int, d: int, s: int) -> bool:
    """Strong-probable-prime test of odd n > 2 to base a, with n-1 = d*2^s."""
    a %= n
    if a == 0:
        return True
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _probe_bases(rounds: int) -> list[int]:
    """First `rounds` primes; a fixed battery keeps runs reproducible."""
    while len(_base_primes) < rounds:
        _base_primes.append(next_prime(_base_primes[-1]))
    return _base_primes[:rounds]


def is_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Primality test.

    Exact for n < MR_DETERMINISTIC_LIMIT (fixed-base strong-probable-prime
    battery known exact in that range, which covers all of 2**64); above
    that, a Miller-Rabin battery over the first `rounds` prime bases, so the
    answer True is probabilistic while False is proven.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = _split_two(n - 1)
    if n < MR_DETERMINISTIC_LIMIT:
        for bound, bases in _MR_LADDER:
            if n < bound:
                return all(_is_spsp(n, a, d, s) for a in bases)
    return all(_is_spsp(n, a, d, s) for a in _probe_bases(rounds))


def primality_mode(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> str:
    """Label describing how is_prime decided n, for certificate metadata."""
    if n < MR_DETERMINISTIC_LIMIT:
        return "deterministic"
    return f"miller-rabin-{rounds}"


def next_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> int:
    """Smallest prime strictly greater than n."""
    if n < 2:
        return 2
    c = n + 1
    if c % 2 == 0:
        if c == 2:
            return 2
        c += 1
    while not is_prime(c, rounds):
        c += 2
    return c


def primes_upto(bound: int) -> list[int]:
    """All primes p <= bound, ascending (sieve of Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray((1,)) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(bound ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i in range(2, bound + 1) if sieve[i]]


def iter_primes():
    """Unbounded ascending prime generator."""
    p = 2
    while True:
        yield p
        p = next_prime(p)


_TRIAL_PRIMES = primes_upto(100_000)


def trial_factor(n: int, limit: int = 10_000) -> int | None:
    """Smallest prime factor f of n with f <= limit and f < n, or None."""
    if n < 4:
        return None
    for p in _TRIAL_PRIMES:
        if p > limit or p * p > n:
            break
        if n % p == 0:
            return p
    if limit > _TRIAL_PRIMES[-1]:
        d = _TRIAL_PRIMES[-1] + 2
        while d <= limit and d * d <= n:
            if n % d == 0:
                return d
            d += 2
    return None


def _pollard_rho(n: int) -> int:
    """Nontrivial factor of odd composite n (Brent's cycle variant).

    Parameters are swept deterministically so repeated runs factor
    identically.
    """
    if n % 2 == 0:
        return 2
    for c in itertools.count(1):
        y, r, q = 2, 1, 1
        g, ys, x = 1, y, y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}.

    Trial division by small primes first, Pollard rho for the remainder;
    fine for the desk-scale inputs the constructions produce.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        f = _pollard_rho(m)
        stack.append(f)
        stack.append(m // f)
    return factors


def composite_witness_factor(n: int, trial_limit: int = 10_000) -> int | None:
    """A nontrivial factor of composite n, if one is affordable to find.

    Exhaustive (trial division then Pollard rho) below 2**64; above that
    only trial division is attempted, so None does not certify primality.
    """
    if n < 4:
        return None
    f = trial_factor(n, trial_limit)
    if f is not None:
        return f
    if n < 2 ** 64 and not is_prime(n):
        return _pollard_rho(n) if n % 2 else 2
    return None


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus for naturals; modulus must be >= 1."""
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    if exponent < 0 or base < 0:
        raise DomainError("base and exponent must be non-negative")
    return pow(base, exponent, modulus)


def multiplicative_order(a: int, p: int) -> int:
    """Least k >= 1 with a**k == 1 (mod p), for prime p and p not dividing a.

    Computed by factoring p-1 and stripping prime factors while the power
    stays 1.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        raise DomainError(f"{p} divides {a}; order undefined")
    order = p - 1
    for q in factorize(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


def is_primitive_root(a: int, p: int) -> bool:
    """Whether a generates the full multiplicative group mod prime p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        return False
    return multiplicative_order(a, p) == p - 1


def primes_with_primitive_root(a: int, bound: int) -> list[int]:
    """All primes p <= bound that have a as a primitive root, ascending."""
    if a < 2:
        raise DomainError(f"base must be >= 2, got {a}")
    return [p for p in primes_upto(bound) if is_primitive_root(a, p)]


def crt_solve(constraints: list[tuple[int, int]]) -> tuple[int, int]:
    """Solve a system of congruences x = r_i (mod m_i) with pairwise coprime
    moduli.

    Returns (r, M) with M the product of the moduli and 0 <= r < M the
    unique solution; the empty system yields (0, 1).
    """
    r, big_m = 0, 1
    for residue, modulus in constraints:
        if modulus < 1:
            raise DomainError(f"modulus must be >= 1, got {modulus}")
        if not 0 <= residue < modulus:
            raise DomainError(f"residue {residue} out of range for modulus {modulus}")
        if gcd(big_m, modulus) != 1:
            raise DomainError(
                f"moduli not pairwise coprime: {modulus} shares a factor "
                f"with {big_m}"
            )
        shift = ((residue - r) * pow(big_m, -1, modulus)) % modulus
        r += big_m * shift
        big_m *= modulus
    return r, big_m


# ---------------------------------------------------------------------------
# Exponent-space arithmetic.  Power constructions keep elements as (base,
# exponent) pairs; comparisons against thresholds and residue computations
# must never materialize base**exponent.
# ---------------------------------------------------------------------------

def exact_power_of_two(n: int) -> int | None:
    """s if n == 2**s, else None."""
    s = n.bit_length() - 1
    return s if n == 1 << s else None


def ceil_log2(t: int) -> int:
    """Least e >= 0 with 2**e >= t, exact for any bigint t >= 1."""
    if t < 1:
        raise DomainError(f"ceil_log2 needs t >= 1, got {t}")
    b = t.bit_length()
    return b - 1 if t == 1 << (b - 1) else b


def least_exponent_at_least(base: int, t: int) -> int:
    """Least k >= 0 with base**k >= t.

    Exact for power-of-two bases via bit arithmetic; otherwise a
    high-precision logarithm estimate verified by one exact power
    comparison near the boundary.
    """
    if base < 2:
        raise DomainError(f"base must be >= 2, got {base}")
    if t <= 1:
        return 0
    s = exact_power_of_two(base)
    if s is not None:
        e = ceil_log2(t)
        return -(-e // s)
    bits = t.bit_length()
    with mpmath.workprec(bits.bit_length() + 80):
        approx = mpmath.log(mpmath.mpf(t)) / mpmath.log(base)
        k = int(mpmath.floor(approx))
    # adjust exactly around the estimate (off by at most 1 either way)
    while k > 0 and base ** (k - 1) >= t:
        k -= 1
    while base ** k < t:
        k += 1
    return k


def power_at_least(base: int, exponent: int, t: int) -> bool:
    """Whether base**exponent >= t, decided without materializing the power."""
    return exponent >= least_exponent_at_least(base, t)


def power_exceeds_value(base: int, exponent: int, v: int) -> bool:
    """Whether base**exponent > v."""
    return power_at_least(base, exponent, v + 1)


def compare_powers(base_a: int, exp_a: int, base_b: int, exp_b: int) -> int:
    """Sign of base_a**exp_a - base_b**exp_b, in exponent space.

    Handles multiplicatively dependent bases exactly; independent bases are
    separated by escalating-precision logarithms with a materialized
    comparison as the last resort.
    """
    if base_a == base_b:
        return (exp_a > exp_b) - (exp_a < exp_b)
    sa, sb = exact_power_of_two(base_a), exact_power_of_two(base_b)
    if sa is not None and sb is not None:
        la, lb = sa * exp_a, sb * exp_b
        return (la > lb) - (la < lb)
    for prec in (120, 400, 2000):
        with mpmath.workprec(prec):
            diff = exp_a * mpmath.log(base_a) - exp_b * mpmath.log(base_b)
            if abs(diff) > mpmath.mpf(2) ** (-prec // 2):
                return 1 if diff > 0 else -1
    va, vb = base_a ** exp_a, base_b ** exp_b
    return (va > vb) - (va < vb)


def power_residue(base: int, exponent: int, p: int) -> int:
    """base**exponent mod prime p with k >= 1, reducing the exponent via
    Fermat's little theorem so huge exponents stay cheap."""
    if exponent < 1:
        raise DomainError("power elements use exponents >= 1")
    if base % p == 0:
        return 0
    return pow(base % p, exponent % (p - 1) if p > 2 else 0, p)


def power_bit_length(base: int, exponent: int) -> int:
    """Bit length of base**exponent without materializing it."""
    if exponent == 0:
        return 1
    s = exact_power_of_two(base)
    if s is not None:
        return s * exponent + 1
    for prec in (120, 400, 2000):
        with mpmath.workprec(prec):
            v = exponent * mpmath.log(base, 2)
            f = v - mpmath.floor(v)
            if mpmath.mpf(2) ** (-prec // 2) < f < 1 - mpmath.mpf(2) ** (-prec // 2):
                return int(mpmath.floor(v)) + 1
    return (base ** exponent).bit_length()
