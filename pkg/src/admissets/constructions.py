"""The four greedy generators of sparse admissible sets.

Each run is a sequential state machine: every choice depends on all prior
choices, and every tie-break is pinned down so identical configs produce
identical runs.

powers-primroot: powers of a base a over primes that have a as a primitive
root, two (or more) exponents per nonzero residue class, classes visited by
exponent residue j ascending.

direct-crt: explicit integers; a composite (or 1) seed, then per prime
p = next_prime(max element) two elements in each nonzero class mod p,
always dodging reserved residue classes so admissibility survives.

powers-subgroup: powers of any base c >= 2 over primes not dividing c,
covering exactly the classes the subgroup generated by c attains.

offset-blocked: explicit integers d_n chosen so d_n + n is not prime, one
per offset n, covering the finite negative range first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import arith
from .budget import SparsityBudget
from .errors import ConstructionError, DomainError
from .setcore import Element, GrowingSet, ReservationTable

CONSTRUCTIONS = ("powers-primroot", "direct-crt", "powers-subgroup",
                 "offset-blocked")
_POWER_CONSTRUCTIONS = ("powers-primroot", "powers-subgroup")

DEFAULT_SCAN_CEILING = 10 ** 6
DEFAULT_PRIMROOT_SEARCH_BOUND = 10 ** 6
DEFAULT_PRIMALITY_BIT_LIMIT = 4096


@dataclass(frozen=True)
class ConstructionConfig:
    construction: str
    budget: SparsityBudget
    base: int = 2
    prime_quota: int = 1
    prime_list: tuple[int, ...] | None = None
    copies: int = 2
    offset_quota: int = 0
    scan_ceiling: int = DEFAULT_SCAN_CEILING
    max_elements: int | None = None
    primroot_search_bound: int = DEFAULT_PRIMROOT_SEARCH_BOUND
    primality_bit_limit: int = DEFAULT_PRIMALITY_BIT_LIMIT
    mr_rounds: int = arith.DEFAULT_MR_ROUNDS

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise DomainError(f"unknown construction {self.construction!r}")
        if self.copies < 2:
            raise DomainError("copies must be >= 2 (the blocking argument "
                              "needs two members per class)")
        if self.construction in _POWER_CONSTRUCTIONS and self.base < 2:
            raise DomainError("power constructions need base >= 2")
        if self.prime_quota < 0 or self.offset_quota < 0:
            raise DomainError("quotas must be >= 0")
        if self.scan_ceiling < 1:
            raise DomainError("scan ceiling must be >= 1")
        if self.max_elements is not None and self.max_elements < 0:
            raise DomainError("max_elements must be >= 0")
        if self.prime_list is not None:
            if self.construction not in _POWER_CONSTRUCTIONS:
                raise DomainError("explicit prime lists apply only to the "
                                  "power constructions")
            if any(a >= b for a, b in zip(self.prime_list, self.prime_list[1:])):
                raise DomainError("prime list must be strictly increasing")


@dataclass
class ConstructionRun:
    config: ConstructionConfig
    gset: GrowingSet
    processed_primes: list[int] = field(default_factory=list)
    reservations: ReservationTable | None = None
    blocked_offsets: list[tuple[int, int]] = field(default_factory=list)
    partial_prime: int | None = None

    @property
    def construction_tag(self) -> str:
        return self.gset.construction_tag

    def primality_mode(self) -> dict:
        return primality_mode_descriptor(self.config.mr_rounds)

    def summary(self) -> dict:
        last = self.gset.max_element()
        return {
            "construction": self.construction_tag,
            "budget": self.config.budget.literal,
            "element_count": len(self.gset),
            "processed_primes": [str(p) for p in self.processed_primes],
            "partial_prime": str(self.partial_prime)
            if self.partial_prime is not None else None,
            "max_element_bits": last.bit_length() if last else 0,
            "blocked_offset_count": len(self.blocked_offsets),
        }


def primality_mode_descriptor(rounds: int) -> dict:
    return {
        "deterministic_limit": str(arith.MR_DETERMINISTIC_LIMIT),
        "rounds_above_limit": rounds,
    }


def run_construction(config: ConstructionConfig) -> ConstructionRun:
    """Dispatch a config to its generator and sanity-check the result."""
    builders = {
        "powers-primroot": construct_powers_primroot,
        "direct-crt": construct_direct_crt,
        "powers-subgroup": construct_powers_subgroup,
        "offset-blocked": construct_offset_blocked,
    }
    run = builders[config.construction](config)
    if run.reservations is not None:
        run.reservations.validate(run.gset)
    return run


# ---------------------------------------------------------------------------
# Power constructions (1 and 3)
# ---------------------------------------------------------------------------

def _primroot_prime_source(config: ConstructionConfig):
    a = config.base
    if config.prime_list is not None:
        for p in config.prime_list:
            if not arith.is_prime(p):
                raise DomainError(f"{p} in prime list is not prime")
            if not arith.is_primitive_root(a, p):
                raise ConstructionError(
                    f"{a} is not a primitive root mod {p}")
            yield p
        return
    found = 0
    if config.prime_quota == 0:
        return
    for p in arith.iter_primes():
        if p > config.primroot_search_bound:
            raise ConstructionError(
                f"found only {found} primes with {a} as a primitive root "
                f"below the search ceiling {config.primroot_search_bound}, "
                f"needed {config.prime_quota}"
            )
        if arith.is_primitive_root(a, p):
            yield p
            found += 1
            if found >= config.prime_quota:
                return


def _subgroup_prime_source(config: ConstructionConfig):
    c = config.base
    if config.prime_list is not None:
        for p in config.prime_list:
            if not arith.is_prime(p):
                raise DomainError(f"{p} in prime list is not prime")
            if c % p == 0:
                raise ConstructionError(f"{p} divides the base {c}")
            yield p
        return
    found = 0
    if config.prime_quota == 0:
        return
    for p in arith.iter_primes():
        if c % p != 0:
            yield p
            found += 1
            if found >= config.prime_quota:
                return


def _build_power_run(config: ConstructionConfig, tag: str, prime_source,
                     order_of) -> ConstructionRun:
    a = config.base
    params = {
        "base": a,
        "copies": config.copies,
        "prime_quota": config.prime_quota,
        "prime_list": list(config.prime_list) if config.prime_list else None,
        "max_elements": config.max_elements,
        "mr_rounds": config.mr_rounds,
        "exponent_convention": "k>=1",
        "processed_primes": [],
        "partial_prime": None,
    }
    gset = GrowingSet(tag, params, config.budget)
    processed: list[int] = []
    partial: int | None = None
    k_prev = 0

    def room() -> bool:
        return config.max_elements is None or len(gset) < config.max_elements

    def fill_prime(order: int) -> bool:
        nonlocal k_prev
        for j in range(order):
            for _copy in range(config.copies):
                if not room():
                    return False
                m = len(gset) + 1
                lo = max(k_prev + 1, config.budget.least_exponent(a, m), 1)
                k = lo + ((j - lo) % order)
                gset.append(Element(m, {"kind": "power"}, base=a, exponent=k))
                k_prev = k
        return True

    for p in prime_source:
        if not room():
            break
        if fill_prime(order_of(p)):
            processed.append(p)
        else:
            partial = p
            break

    params["processed_primes"] = list(processed)
    params["partial_prime"] = partial
    return ConstructionRun(config=config, gset=gset,
                           processed_primes=processed, partial_prime=partial)


def construct_powers_primroot(config: ConstructionConfig) -> ConstructionRun:
    """Powers of a over primes with a as primitive root; classes mod p are
    a^j for j = 0..p-2, each filled with `copies` exponents k = j (mod p-1)."""
    return _build_power_run(config, "powers-primroot",
                            _primroot_prime_source(config),
                            lambda p: p - 1)


def construct_powers_subgroup(config: ConstructionConfig) -> ConstructionRun:
    """Powers of c over primes not dividing c; only the classes attained by
    the subgroup generated by c exist, indexed by j = 0..ord_p(c)-1."""
    return _build_power_run(config, "powers-subgroup",
                            _subgroup_prime_source(config),
                            lambda p: arith.multiplicative_order(config.base, p))


# ---------------------------------------------------------------------------
# Explicit-value constructions (2 and 4)
# ---------------------------------------------------------------------------

def _not_prime_for_blocking(t: int, config: ConstructionConfig) -> bool:
    """Whether t is acceptable as a non-prime target.

    Exact below the primality bit limit; above it only candidates with a
    small trial-division factor qualify (proven composite), so no megabit
    Miller-Rabin runs are ever attempted.
    """
    if t <= 1:
        return True
    if t.bit_length() <= config.primality_bit_limit:
        return not arith.is_prime(t, config.mr_rounds)
    return arith.trial_factor(t) is not None


def _scan_seed(config: ConstructionConfig) -> int:
    """Smallest non-prime >= threshold(1); 1 qualifies when T(1) <= 1."""
    x = config.budget.threshold(1)
    for _ in range(config.scan_ceiling):
        if _not_prime_for_blocking(x, config):
            return x
        x += 1
    raise ConstructionError(
        f"no non-prime seed found within {config.scan_ceiling} candidates "
        f"from {config.budget.threshold(1)}"
    )


def _scan_congruent(prev_value: int, table: ReservationTable, p: int, r: int,
                    tmin: int, config: ConstructionConfig) -> int:
    """Smallest x > prev_value with x >= tmin, x = r (mod p), avoiding all
    reserved classes."""
    lo = max(prev_value + 1, tmin)
    x = lo + ((r - lo) % p)
    for _ in range(config.scan_ceiling):
        if table.allows(x):
            return x
        x += p
    raise ConstructionError(
        f"scan ceiling {config.scan_ceiling} hit for target class {r} mod "
        f"{p} from {lo}; reservations: {table.to_json_dict()}"
    )


def _scan_blocker(prev_value: int, table: ReservationTable, n: int,
                  tmin: int, config: ConstructionConfig) -> int:
    """Smallest x > prev_value with x >= tmin, avoiding reserved classes,
    such that x + n is not prime."""
    x = max(prev_value + 1, tmin)
    for _ in range(config.scan_ceiling):
        if table.allows(x) and _not_prime_for_blocking(x + n, config):
            return x
        x += 1
    raise ConstructionError(
        f"scan ceiling {config.scan_ceiling} hit for offset {n} from "
        f"{max(prev_value + 1, tmin)}; reservations: {table.to_json_dict()}"
    )


def construct_direct_crt(config: ConstructionConfig) -> ConstructionRun:
    """Seed with a composite (or 1), then for each prime p (the next prime
    past the current maximum) put `copies` elements into every nonzero
    class mod p, reserving residue classes as the set grows."""
    params = {
        "copies": config.copies,
        "prime_quota": config.prime_quota,
        "scan_ceiling": config.scan_ceiling,
        "max_elements": config.max_elements,
        "mr_rounds": config.mr_rounds,
        "primality_bit_limit": config.primality_bit_limit,
        "processed_primes": [],
        "partial_prime": None,
        "reservations": {},
    }
    gset = GrowingSet("direct-crt", params, config.budget)
    table = ReservationTable()
    processed: list[int] = []
    partial: int | None = None

    def room() -> bool:
        return config.max_elements is None or len(gset) < config.max_elements

    if room():
        seed = _scan_seed(config)
        gset.append(Element(1, {"kind": "seed-composite"}, value=seed))
        table.extend_for_count(gset)

        for _ in range(config.prime_quota):
            if not room():
                break
            p = arith.next_prime(gset.max_element().value, config.mr_rounds)
            completed = True
            for r in range(1, p):
                for copy in range(1, config.copies + 1):
                    if not room():
                        completed = False
                        break
                    m = len(gset) + 1
                    x = _scan_congruent(gset.max_element().value, table, p, r,
                                        config.budget.threshold(m), config)
                    gset.append(Element(
                        m,
                        {"kind": "cover", "prime": str(p), "class": str(r),
                         "copy": copy},
                        value=x,
                    ))
                    table.extend_for_count(gset)
                if not completed:
                    break
            if completed:
                processed.append(p)
            else:
                partial = p
                break

    params["processed_primes"] = list(processed)
    params["partial_prime"] = partial
    params["reservations"] = dict(table.reserved)
    return ConstructionRun(config=config, gset=gset,
                           processed_primes=processed, reservations=table,
                           partial_prime=partial)


def construct_offset_blocked(config: ConstructionConfig) -> ConstructionRun:
    """Seed d_0 non-prime, then one element d_n per offset n (negative range
    [2-d_0, 0) first, ascending, then 1..offset_quota) with d_n + n not
    prime and admissibility preserved through reserved classes."""
    params = {
        "offset_quota": config.offset_quota,
        "scan_ceiling": config.scan_ceiling,
        "max_elements": config.max_elements,
        "mr_rounds": config.mr_rounds,
        "primality_bit_limit": config.primality_bit_limit,
        "processed_primes": [],
        "reservations": {},
        "blocked_offsets": [],
    }
    gset = GrowingSet("offset-blocked", params, config.budget)
    table = ReservationTable()
    blocked: list[tuple[int, int]] = []

    def room() -> bool:
        return config.max_elements is None or len(gset) < config.max_elements

    if room():
        d0 = _scan_seed(config)
        gset.append(Element(1, {"kind": "seed-composite"}, value=d0))
        table.extend_for_count(gset)
        blocked.append((0, 1))

        offsets = list(range(2 - d0, 0)) if d0 > 1 else []
        offsets.extend(range(1, config.offset_quota + 1))
        for n in offsets:
            if not room():
                break
            m = len(gset) + 1
            x = _scan_blocker(gset.max_element().value, table, n,
                              config.budget.threshold(m), config)
            gset.append(Element(m, {"kind": "blocker", "offset": n}, value=x))
            table.extend_for_count(gset)
            blocked.append((n, m))

    params["blocked_offsets"] = list(blocked)
    params["reservations"] = dict(table.reserved)
    return ConstructionRun(config=config, gset=gset, reservations=table,
                           blocked_offsets=blocked)
