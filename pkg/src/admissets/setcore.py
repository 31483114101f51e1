"""The growing admissible set: ordered elements with provenance, residue
profiles per prime, admissibility queries, and reserved residue classes.

Elements come in two physical forms.  Explicit elements store their value;
power elements store (base, exponent) and never materialize base**exponent,
since doubly-exponential budgets push values far beyond what is storable.
All residue and comparison work routes through exponent-space arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import arith
from .budget import SparsityBudget
from .errors import DomainError

PROVENANCE_KINDS = ("seed-composite", "cover", "power", "blocker")


@dataclass(frozen=True)
class Element:
    """One member of a growing set.

    Exactly one of `value` or (`base`, `exponent`) is populated; index is
    the 1-based position m in the set.
    """

    index: int
    provenance: dict
    value: int | None = None
    base: int | None = None
    exponent: int | None = None

    def __post_init__(self):
        kind = self.provenance.get("kind")
        if kind not in PROVENANCE_KINDS:
            raise DomainError(f"unknown provenance kind {kind!r}")
        if self.is_power:
            if self.value is not None:
                raise DomainError("power elements must not carry a value")
            if self.base is None or self.base < 2 or self.exponent is None \
                    or self.exponent < 1:
                raise DomainError("power elements need base >= 2, exponent >= 1")
        else:
            if self.value is None or self.value < 1:
                raise DomainError("explicit elements need a value >= 1")

    @property
    def is_power(self) -> bool:
        return self.provenance.get("kind") == "power"

    def residue(self, p: int) -> int:
        """Value of this element mod prime p."""
        if self.is_power:
            return arith.power_residue(self.base, self.exponent, p)
        return self.value % p

    def at_least(self, t: int) -> bool:
        """Whether the element's value is >= t."""
        if self.is_power:
            return arith.power_at_least(self.base, self.exponent, t)
        return self.value >= t

    def greater_than(self, other: "Element") -> bool:
        if self.is_power and other.is_power:
            return arith.compare_powers(self.base, self.exponent,
                                        other.base, other.exponent) > 0
        if self.is_power:
            return arith.power_exceeds_value(self.base, self.exponent, other.value)
        if other.is_power:
            return not arith.power_at_least(other.base, other.exponent, self.value)
        return self.value > other.value

    def bit_length(self) -> int:
        if self.is_power:
            return arith.power_bit_length(self.base, self.exponent)
        return self.value.bit_length()

    def materialize(self, max_bits: int = 1 << 22) -> int | None:
        """The integer value, or None if it would exceed max_bits bits."""
        if not self.is_power:
            return self.value
        if arith.power_bit_length(self.base, self.exponent) > max_bits:
            return None
        return self.base ** self.exponent

    def same_form(self, other: "Element") -> bool:
        """Whether two elements denote the same integer."""
        if self.is_power and other.is_power:
            return arith.compare_powers(self.base, self.exponent,
                                        other.base, other.exponent) == 0
        if self.is_power or other.is_power:
            power, plain = (self, other) if self.is_power else (other, self)
            v = power.materialize()
            return v is not None and v == plain.value
        return self.value == other.value

    def describe(self) -> str:
        if self.is_power:
            return f"{self.base}^{self.exponent}"
        return str(self.value)


@dataclass
class ResidueProfile:
    """Counts of set elements per residue class mod one prime.

    Stored sparsely (only classes that are hit), since processed primes can
    be large while the set stays small.
    """

    prime: int
    counts: dict[int, int]
    total: int

    def count(self, r: int) -> int:
        return self.counts.get(r % self.prime, 0)

    def as_list(self) -> list[int]:
        """Dense counts array of length prime (small primes only)."""
        return [self.counts.get(r, 0) for r in range(self.prime)]

    @property
    def classes_hit(self) -> int:
        return len(self.counts)


class GrowingSet:
    """A strictly increasing finite set under construction.

    Mutation is single-owner (one construction run); once finished the set
    is treated as immutable and safe to share.
    """

    def __init__(self, construction_tag: str, params: dict,
                 budget: SparsityBudget | None = None):
        self.construction_tag = construction_tag
        self.params = params
        self.budget = budget
        self.elements: list[Element] = []
        self._profiles: dict[tuple[int, int], ResidueProfile] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def append(self, element: Element) -> None:
        if element.index != len(self.elements) + 1:
            raise DomainError(
                f"element index {element.index} out of sequence "
                f"(expected {len(self.elements) + 1})"
            )
        if self.elements and not element.greater_than(self.elements[-1]):
            raise DomainError(
                f"element {element.describe()} does not exceed previous "
                f"element {self.elements[-1].describe()}"
            )
        if self.budget is not None and not self._meets_budget(element):
            raise DomainError(
                f"element {element.describe()} below sparsity threshold "
                f"at index {element.index}"
            )
        self.elements.append(element)

    def _meets_budget(self, element: Element) -> bool:
        if element.is_power:
            need = self.budget.least_exponent(element.base, element.index)
            return element.exponent >= need
        return element.value >= self.budget.threshold(element.index)

    def satisfies_budget(self, budget: SparsityBudget | None = None) -> bool:
        """Exact e_m >= T(m) check over all elements (exponent-aware)."""
        budget = budget or self.budget
        if budget is None:
            raise DomainError("no budget to check against")
        for e in self.elements:
            if e.is_power:
                if e.exponent < budget.least_exponent(e.base, e.index):
                    return False
            elif e.value < budget.threshold(e.index):
                return False
        return True

    def max_element(self) -> Element | None:
        return self.elements[-1] if self.elements else None

    def residue_profile(self, p: int) -> ResidueProfile:
        """Exact per-class counts of all elements mod prime p (memoized per
        set revision)."""
        if not arith.is_prime(p):
            raise DomainError(f"{p} is not prime")
        key = (len(self.elements), p)
        profile = self._profiles.get(key)
        if profile is None:
            counts: dict[int, int] = {}
            for e in self.elements:
                r = e.residue(p)
                counts[r] = counts.get(r, 0) + 1
            profile = ResidueProfile(p, counts, len(self.elements))
            self._profiles[key] = profile
        return profile

    def class_members(self, p: int, r: int) -> list[Element]:
        """Elements congruent to r mod p, in set order."""
        r %= p
        return [e for e in self.elements if e.residue(p) == r]

    def is_admissible_at(self, p: int) -> bool:
        """Whether some residue class mod prime p is empty."""
        return self.residue_profile(p).classes_hit < p

    def is_admissible_upto(self, bound: int) -> tuple[bool, int | None]:
        """Check every prime p <= bound; returns (ok, first failing prime).

        A prime larger than the element count misses a class automatically,
        so only p <= min(bound, |set|) does real work.
        """
        effective = min(bound, len(self.elements))
        for p in arith.primes_upto(effective):
            if not self.is_admissible_at(p):
                return False, p
        return True, None


class ReservationTable:
    """Per-prime residue classes pledged to stay empty.

    Constructions that pick explicit values consult the table before every
    insertion, which is what keeps the growing set admissible.
    """

    def __init__(self):
        self.reserved: dict[int, int] = {}
        self._next_candidate = 2

    def __contains__(self, q: int) -> bool:
        return q in self.reserved

    def __len__(self) -> int:
        return len(self.reserved)

    def reserve(self, gset: GrowingSet, q: int) -> int:
        """Reserve the smallest residue class mod q hit by no element.

        Callers guarantee fewer elements than q classes, so a free class
        exists; the all-occupied case is an internal error.
        """
        if not arith.is_prime(q):
            raise DomainError(f"{q} is not prime")
        if q in self.reserved:
            raise DomainError(f"{q} already reserved")
        occupied = {e.residue(q) for e in gset.elements}
        for r in range(q):
            if r not in occupied:
                self.reserved[q] = r
                return r
        raise AssertionError(f"all residue classes mod {q} occupied")

    def allows(self, x: int) -> bool:
        """Whether explicit value x avoids every reserved class."""
        return all(x % q != r for q, r in self.reserved.items())

    def extend_for_count(self, gset: GrowingSet) -> None:
        """Reserve every unreserved prime q <= |set| + 1.

        Run after each insertion; a prime gets its pledged class before the
        set is large enough to cover all q classes, and primes beyond the
        final count never need one (they miss a class by cardinality).
        """
        limit = len(gset.elements) + 1
        while self._next_candidate <= limit:
            q = self._next_candidate
            if q not in self.reserved:
                self.reserve(gset, q)
            self._next_candidate = arith.next_prime(q)

    def validate(self, gset: GrowingSet) -> None:
        """Assert every reserved class is still empty."""
        for q, r in self.reserved.items():
            for e in gset.elements:
                if e.residue(q) == r:
                    raise DomainError(
                        f"reserved class {r} mod {q} violated by "
                        f"element {e.describe()}"
                    )

    def to_json_dict(self) -> dict[str, str]:
        return {str(q): str(r) for q, r in sorted(self.reserved.items())}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReservationTable":
        table = cls()
        for q, r in data.items():
            table.reserved[int(q)] = int(r)
        if table.reserved:
            table._next_candidate = arith.next_prime(max(table.reserved))
        return table
