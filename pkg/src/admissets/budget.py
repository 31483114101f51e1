"""Sparsity budgets as inverse thresholds.

A budget answers one question for the greedy constructions: how large must
the m-th element be?  That is T(m), the inverse of the counting bound
|A ∩ {1..N}| <= f(N); the two are equivalent for non-decreasing f and
strictly increasing elements, and T avoids ever evaluating f on huge
values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import arith
from .errors import DomainError

KINDS = ("power", "poly", "doubleexp", "table")

# Refuse to materialize thresholds beyond this many bits; exponent-space
# comparisons must be used instead (power constructions never materialize).
MAX_THRESHOLD_BITS = 1 << 26


@dataclass(frozen=True)
class SparsityBudget:
    """Inverse-threshold form of a sparsity function.

    kind/param pairs: power (T(m) = b**m), poly (T(m) = m**d), doubleexp
    (T(m) = b**(b**m)), table (explicit strictly increasing thresholds,
    extended past the end by geometric doubling of the last entry).
    """

    kind: str
    param: int = 0
    table: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown budget kind {self.kind!r}")
        if self.kind in ("power", "doubleexp") and self.param < 2:
            raise DomainError(f"{self.kind} budget needs base >= 2")
        if self.kind == "poly" and self.param < 1:
            raise DomainError("poly budget needs degree >= 1")
        if self.kind == "table":
            if not self.table:
                raise DomainError("table budget needs at least one threshold")
            if any(t < 1 for t in self.table):
                raise DomainError("table thresholds must be >= 1")
            if any(a >= b for a, b in zip(self.table, self.table[1:])):
                raise DomainError("table thresholds must be strictly increasing")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def power(cls, b: int) -> "SparsityBudget":
        return cls("power", b)

    @classmethod
    def poly(cls, d: int) -> "SparsityBudget":
        return cls("poly", d)

    @classmethod
    def doubleexp(cls, b: int) -> "SparsityBudget":
        return cls("doubleexp", b)

    @classmethod
    def from_table(cls, values) -> "SparsityBudget":
        return cls("table", 0, tuple(int(v) for v in values))

    # -- evaluation -----------------------------------------------------------

    def threshold_bits(self, m: int) -> int:
        """Bit length of T(m) without materializing it."""
        if m < 1:
            raise DomainError(f"index must be >= 1, got {m}")
        if self.kind == "power":
            return arith.power_bit_length(self.param, m)
        if self.kind == "poly":
            return (m ** self.param).bit_length()
        if self.kind == "doubleexp":
            return arith.power_bit_length(self.param, self.param ** m)
        return self._table_value(m).bit_length()

    def threshold(self, m: int) -> int:
        """T(m), materialized."""
        if m < 1:
            raise DomainError(f"index must be >= 1, got {m}")
        if self.kind == "doubleexp" and self.threshold_bits(m) > MAX_THRESHOLD_BITS:
            raise DomainError(
                f"threshold at index {m} needs more than {MAX_THRESHOLD_BITS} "
                "bits; compare in exponent space instead"
            )
        if self.kind == "power":
            return self.param ** m
        if self.kind == "poly":
            return m ** self.param
        if self.kind == "doubleexp":
            return self.param ** (self.param ** m)
        return self._table_value(m)

    def _table_value(self, m: int) -> int:
        n = len(self.table)
        if m <= n:
            return self.table[m - 1]
        return self.table[-1] * 2 ** (m - n)

    def least_exponent(self, base: int, m: int) -> int:
        """Least k with base**k >= T(m), never materializing either side.

        This is what the power constructions use to respect the sparsity
        condition while storing only exponents.
        """
        if self.kind == "doubleexp":
            b = self.param
            e = b ** m
            if base == b:
                return e
            sa, sb = arith.exact_power_of_two(base), arith.exact_power_of_two(b)
            if sa is not None and sb is not None:
                return -(-(e * sb) // sa)
            s = _integer_log(base, b)
            if s is not None:
                # b == base**s, so T(m) == base**(s*e)
                return s * e
            s = _integer_log(b, base)
            if s is not None:
                # base == b**s, so base**k >= b**e iff s*k >= e
                return -(-e // s)
            return _least_exponent_by_logs(base, b, e)
        if self.kind == "power" and self.param == base:
            return m
        return arith.least_exponent_at_least(base, self.threshold(m))

    # -- serialization --------------------------------------------------------

    @property
    def literal(self) -> str:
        if self.kind == "table":
            return "table:" + ",".join(str(v) for v in self.table)
        return f"{self.kind}:{self.param}"

    def to_descriptor(self) -> dict:
        if self.kind == "table":
            return {"kind": "table", "thresholds": [str(v) for v in self.table],
                    "extension": "geometric-doubling"}
        return {"kind": self.kind, "param": self.param}

    @classmethod
    def from_descriptor(cls, desc: dict) -> "SparsityBudget":
        kind = desc.get("kind")
        if kind == "table":
            return cls.from_table(int(v) for v in desc["thresholds"])
        return cls(kind, int(desc["param"]))


def _integer_log(base: int, value: int) -> int | None:
    """s with value == base**s, else None."""
    if value < base:
        return None
    s, acc = 0, 1
    while acc < value:
        acc *= base
        s += 1
    return s if acc == value else None


def _least_exponent_by_logs(a: int, b: int, e: int) -> int:
    """Least k with a**k >= b**e for multiplicatively independent a, b."""
    import mpmath

    for prec in (120, 400, 2000):
        with mpmath.workprec(prec):
            x = e * mpmath.log(b) / mpmath.log(a)
            f = x - mpmath.floor(x)
            eps = mpmath.mpf(2) ** (-prec // 2)
            if eps < f < 1 - eps:
                return int(mpmath.floor(x)) + 1
    raise DomainError(
        f"cannot separate {a}**k from {b}**{e}; bases too close to "
        "multiplicatively dependent"
    )


def parse_budget(literal: str, base_dir: str | Path | None = None) -> SparsityBudget:
    """Parse a budget literal: power:2, poly:3, doubleexp:2, table:@file.json
    (JSON array of thresholds) or table:10,100,1000."""
    kind, sep, arg = literal.partition(":")
    if not sep or kind not in KINDS:
        raise DomainError(f"bad budget literal {literal!r}")
    if kind == "table":
        if arg.startswith("@"):
            path = Path(arg[1:])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            try:
                values = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise DomainError(f"cannot read table budget {arg!r}: {exc}") from exc
        else:
            values = [v for v in arg.split(",") if v]
        return SparsityBudget.from_table(int(v) for v in values)
    try:
        param = int(arg)
    except ValueError as exc:
        raise DomainError(f"bad budget parameter {arg!r}") from exc
    return SparsityBudget(kind, param)


def check_sparsity(elements, budget: SparsityBudget) -> bool:
    """Whether a strictly increasing integer sequence respects the budget,
    i.e. the m-th element (1-based) is at least T(m)."""
    return all(e >= budget.threshold(m) for m, e in enumerate(elements, start=1))
