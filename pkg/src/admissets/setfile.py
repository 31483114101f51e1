"""JSON-Lines set files.

First line: metadata object {format_version, construction_tag, params,
budget, primality_mode, created_at?}.  Each following line is one element
{m, value? | base+exponent, provenance}.  Large integers (values, primes)
are decimal strings so nothing depends on JSON number precision; exponents
and indices stay JSON integers (exact in Python).  Power elements omit
`value`; verifiers recompute residues from base and exponent.

Loading performs structural validation only (malformed input is a
SetFileError); semantic re-verification (monotonicity, sparsity,
admissibility, coverage) is the certify module's job, so tampered but
well-formed files load fine and then fail verification.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .budget import SparsityBudget
from .errors import SetFileError
from .setcore import Element, GrowingSet

FORMAT_VERSION = 1
SEEDLESS_ENV = "ADMISS_SEEDLESS"

_JSON_KW = {"sort_keys": True, "separators": (",", ":")}


def _timestamp_enabled() -> bool:
    return os.environ.get(SEEDLESS_ENV, "") != "1"


def encode_params(params: dict) -> dict:
    """JSON-ready copy of a typed params dict (big ints become strings)."""
    out = dict(params)
    for key in ("processed_primes", "prime_list"):
        if out.get(key) is not None:
            out[key] = [str(p) for p in out[key]]
    if out.get("partial_prime") is not None:
        out["partial_prime"] = str(out["partial_prime"])
    if out.get("reservations") is not None:
        out["reservations"] = {str(q): str(r)
                               for q, r in sorted(out["reservations"].items())}
    if out.get("blocked_offsets") is not None:
        out["blocked_offsets"] = [[int(n), int(m)]
                                  for n, m in out["blocked_offsets"]]
    return out


def decode_params(raw: dict) -> dict:
    params = dict(raw)
    try:
        for key in ("processed_primes", "prime_list"):
            if params.get(key) is not None:
                params[key] = [int(p) for p in params[key]]
        if params.get("partial_prime") is not None:
            params["partial_prime"] = int(params["partial_prime"])
        if params.get("reservations") is not None:
            params["reservations"] = {int(q): int(r)
                                      for q, r in params["reservations"].items()}
        if params.get("blocked_offsets") is not None:
            params["blocked_offsets"] = [(int(n), int(m))
                                         for n, m in params["blocked_offsets"]]
    except (TypeError, ValueError) as exc:
        raise SetFileError(f"bad params block: {exc}") from exc
    return params


def _element_line(e: Element) -> dict:
    line: dict = {"m": e.index, "provenance": e.provenance}
    if e.is_power:
        line["base"] = e.base
        line["exponent"] = e.exponent
    else:
        line["value"] = str(e.value)
    return line


def _element_from_line(line: dict, expected_index: int) -> Element:
    if not isinstance(line, dict):
        raise SetFileError("element line is not an object")
    m = line.get("m")
    if m != expected_index:
        raise SetFileError(f"element index {m!r} out of sequence "
                           f"(expected {expected_index})")
    prov = line.get("provenance")
    if not isinstance(prov, dict):
        raise SetFileError(f"element {m}: missing provenance")
    kind = prov.get("kind")
    try:
        if kind == "power":
            return Element(index=m, provenance=prov,
                           base=int(line["base"]),
                           exponent=int(line["exponent"]))
        value = line.get("value")
        if value is None:
            raise SetFileError(f"element {m}: missing value")
        return Element(index=m, provenance=prov, value=int(value))
    except SetFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SetFileError(f"element {m}: {exc}") from exc


@dataclass
class StoredRun:
    """A set file parsed back into memory."""

    gset: GrowingSet
    budget: SparsityBudget
    metadata: dict = field(default_factory=dict)

    @property
    def construction_tag(self) -> str:
        return self.gset.construction_tag

    @property
    def params(self) -> dict:
        return self.gset.params

    @property
    def processed_primes(self) -> list[int]:
        return self.params.get("processed_primes") or []

    @property
    def blocked_offsets(self) -> list[tuple[int, int]]:
        return self.params.get("blocked_offsets") or []


def dumps_set(gset: GrowingSet, budget: SparsityBudget,
              primality_mode: dict) -> str:
    """Serialize a set (with its run params) to JSON-Lines text."""
    metadata = {
        "format_version": FORMAT_VERSION,
        "construction_tag": gset.construction_tag,
        "params": encode_params(gset.params),
        "budget": budget.to_descriptor(),
        "primality_mode": primality_mode,
    }
    if _timestamp_enabled():
        metadata["created_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    lines = [json.dumps(metadata, **_JSON_KW)]
    lines.extend(json.dumps(_element_line(e), **_JSON_KW)
                 for e in gset.elements)
    return "\n".join(lines) + "\n"


def loads_set(text: str) -> StoredRun:
    """Parse JSON-Lines set text; structural validation only."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SetFileError("empty set file")
    try:
        metadata = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SetFileError(f"bad metadata line: {exc}") from exc
    if not isinstance(metadata, dict):
        raise SetFileError("metadata line is not an object")
    if metadata.get("format_version") != FORMAT_VERSION:
        raise SetFileError(
            f"unsupported format_version {metadata.get('format_version')!r}")
    for key in ("construction_tag", "params", "budget", "primality_mode"):
        if key not in metadata:
            raise SetFileError(f"metadata missing {key!r}")
    try:
        budget = SparsityBudget.from_descriptor(metadata["budget"])
    except Exception as exc:
        raise SetFileError(f"bad budget descriptor: {exc}") from exc
    params = decode_params(metadata["params"])
    gset = GrowingSet(metadata["construction_tag"], params, budget)
    for i, raw in enumerate(lines[1:], start=1):
        try:
            line = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SetFileError(f"element line {i}: {exc}") from exc
        try:
            element = _element_from_line(line, i)
        except SetFileError:
            raise
        except Exception as exc:
            raise SetFileError(f"element line {i}: {exc}") from exc
        # bypass append() checks: semantic validation is verify's job
        gset.elements.append(element)
    return StoredRun(gset=gset, budget=budget, metadata=metadata)


def dump_set(path: str | Path, gset: GrowingSet, budget: SparsityBudget,
             primality_mode: dict) -> None:
    Path(path).write_text(dumps_set(gset, budget, primality_mode))


def load_set(path: str | Path) -> StoredRun:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SetFileError(f"cannot read {path}: {exc}") from exc
    return loads_set(text)
