"""Certified enclosures of unknotting numbers.

Three independent sources are combined: a table for the torus-composite
family ``T(2,k) # T(2,-k)``, the total linking number as a lower bound, and a
budgeted crossing-change search whose successes come with a replayable
witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from . import braid
from .diagram import Diagram, change_crossing, components, connected_sum, mirror
from .invariants import DEFAULT_CAP, jones_fingerprint, linking_matrix, total_linking
from .laurent import DELTA, LaurentPoly, pow_scalar
from .moves import MoveRecord, SequenceError, format_moves, parse_moves, simplify, verify_sequence

__all__ = [
    "UInterval",
    "EmptyEnclosure",
    "CensusId",
    "u_table",
    "u_lower_linking",
    "SearchBudget",
    "Witness",
    "search_witness",
    "u_upper_search",
    "verify_witness",
    "u_enclose",
    "reference_diagram",
    "reference_fingerprint",
    "identify",
    "format_witness",
    "parse_witness",
]


class EmptyEnclosure(ValueError):
    """Two enclosures that should both hold do not overlap."""


@dataclass(frozen=True)
class UInterval:
    lo: int
    hi: int | None = None  # None means unbounded

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("lower end must be non-negative")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: int) -> "UInterval":
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.hi == self.lo

    def contains(self, v: int) -> bool:
        return v >= self.lo and (self.hi is None or v <= self.hi)

    def intersect(self, other: "UInterval") -> "UInterval":
        lo = max(self.lo, other.lo)
        his = [h for h in (self.hi, other.hi) if h is not None]
        hi = min(his) if his else None
        if hi is not None and hi < lo:
            raise EmptyEnclosure(f"{self} and {other} do not overlap")
        return UInterval(lo, hi)

    def widen(self, r: int) -> "UInterval":
        return UInterval(max(0, self.lo - r), None if self.hi is None else self.hi + r)

    def overlaps(self, other: "UInterval") -> bool:
        try:
            self.intersect(other)
        except EmptyEnclosure:
            return False
        return True

    def __str__(self) -> str:
        return f"[{self.lo}, {'inf' if self.hi is None else self.hi}]"

    def to_json(self) -> list:
        return [self.lo, self.hi]

    @classmethod
    def from_json(cls, data) -> "UInterval":
        return cls(int(data[0]), None if data[1] is None else int(data[1]))


@dataclass(frozen=True)
class CensusId:
    tag: str  # "Unknot" | "Unlink" | "T2Composite" | "Unknown"
    k: int | None = None
    fingerprint: LaurentPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.tag not in ("Unknot", "Unlink", "T2Composite", "Unknown"):
            raise ValueError(f"unknown census tag {self.tag!r}")
        if self.tag == "T2Composite" and (self.k is None or self.k < 1):
            raise ValueError("T2Composite needs k >= 1")
        if self.tag == "Unlink" and (self.k is None or self.k < 1):
            raise ValueError("Unlink needs a component count >= 1")

    @classmethod
    def unknot(cls) -> "CensusId":
        return cls("Unknot")

    @classmethod
    def unlink(cls, m: int) -> "CensusId":
        return cls("Unlink", m)

    @classmethod
    def t2_composite(cls, k: int) -> "CensusId":
        return cls("T2Composite", k)

    @classmethod
    def unknown(cls, fp: LaurentPoly | None = None) -> "CensusId":
        return cls("Unknown", None, fp)

    def __str__(self) -> str:
        return self.tag if self.k is None else f"{self.tag}({self.k})"

    @classmethod
    def parse(cls, text: str) -> "CensusId":
        name, _, rest = text.partition("(")
        if rest:
            return cls(name, int(rest.rstrip(")")))
        return cls(name)


def u_table(cid: CensusId, assume_conjecture: bool = False) -> UInterval:
    if cid.tag in ("Unknot", "Unlink"):
        return UInterval.exact(0)
    if cid.tag == "Unknown":
        raise KeyError("no table entry for an unidentified link")
    k = cid.k
    if k == 1:
        return UInterval.exact(0)
    if k % 2 == 0:
        # the linking bound meets the obvious k changes
        return UInterval.exact(k)
    if assume_conjecture:
        return UInterval.exact(k - 1)
    # composite knots need at least two changes; (k-1)/2 per torus-knot summand suffice
    return UInterval(2, k - 1)


def u_lower_linking(d: Diagram) -> int:
    return total_linking(d)


# ---------------------------------------------------------------------------
# reference diagrams of the census family


@lru_cache(maxsize=None)
def reference_diagram(k: int) -> Diagram:
    """``T(2,k) # T(2,-k)`` from two 2-braid closures; crossings 0..k-1 form the first summand."""
    if k < 1:
        raise ValueError("k must be at least 1")
    t = braid.closure(braid.BraidWord(2, ((1, 1),) * k))
    return connected_sum(t, (0, 2), mirror(t), (0, 2))


@lru_cache(maxsize=None)
def reference_fingerprint(k: int, cap: int = DEFAULT_CAP) -> LaurentPoly:
    return jones_fingerprint(reference_diagram(k), cap)


def identify(d: Diagram, max_k: int = 12, cap: int = DEFAULT_CAP) -> CensusId:
    """Name ``d`` within the census family by its Jones fingerprint.

    A match is exact within the family (whose fingerprints are pairwise
    distinct) but is not a proof of link type for diagrams from elsewhere.
    """
    m = components(d).count
    fp = jones_fingerprint(d, cap)
    if fp == pow_scalar(DELTA, max(m - 1, 0)) and total_linking(d) == 0:
        return CensusId.unknot() if m <= 1 else CensusId.unlink(m)
    for k in range(2, max_k + 1):
        if m == (3 if k % 2 == 0 else 1) and fp == reference_fingerprint(k, cap):
            return CensusId.t2_composite(k)
    return CensusId.unknown(fp)


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchBudget:
    max_changes: int = 6
    subset_budget: int = 20000
    riii_depth: int = 8
    riii_states: int = 256
    cap: int = DEFAULT_CAP


@dataclass(frozen=True)
class Witness:
    changes: tuple[int, ...]
    moves: tuple[MoveRecord, ...]

    @property
    def size(self) -> int:
        return len(self.changes)


def _looks_trivial(d: Diagram, cap: int) -> bool:
    if d.num_crossings == 0:
        return True
    if any(v for row in linking_matrix(d).entries for v in row):
        return False
    if d.num_crossings > cap:
        return True
    m = components(d).count
    return jones_fingerprint(d, cap) == pow_scalar(DELTA, max(m - 1, 0))


def search_witness(d: Diagram, budget: SearchBudget = SearchBudget()) -> Witness | None:
    """Fewest crossing changes (within budget) after which greedy simplification clears ``d``."""
    tried = 0
    cs = d.crossings
    for s in range(min(budget.max_changes, len(cs)) + 1):
        for subset in combinations(cs, s):
            if tried >= budget.subset_budget:
                return None
            tried += 1
            e = change_crossing(d, subset) if subset else d
            if not _looks_trivial(e, budget.cap):
                continue
            final, seq = simplify(e, budget.riii_depth, budget.riii_states)
            if final.num_crossings == 0:
                return Witness(tuple(subset), tuple(seq))
    return None


def u_upper_search(d: Diagram, budget: SearchBudget = SearchBudget()) -> int | None:
    w = search_witness(d, budget)
    return None if w is None else w.size


def verify_witness(d: Diagram, w: Witness) -> bool:
    """Replay ``w``: the changed diagram must reduce to a crossing-free diagram by legal moves."""
    try:
        e = change_crossing(d, w.changes) if w.changes else d
        final, _ = verify_sequence(e, w.moves)
    except (SequenceError, ValueError):
        return False
    return final.num_crossings == 0 and final.free_loops == components(d).count


def u_enclose(
    d: Diagram,
    cid: CensusId | None = None,
    assume_conjecture: bool = False,
    budget: SearchBudget | None = None,
    search_result: int | None = None,
) -> UInterval:
    """Intersection of every applicable enclosure of ``u``.

    ``search_result`` supplies an already verified upper bound; otherwise a
    search runs when ``budget`` is given.
    """
    out = UInterval(u_lower_linking(d))
    if cid is not None and cid.tag != "Unknown":
        out = out.intersect(u_table(cid, assume_conjecture))
    if search_result is None and budget is not None:
        search_result = u_upper_search(d, budget)
    if search_result is not None:
        out = out.intersect(UInterval(0, search_result))
    return out


# ---------------------------------------------------------------------------
# witness files


def format_witness(w: Witness) -> str:
    head = "changes" + "".join(f" {c}" for c in w.changes)
    body = format_moves(w.moves)
    return head + "\n" + body


def parse_witness(text: str) -> Witness:
    lines = text.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines or lines[0].split()[0] != "changes":
        raise ValueError("witness must start with a 'changes' line")
    try:
        changes = tuple(int(t) for t in lines[0].split()[1:])
    except ValueError:
        raise ValueError("witness changes must be crossing ids") from None
    return Witness(changes, tuple(parse_moves("\n".join(lines[1:]))))
