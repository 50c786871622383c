"""Smoothing-based diagram invariants built from unknotting numbers.

For a diagram ``D`` of a link ``L`` and a crossing ``p`` let ``D_p`` be the
oriented smoothing.  The invariants here are signed sums over crossings of
``|u(D_p) - u(L)|`` (or of ``u(D_p)``).  Unknotting numbers are only known as
enclosures, so every value is an interval whose endpoints may be halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Protocol

from .diagram import Diagram, components, smooth, writhe
from .invariants import DEFAULT_CAP, CapExceeded
from .unknotting import CensusId, SearchBudget, UInterval, identify, u_enclose, u_table

__all__ = [
    "Interval",
    "CrossingTerm",
    "IuValue",
    "SplitPartition",
    "OracleError",
    "Oracle",
    "TableOracle",
    "MoveBound",
    "iu",
    "iu_eps_delta",
    "iu_prime",
    "iu_split",
    "move_lower_bound",
    "iu_generic",
]

INF = math.inf


def _num(x):
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError("finite endpoints must be exact")
    return Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints; ``±inf`` allowed."""

    lo: Fraction | float
    hi: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "lo", _num(self.lo))
        object.__setattr__(self, "hi", _num(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v) -> "Interval":
        return cls(v, v)

    @classmethod
    def of(cls, u: UInterval) -> "Interval":
        return cls(u.lo, INF if u.hi is None else u.hi)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Interval | int | Fraction") -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.exact(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval | int | Fraction") -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.exact(other)
        return self + (-other)

    def scale(self, k) -> "Interval":
        if k == 0:
            return Interval.exact(0)
        a, b = self.lo * k, self.hi * k
        return Interval(min(a, b), max(a, b))

    def abs_diff(self, other: "Interval") -> "Interval":
        """Tight enclosure of ``|x - y|`` for ``x`` in self and ``y`` in other."""
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        return Interval(max(0, c - b, a - d), max(b - c, d - a))

    def magnitude(self) -> "Interval":
        return self.abs_diff(Interval.exact(0))

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def forced_gap(self, other: "Interval") -> Fraction | float:
        """Smallest possible distance between a point of self and a point of other."""
        return max(0, other.lo - self.hi, self.lo - other.hi)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_exact and self.lo == other
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __str__(self) -> str:
        if self.is_exact:
            return _fmt(self.lo)
        return f"[{_fmt(self.lo)}, {_fmt(self.hi)}]"

    def to_json(self) -> list:
        return [_jnum(self.lo), _jnum(self.hi)]


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _jnum(x):
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return x.numerator if x.denominator == 1 else _fmt(x)


class OracleError(RuntimeError):
    def __init__(self, crossing: int, reason: str):
        super().__init__(f"crossing {crossing}: {reason}")
        self.crossing = crossing


class Oracle(Protocol):
    def __call__(self, smoothed: Diagram, crossing: int) -> tuple[CensusId | None, UInterval]: ...


@dataclass
class TableOracle:
    """Identifies each smoothing within the torus-composite family and reads the table.

    Unidentified smoothings fall back to the linking bound, tightened by a
    crossing-change search when ``budget`` is set.
    """

    assume_conjecture: bool = False
    budget: SearchBudget | None = None
    max_k: int = 12
    cap: int = DEFAULT_CAP
    cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, smoothed: Diagram, crossing: int) -> tuple[CensusId | None, UInterval]:
        key = smoothed
        if key not in self.cache:
            try:
                cid = identify(smoothed, self.max_k, self.cap)
            except CapExceeded as exc:
                raise OracleError(crossing, str(exc)) from None
            self.cache[key] = (cid, u_enclose(smoothed, cid, self.assume_conjecture, self.budget))
        return self.cache[key]


@dataclass(frozen=True)
class CrossingTerm:
    crossing: int
    sign: int
    census: CensusId | None
    u: UInterval
    term: Interval

    def to_json(self) -> dict:
        return {
            "crossing": self.crossing,
            "sign": self.sign,
            "census": None if self.census is None else str(self.census),
            "u": self.u.to_json(),
            "term": self.term.to_json(),
        }


@dataclass(frozen=True)
class IuValue:
    interval: Interval
    breakdown: tuple[CrossingTerm, ...] = ()
    shift: Fraction = Fraction(0)

    @property
    def lo(self):
        return self.interval.lo

    @property
    def hi(self):
        return self.interval.hi

    def check(self) -> None:
        total = sum((t.term for t in self.breakdown), Interval.exact(0)) + self.shift
        if total != self.interval:
            raise AssertionError(f"breakdown sums to {total}, total is {self.interval}")

    def __str__(self) -> str:
        return str(self.interval)

    def to_json(self) -> dict:
        return {
            "interval": self.interval.to_json(),
            "shift": _jnum(Fraction(self.shift)),
            "breakdown": [t.to_json() for t in self.breakdown],
        }


def _terms(
    d: Diagram,
    oracle: Oracle,
    crossings: Iterable[int],
    term_of: Callable[[int, UInterval], Interval],
) -> IuValue:
    out = []
    total = Interval.exact(0)
    for c in crossings:
        s = d.signs[c]
        try:
            cid, u = oracle(smooth(d, c), c)
        except OracleError:
            raise
        except Exception as exc:  # the oracle is pluggable
            raise OracleError(c, str(exc)) from exc
        t = term_of(c, u).scale(s)
        out.append(CrossingTerm(c, s, cid, u, t))
        total = total + t
    return IuValue(total, tuple(out))


def iu(d: Diagram, oracle: Oracle, u_of_L: UInterval = UInterval.exact(0)) -> IuValue:
    """``sum_p sign(p) |u(D_p) - u(L)|``; zero on crossing-free diagrams."""
    base = Interval.of(u_of_L)
    return _terms(d, oracle, d.crossings, lambda c, u: Interval.of(u).abs_diff(base))


def iu_eps_delta(
    d: Diagram, eps: int, delta: int, oracle: Oracle, u_of_L: UInterval = UInterval.exact(0)
) -> IuValue:
    """``iu + eps (c/2 + delta 3w/2)``."""
    if eps not in (1, -1) or delta not in (1, -1):
        raise ValueError("eps and delta must be +1 or -1")
    v = iu(d, oracle, u_of_L)
    shift = eps * (Fraction(d.num_crossings, 2) + delta * Fraction(3 * writhe(d), 2))
    return IuValue(v.interval + shift, v.breakdown, shift)


def iu_prime(d: Diagram, oracle: Oracle, u_of_L: UInterval = UInterval.exact(0)) -> IuValue:
    """Self-crossings contribute ``sign |du|``, crossings between components ``sign u(D_p)``."""
    lab = components(d)
    base = Interval.of(u_of_L)

    def term(c: int, u: UInterval) -> Interval:
        under, over = lab.of_crossing(d, c)
        return Interval.of(u).abs_diff(base) if under == over else Interval.of(u)

    return _terms(d, oracle, d.crossings, term)


@dataclass(frozen=True)
class SplitPartition:
    J: frozenset[int]
    K: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "J", frozenset(self.J))
        object.__setattr__(self, "K", frozenset(self.K))
        if not self.J or not self.K:
            raise ValueError("both sides of a split partition must be nonempty")
        if self.J & self.K:
            raise ValueError("split partition sides must be disjoint")

    def separates(self, a: int, b: int) -> bool:
        return (a in self.J and b in self.K) or (a in self.K and b in self.J)


def iu_split(d: Diagram, part: SplitPartition, oracle: Oracle) -> IuValue:
    """``sum sign(p) u(D_p)`` over crossings joining a J component to a K component."""
    lab = components(d)
    for i in part.J | part.K:
        if not 0 <= i < lab.count:
            raise ValueError(f"component {i} does not exist")
    cs = [c for c in d.crossings if part.separates(*lab.of_crossing(d, c))]
    return _terms(d, oracle, cs, lambda c, u: Interval.of(u))


@dataclass(frozen=True)
class MoveBound:
    """Enclosure of ``|v1 - v2| / 2`` and the move count it certifies."""

    mode: str
    gap: Interval

    @property
    def certified(self) -> int:
        lo = self.gap.lo
        return max(0, math.ceil(lo))

    def to_json(self) -> dict:
        return {"mode": self.mode, "half_gap": self.gap.to_json(), "certified": self.certified}


MODES = ("matched-RII-RIII", "all-moves", "split")


def move_lower_bound(v1: IuValue | Interval, v2: IuValue | Interval, mode: str = "all-moves") -> MoveBound:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    a = v1.interval if isinstance(v1, IuValue) else v1
    b = v2.interval if isinstance(v2, IuValue) else v2
    return MoveBound(mode, a.abs_diff(b).scale(Fraction(1, 2)))


def iu_generic(d: Diagram, phi: Callable[[Diagram], int]) -> int:
    """``sum_p sign(p) |phi(D_p) - phi(D)|`` for an integer functional ``phi``."""
    base = phi(d)
    return sum(s * abs(phi(smooth(d, c)) - base) for c, s in sorted(d.signs.items()))


def table_interval(k: int, assume_conjecture: bool) -> Interval:
    return Interval.of(u_table(CensusId.t2_composite(k), assume_conjecture))
