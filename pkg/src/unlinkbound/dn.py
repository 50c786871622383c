"""The diagram family ``D_n`` and the move-count bounds it attains.

``D_n`` is the closure of the ``(n+1)``-braid
``s1^-1 (s2^-1 s1^-1) ... (sn^-1 s(n-1)^-1) sn^n``: a diagram of the
2-component unlink with ``3n - 1`` crossings.  :func:`report` rebuilds it,
replays an explicit unlinking sequence, smooths every crossing, identifies the
smoothings, and checks each derived bound against its closed form.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import braid
from .diagram import Diagram, components, smooth, writhe
from .invariants import CapExceeded, jones_fingerprint
from .iu import Interval, SplitPartition, TableOracle, iu, iu_eps_delta, iu_split, table_interval
from .moves import MoveRecord, format_moves, verify_sequence
from .unknotting import CensusId, UInterval, identify, reference_fingerprint, u_table

__all__ = [
    "MOVE_CAP",
    "CENSUS_CAP",
    "CrossCheckError",
    "DnReport",
    "build",
    "unknotting_sequence",
    "census",
    "report",
    "predicted_census",
]

log = logging.getLogger(__name__)

MOVE_CAP = 12
CENSUS_CAP = 7


class CrossCheckError(AssertionError):
    pass


def _check_n(n: int, cap: int | None, default: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = default if cap is None else cap
    if n > limit:
        raise CapExceeded(f"n={n} exceeds the cap {limit}")
    if cap is not None and cap > default and n > default:
        log.warning("n=%d is above the default cap %d; this may be slow", n, default)


def build(n: int, cap: int | None = None) -> Diagram:
    _check_n(n, cap, MOVE_CAP)
    return braid.closure(braid.dn_word(n))


def unknotting_sequence(n: int, cap: int | None = None) -> list[MoveRecord]:
    """``n-1`` destabilizing braid steps, then ``n`` matched RII deletions."""
    _check_n(n, cap, MOVE_CAP)
    b = braid.dn_word(n)
    seq: list[MoveRecord] = []
    while b.strands > 2:
        b, recs = braid.destabilize(b)
        seq += recs
    return seq + braid.cancel_pairs(b)


def predicted_census(n: int) -> list[tuple[int, CensusId]]:
    """Smoothing type of each crossing read off its braid letter."""
    out = []
    for cid, (i, e) in zip(braid.dn_word(n).crossing_ids(), braid.dn_word(n).letters):
        out.append((cid, CensusId.t2_composite(i) if e < 0 else CensusId.unknot()))
    return out


def _fp_of(cid: CensusId):
    if cid.tag == "T2Composite":
        return reference_fingerprint(cid.k)
    return jones_fingerprint(braid.closure(braid.BraidWord(1)))


@dataclass(frozen=True)
class CensusEntry:
    crossing: int
    sign: int
    predicted: CensusId
    identified: CensusId
    u: UInterval

    def to_json(self) -> dict:
        return {
            "crossing": self.crossing,
            "sign": self.sign,
            "predicted": str(self.predicted),
            "identified": str(self.identified),
            "u": self.u.to_json(),
        }


def census(n: int, assume_conjecture: bool = False, cap: int | None = None) -> list[CensusEntry]:
    """Identify every smoothing of ``D_n`` by fingerprint and check it against its braid position."""
    _check_n(n, cap, CENSUS_CAP)
    d = braid.closure(braid.dn_word(n))
    out = []
    for c, pred in predicted_census(n):
        e = smooth(d, c)
        fp = jones_fingerprint(e)
        if fp != _fp_of(pred):
            raise CrossCheckError(f"crossing {c}: smoothing fingerprint {fp} does not match {pred}")
        found = identify(e, max_k=max(n, 2))
        out.append(CensusEntry(c, d.signs[c], pred, found, u_table(pred, assume_conjecture)))
    return out


@dataclass
class DnReport:
    n: int
    assume_conjecture: bool
    positive: int
    negative: int
    writhe: int
    components: int
    tally: dict[str, int]
    sequence_length: int
    iu: Interval
    iu_pp: Interval
    iu_closed_form: Interval
    all_move_bound_conjectural: Fraction
    all_move_bound_certified: int
    split_iu: Interval
    split_bound_conjectural: Fraction
    split_bound_certified: int
    sigma_as_displayed: Interval
    sigma_consistent: Interval
    sigma_estimate: Fraction
    census: list[CensusEntry] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        def q(x):
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else str(x)

        return {
            "n": self.n,
            "assume_conjecture": self.assume_conjecture,
            "crossings": {"positive": self.positive, "negative": self.negative},
            "writhe": self.writhe,
            "components": self.components,
            "sequence": {"length": self.sequence_length, "tally": self.tally},
            "iu": self.iu.to_json(),
            "iu_pp": self.iu_pp.to_json(),
            "iu_closed_form": self.iu_closed_form.to_json(),
            "all_move_bound": {
                "conjectural": q(self.all_move_bound_conjectural),
                "certified": self.all_move_bound_certified,
            },
            "split": {
                "iu": self.split_iu.to_json(),
                "conjectural": q(self.split_bound_conjectural),
                "certified": self.split_bound_certified,
            },
            "sigma_as_displayed": self.sigma_as_displayed.to_json(),
            "sigma_consistent": self.sigma_consistent.to_json(),
            "sigma_estimate": q(self.sigma_estimate),
            "census": [e.to_json() for e in self.census],
            "checks": self.checks,
        }

    def to_text(self) -> str:
        rows = [
            ("n", self.n),
            ("conjecture assumed", "yes" if self.assume_conjecture else "no"),
            ("crossings (+/-)", f"{self.positive}/{self.negative}"),
            ("writhe", self.writhe),
            ("components", self.components),
            ("unlinking sequence", self.sequence_length),
            ("  RI deleting +", self.tally.get("RI-delete-positive", 0)),
            ("  matched RII deleting", self.tally.get("RII-delete-matched", 0)),
            ("  RIII", self.tally.get("RIII", 0)),
            ("iu", self.iu),
            ("iu(+1,+1)", self.iu_pp),
            ("move bound (conjectural)", _q(self.all_move_bound_conjectural)),
            ("move bound (certified)", self.all_move_bound_certified),
            ("split |iu'|/2 (conjectural)", _q(self.split_bound_conjectural)),
            ("split bound (certified)", self.split_bound_certified),
            ("sigma as displayed", self.sigma_as_displayed),
            ("sigma with factor 2", self.sigma_consistent),
        ]
        w = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(w)}  {v}" for k, v in rows]
        if self.census:
            lines.append("")
            lines.append("crossing  sign  smoothing        u")
            for e in self.census:
                lines.append(f"{e.crossing:>8}  {e.sign:>+4}  {str(e.predicted):<15}  {e.u}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _closed_form(n: int, assume_conjecture: bool, factor: int) -> Interval:
    total = sum((table_interval(k, assume_conjecture) for k in range(1, n)), Interval.exact(0))
    return total.scale(factor) + table_interval(n, assume_conjecture)


def sigma_estimate(n: int) -> Fraction:
    """Parity-dependent lower estimate of the iu closed form, without the conjecture."""
    return Fraction(n * n + 4 * n - (8 if n % 2 == 0 else 9), 2)


def split_conjectural(n: int) -> Fraction:
    return Fraction(n * n - 2 * n, 4) if n % 2 == 0 else Fraction(n * n - 2 * n + 1, 4)


def report(n: int, assume_conjecture: bool = False, cap: int | None = None) -> DnReport:
    _check_n(n, cap, CENSUS_CAP)
    d = build(n, cap=max(n, MOVE_CAP))
    final, tally = verify_sequence(d, unknotting_sequence(n, cap=max(n, MOVE_CAP)))
    length = tally.total
    checks: dict[str, bool] = {}

    def expect(name: str, ok: bool, detail: str) -> None:
        checks[name] = ok
        if not ok:
            raise CrossCheckError(f"{name}: {detail}")

    expect("sequence unlinks", final.num_crossings == 0 and final.free_loops == 2, f"final {final}")
    expect(
        "sequence tally",
        (tally.count("RI", "delete", "+"), tally.count("RII", "delete", "matched"), tally.count("RIII"))
        == (n - 1, n, n * (n - 1) // 2),
        str(tally.as_dict()),
    )

    entries = census(n, assume_conjecture, cap)
    by_crossing = {e.crossing: e for e in entries}
    # triviality of the link is pinned by the replayed sequence
    oracle = TableOracle(assume_conjecture)
    v = iu(d, oracle, UInterval.exact(0))
    v.check()
    for t in v.breakdown:
        want = by_crossing[t.crossing].u
        expect(f"crossing {t.crossing} u", t.u == want, f"oracle gave {t.u}, table {want}")
    vpp = iu_eps_delta(d, 1, 1, oracle)
    closed = _closed_form(n, assume_conjecture, 2)
    expect("iu crossing-wise = closed form", v.interval == closed, f"{v.interval} vs {closed}")
    expect("shift 3n-2", vpp.shift == 3 * n - 2, f"shift {vpp.shift}")

    conj_iu = _closed_form(n, True, 2)
    expect("conjectural iu = n^2 - n", conj_iu == n * n - n, str(conj_iu))
    if assume_conjecture:
        expect("iu(+1,+1) = n^2 + 2n - 2", vpp.interval == n * n + 2 * n - 2, str(vpp.interval))

    certified_iu = _closed_form(n, False, 2)
    est = sigma_estimate(n)
    expect("certified iu >= estimate", certified_iu.lo >= est, f"{certified_iu.lo} < {est}")

    bound_conj = Fraction(3 * n - 2 + conj_iu.lo, 2)
    bound_cert = math.ceil(Fraction(3 * n - 2 + certified_iu.lo, 2))
    expect("conjectural bound formula", bound_conj == Fraction(n * n + 2 * n - 2, 2), str(bound_conj))
    expect("bounds <= sequence length", bound_cert <= length and bound_conj <= length, f"{length}")
    expect("sequence length formula", 2 * length == n * n + 3 * n - 2, str(length))

    lab = components(d)
    part = SplitPartition({0}, {1})
    sv = iu_split(d, part, oracle)
    sv_conj = iu_split(d, part, TableOracle(True))
    sv_cert = iu_split(d, part, TableOracle(False))
    split_conj = sv_conj.interval.magnitude().scale(Fraction(1, 2))
    expect("split conjectural", split_conj == split_conjectural(n), f"{split_conj} vs {split_conjectural(n)}")
    split_cert = math.ceil(sv_cert.interval.magnitude().lo / 2)
    expect("split certified >= n-2", split_cert >= n - 2, f"{split_cert} < {n - 2}")

    sg = list(d.signs.values())
    return DnReport(
        n=n,
        assume_conjecture=assume_conjecture,
        positive=sg.count(1),
        negative=sg.count(-1),
        writhe=writhe(d),
        components=lab.count,
        tally=tally.as_dict(),
        sequence_length=length,
        iu=v.interval,
        iu_pp=vpp.interval,
        iu_closed_form=closed,
        all_move_bound_conjectural=bound_conj,
        all_move_bound_certified=bound_cert,
        split_iu=sv.interval,
        split_bound_conjectural=split_conj.lo,
        split_bound_certified=split_cert,
        sigma_as_displayed=_closed_form(n, assume_conjecture, 1),
        sigma_consistent=closed,
        sigma_estimate=est,
        census=entries,
        checks=checks,
    )


def export_sequence(n: int) -> str:
    return format_moves(unknotting_sequence(n, cap=max(n, MOVE_CAP)))
