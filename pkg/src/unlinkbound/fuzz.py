"""Randomized property suites over the move engine and the invariants.

Every suite takes a :class:`random.Random` and a sample count and returns a
:class:`SuiteResult`; runs are deterministic for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import braid, moves
from .diagram import (
    Diagram,
    Face,
    _pieces as _diagram_pieces,
    _trace_faces,
    canonical_key,
    change_crossing,
    components,
    crossing_sign,
    relabel,
    reverse_components,
    smooth,
    validate,
)
from .invariants import bracket_brute_force, jones_fingerprint, kauffman_bracket, linking_matrix, total_linking
from .iu import iu_generic

__all__ = ["SuiteResult", "random_diagram", "random_bigons", "SUITES", "run_all"]


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        if len(self.violations) < 20:
            self.violations.append(msg)
        else:
            self.violations[-1] = f"... and more (last: {msg})"

    def __str__(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {len(self.violations)} violations"


def random_word(rng: random.Random, max_strands: int = 4, max_len: int = 8) -> braid.BraidWord:
    s = rng.randint(2, max_strands)
    n = rng.randint(1, max_len)
    return braid.BraidWord(s, tuple((rng.randint(1, s - 1), rng.choice((1, -1))) for _ in range(n)))


def random_move(rng: random.Random, d: Diagram, max_crossings: int = 12, creations: bool = True):
    sites = moves.enumerate_sites(d, creations=creations)
    room = max_crossings - d.num_crossings
    sites = [m for m in sites if m.direction != "create" or (2 if m.kind == "RII" else 1) <= room]
    return rng.choice(sites) if sites else None


def random_diagram(rng: random.Random, max_crossings: int = 12, scramble: int = 4) -> Diagram:
    """A scrambled braid closure, possibly with some components reversed."""
    d = braid.closure(random_word(rng, max_len=min(8, max_crossings)))
    m = components(d).count
    flip = [i for i in range(m) if rng.random() < 0.5]
    if flip:
        d = reverse_components(d, flip)
    for _ in range(rng.randint(0, scramble)):
        mv = random_move(rng, d, max_crossings)
        if mv is None:
            break
        d = moves.apply(d, mv)
    return d


def random_bigons(d: Diagram) -> list[Face]:
    return [f for f in _trace_faces(d) if f.degree == 2 and moves._bigon_ok(d, f.corners) is None]


# ---------------------------------------------------------------------------
# suites


def suite_move_invariance(rng: random.Random, count: int) -> SuiteResult:
    """Validity, components, linking and fingerprint survive every move."""
    r = SuiteResult("move invariance")
    while r.checked < count:
        d = random_diagram(rng)
        mv = random_move(rng, d)
        if mv is None:
            continue
        e = moves.apply(d, mv)
        r.checked += 1
        tag = f"{moves.format_move(mv)} on {canonical_key(d)!r:.60}"
        if validate(e):
            r.fail(f"invalid result: {validate(e)} after {tag}")
            continue
        if len(_trace_faces(e)) != e.num_crossings + 2 * _pieces(e) and e.num_crossings:
            r.fail(f"face count after {tag}")
        if components(e).count != components(d).count:
            r.fail(f"component count changed by {tag}")
        if linking_matrix(e).canonical() != linking_matrix(d).canonical():
            r.fail(f"linking matrix changed by {tag}")
        if jones_fingerprint(e) != jones_fingerprint(d):
            r.fail(f"fingerprint changed by {tag}")
    return r


def _pieces(d: Diagram) -> int:
    return len(_diagram_pieces(d))


def suite_bracket_oracle(rng: random.Random, count: int) -> SuiteResult:
    """Contraction agrees with the full state sum up to 10 crossings."""
    r = SuiteResult("bracket oracle")
    while r.checked < count:
        d = random_diagram(rng, max_crossings=10)
        r.checked += 1
        if kauffman_bracket(d) != bracket_brute_force(d):
            r.fail(f"bracket mismatch on {canonical_key(d)!r:.60}")
    return r


def surrogate_bound(m: moves.MoveRecord) -> int:
    """Allowed change of the linking-number surrogate under one move."""
    if m.kind == "RI":
        return 0
    if m.kind == "RII":
        return 1 if m.matched else 0
    return 2


def suite_surrogate(rng: random.Random, count: int) -> SuiteResult:
    """The smoothing sum over total linking changes by 0 / 0 / 1 / 2 under RI / unmatched RII / matched RII / RIII."""
    r = SuiteResult("surrogate iu bounds")
    while r.checked < count:
        d = random_diagram(rng)
        base = iu_generic(d, total_linking)
        sites = moves.enumerate_sites(d, creations=True)
        sites = [m for m in sites if m.direction != "create" or d.num_crossings + 2 <= 12]
        for mv in rng.sample(sites, min(len(sites), 6)):
            e = moves.apply(d, mv)
            delta = abs(iu_generic(e, total_linking) - base)
            r.checked += 1
            if delta > surrogate_bound(mv):
                r.fail(f"{moves.format_move(mv)} changed the surrogate by {delta}")
    return r


def rii_semantic_violation(
    d: Diagram, corners: tuple, classify: Callable[[Diagram, tuple], str] = moves.classify_r2
) -> str | None:
    """Check one bigon against what its classification predicts about the corner smoothings."""
    (x, _), (y, _) = corners
    kind = classify(d, corners)
    dx, dy = smooth(d, x), smooth(d, y)
    if components(dx).count != components(dy).count:
        return f"{kind} bigon {corners}: smoothings have different component counts"
    if kind == "unmatched":
        if jones_fingerprint(dx) != jones_fingerprint(dy):
            return f"unmatched bigon {corners}: smoothings have different fingerprints"
        return None
    # matched: changing y in D_x gives D_y exactly, up to renaming the crossing
    changed = change_crossing(dx, y)
    if canonical_key(changed) != canonical_key(dy):
        return f"matched bigon {corners}: D_x with y changed is not D_y"
    return None


def suite_rii_semantic(
    rng: random.Random, count: int, classify: Callable[[Diagram, tuple], str] = moves.classify_r2
) -> SuiteResult:
    r = SuiteResult("RII classification")
    kinds = {"matched": 0, "unmatched": 0}
    while r.checked < count:
        d = random_diagram(rng)
        for f in random_bigons(d):
            r.checked += 1
            kinds[moves.classify_r2(d, f.corners)] += 1
            msg = rii_semantic_violation(d, f.corners, classify)
            if msg:
                r.fail(msg)
    if not kinds["matched"] or not kinds["unmatched"]:
        r.fail(f"sample did not cover both classes: {kinds}")
    return r


def suite_inverse(rng: random.Random, count: int) -> SuiteResult:
    """A move followed by its inverse record gives back an isomorphic diagram."""
    r = SuiteResult("move inverses")
    while r.checked < count:
        d = random_diagram(rng)
        mv = random_move(rng, d)
        if mv is None:
            continue
        r.checked += 1
        e = moves.apply(d, mv)
        try:
            back = moves.apply(e, moves.inverse(d, mv))
        except moves.IllegalMove as exc:
            r.fail(f"no inverse for {moves.format_move(mv)}: {exc}")
            continue
        if not moves.isomorphic(back, d):
            r.fail(f"inverse of {moves.format_move(mv)} is not the original")
    return r


def suite_smoothing(rng: random.Random, count: int) -> SuiteResult:
    """Smoothing adds a component at self-crossings and merges two elsewhere; signs survive relabeling."""
    r = SuiteResult("smoothing and signs")
    while r.checked < count:
        d = random_diagram(rng)
        lab = components(d)
        ids = list(d.signs)
        mapping = {c: 100 + k for k, c in enumerate(rng.sample(ids, len(ids)))}
        rd = relabel(d, mapping)
        for c in ids:
            r.checked += 1
            e = smooth(d, c)
            if validate(e):
                r.fail(f"smoothing at {c} invalid")
            under, over = lab.of_crossing(d, c)
            want = lab.count + (1 if under == over else -1)
            if components(e).count != want:
                r.fail(f"smoothing at {c}: {components(e).count} components, expected {want}")
            if crossing_sign(rd, mapping[c]) != crossing_sign(d, c):
                r.fail(f"sign of {c} changed under relabeling")
            lk0 = total_linking(d)
            lk1 = total_linking(change_crossing(d, c))
            if abs(lk1 - lk0) > (0 if under == over else 1):
                r.fail(f"crossing change at {c} moved total linking by {abs(lk1 - lk0)}")
    return r


def suite_destabilize(rng: random.Random, count: int) -> SuiteResult:
    """Destabilizing steps keep the closure's fingerprint."""
    r = SuiteResult("braid steps")
    params = [(k, m, l) for k in range(1, 5) for m in range(2, 6) for l in range(0, 6)]
    rng.shuffle(params)
    for k, m, ell in params[:count]:
        letters = [(1, -1)] * k
        for j in range(2, m + 1):
            letters += [(j, -1), (j - 1, -1)]
        letters += [(m, 1)] * ell
        b = braid.BraidWord(m + 1, tuple(letters))
        nb, recs = braid.destabilize(b)
        r.checked += 1
        if jones_fingerprint(braid.closure(b)) != jones_fingerprint(braid.closure(nb)):
            r.fail(f"fingerprint changed for k={k} m={m} l={ell}")
        if len(recs) != k + 1:
            r.fail(f"k={k} m={m} l={ell}: {len(recs)} records")
    return r


SUITES: dict[str, tuple[Callable[[random.Random, int], SuiteResult], int]] = {
    "move-invariance": (suite_move_invariance, 300),
    "bracket-oracle": (suite_bracket_oracle, 100),
    "surrogate": (suite_surrogate, 600),
    "rii-semantic": (suite_rii_semantic, 200),
    "inverse": (suite_inverse, 200),
    "smoothing": (suite_smoothing, 300),
    "braid-steps": (suite_destabilize, 40),
}


def run_all(seed: int = 0, scale: float = 1.0, only: list[str] | None = None) -> list[SuiteResult]:
    out = []
    for name, (fn, default) in SUITES.items():
        if only and name not in only:
            continue
        out.append(fn(random.Random(f"{seed}:{name}"), max(1, int(default * scale))))
    return out
