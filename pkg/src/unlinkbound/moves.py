"""Reidemeister moves on diagrams: site enumeration, application, replay.

A :class:`MoveRecord` names its site by face corners ``(crossing, j)`` (see
:class:`~unlinkbound.diagram.Face`), so a record can be replayed and
re-checked on a later diagram.  :func:`apply` re-verifies the whole local
pattern before touching anything; a record replayed on the wrong diagram
fails with :class:`IllegalMove` instead of producing garbage.

Conventions:

* RI sites carry the sign of the crossing created or deleted.
* RII sites are matched when the two strands of the bigon run the same way
  through it (coherent) and unmatched when they run opposite ways.
* RIII uses the classical triangle condition: of the three triangle edges
  one is over at both ends and one is under at both ends.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .diagram import (
    Diagram,
    Face,
    Port,
    _trace_faces,
    canonical_key,
    excise,
    exact_key,
    over_in,
    validate,
)

__all__ = [
    "MoveRecord",
    "MoveTally",
    "IllegalMove",
    "SequenceError",
    "enumerate_sites",
    "classify_r2",
    "apply",
    "verify_sequence",
    "inverse",
    "simplify",
    "format_move",
    "parse_move",
    "format_moves",
    "parse_moves",
]


class IllegalMove(ValueError):
    pass


class SequenceError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class MoveRecord:
    kind: str  # "RI" | "RII" | "RIII"
    direction: str | None = None  # "create" | "delete"; None for RIII
    corners: tuple[Port, ...] = ()
    sign: int | None = None
    matched: bool | None = None
    # creation sites: RI+ takes the tail port of an arc (empty = a free loop);
    # RII+ takes two face-edge start ports of one face, None standing for a free loop
    sides: tuple[Port | None, ...] = ()
    over_first: bool | None = None
    new_ids: tuple[int, ...] = ()
    # RII+ of one arc (or loop) with itself: "ef" or "fe", the order of the two strands along it
    fold: str | None = None

    @property
    def crossings(self) -> tuple[int, ...]:
        if self.direction == "create":
            return self.new_ids
        return tuple(c for c, _ in self.corners)

    @property
    def classification(self) -> str | None:
        if self.kind == "RI":
            return "+" if self.sign and self.sign > 0 else "-"
        if self.kind == "RII":
            return "matched" if self.matched else "unmatched"
        return None

    @property
    def key(self) -> tuple[str, str | None, str | None]:
        return (self.kind, self.direction, self.classification)

    def __str__(self) -> str:
        return format_move(self)


class MoveTally(Counter):
    """Counts per ``(kind, direction, classification)``."""

    def count(self, kind: str, direction: str | None = None, cls: str | None = None) -> int:
        return sum(
            v
            for (k, dr, c), v in self.items()
            if k == kind and (direction is None or dr == direction) and (cls is None or c == cls)
        )

    @property
    def total(self) -> int:
        return sum(self.values())

    def as_dict(self) -> dict[str, int]:
        out = {}
        for (k, dr, c), v in sorted(self.items(), key=lambda kv: tuple(str(x) for x in kv[0])):
            name = k
            if dr:
                name += "-" + dr
            if c:
                name += "-" + ("positive" if c == "+" else "negative" if c == "-" else c)
            out[name] = v
        return out


# ---------------------------------------------------------------------------
# local pattern checks


def _is_monogon(d: Diagram, corner: Port) -> bool:
    c, j = corner
    return d.partner.get((c, (j + 1) % 4)) == corner


def _bigon_ok(d: Diagram, corners: tuple[Port, ...]) -> str | None:
    if len(corners) != 2:
        return "not a bigon"
    (c1, j1), (c2, j2) = corners
    if c1 == c2:
        return "bigon corners lie on one crossing"
    if c1 not in d.signs or c2 not in d.signs:
        return "unknown crossing"
    if d.partner.get((c1, (j1 + 1) % 4)) != (c2, j2) or d.partner.get((c2, (j2 + 1) % 4)) != (c1, j1):
        return "corners do not bound a bigon face"
    if ((j1 + 1) - j2) % 2:
        return "bigon is alternating (no strand lies over at both corners)"
    if d.signs[c1] == d.signs[c2]:
        return "bigon corners have equal signs"
    return None


def _bigon_matched(d: Diagram, corners: tuple[Port, ...]) -> bool:
    (c1, j1), (c2, j2) = corners
    e1_along = not d.is_incoming((c1, (j1 + 1) % 4))
    e2_along = not d.is_incoming((c2, (j2 + 1) % 4))
    return e1_along != e2_along


def _trigon_ok(d: Diagram, corners: tuple[Port, ...]) -> str | None:
    if len(corners) != 3:
        return "not a trigon"
    cs = [c for c, _ in corners]
    if len(set(cs)) != 3:
        return "trigon corners are not three distinct crossings"
    if any(c not in d.signs for c in cs):
        return "unknown crossing"
    for k in range(3):
        c, j = corners[k]
        nxt = corners[(k + 1) % 3]
        if d.partner.get((c, (j + 1) % 4)) != nxt:
            return "corners do not bound a trigon face"
    # edge k runs from port j_k+1 at corner k to port j_{k+1} at corner k+1
    flat = 0
    for k in range(3):
        j = corners[k][1]
        jn = corners[(k + 1) % 3][1]
        if ((j + 1) - jn) % 2 == 0:
            flat += 1
    if flat == 0:
        return "trigon is alternating"
    return None


def classify_r2(d: Diagram, bigon: Face | tuple[Port, ...]) -> str:
    corners = bigon.corners if isinstance(bigon, Face) else tuple(bigon)
    err = _bigon_ok(d, corners)
    if err:
        raise IllegalMove(err)
    return "matched" if _bigon_matched(d, corners) else "unmatched"


# ---------------------------------------------------------------------------
# enumeration


def enumerate_sites(d: Diagram, creations: bool = False) -> list[MoveRecord]:
    """Legal move sites of ``d`` in a deterministic order.

    Deletions collapse to one record per distinct (kind, crossings,
    classification); every trigon satisfying the triangle condition is
    listed.  With ``creations`` also lists RI+ on every arc (both signs, both
    strand orders) and RII+ on every pair of distinct edges of a face.
    """
    out: list[MoveRecord] = []
    fl = _trace_faces(d)
    seen: set = set()
    for f in fl:
        if f.degree == 1:
            c = f.corners[0][0]
            if ("RI", c) in seen:
                continue
            seen.add(("RI", c))
            out.append(MoveRecord("RI", "delete", f.corners, sign=d.signs[c]))
    for f in fl:
        if f.degree == 2 and _bigon_ok(d, f.corners) is None:
            m = _bigon_matched(d, f.corners)
            k = ("RII", frozenset(f.crossings), m)
            if k in seen:
                continue
            seen.add(k)
            out.append(MoveRecord("RII", "delete", f.corners, matched=m))
    for f in fl:
        if f.degree == 3 and _trigon_ok(d, f.corners) is None:
            out.append(MoveRecord("RIII", None, f.corners))
    if creations:
        out.extend(_creation_sites(d, fl))
    return out


def _creation_sites(d: Diagram, fl: list[Face]) -> Iterator[MoveRecord]:
    nid = d.next_crossing_id()
    tails: list[Port | None] = [t for t, _ in d.arcs()]
    if d.free_loops:
        tails.append(None)
    for t in tails:
        for s in (1, -1):
            for first in (False, True):
                yield MoveRecord(
                    "RI", "create", sign=s, sides=() if t is None else (t,), over_first=first, new_ids=(nid,)
                )
    for f in fl:
        starts = [(c, (j + 1) % 4) for c, j in f.corners]
        arcs = [_arc_id(d, p) for p in starts]
        for a in range(len(starts)):
            for b in range(a + 1, len(starts)):
                if arcs[a] == arcs[b]:
                    continue
                for first in (True, False):
                    pe, pf = starts[a], starts[b]
                    m = d.is_incoming(pe) != d.is_incoming(pf)
                    yield MoveRecord(
                        "RII", "create", matched=m, sides=(pe, pf), over_first=first, new_ids=(nid, nid + 1)
                    )
    if d.free_loops:
        loop_sides: list[Port | None] = [(c, (j + 1) % 4) for f in fl for c, j in f.corners]
        if d.free_loops > 1:
            loop_sides.append(None)
        for pe in loop_sides:
            for m in (True, False):
                for first in (True, False):
                    yield MoveRecord(
                        "RII", "create", matched=m, sides=(pe, None), over_first=first, new_ids=(nid, nid + 1)
                    )


def _fold_sites(d: Diagram) -> Iterator[MoveRecord]:
    """RII+ sites folding one arc, or one free loop, across itself."""
    nid = d.next_crossing_id()
    starts = [(c, (j + 1) % 4) for f in _trace_faces(d) for c, j in f.corners]
    if d.free_loops:
        starts.append(None)
    for p in starts:
        for fold in ("ef", "fe") if p is not None else ("ef",):
            for m in (True, False):
                for first in (True, False):
                    yield MoveRecord(
                        "RII", "create", matched=m, sides=(p, p), over_first=first,
                        new_ids=(nid, nid + 1), fold=fold,
                    )


def _arc_id(d: Diagram, p: Port) -> Port:
    return d.partner[p] if d.is_incoming(p) else p


# ---------------------------------------------------------------------------
# application


def apply(d: Diagram, m: MoveRecord) -> Diagram:
    if m.kind == "RI" and m.direction == "delete":
        return _r1_delete(d, m)
    if m.kind == "RI" and m.direction == "create":
        return _r1_create(d, m)
    if m.kind == "RII" and m.direction == "delete":
        return _r2_delete(d, m)
    if m.kind == "RII" and m.direction == "create":
        return _r2_create(d, m)
    if m.kind == "RIII":
        return _r3(d, m)
    raise IllegalMove(f"unknown move {m.kind}/{m.direction}")


_THROUGH = {0: 2, 2: 0, 1: 3, 3: 1}


def _through(cs: Iterable[int]) -> dict[Port, Port]:
    return {(c, i): (c, _THROUGH[i]) for c in cs for i in range(4)}


def _r1_delete(d: Diagram, m: MoveRecord) -> Diagram:
    if len(m.corners) != 1:
        raise IllegalMove("RI deletion needs one corner")
    corner = m.corners[0]
    c, j = corner
    if c not in d.signs:
        raise IllegalMove(f"unknown crossing {c}")
    if j < 0:
        cands = [(c, k) for k in range(4) if _is_monogon(d, (c, k))]
        if not cands:
            raise IllegalMove(f"no monogon at crossing {c}")
    elif not _is_monogon(d, corner):
        raise IllegalMove(f"corner {corner} is not a monogon")
    if m.sign is not None and d.signs[c] != m.sign:
        raise IllegalMove(f"crossing {c} has sign {d.signs[c]:+d}, record says {m.sign:+d}")
    return excise(d, [c], _through([c]))


def _r1_create(d: Diagram, m: MoveRecord) -> Diagram:
    if m.sign not in (1, -1) or m.over_first is None or len(m.new_ids) != 1:
        raise IllegalMove("RI creation needs sign, strand order and one new id")
    x = m.new_ids[0]
    if x in d.signs:
        raise IllegalMove(f"crossing id {x} already in use")
    oi = over_in(m.sign)
    oo = (oi + 2) % 4
    if m.over_first:
        in1, out1, in2, out2 = oi, oo, 0, 2
    else:
        in1, out1, in2, out2 = 0, 2, oi, oo
    partner = dict(d.partner)
    loops = d.free_loops
    p_in1, p_out1, p_in2, p_out2 = (x, in1), (x, out1), (x, in2), (x, out2)
    partner[p_out1] = p_in2
    partner[p_in2] = p_out1
    if not m.sides:
        if loops < 1:
            raise IllegalMove("no free loop for RI creation")
        loops -= 1
        partner[p_out2] = p_in1
        partner[p_in1] = p_out2
    else:
        t = m.sides[0]
        if t not in d.partner or d.is_incoming(t):
            raise IllegalMove(f"{t} is not the tail of an arc")
        h = d.partner[t]
        partner[t], partner[p_in1] = p_in1, t
        partner[p_out2], partner[h] = h, p_out2
    signs = dict(d.signs)
    signs[x] = m.sign
    return Diagram(signs, partner, loops)


def _r2_delete(d: Diagram, m: MoveRecord) -> Diagram:
    err = _bigon_ok(d, m.corners)
    if err:
        raise IllegalMove(err)
    matched = _bigon_matched(d, m.corners)
    if m.matched is not None and matched != m.matched:
        raise IllegalMove(f"bigon is {'matched' if matched else 'unmatched'}, record says otherwise")
    cs = [c for c, _ in m.corners]
    return excise(d, cs, _through(cs))


# direction slots around a new RII crossing, counterclockwise
_N, _W, _S, _E = 0, 1, 2, 3


def _ports_from(in_dir: int) -> dict[int, int]:
    """direction -> port index when the under-strand enters from ``in_dir``."""
    return {(in_dir + k) % 4: k for k in range(4)}


def _r2_create(d: Diagram, m: MoveRecord) -> Diagram:
    if len(m.sides) != 2 or m.over_first is None or len(m.new_ids) != 2:
        raise IllegalMove("RII creation needs two sides, an over choice and two new ids")
    x, y = m.new_ids
    if x == y or x in d.signs or y in d.signs:
        raise IllegalMove("new crossing ids must be fresh")
    pe, pf = m.sides
    fl = _trace_faces(d)
    all_starts = {(c, (j + 1) % 4) for f in fl for c, j in f.corners}
    for p in (pe, pf):
        if p is not None and p not in all_starts:
            raise IllegalMove(f"{p} is not a face edge")
    if m.fold is not None:
        if pe != pf or m.fold not in ("ef", "fe"):
            raise IllegalMove("a fold takes one side twice and an order ef or fe")
        loops_used = 1 if pe is None else 0
        e_along = f_along = pe is None or not d.is_incoming(pe)
    else:
        if pe is None and pf is not None:
            raise IllegalMove("a free loop side must come second")
        loops_used = (pe is None) + (pf is None)
        if pf is not None:
            if not any(pe in st and pf in st for st in ([(c, (j + 1) % 4) for c, j in f.corners] for f in fl)):
                raise IllegalMove("sides do not lie on a common face")
            if _arc_id(d, pe) == _arc_id(d, pf):
                raise IllegalMove("sides lie on the same arc")
            e_along = not d.is_incoming(pe)
            f_along = not d.is_incoming(pf)
        else:
            if m.matched is None:
                raise IllegalMove("a free loop side needs a classification")
            e_along = pe is None or not d.is_incoming(pe)
            f_along = e_along != m.matched
    if loops_used > d.free_loops:
        raise IllegalMove("not enough free loops")
    e_over = m.over_first

    # e runs N->S through x and S->N through y; f runs E->W through both
    if e_over:
        x_in = _E if f_along else _W
        y_in = _E if f_along else _W
    else:
        x_in = _N if e_along else _S
        y_in = _S if e_along else _N
    px = _ports_from(x_in)
    py = _ports_from(y_in)

    def X(direction: int) -> Port:
        return (x, px[direction])

    def Y(direction: int) -> Port:
        return (y, py[direction])

    def sign_of(ports: dict[int, int], e_dir_in: int, f_dir_in: int) -> int:
        over_dir = e_dir_in if e_over else f_dir_in
        return 1 if ports[over_dir] == 3 else -1

    sx = sign_of(px, _N if e_along else _S, _E if f_along else _W)
    sy = sign_of(py, _S if e_along else _N, _E if f_along else _W)
    e_start, e_end, f_start, f_end = X(_N), Y(_N), Y(_E), X(_W)
    links = [(X(_S), Y(_S)), (Y(_W), X(_E))]
    if m.fold is None:
        for start, end, p in ((e_start, e_end, pe), (f_start, f_end, pf)):
            links += [(p, start), (end, d.partner[p])] if p is not None else [(end, start)]
    elif pe is None:
        links += [(e_end, f_start), (f_end, e_start)]
    elif m.fold == "ef":
        links += [(pe, e_start), (e_end, f_start), (f_end, d.partner[pe])]
    else:
        links += [(pe, f_start), (f_end, e_start), (e_end, d.partner[pe])]
    partner = dict(d.partner)
    for a, b in links:
        partner[a] = b
        partner[b] = a
    signs = dict(d.signs)
    signs[x] = sx
    signs[y] = sy
    out = Diagram(signs, partner, d.free_loops - loops_used)
    if m.fold is not None and validate(out):
        raise IllegalMove("fold does not fit in the plane")
    bigon = ((x, px[_S]), (y, py[_W]))
    if m.matched is not None and _bigon_matched(out, bigon) != m.matched:
        raise IllegalMove("created bigon classification differs from record")
    return out


def created_bigon(d_after: Diagram, m: MoveRecord) -> tuple[Port, Port]:
    """Corners of the bigon produced by an RII creation record."""
    x, y = m.new_ids
    for f in _trace_faces(d_after):
        if f.degree == 2 and set(f.crossings) == {x, y} and _bigon_ok(d_after, f.corners) is None:
            if m.matched is None or _bigon_matched(d_after, f.corners) == m.matched:
                return f.corners
    raise IllegalMove("no bigon between the new crossings")


def _r3(d: Diagram, m: MoveRecord) -> Diagram:
    err = _trigon_ok(d, m.corners)
    if err:
        raise IllegalMove(err)
    (a, ja), (b, jb), (c, jc) = m.corners

    def P(cr: int, k: int) -> Port:
        return (cr, k % 4)

    # each outer end of a triangle line reattaches to the crossing that line
    # now meets first from that side
    ext = {
        P(a, ja + 3): P(b, jb),
        P(b, jb + 2): P(a, ja + 1),
        P(b, jb + 3): P(c, jc),
        P(c, jc + 2): P(b, jb + 1),
        P(c, jc + 3): P(a, ja),
        P(a, ja + 2): P(c, jc + 1),
    }
    old = d.partner
    tri = {a, b, c}
    partner = {p: q for p, q in old.items() if p[0] not in tri}
    for q_old, q_new in ext.items():
        r = old[q_old]
        r_new = ext.get(r, r)
        partner[q_new] = r_new
        partner[r_new] = q_new
    for p, q in ((P(a, ja + 3), P(b, jb + 2)), (P(b, jb + 3), P(c, jc + 2)), (P(c, jc + 3), P(a, ja + 2))):
        partner[p] = q
        partner[q] = p
    return Diagram(dict(d.signs), partner, d.free_loops)


def r3_result_corners(m: MoveRecord) -> tuple[Port, ...]:
    return tuple((c, (j + 2) % 4) for c, j in m.corners)


# ---------------------------------------------------------------------------
# sequences


def verify_sequence(d0: Diagram, seq: Iterable[MoveRecord]) -> tuple[Diagram, MoveTally]:
    d = d0
    tally = MoveTally()
    for k, m in enumerate(seq, start=1):
        try:
            d = apply(d, m)
        except IllegalMove as exc:
            raise SequenceError(k, str(exc)) from None
        tally[m.key] += 1
    return d, tally


def inverse(d: Diagram, m: MoveRecord) -> MoveRecord:
    """A record undoing ``m`` on ``apply(d, m)``; crossing ids are restored."""
    after = apply(d, m)
    if m.kind == "RIII":
        return MoveRecord("RIII", None, r3_result_corners(m))
    if m.kind == "RI" and m.direction == "create":
        x = m.new_ids[0]
        corner = next((x, k) for k in range(4) if _is_monogon(after, (x, k)))
        return MoveRecord("RI", "delete", (corner,), sign=m.sign)
    if m.kind == "RII" and m.direction == "create":
        return MoveRecord("RII", "delete", created_bigon(after, m), matched=m.matched)
    if m.kind == "RI" and m.direction == "delete":
        c = m.corners[0][0]
        s = d.signs[c]
        ext_in = [(c, k) for k in range(4) if d.is_incoming((c, k)) and d.partner[(c, k)][0] != c]
        if not ext_in:
            # a 1-crossing circle: the kink sits on a free loop
            for first in (False, True):
                cand = MoveRecord("RI", "create", sign=s, sides=(), over_first=first, new_ids=(c,))
                if exact_key(apply(after, cand)) == exact_key(d):
                    return cand
            raise IllegalMove("cannot invert RI deletion")
        port = ext_in[0]
        return MoveRecord(
            "RI", "create", sign=s, sides=(d.partner[port],), over_first=port[1] != 0, new_ids=(c,)
        )
    if m.kind == "RII" and m.direction == "delete":
        ids = tuple(c for c, _ in m.corners)
        target, loose = exact_key(d), canonical_key(d)
        fallback = None
        cands = [s for s in enumerate_sites(after, creations=True) if s.kind == "RII" and s.direction == "create"]
        for cand in cands + list(_fold_sites(after)):
            for new_ids in (ids, ids[::-1]):
                trial = replace(cand, new_ids=new_ids)
                try:
                    res = apply(after, trial)
                except IllegalMove:
                    continue
                if exact_key(res) == target:
                    return trial
                if fallback is None and canonical_key(res) == loose:
                    fallback = trial
        if fallback is not None:
            # free loops carry no orientation, so only an isomorphic copy may be reachable
            return fallback
        raise IllegalMove("cannot invert RII deletion")
    raise IllegalMove("unsupported move")


def reductions(d: Diagram) -> list[MoveRecord]:
    """Crossing-reducing sites in the order the simplifier tries them."""
    sites = [s for s in enumerate_sites(d) if s.direction == "delete"]
    sites.sort(key=lambda s: (s.kind != "RI", sorted(s.crossings), s.corners))
    return sites


def simplify(d: Diagram, riii_depth: int = 8, riii_states: int = 256) -> tuple[Diagram, list[MoveRecord]]:
    """Greedy crossing reduction.

    Applies RI/RII deletions while any exist.  When stuck, searches
    breadth-first through RIII moves (at most ``riii_depth`` moves deep and
    ``riii_states`` diagrams expanded) for a diagram that admits a deletion.
    Deterministic: sites are tried in crossing-id order.
    """
    moves: list[MoveRecord] = []
    while d.num_crossings:
        red = reductions(d)
        if red:
            d = apply(d, red[0])
            moves.append(red[0])
            continue
        path = _riii_unlock(d, riii_depth, riii_states)
        if path is None:
            break
        for r in path:
            d = apply(d, r)
            moves.append(r)
    return d, moves


def _riii_unlock(d: Diagram, depth: int, states: int) -> list[MoveRecord] | None:
    if depth <= 0 or states <= 0:
        return None
    seen = {exact_key(d)}
    queue: deque[tuple[Diagram, list[MoveRecord]]] = deque([(d, [])])
    expanded = 0
    while queue and expanded < states:
        cur, path = queue.popleft()
        expanded += 1
        if len(path) >= depth:
            continue
        for site in enumerate_sites(cur):
            if site.kind != "RIII":
                continue
            nxt = apply(cur, site)
            k = exact_key(nxt)
            if k in seen:
                continue
            seen.add(k)
            npath = path + [site]
            if reductions(nxt):
                return npath
            queue.append((nxt, npath))
    return None


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    return canonical_key(d1) == canonical_key(d2)


# ---------------------------------------------------------------------------
# text format


def _fmt_port(p: Port) -> str:
    return f"{p[0]}.{p[1]}"


def _parse_port(tok: str) -> Port:
    c, _, j = tok.partition(".")
    return (int(c), int(j) if j else -1)


def format_move(m: MoveRecord) -> str:
    at = ",".join(_fmt_port(p) for p in m.corners)
    if m.kind == "RI" and m.direction == "delete":
        return f"RI- sign={'+' if m.sign > 0 else '-'} at={at}"
    if m.kind == "RI":
        arc = _fmt_port(m.sides[0]) if m.sides else "loop"
        first = "over" if m.over_first else "under"
        return f"RI+ sign={'+' if m.sign > 0 else '-'} first={first} arc={arc} new={m.new_ids[0]}"
    if m.kind == "RII" and m.direction == "delete":
        return f"RII- class={m.classification} at={at}"
    if m.kind == "RII":
        sides = ",".join("loop" if p is None else _fmt_port(p) for p in m.sides)
        over = "first" if m.over_first else "second"
        new = ",".join(str(i) for i in m.new_ids)
        cls = "" if m.matched is None else f" class={m.classification}"
        fold = "" if m.fold is None else f" fold={m.fold}"
        return f"RII+{cls} over={over} sides={sides}{fold} new={new}"
    return f"RIII at={at}"


def parse_move(line: str) -> MoveRecord:
    toks = line.split()
    if not toks:
        raise ValueError("empty move line")
    head = toks[0]
    kv = {}
    for t in toks[1:]:
        if "=" not in t:
            raise ValueError(f"expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        kv[k] = v

    def ports(key: str) -> tuple[Port, ...]:
        if key not in kv:
            raise ValueError(f"{head} needs {key}=")
        return tuple(_parse_port(t) for t in kv[key].split(","))

    def sign() -> int:
        s = kv.get("sign")
        if s not in ("+", "-"):
            raise ValueError("sign must be + or -")
        return 1 if s == "+" else -1

    def cls() -> bool | None:
        c = kv.get("class")
        if c is None:
            return None
        if c not in ("matched", "unmatched"):
            raise ValueError("class must be matched or unmatched")
        return c == "matched"

    if head == "RI-":
        return MoveRecord("RI", "delete", ports("at"), sign=sign())
    if head == "RI+":
        arc = kv.get("arc", "loop")
        sides = () if arc == "loop" else (_parse_port(arc),)
        return MoveRecord(
            "RI", "create", sign=sign(), sides=sides,
            over_first=kv.get("first") == "over", new_ids=(int(kv["new"]),),
        )
    if head == "RII-":
        return MoveRecord("RII", "delete", ports("at"), matched=cls())
    if head == "RII+":
        if "sides" not in kv:
            raise ValueError("RII+ needs sides=")
        sides = tuple(None if t == "loop" else _parse_port(t) for t in kv["sides"].split(","))
        fold = kv.get("fold")
        if fold not in (None, "ef", "fe"):
            raise ValueError("fold must be ef or fe")
        return MoveRecord(
            "RII", "create", matched=cls(), sides=sides,
            over_first=kv.get("over", "first") == "first",
            new_ids=tuple(int(t) for t in kv["new"].split(",")), fold=fold,
        )
    if head == "RIII":
        return MoveRecord("RIII", None, ports("at"))
    raise ValueError(f"unknown move {head!r}")


def format_moves(seq: Iterable[MoveRecord]) -> str:
    return "".join(format_move(m) + "\n" for m in seq)


def parse_moves(text: str) -> list[MoveRecord]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_move(line))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out
