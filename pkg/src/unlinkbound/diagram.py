"""Oriented link diagrams in the 2-sphere as 4-valent combinatorial maps.

Every crossing has four ports ``0..3`` in counterclockwise order.  Port 0 is
where the under-strand comes in, so the under-strand runs ``0 -> 2``.  The
over-strand runs between ports 1 and 3; which of the two is its incoming
port is the crossing's handedness:

* ``h=R`` (right-handed, sign ``+1``): the over-strand enters at port 3,
* ``h=L`` (left-handed, sign ``-1``): the over-strand enters at port 1.

With the under-strand pointing up, ``h=R`` means the over-strand runs left to
right, which is the usual positive crossing.

Arcs are the perfect matching ``partner`` on ports.  Each arc joins an
outgoing port to an incoming port, so the matching carries both the plane
embedding (through the cyclic port order) and the orientation.  Closed
components without crossings are counted in ``free_loops``.

Diagrams are treated as immutable values.  Every operation returns a new
diagram and leaves crossing ids of untouched crossings alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "Port",
    "Diagram",
    "Face",
    "ComponentLabeling",
    "DiagramError",
    "DiagramFormatError",
    "validate",
    "faces",
    "components",
    "crossing_sign",
    "writhe",
    "smooth",
    "mirror",
    "change_crossing",
    "reverse_components",
    "connected_sum",
    "encode",
    "decode",
    "encode_json",
    "decode_json",
    "canonical_key",
    "exact_key",
    "unknot",
    "unlink",
]

Port = tuple[int, int]


class DiagramError(ValueError):
    pass


class DiagramFormatError(DiagramError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


def over_in(sign: int) -> int:
    return 3 if sign > 0 else 1


def over_out(sign: int) -> int:
    return 1 if sign > 0 else 3


@dataclass(frozen=True)
class Diagram:
    signs: Mapping[int, int]
    partner: Mapping[Port, Port]
    free_loops: int = 0

    @property
    def crossings(self) -> list[int]:
        return sorted(self.signs)

    @property
    def num_crossings(self) -> int:
        return len(self.signs)

    def is_incoming(self, port: Port) -> bool:
        c, i = port
        return i == 0 or i == over_in(self.signs[c])

    def is_over(self, port: Port) -> bool:
        return port[1] % 2 == 1

    def out_ports(self) -> list[Port]:
        out = []
        for c in sorted(self.signs):
            s = self.signs[c]
            out.append((c, 2))
            out.append((c, over_out(s)))
        out.sort()
        return out

    def arcs(self) -> list[tuple[Port, Port]]:
        """``(tail, head)`` pairs, tail an outgoing port; sorted by tail."""
        return [(p, self.partner[p]) for p in self.out_ports()]

    def next_crossing_id(self) -> int:
        return max(self.signs, default=-1) + 1

    def __hash__(self) -> int:
        return hash(exact_key(self))


def unknot() -> Diagram:
    return Diagram({}, {}, 1)


def unlink(m: int) -> Diagram:
    return Diagram({}, {}, m)


def exact_key(d: Diagram) -> tuple:
    return (tuple(sorted(d.signs.items())), tuple(sorted(d.partner.items())), d.free_loops)


@dataclass(frozen=True)
class Face:
    """A face traced with the face on the right-hand side.

    ``corners[k] = (c, j)`` is the corner of crossing ``c`` between ports
    ``j`` and ``j+1``; the boundary leaves through port ``j+1``.
    """

    corners: tuple[Port, ...]

    @property
    def degree(self) -> int:
        return len(self.corners)

    @property
    def crossings(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.corners)

    def edges(self, d: Diagram) -> list[tuple[Port, Port]]:
        """Boundary edges as ``(start port, end port)`` in tracing order."""
        out = []
        for c, j in self.corners:
            start = (c, (j + 1) % 4)
            out.append((start, d.partner[start]))
        return out


@dataclass(frozen=True)
class ComponentLabeling:
    arc_component: Mapping[Port, int]
    count: int
    free_loops: int

    def of_port(self, d: Diagram, port: Port) -> int:
        if d.is_incoming(port):
            return self.arc_component[d.partner[port]]
        return self.arc_component[port]

    def of_crossing(self, d: Diagram, c: int) -> tuple[int, int]:
        """``(under component, over component)`` at crossing ``c``."""
        return self.of_port(d, (c, 0)), self.of_port(d, (c, 1))


def _all_ports(signs: Iterable[int]) -> list[Port]:
    return [(c, i) for c in sorted(signs) for i in range(4)]


def _pieces(d: Diagram) -> list[list[int]]:
    """Crossing sets of the connected pieces of the underlying graph."""
    seen: set[int] = set()
    pieces = []
    for start in sorted(d.signs):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        piece = []
        while stack:
            c = stack.pop()
            piece.append(c)
            for i in range(4):
                q = d.partner.get((c, i))
                if q is not None and q[0] not in seen and q[0] in d.signs:
                    seen.add(q[0])
                    stack.append(q[0])
        pieces.append(sorted(piece))
    return pieces


def _trace_faces(d: Diagram) -> list[Face]:
    seen: set[Port] = set()
    out = []
    for corner in _all_ports(d.signs):
        if corner in seen:
            continue
        cyc = []
        cur = corner
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            c, j = cur
            cur = d.partner[(c, (j + 1) % 4)]
        k = cyc.index(min(cyc))
        out.append(Face(tuple(cyc[k:] + cyc[:k])))
    out.sort(key=lambda f: f.corners[0])
    return out


def validate(d: Diagram) -> list[str]:
    """All violated invariants; an empty list means ``d`` is valid."""
    problems: list[str] = []
    if d.free_loops < 0:
        problems.append("negative free_loops")
    for c, s in d.signs.items():
        if s not in (1, -1):
            problems.append(f"crossing {c}: handedness must be +1 or -1")
    ports = set(_all_ports(d.signs))
    keys = set(d.partner)
    for p in sorted(ports - keys):
        problems.append(f"port {p} unmatched")
    for p in sorted(keys - ports):
        problems.append(f"port {p} does not belong to a crossing")
    hits: dict[Port, int] = {}
    for p, q in d.partner.items():
        hits[q] = hits.get(q, 0) + 1
    for q, k in sorted(hits.items()):
        if k > 1:
            problems.append(f"port {q} matched twice")
    for p, q in sorted(d.partner.items()):
        if p == q:
            problems.append(f"port {p} matched to itself")
        elif d.partner.get(q) != p and hits.get(q, 0) <= 1:
            problems.append(f"arc {p}-{q} is not symmetric")
    if problems:
        return problems
    for p, q in sorted(d.partner.items()):
        if d.is_incoming(p) == d.is_incoming(q):
            kind = "incoming" if d.is_incoming(p) else "outgoing"
            problems.append(f"arc {p}-{q} joins two {kind} ports")
    if problems:
        return problems
    face_list = _trace_faces(d)
    for piece in _pieces(d):
        members = set(piece)
        v = len(piece)
        e = 2 * v
        f = sum(1 for face in face_list if face.corners[0][0] in members)
        if v - e + f != 2:
            problems.append(
                f"crossings {piece[:6]}{'...' if len(piece) > 6 else ''}: "
                f"V-E+F = {v - e + f}, not a sphere"
            )
    return problems


def check(d: Diagram) -> Diagram:
    problems = validate(d)
    if problems:
        raise DiagramError("invalid diagram: " + "; ".join(problems))
    return d


def faces(d: Diagram) -> list[Face]:
    problems = validate(d)
    if problems:
        raise DiagramError("invalid diagram: " + "; ".join(problems))
    return _trace_faces(d)


def components(d: Diagram) -> ComponentLabeling:
    labels: dict[Port, int] = {}
    k = 0
    for start in d.out_ports():
        if start in labels:
            continue
        p = start
        while p not in labels:
            labels[p] = k
            c, i = d.partner[p]
            p = (c, (i + 2) % 4)
        k += 1
    return ComponentLabeling(labels, k + d.free_loops, d.free_loops)


def crossing_sign(d: Diagram, p: int) -> int:
    try:
        return d.signs[p]
    except KeyError:
        raise DiagramError(f"unknown crossing {p}") from None


def writhe(d: Diagram) -> int:
    return sum(d.signs.values())


def excise(d: Diagram, removed: Iterable[int], internal: Mapping[Port, Port]) -> Diagram:
    """Delete crossings and reconnect their ports through ``internal``.

    ``internal`` pairs every port of the removed crossings (symmetrically).
    Chains through removed crossings are spliced into single arcs; chains that
    close up without reaching a surviving port become free loops.
    """
    removed = set(removed)
    partner = d.partner
    new_partner: dict[Port, Port] = {}
    visited: set[Port] = set()
    for port, q in partner.items():
        if port[0] in removed:
            continue
        if q[0] not in removed:
            new_partner[port] = q
            continue
        cur = q
        while True:
            visited.add(cur)
            r = internal[cur]
            visited.add(r)
            s = partner[r]
            if s[0] not in removed:
                break
            cur = s
        new_partner[port] = s
    loops = 0
    for c in sorted(removed):
        for i in range(4):
            start = (c, i)
            if start in visited:
                continue
            loops += 1
            cur = start
            while cur not in visited:
                visited.add(cur)
                r = internal[cur]
                visited.add(r)
                cur = partner[r]
    signs = {c: s for c, s in d.signs.items() if c not in removed}
    return Diagram(signs, new_partner, d.free_loops + loops)


def smooth(d: Diagram, p: int) -> Diagram:
    """Oriented smoothing at crossing ``p``."""
    s = crossing_sign(d, p)
    oi, oo = over_in(s), over_out(s)
    internal = {(p, 0): (p, oo), (p, oo): (p, 0), (p, oi): (p, 2), (p, 2): (p, oi)}
    return excise(d, [p], internal)


def _rotate(d: Diagram, shift: Mapping[int, int], new_signs: Mapping[int, int]) -> Diagram:
    def f(port: Port) -> Port:
        c, i = port
        k = shift.get(c, 0)
        return (c, (i - k) % 4) if k else port

    partner = {f(p): f(q) for p, q in d.partner.items()}
    return Diagram(dict(new_signs), partner, d.free_loops)


def change_crossing(d: Diagram, p: int | Iterable[int]) -> Diagram:
    """Exchange over and under at the given crossing(s)."""
    ids = [p] if isinstance(p, int) else list(p)
    shift = {}
    signs = dict(d.signs)
    for c in ids:
        s = crossing_sign(d, c)
        shift[c] = over_in(s)
        signs[c] = -s
    return _rotate(d, shift, signs)


def mirror(d: Diagram) -> Diagram:
    return change_crossing(d, list(d.signs))


def reverse_components(d: Diagram, which: Iterable[int]) -> Diagram:
    """Reverse the orientation of the listed components."""
    which = set(which)
    lab = components(d)
    shift = {}
    signs = {}
    for c, s in d.signs.items():
        under, over = lab.of_crossing(d, c)
        k = 2 if under in which else 0
        phys_in = over_out(s) if over in which else over_in(s)
        shift[c] = k
        signs[c] = 1 if (phys_in - k) % 4 == 3 else -1
    return _rotate(d, shift, signs)


def relabel(d: Diagram, mapping: Mapping[int, int]) -> Diagram:
    def f(port: Port) -> Port:
        return (mapping[port[0]], port[1])

    return Diagram(
        {mapping[c]: s for c, s in d.signs.items()},
        {f(p): f(q) for p, q in d.partner.items()},
        d.free_loops,
    )


def connected_sum(d1: Diagram, a1: Port | None, d2: Diagram, a2: Port | None) -> Diagram:
    """Connected sum along the arcs with tails ``a1`` and ``a2``.

    ``None`` selects a free loop of a crossing-free diagram.  Crossings of
    ``d2`` are renumbered after those of ``d1``.
    """
    base = d1.next_crossing_id()
    ids2 = {c: base + k for k, c in enumerate(sorted(d2.signs))}
    d2r = relabel(d2, ids2)
    for d, a, name in ((d1, a1, "a1"), (d2, a2, "a2")):
        if a is None:
            if d.free_loops < 1:
                raise DiagramError(f"{name}: no free loop to cut")
        elif a not in d.partner or d.is_incoming(a):
            raise DiagramError(f"{name}: {a} is not the tail of an arc")
    if a2 is not None:
        a2 = (ids2[a2[0]], a2[1])
    partner = dict(d1.partner)
    partner.update(d2r.partner)
    loops = d1.free_loops + d2.free_loops
    if a1 is None or a2 is None:
        # the cut free loop merges into the other summand
        loops -= 1
    else:
        h1, h2 = d1.partner[a1], d2r.partner[a2]
        partner[a1], partner[h2] = h2, a1
        partner[a2], partner[h1] = h1, a2
    signs = dict(d1.signs)
    signs.update(d2r.signs)
    return Diagram(signs, partner, loops)


# ---------------------------------------------------------------------------
# isomorphism keys


def _piece_code(d: Diagram, root: int) -> tuple:
    order = {root: 0}
    queue = [root]
    k = 0
    while k < len(queue):
        c = queue[k]
        k += 1
        for i in range(4):
            q = d.partner[(c, i)][0]
            if q not in order:
                order[q] = len(queue)
                queue.append(q)
    code = []
    for c in queue:
        code.append(d.signs[c])
        for i in range(4):
            q, j = d.partner[(c, i)]
            code.append(order[q] * 4 + j)
    return tuple(code)


def canonical_key(d: Diagram) -> tuple:
    """Key equal for diagrams that differ only by crossing ids."""
    codes = []
    for piece in _pieces(d):
        codes.append(min(_piece_code(d, r) for r in piece))
    codes.sort()
    return (tuple(codes), d.free_loops)


# ---------------------------------------------------------------------------
# serialization


def _labels(d: Diagram) -> dict[Port, int]:
    label = {}
    for n, (tail, head) in enumerate(d.arcs(), start=1):
        label[tail] = n
        label[head] = n
    return label


def encode(d: Diagram) -> str:
    label = _labels(d)
    lines = [f"diagram crossings={d.num_crossings} loops={d.free_loops}"]
    for c in d.crossings:
        arcs = " ".join(str(label[(c, i)]) for i in range(4))
        h = "R" if d.signs[c] > 0 else "L"
        lines.append(f"X {arcs} h={h} id={c}")
    return "\n".join(lines) + "\n"


def _from_labels(rows: list[tuple[int, list[int], int]], loops: int) -> tuple[Diagram, dict[int, list[Port]]]:
    signs = {}
    where: dict[int, list[Port]] = {}
    for cid, labs, s in rows:
        signs[cid] = s
        for i, a in enumerate(labs):
            where.setdefault(a, []).append((cid, i))
    partner = {}
    for a, ports in where.items():
        if len(ports) == 2:
            p, q = ports
            partner[p] = q
            partner[q] = p
    return Diagram(signs, partner, loops), where


def decode(text: str) -> Diagram:
    header_seen = False
    expected = loops = 0
    rows: list[tuple[int, list[int], int]] = []
    row_line: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not header_seen:
            if toks[0] != "diagram":
                raise DiagramFormatError("expected header 'diagram crossings=<c> loops=<f>'", lineno)
            fields = _kv(toks[1:], lineno, raw)
            try:
                expected = int(fields.get("crossings", "0"))
                loops = int(fields.get("loops", "0"))
            except ValueError:
                raise DiagramFormatError("header values must be integers", lineno) from None
            header_seen = True
            continue
        if toks[0] != "X":
            raise DiagramFormatError(f"unknown record {toks[0]!r}", lineno, raw.find(toks[0]) + 1)
        labels = [t for t in toks[1:] if "=" not in t]
        if len(labels) != 4:
            raise DiagramFormatError("crossing line needs 4 arc labels", lineno)
        try:
            labs = [int(t) for t in labels]
        except ValueError:
            bad = next(t for t in labels if not t.lstrip("-").isdigit())
            raise DiagramFormatError(f"arc label {bad!r} is not an integer", lineno, raw.find(bad) + 1) from None
        for t in labels:
            if int(t) <= 0:
                raise DiagramFormatError("arc labels must be positive", lineno, raw.find(t) + 1)
        fields = _kv([t for t in toks[1:] if "=" in t], lineno, raw)
        h = fields.get("h")
        if h not in ("L", "R"):
            raise DiagramFormatError("crossing needs h=L or h=R", lineno, max(raw.find("h="), 0) + 1)
        cid = int(fields["id"]) if "id" in fields else len(rows)
        if cid in row_line:
            raise DiagramFormatError(f"duplicate crossing id {cid}", lineno)
        row_line[cid] = lineno
        rows.append((cid, labs, 1 if h == "R" else -1))
    if not header_seen:
        raise DiagramFormatError("empty input", 1)
    if expected != len(rows):
        raise DiagramFormatError(f"header declares {expected} crossings, found {len(rows)}", 1)
    d, where = _from_labels(rows, loops)
    for a, ports in sorted(where.items()):
        if len(ports) != 2:
            line = row_line[ports[0][0]]
            raise DiagramFormatError(f"arc label {a} appears {len(ports)} times, expected 2", line)
    problems = validate(d)
    if problems:
        line = row_line[min(row_line, key=row_line.get)] if row_line else 1
        raise DiagramFormatError("; ".join(problems), line)
    return d


def _kv(tokens: list[str], lineno: int, raw: str) -> dict[str, str]:
    out = {}
    for t in tokens:
        if "=" not in t:
            raise DiagramFormatError(f"expected key=value, got {t!r}", lineno, raw.find(t) + 1)
        k, v = t.split("=", 1)
        out[k] = v
    return out


def to_json(d: Diagram) -> dict:
    label = _labels(d)
    return {
        "crossings": [
            {"id": c, "arcs": [label[(c, i)] for i in range(4)], "h": "R" if d.signs[c] > 0 else "L"}
            for c in d.crossings
        ],
        "loops": d.free_loops,
    }


def from_json(data: Mapping) -> Diagram:
    rows = []
    for k, rec in enumerate(data.get("crossings", [])):
        arcs = list(rec["arcs"])
        if len(arcs) != 4:
            raise DiagramFormatError("crossing needs 4 arc labels", k + 1)
        if rec.get("h") not in ("L", "R"):
            raise DiagramFormatError("crossing needs h=L or h=R", k + 1)
        rows.append((int(rec.get("id", k)), [int(a) for a in arcs], 1 if rec["h"] == "R" else -1))
    d, where = _from_labels(rows, int(data.get("loops", 0)))
    for a, ports in sorted(where.items()):
        if len(ports) != 2:
            raise DiagramFormatError(f"arc label {a} appears {len(ports)} times, expected 2", 1)
    problems = validate(d)
    if problems:
        raise DiagramFormatError("; ".join(problems), 1)
    return d


def encode_json(d: Diagram) -> str:
    return json.dumps(to_json(d), sort_keys=True)


def decode_json(text: str) -> Diagram:
    return from_json(json.loads(text))
