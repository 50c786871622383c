"""Braid words, their closures, and the braid rewriting that unlinks ``D_n``.

``s<i>`` is the generator in which the strand at position ``i`` crosses over
the strand at position ``i+1``.  Strands run downward, so with the sign
convention of :mod:`unlinkbound.diagram` every ``s<i>`` letter closes to a
negative crossing and every ``s<i>^-1`` letter to a positive one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import moves
from .diagram import Diagram, Port, _trace_faces, exact_key
from .moves import MoveRecord

__all__ = [
    "BraidWord",
    "BraidError",
    "parse",
    "render",
    "closure",
    "dn_word",
    "destabilize",
    "permutation",
    "cycle_count",
    "cancel_pairs",
]


class BraidError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        where = f" (at {position})" if position is not None else ""
        super().__init__(message + where)
        self.position = position


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[int, int], ...] = ()
    # crossing ids given to the letters by closure(); default 0..len-1
    ids: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        for k, (i, e) in enumerate(self.letters):
            if not 1 <= i < self.strands:
                raise BraidError(f"index {i} out of range for {self.strands} strands", k)
            if e not in (1, -1):
                raise BraidError("letters must have exponent +1 or -1", k)
        if self.ids is not None and len(self.ids) != len(self.letters):
            raise BraidError("one crossing id per letter required")

    def crossing_ids(self) -> tuple[int, ...]:
        return self.ids if self.ids is not None else tuple(range(len(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return render(self)


_TOKEN = re.compile(r"\S+")
_LETTER = re.compile(r"s(\d+)(?:\^(-?\d+))?$")


def parse(text: str) -> BraidWord:
    """Parse ``s1^-1 s2 s2 @3``; exponents are expanded to single letters."""
    letters: list[tuple[int, int]] = []
    strands = None
    for m in _TOKEN.finditer(text):
        tok, col = m.group(0), m.start() + 1
        if strands is not None:
            raise BraidError(f"unexpected {tok!r} after strand count", col)
        if tok.startswith("@"):
            try:
                strands = int(tok[1:])
            except ValueError:
                raise BraidError(f"bad strand count {tok!r}", col) from None
            if strands < 1:
                raise BraidError("strand count must be positive", col)
            continue
        lm = _LETTER.match(tok)
        if not lm:
            raise BraidError(f"bad letter {tok!r}", col)
        i = int(lm.group(1))
        e = int(lm.group(2)) if lm.group(2) is not None else 1
        if e == 0:
            raise BraidError("exponent must be nonzero", col)
        if i < 1:
            raise BraidError(f"index {i} out of range", col)
        letters.extend([(i, 1 if e > 0 else -1)] * abs(e))
    if strands is None:
        raise BraidError("missing '@<strands>' terminator", len(text) + 1)
    for i, _ in letters:
        if i >= strands:
            raise BraidError(f"index {i} out of range for {strands} strands")
    return BraidWord(strands, tuple(letters))


def render(b: BraidWord) -> str:
    parts = []
    k = 0
    lt = b.letters
    while k < len(lt):
        j = k
        while j < len(lt) and lt[j] == lt[k]:
            j += 1
        i, e = lt[k]
        n = (j - k) * e
        parts.append(f"s{i}" if n == 1 else f"s{i}^{n}")
        k = j
    parts.append(f"@{b.strands}")
    return " ".join(parts)


# port of each corner of a letter's crossing: (TL, TR, BL, BR)
_PORTS = {
    -1: (0, 3, 1, 2),  # right strand over, sign +1
    1: (1, 0, 2, 3),  # left strand over, sign -1
}


def closure(b: BraidWord) -> Diagram:
    """Closed braid diagram; crossing ids come from ``b.crossing_ids()``."""
    ids = b.crossing_ids()
    signs: dict[int, int] = {}
    partner: dict[Port, Port] = {}
    cur_out: list[Port | None] = [None] * (b.strands + 1)
    top_in: list[Port | None] = [None] * (b.strands + 1)

    def link(p: Port, q: Port) -> None:
        partner[p] = q
        partner[q] = p

    for cid, (i, e) in zip(ids, b.letters):
        tl, tr, bl, br = ((cid, k) for k in _PORTS[e])
        signs[cid] = -e
        for pos, port in ((i, tl), (i + 1, tr)):
            if cur_out[pos] is None:
                top_in[pos] = port
            else:
                link(cur_out[pos], port)
        cur_out[i], cur_out[i + 1] = bl, br
    loops = 0
    for pos in range(1, b.strands + 1):
        if cur_out[pos] is None:
            loops += 1
        else:
            link(cur_out[pos], top_in[pos])
    return Diagram(signs, partner, loops)


def permutation(b: BraidWord) -> tuple[int, ...]:
    """``perm[j-1]`` is the bottom position of the strand starting at top position ``j``."""
    at = list(range(b.strands + 1))  # at[pos] = starting position of the strand now at pos
    for i, _ in b.letters:
        at[i], at[i + 1] = at[i + 1], at[i]
    perm = [0] * b.strands
    for pos in range(1, b.strands + 1):
        perm[at[pos] - 1] = pos
    return tuple(perm)


def cycle_count(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    n = 0
    for j in range(len(perm)):
        if seen[j]:
            continue
        n += 1
        k = j
        while not seen[k]:
            seen[k] = True
            k = perm[k] - 1
    return n


def dn_word(n: int) -> BraidWord:
    """``s1^-1 (s2^-1 s1^-1) ... (sn^-1 s(n-1)^-1) sn^n`` on ``n+1`` strands."""
    if n < 1:
        raise BraidError("n must be at least 1")
    letters = [(1, -1)]
    for j in range(2, n + 1):
        letters += [(j, -1), (j - 1, -1)]
    letters += [(n, 1)] * n
    return BraidWord(n + 1, tuple(letters))


def _shape(b: BraidWord) -> tuple[int, int, int]:
    """``(k, m, l)`` for ``s1^-k (s2^-1 s1^-1) ... (sm^-1 s(m-1)^-1) sm^l``."""
    m = b.strands - 1
    lt = b.letters
    if m < 2:
        raise BraidError(f"needs at least 3 strands, got {b.strands}", 0)
    k = 0
    while k < len(lt) and lt[k] == (1, -1):
        k += 1
    if k == 0:
        raise BraidError(f"letter 0 is {_name(lt[0]) if lt else 'missing'}, expected s1^-1", 0)
    pos = k
    for j in range(2, m + 1):
        for want in ((j, -1), (j - 1, -1)):
            if pos >= len(lt) or lt[pos] != want:
                got = _name(lt[pos]) if pos < len(lt) else "end of word"
                raise BraidError(f"letter {pos} is {got}, expected {_name(want)}", pos)
            pos += 1
    ell = 0
    while pos < len(lt):
        if lt[pos] != (m, 1):
            raise BraidError(f"letter {pos} is {_name(lt[pos])}, expected {_name((m, 1))}", pos)
        pos += 1
        ell += 1
    return k, m, ell


def _name(letter: tuple[int, int]) -> str:
    i, e = letter
    return f"s{i}" if e > 0 else f"s{i}^-1"


def _faces_on(d: Diagram, ids: set[int], degree: int):
    for f in _trace_faces(d):
        if f.degree == degree and set(f.crossings) == ids:
            yield f.corners


def _realize(d: Diagram, candidates, expect: BraidWord) -> tuple[Diagram, MoveRecord]:
    """First candidate record whose application gives exactly ``closure(expect)``."""
    target = exact_key(closure(expect))
    for rec in candidates:
        try:
            out = moves.apply(d, rec)
        except moves.IllegalMove:
            continue
        if exact_key(out) == target:
            return out, rec
    raise AssertionError(f"no legal move realizes {render(expect)}")


def destabilize(b: BraidWord) -> tuple[BraidWord, list[MoveRecord]]:
    """One destabilizing step of the ``D_n`` unlinking.

    ``s1^-k (s2^-1 s1^-1)...(sm^-1 s(m-1)^-1) sm^l`` on ``m+1`` strands becomes
    ``s1^-(k+1) (s2^-1 s1^-1)...(s(m-1)^-1 s(m-2)^-1) s(m-1)^l`` on ``m``
    strands through ``k`` braid relations (RIII) and one destabilization (RI,
    deleting a positive crossing).  Records address crossings by the ids of
    ``b``; each is checked against the closure of the rewritten word.
    """
    k, m, ell = _shape(b)
    word = list(b.letters)
    ids = list(b.crossing_ids())
    d = closure(b)
    records: list[MoveRecord] = []
    for step in range(k):
        at = k - 1 - step
        x, y, z = ids[at : at + 3]
        word[at : at + 3] = [(2, -1), (1, -1), (2, -1)]
        ids[at : at + 3] = [z, y, x]
        cands = (MoveRecord("RIII", None, cs) for cs in _faces_on(d, {x, y, z}, 3))
        d, rec = _realize(d, cands, BraidWord(b.strands, tuple(word), tuple(ids)))
        records.append(rec)
    # the lone s1^-1 now sits at index 1 and bounds a monogon
    c = ids[1]
    sign = d.signs[c]
    del word[1], ids[1]
    nb = BraidWord(b.strands - 1, tuple((i - 1, e) for i, e in word), tuple(ids))
    cands = (MoveRecord("RI", "delete", ((c, j),), sign=sign) for j in range(4))
    d, rec = _realize(d, cands, nb)
    records.append(rec)
    return nb, records


def cancel_pairs(b: BraidWord) -> list[MoveRecord]:
    """Matched RII deletions clearing ``s1^-n s1^n`` on two strands, innermost first."""
    n = len(b.letters) // 2
    if b.strands != 2 or b.letters != ((1, -1),) * n + ((1, 1),) * n:
        raise BraidError(f"expected s1^-{n} s1^{n} on 2 strands")
    word = list(b.letters)
    ids = list(b.crossing_ids())
    d = closure(b)
    records = []
    while word:
        h = len(word) // 2
        x, y = ids[h - 1], ids[h]
        del word[h - 1 : h + 1], ids[h - 1 : h + 1]
        cands = (
            MoveRecord("RII", "delete", cs, matched=True) for cs in _faces_on(d, {x, y}, 2)
        )
        d, rec = _realize(d, cands, BraidWord(2, tuple(word), tuple(ids)))
        records.append(rec)
    return records
