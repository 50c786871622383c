"""Linking numbers, the Kauffman bracket and the writhe-normalized Jones fingerprint."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .diagram import Diagram, Port, components, writhe
from .laurent import DELTA, ONE, LaurentPoly, pow_scalar

__all__ = [
    "CapExceeded",
    "LinkingMatrix",
    "linking_matrix",
    "total_linking",
    "kauffman_bracket",
    "bracket_brute_force",
    "jones_fingerprint",
    "is_unlink_fingerprint",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 24


class CapExceeded(RuntimeError):
    """A computation was refused because the diagram is larger than the configured cap."""


@dataclass(frozen=True)
class LinkingMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def total(self) -> int:
        m = self.size
        return sum(abs(self.entries[i][j]) for i in range(m) for j in range(i + 1, m))

    def canonical(self) -> tuple:
        """Form independent of how components are numbered."""
        m = self.size
        if m <= 6:
            return min(
                tuple(self.entries[p[i]][p[j]] for i in range(m) for j in range(m))
                for p in permutations(range(m))
            )
        return (m, tuple(sorted(tuple(sorted(row)) for row in self.entries)))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def linking_matrix(d: Diagram) -> LinkingMatrix:
    lab = components(d)
    m = lab.count
    twice = [[0] * m for _ in range(m)]
    for c in d.crossings:
        under, over = lab.of_crossing(d, c)
        if under != over:
            twice[under][over] += d.signs[c]
            twice[over][under] += d.signs[c]
    return LinkingMatrix(tuple(tuple(v // 2 for v in row) for row in twice))


def total_linking(d: Diagram) -> int:
    return linking_matrix(d).total()


# Both smoothings as port pairings: A joins the regions 0-1 and 2-3, B joins 1-2 and 3-0.
_A_PAIRS = ((0, 1), (2, 3))
_B_PAIRS = ((1, 2), (3, 0))

_Poly = dict  # exponent -> coefficient, internal fast form


def _padd(acc: dict, poly: dict, shift: int) -> None:
    for e, c in poly.items():
        e += shift
        v = acc.get(e, 0) + c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _pdelta(poly: dict) -> dict:
    out: dict = {}
    _padd(out, poly, 2)
    _padd(out, poly, -2)
    return {e: -c for e, c in out.items()}


def _order(d: Diagram) -> list[int]:
    """Greedy contraction order: always take the crossing most attached to the processed set."""
    left = set(d.crossings)
    done: set[int] = set()
    order = []
    while left:
        best = min(
            left,
            key=lambda c: (-sum(1 for j in range(4) if d.partner[(c, j)][0] in done), c),
        )
        order.append(best)
        left.discard(best)
        done.add(best)
    return order


def _contract(d: Diagram) -> LaurentPoly:
    # state: (sorted open-end matching, whether one loop has already closed)
    states: dict[tuple, dict] = {((), False): {0: 1}}
    done: set[int] = set()
    for c in _order(d):
        arcs = []
        for j in range(4):
            q = d.partner[(c, j)]
            if q[0] in done or (q[0] == c and q[1] > j):
                arcs.append(((c, j), q))
        nxt: dict[tuple, dict] = {}
        for (pairs, closed), poly in states.items():
            for pairing, shift in ((_A_PAIRS, 1), (_B_PAIRS, -1)):
                mate: dict[Port, Port] = {}
                for a, b in pairs:
                    mate[a] = b
                    mate[b] = a
                for i, j in pairing:
                    mate[(c, i)] = (c, j)
                    mate[(c, j)] = (c, i)
                loops = 0
                for p, q in arcs:
                    a = mate.pop(p)
                    if a == q:
                        mate.pop(q)
                        loops += 1
                        continue
                    b = mate.pop(q)
                    mate[a] = b
                    mate[b] = a
                w = poly
                cl = closed
                if loops and not cl:
                    cl = True
                    loops -= 1
                for _ in range(loops):
                    w = _pdelta(w)
                key = (tuple(sorted((a, b) for a, b in mate.items() if a < b)), cl)
                acc = nxt.setdefault(key, {})
                _padd(acc, w, shift)
        states = {k: v for k, v in nxt.items() if v}
        done.add(c)
    total: dict = {}
    for (pairs, closed), poly in states.items():
        assert not pairs and closed
        _padd(total, poly, 0)
    return LaurentPoly(total)


@lru_cache(maxsize=4096)
def _bracket_cached(d: Diagram) -> LaurentPoly:
    if not d.signs:
        if d.free_loops == 0:
            return ONE
        return pow_scalar(DELTA, d.free_loops - 1)
    return _contract(d) * pow_scalar(DELTA, d.free_loops)


def kauffman_bracket(d: Diagram, cap: int = DEFAULT_CAP) -> LaurentPoly:
    """Unnormalized bracket with the unknot valued 1 and a kink valued ``-A^3`` or ``-A^-3``."""
    if d.num_crossings > cap:
        raise CapExceeded(f"bracket of a {d.num_crossings}-crossing diagram exceeds cap {cap}")
    return _bracket_cached(d)


def bracket_brute_force(d: Diagram) -> LaurentPoly:
    """Direct sum over all ``2^c`` smoothing states."""
    cs = d.crossings
    if not cs:
        return ONE if d.free_loops == 0 else pow_scalar(DELTA, d.free_loops - 1)
    index = {(c, j): 4 * k + j for k, c in enumerate(cs) for j in range(4)}
    arcs = [(index[p], index[q]) for p, q in d.arcs()]
    n = 4 * len(cs)
    acc: dict[int, int] = {}
    delta_pows = [ONE]
    for bits in range(1 << len(cs)):
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> None:
            parent[find(x)] = find(y)

        for x, y in arcs:
            union(x, y)
        a = 0
        for k in range(len(cs)):
            use_a = not (bits >> k) & 1
            a += 1 if use_a else -1
            for i, j in _A_PAIRS if use_a else _B_PAIRS:
                union(4 * k + i, 4 * k + j)
        loops = len({find(x) for x in range(n)}) + d.free_loops
        acc.setdefault(a, {}).setdefault(loops, 0)
        acc[a][loops] += 1
    total = LaurentPoly()
    for a, by_loops in acc.items():
        for loops, mult in by_loops.items():
            while len(delta_pows) < loops:
                delta_pows.append(delta_pows[-1] * DELTA)
            total = total + delta_pows[loops - 1].shift(a) * mult
    return total


def jones_fingerprint(d: Diagram, cap: int = DEFAULT_CAP) -> LaurentPoly:
    """``(-A)^(-3w) <D>``, invariant under all Reidemeister moves."""
    w = writhe(d)
    p = kauffman_bracket(d, cap).shift(-3 * w)
    return -p if w % 2 else p


def is_unlink_fingerprint(d: Diagram, cap: int = DEFAULT_CAP) -> bool:
    m = components(d).count
    return jones_fingerprint(d, cap) == pow_scalar(DELTA, max(m - 1, 0))
