import itertools

import pytest
from hypothesis import given, settings, strategies as st

from unlinkbound import braid, moves
from unlinkbound.diagram import Diagram, change_crossing, components, connected_sum, mirror, writhe
from unlinkbound.dn import build
from unlinkbound.fuzz import random_diagram, random_move
from unlinkbound.invariants import (
    CapExceeded,
    bracket_brute_force,
    is_unlink_fingerprint,
    jones_fingerprint,
    kauffman_bracket,
    linking_matrix,
    total_linking,
)
from unlinkbound.laurent import LaurentPoly, parse

from helpers import diagrams

DELTA = parse("-A^2 - A^-2")


def closure(text):
    return braid.closure(braid.parse(text))


def state_sum(d: Diagram) -> LaurentPoly:
    """Textbook state sum: union ports into loops, weight A^(a-b) delta^(loops-1)."""
    cs = sorted(d.signs)
    total = LaurentPoly()
    for state in itertools.product((0, 1), repeat=len(cs)):
        parent = {}

        def find(p):
            while parent.setdefault(p, p) != p:
                p = parent[p]
            return p

        def union(p, q):
            parent[find(p)] = find(q)

        for p, q in d.partner.items():
            union(p, q)
        for c, s in zip(cs, state):
            pairs = ((0, 1), (2, 3)) if s == 0 else ((1, 2), (3, 0))
            for i, j in pairs:
                union((c, i), (c, j))
        loops = len({find(p) for p in d.partner}) + d.free_loops
        a = state.count(0)
        total = total + parse(f"A^{a - (len(cs) - a)}") * DELTA ** (loops - 1)
    return total


class TestLinking:
    def test_hopf(self, hopf):
        lm = linking_matrix(hopf)
        assert lm[0, 1] == lm[1, 0] == -1 and lm[0, 0] == 0

    def test_t24(self):
        assert total_linking(closure("s1^4 @2")) == 2

    @pytest.mark.parametrize("n", range(1, 8))
    def test_dn(self, n):
        assert linking_matrix(build(n))[0, 1] == 0

    def test_unlink(self):
        assert linking_matrix(Diagram({}, {}, 2)).total() == 0
        assert linking_matrix(Diagram({}, {}, 2)).size == 2

    def test_knot(self):
        assert total_linking(closure("s1^3 @2")) == 0

    def test_three_components(self):
        lm = linking_matrix(closure("s1^2 s2^-2 @3"))
        assert lm.total() == 2 and lm.size == 3

    @given(diagrams())
    def test_symmetric(self, d):
        lm = linking_matrix(d)
        for i in range(lm.size):
            assert lm[i, i] == 0
            for j in range(lm.size):
                assert lm[i, j] == lm[j, i]

    @given(diagrams(), st.data())
    def test_crossing_change(self, d, data):
        c = data.draw(st.sampled_from(sorted(d.signs))) if d.signs else None
        if c is None:
            return
        under, over = components(d).of_crossing(d, c)
        step = abs(total_linking(change_crossing(d, c)) - total_linking(d))
        assert step <= (0 if under == over else 1)


class TestBracket:
    def test_empty(self):
        assert kauffman_bracket(Diagram({}, {}, 1)) == parse("1")

    def test_free_loops(self):
        assert kauffman_bracket(Diagram({}, {}, 3)) == DELTA**2

    def test_kink(self, kink):
        assert kauffman_bracket(kink) == parse("-A^3")

    def test_hopf(self, hopf):
        assert kauffman_bracket(hopf) == parse("-A^4 - A^-4")
        assert state_sum(hopf) == parse("-A^4 - A^-4")

    @given(diagrams(max_crossings=9))
    @settings(max_examples=40)
    def test_matches_state_sum(self, d):
        assert kauffman_bracket(d) == state_sum(d)
        assert bracket_brute_force(d) == state_sum(d)

    def test_cap(self):
        d = build(9)
        with pytest.raises(CapExceeded):
            kauffman_bracket(d, cap=10)

    def test_mirror(self):
        d = closure("s1^3 @2")
        assert kauffman_bracket(mirror(d)) == kauffman_bracket(d).substitute_inverse()


class TestFingerprint:
    def test_small_unknots(self, kink):
        assert jones_fingerprint(kink) == parse("1")
        assert jones_fingerprint(change_crossing(kink, 0)) == parse("1")
        assert jones_fingerprint(Diagram({}, {}, 1)) == parse("1")
        assert jones_fingerprint(closure("s1 s2 @3")) == parse("1")

    @pytest.mark.parametrize("n", range(1, 8))
    def test_dn_is_unlink(self, n):
        assert jones_fingerprint(build(n)) == DELTA
        assert is_unlink_fingerprint(build(n))

    def test_hopf_not_unlink(self, hopf):
        assert not is_unlink_fingerprint(hopf)

    def test_empty(self):
        assert is_unlink_fingerprint(Diagram({}, {}, 2))

    def test_trefoils_differ(self):
        t = closure("s1^3 @2")
        assert jones_fingerprint(t) != jones_fingerprint(mirror(t))

    @given(diagrams(), st.integers(0, 2**32))
    def test_invariant_along_moves(self, d, seed):
        import random

        rng = random.Random(seed)
        fp, lk = jones_fingerprint(d), linking_matrix(d).canonical()
        for _ in range(20):
            m = random_move(rng, d)
            if m is None:
                break
            d = moves.apply(d, m)
            assert jones_fingerprint(d) == fp
            assert linking_matrix(d).canonical() == lk

    @pytest.mark.parametrize("w1,w2", [("s1^3 @2", "s1^-3 @2"), ("s1^2 @2", "s1^3 @2"), ("s1 s2^-1 s1 s2^-1 @3", "s1^3 @2")])
    def test_multiplicative(self, w1, w2):
        a, b = closure(w1), closure(w2)
        s = connected_sum(a, (0, 2), b, (0, 2))
        assert jones_fingerprint(s) == jones_fingerprint(a) * jones_fingerprint(b)

    def test_writhe_normalization(self, kink):
        assert writhe(kink) == 1
        assert kauffman_bracket(kink) * parse("-A^-3") == jones_fingerprint(kink)


def test_random_diagrams_are_deterministic():
    import random

    a = random_diagram(random.Random(5))
    b = random_diagram(random.Random(5))
    assert a == b
