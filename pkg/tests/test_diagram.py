import json

import pytest
from hypothesis import given

from unlinkbound import braid
from unlinkbound.diagram import (
    Diagram,
    DiagramError,
    DiagramFormatError,
    _pieces,
    canonical_key,
    change_crossing,
    components,
    connected_sum,
    crossing_sign,
    decode,
    decode_json,
    encode,
    encode_json,
    faces,
    mirror,
    relabel,
    reverse_components,
    smooth,
    unknot,
    unlink,
    validate,
    writhe,
)
from unlinkbound.invariants import jones_fingerprint
from unlinkbound.laurent import ONE
from unlinkbound.unknotting import reference_fingerprint

from helpers import diagrams


def torus(k: int) -> Diagram:
    return braid.closure(braid.BraidWord(2, ((1, 1),) * k))


class TestValidate:
    def test_braid_closure_valid(self):
        assert validate(braid.closure(braid.parse("s1 @2"))) == []

    def test_port_matched_twice(self):
        bad = Diagram(
            {0: 1},
            {(0, 0): (0, 1), (0, 1): (0, 0), (0, 2): (0, 1), (0, 3): (0, 2)},
        )
        assert any("matched twice" in v for v in validate(bad))

    def test_two_free_loops(self):
        assert validate(unlink(2)) == []
        assert components(unlink(2)).count == 2

    def test_orientation_clash(self):
        # with sign +1 port 1 is outgoing, so 2-1 joins two outgoing ports
        bad = Diagram({0: 1}, {(0, 2): (0, 1), (0, 1): (0, 2), (0, 0): (0, 3), (0, 3): (0, 0)})
        assert validate(bad)

    def test_non_planar_map_rejected(self):
        # the two strands of one crossing joined crosswise: a torus map, not a sphere map
        bad = Diagram({0: 1}, {(0, 2): (0, 0), (0, 0): (0, 2), (0, 1): (0, 3), (0, 3): (0, 1)})
        assert any("V - E + F" in v or "Euler" in v or "sphere" in v for v in validate(bad))


class TestFaces:
    def test_kink_has_three_faces(self, kink):
        fs = faces(kink)
        assert len(fs) == 3
        assert sorted(f.degree for f in fs) == [1, 1, 2]

    def test_hopf_faces(self, hopf):
        fs = faces(hopf)
        assert len(fs) == 4
        assert [f.degree for f in fs].count(2) >= 2

    def test_d1_has_bigon_on_both_crossings(self, d1):
        fs = faces(d1)
        assert len(fs) == 4
        assert any(f.degree == 2 and set(f.crossings) == {0, 1} for f in fs)

    @given(diagrams())
    def test_euler_per_piece(self, d):
        if d.num_crossings:
            assert len(faces(d)) == d.num_crossings + 2 * len(_pieces(d))
            assert sum(f.degree for f in faces(d)) == 4 * d.num_crossings


class TestComponentsAndSigns:
    def test_hopf_two_components(self, hopf):
        assert components(hopf).count == 2

    @pytest.mark.parametrize("n", range(1, 8))
    def test_dn_two_components_and_counts(self, n):
        d = braid.closure(braid.dn_word(n))
        assert components(d).count == 2
        signs = [crossing_sign(d, c) for c in d.crossings]
        assert signs.count(1) == 2 * n - 1 and signs.count(-1) == n
        assert writhe(d) == n - 1

    def test_single_free_loop(self):
        assert components(unknot()).count == 1
        assert writhe(unknot()) == 0

    def test_inverse_letter_is_positive(self):
        d = braid.closure(braid.parse("s1^-1 @2"))
        assert crossing_sign(d, 0) == 1

    def test_unknown_crossing(self, hopf):
        with pytest.raises(DiagramError):
            crossing_sign(hopf, 99)

    @given(diagrams())
    def test_mirror_flips_signs(self, d):
        md = mirror(d)
        assert all(crossing_sign(md, c) == -crossing_sign(d, c) for c in d.crossings)
        assert writhe(md) == -writhe(d)
        assert mirror(md) == d
        assert validate(md) == []

    @given(diagrams())
    def test_signs_survive_relabeling(self, d):
        mapping = {c: 1000 - 3 * c for c in d.crossings}
        rd = relabel(d, mapping)
        assert all(crossing_sign(rd, mapping[c]) == crossing_sign(d, c) for c in d.crossings)
        assert canonical_key(rd) == canonical_key(d)

    @given(diagrams())
    def test_labeling_consistent_through_crossings(self, d):
        lab = components(d)
        for c in d.crossings:
            assert lab.of_port(d, (c, 0)) == lab.of_port(d, (c, 2))
            assert lab.of_port(d, (c, 1)) == lab.of_port(d, (c, 3))

    @given(diagrams())
    def test_reversal_keeps_validity(self, d):
        m = components(d).count
        r = reverse_components(d, range(m))
        assert validate(r) == []
        # reversing everything keeps every sign
        assert r.signs == d.signs
        assert reverse_components(r, range(m)) == d


class TestSmoothing:
    def test_kink_splits(self, kink):
        s = smooth(kink, 0)
        assert s.num_crossings == 0 and s.free_loops == 2
        assert components(s).count == 2

    @given(diagrams())
    def test_component_count_moves_by_one(self, d):
        lab = components(d)
        for c in d.crossings:
            under, over = lab.of_crossing(d, c)
            e = smooth(d, c)
            assert validate(e) == []
            assert components(e).count == lab.count + (1 if under == over else -1)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_dn_smoothings(self, n):
        b = braid.dn_word(n)
        d = braid.closure(b)
        for c, (i, e) in zip(b.crossing_ids(), b.letters):
            fp = jones_fingerprint(smooth(d, c))
            assert fp == (reference_fingerprint(i) if e < 0 else ONE)

    def test_smoothing_unknown_crossing(self, hopf):
        with pytest.raises(DiagramError):
            smooth(hopf, 5)


class TestMirrorAndSum:
    def test_mirror_torus_is_negative_torus(self):
        t = torus(3)
        assert jones_fingerprint(mirror(t)) == jones_fingerprint(t).substitute_inverse()
        assert jones_fingerprint(mirror(t)) != jones_fingerprint(t)

    def test_trefoil_composite(self):
        t = torus(3)
        s = connected_sum(t, (0, 2), mirror(t), (0, 2))
        assert s.num_crossings == 6
        assert validate(s) == []
        assert components(s).count == 1
        assert jones_fingerprint(s) == jones_fingerprint(t) * jones_fingerprint(mirror(t))

    def test_sum_with_unknot_is_unit(self, hopf):
        s = connected_sum(hopf, (0, 2), unknot(), None)
        assert canonical_key(s) == canonical_key(hopf)

    @pytest.mark.parametrize("k1,k2", [(2, 2), (2, 3), (4, 1), (3, 4)])
    def test_component_counts_add(self, k1, k2):
        a, b = torus(k1), torus(k2)
        s = connected_sum(a, (0, 2), b, (0, 3))
        assert components(s).count == components(a).count + components(b).count - 1

    def test_bad_arc(self, hopf):
        with pytest.raises(DiagramError):
            connected_sum(hopf, (0, 0), hopf, (0, 2))
        with pytest.raises(DiagramError):
            connected_sum(hopf, (0, 2), hopf, None)


class TestSerialization:
    def test_hopf_round_trip(self, hopf):
        assert decode(encode(hopf)) == hopf
        assert decode_json(encode_json(hopf)) == hopf

    def test_single_crossing_record(self):
        d = decode("diagram crossings=1 loops=0\nX 1 1 2 2 h=R\n")
        assert d.num_crossings == 1 and components(d).count == 1

    def test_wrong_label_count(self):
        with pytest.raises(DiagramFormatError, match="crossing line needs 4 arc labels"):
            decode("diagram crossings=1 loops=0\nX 1 1 2 h=R\n")

    def test_error_carries_line(self):
        with pytest.raises(DiagramFormatError) as exc:
            decode("diagram crossings=1 loops=0\n\nX 1 1 2 2 h=Q\n")
        assert exc.value.line == 3

    def test_label_used_once(self):
        with pytest.raises(DiagramFormatError, match="appears 1 times"):
            decode("diagram crossings=1 loops=0\nX 1 1 2 3 h=R\n")

    def test_comments_and_empty(self):
        d = decode("# nothing here\ndiagram crossings=0 loops=2\n")
        assert d == unlink(2)

    def test_json_schema(self, hopf):
        data = json.loads(encode_json(hopf))
        assert set(data) == {"crossings", "loops"}
        assert all(len(x["arcs"]) == 4 for x in data["crossings"])

    @given(diagrams())
    def test_round_trip_random(self, d):
        assert decode(encode(d)) == d
        assert decode_json(encode_json(d)) == d

    @given(diagrams())
    def test_crossing_change_valid(self, d):
        for c in d.crossings:
            e = change_crossing(d, c)
            assert validate(e) == []
            assert crossing_sign(e, c) == -crossing_sign(d, c)
            assert change_crossing(e, c) == d
