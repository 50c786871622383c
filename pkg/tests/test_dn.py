import json
from collections import Counter
from fractions import Fraction

import pytest

from unlinkbound.diagram import components, writhe
from unlinkbound.dn import (
    CrossCheckError,
    DnReport,
    build,
    census,
    export_sequence,
    predicted_census,
    report,
    sigma_estimate,
    split_conjectural,
    unknotting_sequence,
)
from unlinkbound.invariants import CapExceeded
from unlinkbound.iu import Interval
from unlinkbound.moves import parse_moves, verify_sequence
from unlinkbound.unknotting import CensusId, UInterval


class TestBuild:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_counts(self, n):
        d = build(n)
        signs = Counter(d.signs.values())
        assert d.num_crossings == 3 * n - 1
        assert (signs[1], signs[-1]) == (2 * n - 1, n)
        assert writhe(d) == n - 1
        assert components(d).count == 2

    def test_cap(self):
        with pytest.raises(CapExceeded):
            build(100)
        assert build(13, cap=13).num_crossings == 38

    def test_bad_n(self):
        with pytest.raises(ValueError):
            build(0)


class TestSequence:
    @pytest.mark.parametrize("n,length", [(1, 1), (4, 13), (7, 34)])
    def test_lengths(self, n, length):
        assert len(unknotting_sequence(n)) == length

    @pytest.mark.parametrize("n", range(1, 13))
    def test_replay(self, n):
        final, tally = verify_sequence(build(n), unknotting_sequence(n))
        assert final.num_crossings == 0 and final.free_loops == 2
        got = (tally.count("RI", "delete", "+"), tally.count("RII", "delete", "matched"), tally.count("RIII"))
        assert got == (n - 1, n, n * (n - 1) // 2)
        assert 2 * tally.total == n * n + 3 * n - 2

    def test_export_round_trip(self):
        assert parse_moves(export_sequence(4)) == unknotting_sequence(4)


class TestCensus:
    def test_n2(self):
        got = Counter(str(e.predicted) for e in census(2))
        assert got == Counter({"T2Composite(1)": 2, "T2Composite(2)": 1, "Unknot": 2})

    def test_n4_odd_block_is_knot(self):
        entries = census(4)
        odd = [e for e in entries if e.predicted == CensusId.t2_composite(3)]
        assert len(odd) == 2
        assert all(e.identified == CensusId.t2_composite(3) for e in odd)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_positions(self, n):
        entries = census(n)
        assert len(entries) == 3 * n - 1
        for e in entries:
            if e.predicted.tag == "Unknot" or e.predicted.k == 1:
                assert e.identified == CensusId.unknot() and e.u == UInterval.exact(0)
            else:
                assert e.identified == e.predicted

    def test_block_sizes(self):
        pred = Counter(str(c) for _, c in predicted_census(5))
        assert pred == Counter({"T2Composite(1)": 2, "T2Composite(2)": 2, "T2Composite(3)": 2,
                                "T2Composite(4)": 2, "T2Composite(5)": 1, "Unknot": 5})

    def test_cap(self):
        with pytest.raises(CapExceeded):
            census(8)


class TestReport:
    def test_n2_flag_on(self):
        r = report(2, True)
        assert r.iu == 2 and r.iu_pp == 6
        assert r.all_move_bound_certified == 3 and r.sequence_length == 4
        assert r.split_bound_conjectural == 0

    def test_n4_flag_on(self):
        r = report(4, True)
        assert r.iu == 12 and r.iu_pp == 22
        assert r.all_move_bound_conjectural == 11 <= r.sequence_length == 13
        assert r.split_bound_conjectural == 2

    def test_n5(self):
        on, off = report(5, True), report(5, False)
        assert on.iu == 20 and on.split_bound_conjectural == 4
        assert off.iu == Interval(18, 20)
        assert off.all_move_bound_certified == 16

    def test_n1(self):
        r = report(1)
        assert r.iu == 0 and r.sequence_length == 1

    @pytest.mark.parametrize("n", range(1, 8))
    def test_all_checks_pass(self, n):
        r = report(n)
        assert all(r.checks.values()) and len(r.checks) >= 10

    def test_sigma_readings(self):
        r = report(4, True)
        assert r.sigma_consistent == 12
        assert r.sigma_as_displayed == 0 + 2 + 2 + 4
        for n in (2, 4, 6):
            assert sigma_estimate(n) == Fraction(n * n + 4 * n - 8, 2)

    def test_split_formula(self):
        assert [split_conjectural(n) for n in range(2, 8)] == [0, 1, 2, 4, 6, 9]

    def test_json(self):
        r = report(3)
        data = json.loads(r.dumps())
        assert data["sequence"]["length"] == 8
        assert data["all_move_bound"]["certified"] == 7
        assert data["iu"] == [6, 6]
        assert len(data["census"]) == 8

    def test_text(self):
        text = report(3, True).to_text()
        assert "iu(+1,+1)" in text and "13" in text

    def test_cap(self):
        with pytest.raises(CapExceeded):
            report(8)

    def test_report_type(self):
        assert isinstance(report(2), DnReport)
        assert issubclass(CrossCheckError, AssertionError)
