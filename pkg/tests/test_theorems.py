import math
import warnings
from fractions import Fraction

import pytest

from edelstein.certified import CertifiedValue
from edelstein.indices import factorial, fractional_part, s_index
from edelstein.operator import orbit_norm_sq
from edelstein.schedules import XiSchedule
from edelstein.theorems import (
    Claim,
    Relation,
    blowup_envelope,
    certify,
    rate_table,
    verify_blowup_edelstein,
    verify_blowup_suborbit,
    verify_fractional_window,
    verify_vanishing_suborbit,
    window_bounds,
    window_holds_exactly,
)


class TestCertify:
    def test_strict_needs_gap(self):
        a = CertifiedValue(1.0, 0.0)
        assert not certify(Claim.VANISHING, 1, a, Relation.LT, a).passed
        assert certify(Claim.VANISHING, 1, a, Relation.LE, a).passed

    def test_overlap_fails(self):
        a, b = CertifiedValue(1.0, 0.1), CertifiedValue(1.15, 0.1)
        cert = certify(Claim.VANISHING, 1, a, Relation.LE, b)
        assert not cert.passed and cert.margin < 0

    def test_links_propagate(self):
        a, b = CertifiedValue(1.0), CertifiedValue(2.0)
        bad = certify(Claim.VANISHING, 1, b, Relation.LT, a)
        assert not certify(Claim.VANISHING, 1, a, Relation.LT, b, links=(bad,)).passed

    def test_intervals(self):
        lo, x, hi = CertifiedValue(1.0), CertifiedValue(1.0), CertifiedValue(2.0)
        assert certify(Claim.BLOWUP, 1, x, Relation.IN_HALF_OPEN, hi, lower=lo).passed
        assert not certify(Claim.BLOWUP, 1, x, Relation.IN_OPEN, hi, lower=lo).passed

    def test_honest_pass(self):
        # a pass means the intervals are separated
        for n in range(1, 13):
            c = verify_vanishing_suborbit(XiSchedule.constant(), n)
            assert c.passed and c.lhs.upper < c.rhs.lower


class TestVanishing:
    def test_n5(self, unit_xi):
        c = verify_vanishing_suborbit(unit_xi, 5)
        assert c.passed and c.rhs.value == pytest.approx(4 * math.pi**2 / 35)

    def test_n1(self, unit_xi):
        c = verify_vanishing_suborbit(unit_xi, 1)
        assert c.passed and c.rhs.value == pytest.approx(4 * math.pi**2 / 3)

    def test_n12_big_reduction(self, unit_xi):
        c = verify_vanishing_suborbit(unit_xi, 12)
        assert c.passed and c.rhs.value == pytest.approx(4 * math.pi**2 / 168)
        assert c.lhs == orbit_norm_sq(unit_xi, 479001600)

    @pytest.mark.parametrize("xs", [XiSchedule.inverse_sqrt(), XiSchedule.geometric(0.5),
                                    XiSchedule.explicit([2.0, 1.0], 0.5)])
    def test_other_schedules(self, xs):
        assert all(verify_vanishing_suborbit(xs, n).passed for n in range(1, 13))

    def test_rate_link(self, unit_xi):
        for n in range(1, 13):
            c = verify_vanishing_suborbit(unit_xi, n)
            assert n * c.lhs.sqrt().upper <= 2 * math.pi
            assert all(link.passed for link in c.links)


class TestBlowup:
    def test_precondition(self, unit_xi):
        with pytest.raises(ValueError, match="n >= 8"):
            verify_blowup_suborbit(unit_xi, 7)

    def test_n8(self, unit_xi):
        c = verify_blowup_suborbit(unit_xi, 8)
        assert c.passed
        assert c.lower.value == 3.0
        assert c.rhs.value == pytest.approx(40 + math.pi**2 / 120)

    def test_n20(self, unit_xi):
        c = verify_blowup_suborbit(unit_xi, 20)
        assert c.passed and c.lower.value == 39.0
        assert c.rhs.value == pytest.approx(88 + math.pi**2 / 528)

    def test_inverse_sqrt(self):
        xs = XiSchedule.inverse_sqrt()
        c = verify_blowup_suborbit(xs, 12)
        assert c.passed
        assert c.lhs.lower >= 3 * 5 / 14

    def test_envelope_ordering(self):
        for xs in (XiSchedule.constant(), XiSchedule.inverse_sqrt(), XiSchedule.geometric(0.95)):
            for n in (8, 15, 30):
                a, b, d, e = blowup_envelope(xs, n)
                assert a <= b * (1 + 1e-15) and d <= e * (1 + 1e-15)

    def test_unbounded_for_constant_scale(self, unit_xi):
        values = [verify_blowup_suborbit(unit_xi, n).lhs.lower for n in range(8, 41)]
        assert max(values) >= 99

    def test_geometric_schedule_still_certifies(self):
        # lower bounds become tiny but the chain still holds
        assert verify_blowup_suborbit(XiSchedule.geometric(0.9), 12).passed


class TestFractionalWindow:
    def test_n8(self):
        certs = verify_fractional_window(8)
        assert [c.k for c in certs] == [10]
        assert certs[0].passed

    def test_n40(self):
        certs = verify_fractional_window(40)
        assert [c.k for c in certs] == list(range(10, 43))
        assert all(certs)

    def test_inside_thirds(self):
        for k in range(10, 60):
            lo, hi = window_bounds(k)
            assert Fraction(1, 3) < lo and hi < Fraction(2, 3)

    def test_sine_floor_strict(self):
        for c in verify_fractional_window(25):
            (floor,) = c.links
            assert floor.passed and floor.margin > 0
            assert floor.rhs.lower > 0.75

    def test_exact_sharp_window(self):
        for n in range(8, 61):
            for k in range(10, n + 3):
                assert window_holds_exactly(n, k)

    def test_window_fails_below_k4(self):
        # the lower estimate needs k >= 4; nothing is claimed below
        fp = fractional_part(s_index(10), 3)
        assert fp.as_fraction() == 0 or fp.float_value < 0.5 + 13 / 72

    def test_precondition(self):
        with pytest.raises(ValueError):
            verify_fractional_window(5)


class TestEdelsteinSuborbit:
    def test_first_is_one_step(self, unit_xi):
        c = verify_blowup_edelstein(unit_xi, 1)
        assert c.passed and c.lhs == orbit_norm_sq(unit_xi, 1)

    @pytest.mark.parametrize("n", [2, 3])
    def test_finite(self, unit_xi, n):
        c = verify_blowup_edelstein(unit_xi, n)
        assert c.passed and c.lhs.is_finite

    def test_warns_past_three(self, unit_xi):
        with pytest.warns(RuntimeWarning):
            c = verify_blowup_edelstein(unit_xi, 4)
        assert c.passed


class TestRateTable:
    def test_rows(self, unit_xi):
        rows = rate_table(unit_xi, 16)
        assert [r.n for r in rows] == list(range(1, 17))
        assert all(r.passed for r in rows)
        for r in rows:
            assert r.vanishing_norm.upper <= r.vanishing_bound
            if r.n >= 8:
                assert r.blowup_norm.lower >= r.blowup_lower

    def test_row8_matches_certificates(self, unit_xi):
        row = rate_table(unit_xi, 8)[-1]
        assert row.vanishing_norm == verify_vanishing_suborbit(unit_xi, 8).lhs.sqrt()
        assert row.blowup_norm == verify_blowup_suborbit(unit_xi, 8).lhs.sqrt()

    def test_envelopes(self, unit_xi):
        for r in rate_table(unit_xi, 40):
            if r.n <= 12:
                assert r.n * r.vanishing_norm.upper <= 2 * math.pi
            if r.n >= 8:
                assert r.blowup_norm.upper**2 <= 4 * (r.n + 2) + math.pi**2 / ((r.n + 3) ** 2 - 1)

    def test_needs_blowup_range(self, unit_xi):
        with pytest.raises(ValueError):
            rate_table(unit_xi, 7)
