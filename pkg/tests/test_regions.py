from fractions import Fraction as F
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcrot.core import Approx, BoundaryAmbiguous, Family, MapSpec, MapTag, classify, fixed_point_check, lift
from pcrot.regions import (
    InfeasibleGoal,
    Membership,
    SynthesisTarget,
    check_adjacent,
    classify_alpha,
    complexity_offset,
    contains,
    enumerate_regions,
    includes,
    intersect,
    region,
    synthesize,
)
from pcrot.series import RotationTarget

H, Q = F(1, 2), F(1, 4)
FAM = Family(H, Q)
FAM7 = Family(F(7, 10), F(1, 5))
PI4 = Approx(mpmath.pi / 4, mpmath.mpf(2) ** -180)
GOLDEN = Approx((mpmath.sqrt(5) - 1) / 2, mpmath.mpf(2) ** -180)


def reduced(qmax):
    return [F(p, q) for q in range(2, qmax + 1) for p in range(1, q) if gcd(p, q) == 1]


class TestRegion:
    def test_fig4_parallelogram(self):
        r = region(FAM7, RotationTarget(F(1, 3), H))
        assert 0 < r.delta_width and 0 < r.a_width
        assert 1 - FAM7.lam - FAM7.d < r.delta_lo < r.delta_hi < 1
        assert not r.clipped
        c = r.corners()
        # opposite sides are parallel with slope 1/(1 - lambda)
        assert (c[1][1] - c[0][1]) / (c[1][0] - c[0][0]) == 1 / (1 - FAM7.lam)
        assert (c[2][1] - c[3][1]) / (c[2][0] - c[3][0]) == 1 / (1 - FAM7.lam)

    def test_half_region(self):
        r = region(FAM, RotationTarget(H, H))
        assert (r.delta_lo, r.delta_hi) == (H, F(3, 4))
        assert r.a_width == H

    def test_irrational_region_is_degenerate(self):
        r = region(FAM7, RotationTarget(GOLDEN, Q))
        assert r.delta_degenerate and r.a_degenerate
        assert lift(r.delta_width).value == 0 and lift(r.a_width).value == 0

    def test_widths_respect_lower_bounds(self):
        lam, d = FAM7.lam, FAM7.d
        for rho in reduced(7):
            q = rho.denominator
            c = lam ** (q - 1) / (1 - lam**q)
            for al, r in enumerate_regions(FAM7, rho):
                edge = 1 if al in (0, 1) else 0
                assert r.delta_width >= c * (1 - lam) * (1 - lam - d + d * edge)
                assert r.a_width >= c * (d + (1 - lam - d) * edge)

    def test_inclusion_mode_checked(self):
        with pytest.raises(ValueError):
            region(FAM, RotationTarget(H, H), inclusion_mode="open")


class TestEnumerate:
    @pytest.mark.parametrize("rho,count", [(F(1, 3), 7), (F(1, 2), 5), (F(2, 5), 11)])
    def test_counts(self, rho, count):
        regs = enumerate_regions(FAM7, rho)
        assert len(regs) == count
        assert len({(r.delta_lo, r.delta_hi, r.a_offset_lo, r.a_offset_hi) for _, r in regs}) == count
        assert [al for al, _ in regs] == sorted(al for al, _ in regs)

    @pytest.mark.parametrize("rho", reduced(6))
    def test_in_between_is_intersection(self, rho):
        assert all(check_adjacent(enumerate_regions(FAM7, rho)))

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError):
            enumerate_regions(FAM7, F(3, 2))


class TestContains:
    def test_fig7(self):
        r = region(FAM7, RotationTarget(Q, F(5, 16)))
        assert contains(r, "0.27", "0.34") == Membership.INSIDE_STRICT
        assert r.delta_lo <= F(27, 100) < r.delta_hi

    def test_boundaries(self):
        r = region(FAM7, RotationTarget(Q, F(5, 16)))
        lo, hi = r.a_interval(r.delta_hi)
        assert contains(r, r.delta_hi, (lo + hi) / 2) == Membership.INSIDE_BOUNDARY
        delta = (r.delta_lo + r.delta_hi) / 2
        lo, hi = r.a_interval(delta)
        assert contains(r, delta, lo) == Membership.INSIDE_BOUNDARY
        assert contains(r, delta, hi) == Membership.INSIDE_STRICT
        assert contains(r, r.delta_lo, r.a_interval(r.delta_lo)[1]) == Membership.INSIDE_STRICT
        assert contains(r, r.delta_lo - F(1, 10**6), lo) == Membership.OUTSIDE
        assert contains(r, delta, hi + F(1, 10**9)) == Membership.OUTSIDE

    def test_inclusion_modes(self):
        t = RotationTarget(Q, F(5, 16))
        closed, half = region(FAM7, t, inclusion_mode="closed"), region(FAM7, t)
        p = (closed.delta_hi, sum(closed.a_interval(closed.delta_hi)) / 2)
        assert includes(closed, *p) and not includes(half, *p)

    def test_ambiguous_in_approx_mode(self):
        r = region(FAM7, RotationTarget(Q, F(5, 16)))
        d = Approx(r.delta_lo, F(1, 10**20))
        with pytest.raises(BoundaryAmbiguous):
            contains(r, d, sum(r.a_interval(r.delta_lo)) / 2)


class TestClassifyAlpha:
    def test_examples(self):
        e = classify_alpha(RotationTarget(Q, F(5, 16)))
        assert (e.tag, e.strength) == (MapTag.M1, "exists_point")
        assert classify_alpha(RotationTarget(F(1, 3), F(2, 3))).tag == MapTag.M2
        e = classify_alpha(RotationTarget(PI4, Q))
        assert (e.tag, e.strength) == (MapTag.M3, "all_points")

    def test_declared_resonance_at_one_minus_rho(self):
        # alpha = R^{-1}(0) = 1 - rho exactly
        assert classify_alpha(RotationTarget(GOLDEN, k=-1)).tag == MapTag.M2


class TestSynthesize:
    def test_two_orbits_quarter(self):
        spec, cert = synthesize(FAM7, SynthesisTarget(Q, "orbit_count", n_orbits=2))
        assert cert["membership"] == "inside_strict"
        assert 0 < cert["alpha"] < Q
        assert cert["expected"] == {"cycles": 2, "period": 4, "winding": 1, "complexity_limit": 8}
        reg = region(FAM7, RotationTarget(Q, F(5, 16)))
        assert contains(reg, "0.27", "0.34") == Membership.INSIDE_STRICT

    def test_one_period_two_orbit(self):
        spec, cert = synthesize(FAM, SynthesisTarget(H, "orbit_count", n_orbits=1, alpha=1))
        assert spec.delta == F(3, 4) and F(2, 3) < spec.delta < F(5, 6)
        assert cert["membership"] == "inside_strict"
        # the hand example a = 1 lies in the same region
        assert contains(cert["region"], F(3, 4), 1) == Membership.INSIDE_STRICT

    def test_resonant_complexity(self):
        lam, d = FAM7.lam, FAM7.d
        spec, cert = synthesize(FAM7, SynthesisTarget(PI4, "complexity", k=100))
        assert cert["expected"] == {"complexity": "n+b", "b": 101}
        w, want = lift(cert["region"].a_width), lift(lam**99 * (1 - lam - d))
        assert abs(w.value - want.value) <= w.err + want.err + mpmath.mpf(10) ** -40
        assert cert["membership"] == "inside_strict"

    def test_generic_complexity(self):
        spec, cert = synthesize(FAM7, SynthesisTarget(PI4, "complexity"))
        assert cert["expected"] == {"complexity": "2n+1"}
        assert cert["expected_class"] == "M3"

    @pytest.mark.parametrize("tag", [MapTag.M1, MapTag.M2, MapTag.M3])
    def test_map_type(self, tag):
        spec, cert = synthesize(FAM7, SynthesisTarget(F(2, 5), "map_type", map_type=tag))
        assert classify(spec)[1].tag == tag

    @pytest.mark.parametrize("goal", [
        SynthesisTarget(PI4, "orbit_count", n_orbits=1),
        SynthesisTarget(H, "complexity"),
        SynthesisTarget(Q, "orbit_count", n_orbits=2, alpha=H),
        SynthesisTarget(Q, "orbit_count", n_orbits=3),
        SynthesisTarget(Q, "bogus"),
    ])
    def test_infeasible(self, goal):
        with pytest.raises(InfeasibleGoal):
            synthesize(FAM7, goal)

    def test_complexity_offsets(self):
        assert [complexity_offset(k) for k in (-3, -2, -1, 0, 1, 3)] == [3, 2, 1, 1, 2, 4]


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(reduced(8)), st.fractions(0, 1, max_denominator=30),
           st.fractions(-1, 1, max_denominator=40), st.fractions(-1, 1, max_denominator=40))
    def test_parallelogram_affine(self, rho, alpha, d1, d2):
        r = region(FAM7, RotationTarget(rho, alpha))
        lo1, hi1 = r.a_interval(d1)
        lo2, hi2 = r.a_interval(d2)
        assert hi1 - lo1 == hi2 - lo2 == r.a_width
        assert lo2 - lo1 == (d2 - d1) / (1 - FAM7.lam)

    def test_coverage_and_fixed_point_exclusion(self):
        n = 0
        for rho in reduced(8):
            for _, r in enumerate_regions(FAM7, rho):
                delta, a = r.interior_point()
                spec = MapSpec(FAM7.lam, FAM7.d, delta, a)
                assert contains(r, delta, a) == Membership.INSIDE_STRICT
                assert classify(spec)[1].tag == classify_alpha(r.target).tag
                assert fixed_point_check(spec).region == "none"
                n += 1
        assert n == sum(2 * rho.denominator + 1 for rho in reduced(8))

    @pytest.mark.parametrize("lam,d", [(F(7, 10), F(1, 5)), (H, Q), (F(1, 5), F(3, 5))])
    def test_tongues_disjoint(self, lam, d):
        fam = Family(lam, d)
        regs = [(rho, r) for rho in reduced(6) for _, r in enumerate_regions(fam, rho)]
        for i, (r1, a) in enumerate(regs):
            for r2, b in regs[i + 1:]:
                if r1 == r2:
                    continue
                box = intersect(a, b)
                assert box is None or box[0] == box[1] or box[2] == box[3]
