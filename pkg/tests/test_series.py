import random
from fractions import Fraction as F
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import a_ref, classic_delta, delta_ref, phi_mp, phi_ref
from pcrot.core import Approx, Family, lift
from pcrot.series import (
    N_MAX,
    PrecisionExhausted,
    RotationTarget,
    a_of,
    a_offsets,
    choose_terms,
    delta_of,
    phi,
    tail_bound,
)

H, Q = F(1, 2), F(1, 4)
FAM = Family(H, Q)
FAM7 = Family("0.7", "0.2")
GOLDEN = (mpmath.sqrt(5) - 1) / 2


def farey_inner(n):
    return sorted({F(p, q) for q in range(2, n + 1) for p in range(1, q)})


def irr(x):
    return Approx(mpmath.mpf(x), mpmath.mpf(2) ** -150)


def within(x, ref, err):
    return abs(lift(x).value - lift(ref).value) <= lift(x).err + lift(ref).err + lift(err).value


rationals = st.builds(lambda q, p: F(p % (q - 1) + 1, q), st.integers(2, 9), st.integers(0, 50)).filter(
    lambda r: 0 < r < 1
)
alphas = st.fractions(0, 1, max_denominator=24)
families = st.sampled_from([(H, Q), (F(7, 10), F(1, 5)), (F(1, 3), F(1, 2)), (F(9, 10), F(1, 20))])


class TestHandValues:
    def test_delta_at_half(self):
        sv = delta_of(FAM, RotationTarget(H, H))
        assert (sv.value, sv.left_limit) == (F(3, 4), H)
        sv = delta_of(FAM, RotationTarget(H, 1))
        assert (sv.value, sv.left_limit) == (F(5, 6), F(2, 3))

    def test_a_at_half(self):
        sv = a_of(FAM, F(3, 4), RotationTarget(H, H))
        assert (sv.value, sv.left_limit) == (1, H)
        assert a_of(FAM, H, RotationTarget(H, H)).value == H

    def test_phi_at_zero(self):
        assert phi(FAM, F(3, 4), RotationTarget(H, H), 0).value == H

    def test_tail_bound_small(self):
        for rho in (0, H, 1):
            for y in (0, H, 1):
                assert tail_bound(60, H, Q, rho, 0, y) < F(1, 2**50)

    def test_tail_bound_decreases(self):
        vals = [tail_bound(n, F(7, 10), F(1, 5), F(1, 3), 0, H) for n in range(1, 200)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < F(1, 10**28)

    def test_terms_capped(self):
        with pytest.raises(PrecisionExhausted):
            choose_terms(F(99, 100), F(1, 200), H, 0, F(1, 2**200))
        assert choose_terms(H, Q, H, 0, F(1, 2**100)) <= N_MAX


class TestAgainstOracle:
    @settings(max_examples=150, deadline=None)
    @given(families, rationals, alphas)
    def test_delta_and_a(self, fam, rho, alpha):
        lam, d = fam
        fm = Family(lam, d)
        t = RotationTarget(rho, alpha)
        sv = delta_of(fm, t)
        v, e = delta_ref(lam, d, rho, alpha)
        assert abs(sv.value - v) <= e
        v, e = delta_ref(lam, d, rho, alpha, left=True)
        assert abs(sv.left_limit - v) <= e
        delta = sv.value
        av = a_of(fm, delta, t)
        v, e = a_ref(lam, d, delta, rho, alpha)
        assert abs(av.value - v) <= e
        v, e = a_ref(lam, d, delta, rho, alpha, right=True)
        assert abs(av.left_limit - v) <= e

    @settings(max_examples=150, deadline=None)
    @given(families, rationals, alphas, st.fractions(-2, 2, max_denominator=36))
    def test_phi(self, fam, rho, alpha, y):
        lam, d = fam
        delta = F(1, 2)
        pv = phi(Family(lam, d), delta, RotationTarget(rho, alpha), y)
        v, e = phi_ref(lam, d, delta, rho, alpha, y)
        assert abs(pv.value - v) <= e
        v, e = phi_ref(lam, d, delta, rho, alpha, y, left=True)
        assert abs(pv.left_limit - v) <= e

    def test_irrational_phi_matches_direct_sum(self):
        t = RotationTarget(irr(GOLDEN), F(1, 4))
        for y in (F(0), F(1, 7), F(1, 3), F(5, 6)):
            got = phi(FAM7, F(1, 2), t, y).value
            ref = phi_mp(F(7, 10), F(1, 5), F(1, 2), GOLDEN, F(1, 4), y)
            assert abs(got.value - ref) <= got.err + mpmath.mpf(10) ** -60


class TestClosedForms:
    @pytest.mark.parametrize("lam,d", [(H, Q), (F(7, 10), F(1, 5)), (F(2, 9), F(5, 9))])
    def test_classic_limit(self, lam, d):
        fam = Family(lam, d)
        for rho in farey_inner(12):
            sv = delta_of(fam, RotationTarget(rho, 1))
            assert sv.value == classic_delta(lam, rho)
            assert sv.left_limit == classic_delta(lam, rho, left=True)

    def test_finite_sum_lemma(self):
        """delta and a from the explicit q-term sums with the lambda^q correction."""
        for lam, d in ((H, Q), (F(7, 10), F(1, 5))):
            fam = Family(lam, d)
            for rho in farey_inner(7):
                p, q = rho.numerator, rho.denominator
                for alpha in [F(i, 2 * q) for i in range(2 * q + 1)] + [F(1, 7), F(5, 11)]:
                    def psi_(b, z):
                        n = z.numerator // z.denominator
                        return (1 - lam) * n + (d if z - n >= b else 0)
                    one = 1 if alpha == 1 else 0
                    s = sum(lam**r * psi_(1 - alpha, r * rho) for r in range(1, q))
                    want = 1 - lam - d + (1 - lam) / (lam * (1 - lam**q)) * (lam**q * (p + d * one) + s)
                    t = RotationTarget(rho, alpha)
                    assert delta_of(fam, t).value == want
                    delta = F(3, 5)
                    s = sum(lam**r * psi_(alpha, alpha - r * rho) for r in range(1, q))
                    want = (delta / (1 - lam) - lam ** (q - 1) / (1 - lam**q) * (p - d - (1 - lam - d) * one)
                            + s / (lam * (1 - lam**q)))
                    assert a_of(fam, delta, t).value == want

    def test_rational_gaps(self):
        for lam, d in ((H, Q), (F(7, 10), F(1, 5))):
            fam = Family(lam, d)
            for rho in farey_inner(8):
                p, q = rho.numerator, rho.denominator
                for alpha in sorted({F(i, 2 * q) for i in range(2 * q + 1)} | {F(1, 9), F(7, 13)}):
                    edge = 1 if alpha in (0, 1) else 0
                    hits = [r for r in range(1, q) if (r * rho - alpha).denominator == 1]
                    r_a = hits[0] if hits else 0
                    c = lam ** (q - 1) / (1 - lam**q)
                    dgap = c * (1 - lam) * (1 - lam - d + d * edge + (lam ** (-r_a) * d if hits else 0))
                    agap = c * (d + (1 - lam - d) * edge) + (
                        lam ** (r_a - 1) / (1 - lam**q) * (1 - lam - d) if hits else 0)
                    t = RotationTarget(rho, alpha)
                    assert delta_of(fam, t).gap == dgap
                    assert a_offsets(fam, t).gap == agap
                    lower_d = c * (1 - lam) * (1 - lam - d + d * edge)
                    lower_a = c * ((1 - lam - d) * edge + d)
                    assert (delta_of(fam, t).gap == lower_d) == (not hits)
                    assert (a_offsets(fam, t).gap == lower_a) == (not hits)

    @pytest.mark.parametrize("k", [-5, -2, -1, 1, 2, 3, 7])
    def test_irrational_resonance_gaps(self, k):
        lam, d = F(7, 10), F(1, 5)
        t = RotationTarget(irr(GOLDEN), k=k)
        dg = delta_of(FAM7, t).gap
        ag = a_offsets(FAM7, t).gap
        want_d = (1 - lam) * d * lam ** (-k - 1) if k < 0 else 0
        want_a = (1 - lam - d) * lam ** (k - 1) if k > 0 else 0
        assert within(dg, want_d, F(1, 10**25))
        assert within(ag, want_a, F(1, 10**25))

    def test_irrational_generic_has_no_gap(self):
        t = RotationTarget(irr(GOLDEN), F(1, 4))
        assert lift(delta_of(FAM7, t).gap).value == 0
        assert lift(a_offsets(FAM7, t).gap).value == 0


class TestIdentities:
    @settings(max_examples=100, deadline=None)
    @given(families, rationals, alphas, st.fractions(0, 1, max_denominator=20))
    def test_phi_special_values(self, fam, rho, alpha, delta):
        lam, d = fam
        fm = Family(lam, d)
        t = RotationTarget(rho, alpha)
        dv = delta_of(fm, t)
        p0 = phi(fm, delta, t, 0)
        assert p0.value == (delta - dv.left_limit) / (1 - lam)
        assert p0.left_limit == (delta - dv.value) / (1 - lam)
        pa = phi(fm, delta, t, alpha)
        av = a_of(fm, delta, t)
        assert (pa.value, pa.left_limit) == (av.value, av.left_limit)

    @settings(max_examples=100, deadline=None)
    @given(families, rationals, alphas, st.fractions(-2, 2, max_denominator=40))
    def test_phi_degree_one(self, fam, rho, alpha, y):
        fm = Family(*fam)
        t = RotationTarget(rho, alpha)
        assert phi(fm, H, t, y + 1).value == phi(fm, H, t, y).value + 1
        assert phi(fm, H, t, y + 1).left_limit == phi(fm, H, t, y).left_limit + 1

    @settings(max_examples=60, deadline=None)
    @given(families, rationals, alphas)
    def test_phi_monotone_on_grid(self, fam, rho, alpha):
        fm = Family(*fam)
        t = RotationTarget(rho, alpha)
        vals = []
        for i in range(49):
            sv = phi(fm, H, t, F(i, 48))
            assert sv.left_limit <= sv.value
            vals += [sv.left_limit, sv.value]
        assert vals == sorted(vals)

    def test_irrational_phi_strictly_increasing(self):
        t = RotationTarget(irr(GOLDEN), F(1, 4))
        vals = [phi(FAM7, H, t, F(i, 64)).value for i in range(64)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    @settings(max_examples=60, deadline=None)
    @given(families, rationals, alphas, st.fractions(0, 1, max_denominator=30), st.fractions(0, 1, max_denominator=30))
    def test_a_affine_in_delta(self, fam, rho, alpha, d1, d2):
        lam = fam[0]
        fm = Family(*fam)
        t = RotationTarget(rho, alpha)
        a1, a2 = a_of(fm, d1, t), a_of(fm, d2, t)
        assert a2.value - a1.value == (d2 - d1) / (1 - lam)
        assert a2.gap == a1.gap


class TestMonotonicity:
    @pytest.mark.parametrize("alpha", [F(0), F(1, 4), F(1, 3), F(1, 2), F(5, 7), F(1)])
    def test_delta_increasing_on_farey(self, alpha):
        rhos = farey_inner(12)
        for fam in (FAM, FAM7):
            vals = [delta_of(fam, RotationTarget(r, alpha)) for r in rhos]
            for a, b in zip(vals, vals[1:]):
                assert a.left_limit < a.value < b.left_limit < b.value

    @pytest.mark.parametrize("alpha", [F(0), F(1, 3), F(1)])
    def test_range_limits(self, alpha):
        lam, d = F(7, 10), F(1, 5)
        lo_lim = 1 - lam - d + (d if alpha == 1 else 0)
        hi_lim = 1 - (d if alpha == 0 else 0)
        prev_lo, prev_hi = None, None
        for q in (5, 10, 20, 40, 80, 160):
            lo = delta_of(FAM7, RotationTarget(F(1, q), alpha)).left_limit - lo_lim
            hi = hi_lim - delta_of(FAM7, RotationTarget(F(q - 1, q), alpha)).value
            assert lo > 0 and hi > 0
            if prev_lo is not None:
                assert lo < prev_lo and hi < prev_hi
            prev_lo, prev_hi = lo, hi
        assert prev_lo < F(1, 10**8) and prev_hi < F(1, 10**8)


class TestApproxAgreement:
    def test_thousand_random_inputs(self):
        rng = random.Random(20240601)
        fams = [(H, Q), (F(7, 10), F(1, 5)), (F(1, 3), F(1, 2)), (F(4, 5), F(1, 10))]
        for _ in range(1000):
            lam, d = rng.choice(fams)
            fam = Family(lam, d)
            q = rng.randint(2, 15)
            p = rng.randint(1, q - 1)
            while gcd(p, q) != 1:
                p = rng.randint(1, q - 1)
            rho = F(p, q)
            alpha = F(rng.randint(0, 60), 60)
            t = RotationTarget(rho, alpha)
            kind = rng.randrange(3)
            if kind == 0:
                ex, ap = delta_of(fam, t), delta_of(fam, t, mode="approx")
            elif kind == 1:
                delta = F(rng.randint(1, 99), 100)
                ex, ap = a_of(fam, delta, t), a_of(fam, delta, t, mode="approx")
            else:
                y = F(rng.randint(-50, 150), 100)
                ex, ap = phi(fam, H, t, y), phi(fam, H, t, y, mode="approx")
            assert ap.value.contains(ex.value)
            assert ap.left_limit.contains(ex.left_limit)
            assert float(ap.value.err) < 1e-28

    def test_exact_mode_refuses_irrational(self):
        with pytest.raises(ValueError):
            delta_of(FAM7, RotationTarget(irr(GOLDEN), H), mode="exact")
