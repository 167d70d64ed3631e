import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chshprob import quantum as Q
from chshprob.errors import ValidationError
from chshprob.pauli import Axis

from conftest import np_projector, random_axis, random_quadruple

TOL = 1e-12
Z = Axis(0, 0, 1)
SQ2 = math.sqrt(2)


def np_four_prob(q, signs, order=(0, 1, 2, 3)):
    """Matrix-product oracle on plain numpy arrays."""
    mats = [np_projector(tuple(q[k]), signs[k]) for k in order]
    return 0.5 * np.trace(mats[0] @ mats[1] @ mats[2] @ mats[3])


def equal_axes():
    return Q.AxisQuadruple(Z, Z, Z, Z)


# --------------------------------------------------------------------------
# pair probabilities


class TestPairProb:
    def test_parallel(self):
        assert Q.pair_prob(Z, 1, Z, 1, "symmetric") == 0.5
        assert Q.pair_prob(Z, 1, Z, 1, "antisymmetric") == 0.0

    def test_sixty_degrees_antisymmetric(self):
        b = Axis.in_plane(math.radians(60))
        # trace oracle for the symmetric (+,-) entry equals the singlet (+,+)
        oracle = 0.5 * np.trace(np_projector(tuple(Z), 1) @ np_projector(tuple(b), -1)).real
        assert abs(oracle - 0.125) <= TOL
        assert abs(Q.pair_prob(Z, 1, b, 1, "antisymmetric") - 0.125) <= TOL

    def test_matches_trace(self, rng):
        for _ in range(200):
            a, b = random_axis(rng), random_axis(rng)
            for sa, sb in itertools.product((1, -1), repeat=2):
                assert abs(Q.pair_prob(a, sa, b, sb) - Q.pair_prob_trace(a, sa, b, sb)) <= TOL
                assert abs(
                    Q.pair_prob(a, sa, b, sb, "antisymmetric") - Q.pair_prob_trace(a, sa, b, -sb)
                ) <= TOL

    def test_bad_symmetry(self):
        with pytest.raises(ValidationError):
            Q.pair_prob(Z, 1, Z, 1, "bosonic")


# --------------------------------------------------------------------------
# delta and coplanar axes


def test_delta_equal_axes():
    assert abs(Q.delta(equal_axes()) - 1) <= TOL


@pytest.mark.parametrize("deg, expected", [(45, 0.0), (0, 1.0)])
def test_delta_coplanar(deg, expected):
    t = math.radians(deg)
    assert abs(Q.delta(Q.coplanar_axes(t)) - expected) <= TOL
    assert abs(Q.coplanar_delta(t) - expected) <= TOL


class TestCoplanar:
    def test_zero_all_identical(self):
        q = Q.coplanar_axes(0.0)
        assert all(ax == q.a1 for ax in q)

    @pytest.mark.parametrize("deg", [0, 10, 45, 60, 90, 137, 180])
    def test_dot_products(self, deg):
        t = math.radians(deg)
        a1, a2, b1, b2 = Q.coplanar_axes(t)
        for x, y in ((a1, b1), (a1, b2), (a2, b1)):
            assert abs(x.dot(y) - math.cos(t)) <= TOL
        assert abs(a2.dot(b2) - math.cos(3 * t)) <= TOL

    def test_45(self):
        q = Q.coplanar_axes(math.radians(45))
        assert abs(q.a2.dot(q.b2) + SQ2 / 2) <= TOL

    def test_90(self):
        q = Q.coplanar_axes(math.radians(90))
        assert abs(q.a1.dot(q.b1)) <= TOL
        assert abs(q.a2.dot(q.b2)) <= TOL


# --------------------------------------------------------------------------
# four-probabilities


class TestFourProbComplex:
    def test_equal_axes(self):
        assert abs(Q.four_prob_complex(equal_axes(), (1, 1, 1, 1)) - 0.5) <= TOL
        assert abs(Q.four_prob_complex(equal_axes(), (1, -1, 1, 1))) <= TOL

    def test_matches_numpy_oracle(self, rng):
        for _ in range(100):
            q = random_quadruple(rng)
            for s in Q.SIGN_QUADRUPLES:
                order = tuple(rng.permutation(4))
                got = Q.four_prob_complex(q, s, order=order)
                assert abs(got - np_four_prob(q, s, order)) <= TOL

    def test_closed_form_matches_trace(self, rng):
        for _ in range(200):
            q = random_quadruple(rng)
            for s in Q.SIGN_QUADRUPLES:
                for sym in Q.Symmetry:
                    a = Q.four_prob_complex(q, s, sym)
                    b = Q.four_prob_complex_closed(q, s, sym)
                    assert abs(a - b) <= TOL

    def test_is_genuinely_complex_and_ordered(self, rng):
        q = random_quadruple(rng)
        s = (1, 1, 1, 1)
        assert abs(Q.four_prob_complex(q, s).imag) > 1e-3
        assert abs(Q.four_prob_complex(q, s) - Q.four_prob_complex(q, s, order=(1, 0, 2, 3))) > 1e-3

    def test_antisymmetric_flips_b_signs(self, rng):
        q = random_quadruple(rng)
        for s in Q.SIGN_QUADRUPLES:
            flipped = (s[0], s[1], -s[2], -s[3])
            assert Q.four_prob_complex(q, s, "antisymmetric") == Q.four_prob_complex(q, flipped)


class TestFourProbSymmetrized:
    def test_equal_axes(self):
        assert abs(Q.four_prob_symmetrized(equal_axes(), (1, 1, 1, 1)) - 0.5) <= TOL

    def test_coplanar_45_negative_entry(self):
        v = Q.four_prob_symmetrized(Q.coplanar_axes(math.radians(45)), (1, -1, 1, -1))
        assert abs(v - (1 - SQ2) / 16) <= TOL
        assert v < 0

    def test_coplanar_zero(self):
        assert abs(Q.four_prob_symmetrized(Q.coplanar_axes(0.0), (1, 1, 1, 1)) - 0.5) <= TOL

    def test_24_ordering_average(self, rng):
        for _ in range(100):
            q = random_quadruple(rng)
            s = Q.SIGN_QUADRUPLES[rng.integers(16)]
            brute = np.mean([np_four_prob(q, s, p) for p in itertools.permutations(range(4))])
            closed = Q.four_prob_symmetrized(q, s)
            assert abs(brute.imag) <= TOL
            assert abs(brute - closed) <= TOL
            assert abs(Q.four_prob_symmetrized_trace(q, s) - closed) <= TOL

    def test_symmetric_under_any_joint_permutation(self, rng):
        q = random_quadruple(rng)
        for s in Q.SIGN_QUADRUPLES:
            base = Q.four_prob_symmetrized(q, s)
            for p in itertools.permutations(range(4)):
                qp = Q.AxisQuadruple(*(q[k] for k in p))
                sp = tuple(s[k] for k in p)
                assert abs(Q.four_prob_symmetrized(qp, sp) - base) <= TOL


# --------------------------------------------------------------------------
# tables


class TestTable2:
    def test_equal_axes(self):
        t = Q.table2(equal_axes())
        for s, v in t.items():
            expected = 0.5 if s in ((1, 1, 1, 1), (-1, -1, -1, -1)) else 0.0
            assert abs(v - expected) <= TOL

    def test_normalized_and_sign_flip_symmetric(self, rng):
        for _ in range(300):
            q = random_quadruple(rng)
            for sym in Q.Symmetry:
                t = Q.table2(q, sym)
                assert abs(t.total() - 1) <= TOL
                for s, v in t.items():
                    assert abs(v - t[tuple(-x for x in s)]) <= TOL

    def test_antisymmetric_is_b_flipped_symmetric(self, rng):
        q = random_quadruple(rng)
        sym, anti = Q.table2(q), Q.table2(q, "antisymmetric")
        for s in Q.SIGN_QUADRUPLES:
            assert anti[s] == sym[(s[0], s[1], -s[2], -s[3])]
        assert anti == sym.flipped_b()
        # the caption's example: P(++++)_AS = P(++--)_S
        assert anti["++++"] == sym["++--"]

    def test_coplanar_45_matches_trig_rows(self):
        t = math.radians(45)
        tab = Q.table2(Q.coplanar_axes(t))
        for s in Q.SIGN_QUADRUPLES:
            assert abs(tab[s] - Q.coplanar_row_trig(s, t)) <= TOL
            assert abs(tab[s] - Q.coplanar_row_poly(s, t)) <= TOL

    def test_negative_entries_not_clamped(self):
        tab = Q.table2(Q.coplanar_axes(math.radians(45)))
        key, value = tab.min_entry()
        assert value < 0

    def test_table_validation(self):
        with pytest.raises(ValidationError):
            Q.FourProbTable({(1, 1, 1, 1): 1.0})
        entries = {s: 1 / 16 for s in Q.SIGN_QUADRUPLES}
        entries[(1, 1, 1, 1)] = math.nan
        with pytest.raises(ValidationError):
            Q.FourProbTable(entries)


class TestCoplanarRows:
    def test_every_row_matches_closed_form(self):
        for t in np.linspace(0, math.pi, 181):
            q = Q.coplanar_axes(t)
            for s in Q.SIGN_QUADRUPLES:
                v = Q.four_prob_symmetrized(q, s)
                assert abs(v - Q.coplanar_row_trig(s, t)) <= TOL
                assert abs(v - Q.coplanar_row_poly(s, t)) <= TOL

    def test_printed_plusplusminusminus_polynomial_is_off(self):
        # -4C^3 + C^2 - 1 + Delta disagrees with the trig row; -4C^3 + 4C^2 - 1 + Delta agrees
        t = math.radians(30)
        c = math.cos(t)
        exact = Q.four_prob_symmetrized(Q.coplanar_axes(t), "++--")
        printed = (-4 * c**3 + c**2 - 1 + Q.coplanar_delta(t)) / 16
        corrected = (-4 * c**3 + 4 * c**2 - 1 + Q.coplanar_delta(t)) / 16
        assert abs(corrected - exact) <= TOL
        assert abs(printed - exact) > 1e-3
        assert Q.COPLANAR_ROWS["++--"][1] == (-4, 4, 0, -1, 1)


# --------------------------------------------------------------------------
# marginals


class TestMarginals:
    def test_equal_axes(self):
        t = Q.table2(equal_axes())
        assert abs(Q.marginal_pair(t, ("a1", "b1"), (1, 1)) - 0.5) <= TOL

    def test_coplanar_60(self):
        t = Q.table2(Q.coplanar_axes(math.radians(60)))
        assert abs(Q.marginal_pair(t, ("a1", "b1"), (1, 1)) - 0.375) <= TOL

    def test_sum_slots_match_listed_entries(self):
        # P(a1+, b1+) sums ++++, +++-, +-+-, +-++
        t = Q.table2(Q.coplanar_axes(0.3))
        listed = t["++++"] + t["+++-"] + t["+-+-"] + t["+-++"]
        assert abs(Q.marginal_pair(t, (0, 2), (1, 1)) - listed) <= TOL

    def test_all_pairs_random(self, rng):
        for _ in range(100):
            q = random_quadruple(rng)
            for sym in Q.Symmetry:
                t = Q.table2(q, sym)
                ct = Q.complex_table(q, sym)
                for keep in itertools.combinations(range(4), 2):
                    for signs in itertools.product((1, -1), repeat=2):
                        expected = Q.expected_marginal(q, keep, signs, sym)
                        assert abs(Q.marginal_pair(t, keep, signs) - expected) <= TOL
                        m = Q.marginal_pair(ct, keep, signs)
                        assert abs(m.imag) <= TOL
                        assert abs(m.real - expected) <= TOL

    def test_cross_station_antisymmetric(self, rng):
        q = random_quadruple(rng)
        t = Q.table2(q, "antisymmetric")
        v = Q.marginal_pair(t, ("a1", "b1"), (1, 1))
        assert abs(v - 0.25 * (1 - q.a1.dot(q.b1))) <= TOL

    def test_errors(self):
        t = Q.FourProbTable.uniform()
        with pytest.raises(ValidationError):
            Q.marginal_pair(t, ("a1", "a1"), (1, 1))
        with pytest.raises(ValidationError):
            Q.marginal_pair(t, ("a1", "c"), (1, 1))
        with pytest.raises(ValidationError):
            Q.marginal_pair({(1, 1, 1, 1): 1.0}, ("a1", "b1"), (1, 1))
        with pytest.raises(ValidationError):
            Q.marginal_pair([1, 2], ("a1", "b1"), (1, 1))


# --------------------------------------------------------------------------
# CHSH


class TestChsh:
    def test_closed_form_values(self):
        assert abs(Q.chsh_closed_form(math.radians(45)) - 2 * SQ2) <= TOL
        assert abs(Q.chsh_closed_form(0.0) - 2) <= TOL
        assert abs(Q.chsh_closed_form(math.radians(90))) <= TOL

    def test_dot_form(self):
        assert abs(Q.chsh_dot_form(Q.coplanar_axes(math.radians(45))) - 2 * SQ2) <= TOL
        assert abs(Q.chsh_dot_form(equal_axes()) - 2) <= TOL

    def test_dot_form_is_raw_dot_combination(self, rng):
        for _ in range(50):
            a1, a2, b1, b2 = q = random_quadruple(rng)
            raw = a1.dot(b1) + a1.dot(b2) + a2.dot(b1) - a2.dot(b2)
            assert abs(Q.chsh_dot_form(q) - raw) <= TOL

    def test_closed_equals_dot_on_coplanar(self):
        for t in np.linspace(-math.pi, math.pi, 100):
            assert abs(Q.chsh_closed_form(t) - Q.chsh_dot_form(Q.coplanar_axes(t))) <= TOL

    def test_master_form_coplanar_45(self):
        q = Q.coplanar_axes(math.radians(45))
        v = Q.chsh_master_form(Q.table2(q), Q.table2(q, "antisymmetric"))
        assert abs(v - 2 * SQ2) <= TOL

    def test_master_form_uniform_is_zero(self):
        assert abs(Q.chsh_master_form(Q.FourProbTable.uniform())) <= TOL

    def test_master_form_positive_entries_only(self):
        plus = [Q.parse_signs(x) for x in ("++++", "----", "+++-", "---+", "+-++", "-+--", "+--+", "-++-")]
        entries = {s: (1 / 8 if s in plus else 0.0) for s in Q.SIGN_QUADRUPLES}
        t = Q.FourProbTable(entries)
        assert abs(Q.chsh_master_form(t) - 2) <= TOL
        assert abs(Q.chsh_from_master(t) - 2) <= TOL

    def test_cp_sign_pattern_is_gamma(self):
        # printed 16-term pattern == gamma(lam, mu, nu, tau) = lam nu + lam tau + mu nu - mu tau
        for s in Q.SIGN_QUADRUPLES:
            entries = {k: (1.0 if k == s else 0.0) for k in Q.SIGN_QUADRUPLES}
            lam, mu, nu, tau = s
            assert Q.chsh_from_master(Q.FourProbTable(entries)) == lam * nu + lam * tau + mu * nu - mu * tau

    def test_master_equals_dot_random_axes(self, rng):
        for _ in range(200):
            q = random_quadruple(rng)
            assert abs(Q.chsh_master_form(Q.table2(q)) - Q.chsh_dot_form(q)) <= TOL

    def test_master_mismatch(self, rng):
        q1, q2 = random_quadruple(rng), random_quadruple(rng)
        with pytest.raises(ValidationError):
            Q.chsh_master_form(Q.table2(q1), Q.table2(q2, "antisymmetric"))
        with pytest.raises(ValidationError):
            Q.chsh_master_form(Q.table2(q1), Q.table2(q1))

    def test_maximum(self):
        m = Q.chsh_maximum()
        assert abs(m.value - 2 * SQ2) <= 1e-9
        assert abs(m.theta - math.pi / 4) <= 1e-6


def test_negativity_intervals_reported():
    grid = np.radians(np.linspace(0, 180, 1801))
    runs = Q.negativity_intervals("+-+-", grid)
    assert any(lo <= math.pi / 4 <= hi for lo, hi in runs)
    assert Q.negativity_intervals("+++-", grid)


# --------------------------------------------------------------------------
# three axes


class TestThreeProb:
    def test_coincident(self):
        assert abs(Q.three_prob(Z, Z, Z, (1, 1, 1)) - 0.5) <= TOL

    def test_orthogonal(self):
        x, y = Axis(1, 0, 0), Axis(0, 1, 0)
        for s in itertools.product((1, -1), repeat=3):
            assert abs(Q.three_prob(x, y, Z, s) - 1 / 8) <= TOL
            assert abs(Q.three_prob_trace(x, y, Z, s) - 1 / 8) <= TOL

    def test_closed_form_matches_symmetrized_trace(self, rng):
        for _ in range(200):
            a, b, c = (random_axis(rng) for _ in range(3))
            for s in itertools.product((1, -1), repeat=3):
                for sym in Q.Symmetry:
                    tr = Q.three_prob_trace(a, b, c, s, sym)
                    assert abs(tr.imag) <= TOL
                    assert abs(tr.real - Q.three_prob(a, b, c, s, sym)) <= TOL

    def test_marginal_over_third_slot(self, rng):
        for _ in range(100):
            a, b, c = (random_axis(rng) for _ in range(3))
            for s1, s2 in itertools.product((1, -1), repeat=2):
                for sym in Q.Symmetry:
                    m = sum(Q.three_prob(a, b, c, (s1, s2, s3), sym) for s3 in (1, -1))
                    assert abs(m - Q.pair_prob(a, s1, b, s2, sym)) <= TOL


class TestBellCheck:
    def test_violation_at_0_60_120(self):
        a, c, b = Q.bell_axes(np.radians([0, 60, 120]))
        res = Q.bell_inequality_check(a, b, c)
        assert abs(res.lhs - 0.375) <= TOL
        assert abs(res.rhs - 0.25) <= TOL
        assert res.violated

    def test_violation_via_trace_oracle(self):
        a, c, b = Q.bell_axes(np.radians([0, 60, 120]))
        lhs = Q.pair_prob_trace(a, 1, b, -1)
        rhs = Q.pair_prob_trace(a, 1, c, -1) + Q.pair_prob_trace(c, 1, b, -1)
        assert abs(lhs - 0.375) <= TOL and abs(rhs - 0.25) <= TOL

    def test_equal_axes_never_violated(self):
        res = Q.bell_inequality_check(Z, Z, Axis(1, 0, 0))
        assert res.lhs == 0 and not res.violated

    def test_orthogonal(self):
        res = Q.bell_inequality_check(Axis(1, 0, 0), Axis(0, 1, 0), Z)
        assert abs(res.lhs - 0.25) <= TOL and abs(res.rhs - 0.5) <= TOL
        assert not res.violated


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.sampled_from(Q.SIGN_QUADRUPLES))
def test_coplanar_table_properties(theta, s):
    q = Q.coplanar_axes(theta)
    t = Q.table2(q)
    assert abs(t.total() - 1) <= TOL
    assert abs(t[s] - t[tuple(-x for x in s)]) <= TOL
    assert abs(Q.chsh_master_form(t) - Q.chsh_closed_form(theta)) <= 1e-11
