import numpy as np
import pytest

from quartspec import (
    PoleError,
    all_deltas,
    beam_problem,
    characteristic_delta,
    weyl_inverse,
    weyl_matrix,
)
from quartspec.weyl import ALL_INDEX_PAIRS, delta_scale, phi_matrix

from conftest import make_random_problem, oracle_C3, oracle_C4, oracle_m43


# frozen closed-form values at lambda = 0 for the zero-coefficient problem
BEAM_DELTAS_AT_ZERO = {
    (1, 1): -1.0, (2, 1): -1.0, (3, 1): 1 / 6, (4, 1): -1 / 2,
    (2, 2): -1.0, (3, 2): 1 / 3, (4, 2): -1 / 2,
    (3, 3): 1.0, (4, 3): 1.0,
}


class TestCharacteristicValues:
    def test_all_nine_pairs_present(self):
        d = all_deltas(beam_problem(), 1.0)
        assert set(d) == set(ALL_INDEX_PAIRS)

    def test_beam_values_at_lambda_zero(self):
        d = all_deltas(beam_problem(), 0.0)
        for jk, expect in BEAM_DELTAS_AT_ZERO.items():
            assert d[jk].value == pytest.approx(expect, abs=1e-10), jk

    def test_beam_delta22_at_lambda_one(self):
        # -(1 + cos 1 cosh 1)/2
        val = characteristic_delta(beam_problem(), 1.0, (2, 2)).value
        assert val == pytest.approx(-(1 + np.cos(1) * np.cosh(1)) / 2, abs=1e-10)

    @pytest.mark.parametrize("lam", [1.0, 7.3, -4.0])
    def test_shortcut_identities_beam(self, lam):
        # Delta_11 = -C_4(1), Delta_21 = -C_3(1); the k=1 column-3/4 deltas
        # equal the end values of the backward family at 0
        d = all_deltas(beam_problem(), lam)
        assert d[(1, 1)].value == pytest.approx(-oracle_C4(1.0, lam), abs=1e-9)
        assert d[(2, 1)].value == pytest.approx(-oracle_C3(1.0, lam), abs=1e-9)
        assert d[(1, 1)].value == pytest.approx(-d[(3, 3)].value, abs=1e-9)
        assert d[(2, 1)].value == pytest.approx(-d[(4, 3)].value, abs=1e-9)

    def test_dual_route_cross_check(self):
        # (3,1) and (4,1) carry the determinant-route value alongside the
        # backward-family shortcut
        for pb in (beam_problem(), make_random_problem()):
            d = all_deltas(pb, 2.7)
            for jk in ((3, 1), (4, 1)):
                cv = d[jk]
                assert cv.alt_value is not None
                assert abs(cv.value - cv.alt_value) < 1e-8 * (1 + abs(cv.value))

    def test_dvalue_matches_finite_difference(self):
        pb = make_random_problem()
        lam, h = 1.9, 1e-6
        d = all_deltas(pb, lam, want_dlambda=True)
        dp = all_deltas(pb, lam + h)
        dm = all_deltas(pb, lam - h)
        for jk in ((2, 2), (3, 2), (3, 3)):
            fd = (dp[jk].value - dm[jk].value) / (2 * h)
            assert d[jk].dvalue == pytest.approx(fd, rel=1e-4)


class TestWeylMatrix:
    def test_unit_lower_triangular(self):
        for pb in (beam_problem(), make_random_problem()):
            m = weyl_matrix(pb, 1.3).m
            assert np.allclose(np.triu(m), np.eye(4))

    def test_m43_closed_form(self):
        pb = beam_problem()
        for lam in (0.5, 2.0, 17.5, 42.0):
            m = weyl_matrix(pb, lam).m
            assert m[3, 2] == pytest.approx(oracle_m43(lam), rel=1e-9)

    def test_symmetry_and_linear_relation(self):
        # m21 = m43 and m31 - m21 m32 + m42 = 0 for every problem
        for pb in (beam_problem(), make_random_problem()):
            for lam in (0.9, 3.7 + 1.2j):
                m = weyl_matrix(pb, lam).m
                assert abs(m[1, 0] - m[3, 2]) < 1e-9
                assert abs(m[2, 0] - m[1, 0] * m[2, 1] + m[3, 1]) < 1e-9

    def test_inverse_closed_form(self):
        pb = make_random_problem()
        sample = weyl_matrix(pb, 2.4)
        inv = weyl_inverse(pb, 2.4, sample)
        assert np.max(np.abs(sample.m @ inv - np.eye(4))) < 1e-9

    def test_pole_raises(self):
        # lambda_1 of the beam is a zero of Delta_22, a pole of the k=2 column
        from conftest import beam_eigenvalue
        with pytest.raises(PoleError) as err:
            weyl_matrix(beam_problem(), beam_eigenvalue(1))
        assert err.value.k == 2

    def test_delta_scale_positive_and_cached(self):
        pb = beam_problem()
        s = delta_scale(pb, 2)
        assert s > 0
        assert delta_scale(pb, 2) == s


class TestPhiMatrix:
    def test_phi_interpolates_weyl_solutions(self):
        # Phi = C M has columns phi_k with U_s(phi_k) = delta_sk below the
        # diagonal structure; at x = 0 it equals U^{-1} M
        from quartspec.problem import boundary_form_matrix
        pb = make_random_problem()
        lam = 1.1
        xs, phis = phi_matrix(pb, lam, x_grid=[0.0, 1.0])
        U = boundary_form_matrix(pb, "left")
        m = weyl_matrix(pb, lam).m
        assert np.max(np.abs(U @ phis[0] - m)) < 1e-9

    def test_phi_identical_problems_match(self):
        pb = beam_problem()
        xs, a = phi_matrix(pb, 2.2, x_grid=np.linspace(0, 1, 4))
        _, b = phi_matrix(beam_problem(), 2.2, x_grid=np.linspace(0, 1, 4))
        assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-12
