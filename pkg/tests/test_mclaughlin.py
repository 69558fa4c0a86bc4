import numpy as np
import pytest
from scipy.integrate import quad

from quartspec import beam_problem, eigenfunction, weight_numbers
from quartspec.mclaughlin import NonSimpleError
from quartspec.spectra import Zero

from conftest import beam_eigenvalue, oracle_mode_shape


class TestEigenfunction:
    def test_gamma_xi_against_quadrature_oracle(self, beam):
        # closed-form mode shape, normalized by independent quadrature
        for n in (1, 2, 3):
            lam = beam_eigenvalue(n)
            _, gamma, xi = eigenfunction(beam, lam)
            y, dy, _ = oracle_mode_shape(n)
            norm = np.sqrt(quad(lambda x: y(x) ** 2, 0, 1, limit=200)[0])
            g0, x0 = y(0) / norm, dy(0) / norm
            if g0.real < 0:
                g0, x0 = -g0, -x0
            assert gamma == pytest.approx(g0, abs=1e-7)
            assert xi == pytest.approx(x0, abs=1e-6)

    def test_gamma_magnitude_is_two(self, beam):
        # free end at 0, clamped at 1: |y_n(0)| = 2 for every mode
        for n in (1, 2, 3, 4, 5):
            _, gamma, _ = eigenfunction(beam, beam_eigenvalue(n))
            assert abs(gamma) == pytest.approx(2.0, abs=1e-7)

    def test_trajectory_normalized_and_clamped(self, beam):
        (xs, traj), gamma, xi = eigenfunction(beam, beam_eigenvalue(1),
                                              x_grid=np.linspace(0, 1, 101))
        # right end: y(1) = y'(1) = 0
        assert abs(traj[-1][0]) < 1e-8
        assert abs(traj[-1][1]) < 1e-8
        # left end matches the reported data
        assert traj[0][0] == pytest.approx(gamma)
        assert traj[0][1] == pytest.approx(xi)
        # composite-trapezoid check of the normalization
        y = traj[:, 0]
        trapz = getattr(np, "trapezoid", np.trapz)
        assert trapz(y * y, xs) == pytest.approx(1.0, abs=1e-4)

    def test_sign_convention_deterministic(self, beam):
        lam = beam_eigenvalue(2)
        _, g1, x1 = eigenfunction(beam, lam)
        _, g2, x2 = eigenfunction(beam, lam)
        assert g1 == g2 and x1 == x2
        assert g1.real > 0

    def test_rejects_non_eigenvalue(self, beam):
        with pytest.raises(NonSimpleError):
            eigenfunction(beam, 100.0)


class TestWeightNumbers:
    def test_beta_is_minus_gamma_squared(self, beam_points):
        for pt in beam_points:
            assert pt.case_tag == "I"
            assert pt.beta == pytest.approx(-pt.gamma ** 2)
            assert abs(pt.beta + 4.0) < 1e-6

    def test_residue_cross_check_recorded(self, beam_points):
        # beta is independently extracted as the (3,2) residue of M
        for pt in beam_points:
            assert pt.beta_residual is not None
            assert pt.beta_residual < 1e-6
            assert "residue_beta" in pt.extras

    def test_xi_over_gamma_equals_m43(self, beam, beam_points):
        from quartspec import weyl_matrix
        for pt in beam_points[:3]:
            # m43 is regular at lambda_n in case I; compare at the point by
            # a symmetric offset average to dodge the Delta_22 pole
            h = 1e-4 * (1 + abs(pt.lam))
            mp = weyl_matrix(beam, pt.lam + h).m[3, 2]
            mm = weyl_matrix(beam, pt.lam - h).m[3, 2]
            assert (mp + mm) / 2 == pytest.approx(pt.xi / pt.gamma, rel=1e-5)

    def test_non_simple_zero_rejected(self, beam):
        fake = Zero(lam=complex(beam_eigenvalue(1)), selector=(2, 2), ddelta=0.0)
        with pytest.raises(NonSimpleError):
            weight_numbers(beam, [fake])

    def test_residue_check_optional(self, beam, beam_zeros):
        pts = weight_numbers(beam, beam_zeros[:1], residue_check=False)
        assert pts[0].beta_residual is None
        assert pts[0].beta == pytest.approx(-pts[0].gamma ** 2)
