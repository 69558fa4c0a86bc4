import numpy as np
import pytest

from quartspec import (
    SpectrumRequest,
    beam_problem,
    find_complex_zeros,
    find_first_zeros,
    find_real_zeros,
    simplicity_check,
    three_spectra,
)
from quartspec.spectra import SearchError
from quartspec.weyl import delta_scale

from conftest import beam_eigenvalue, clamped_free_s, make_random_problem


class TestRealSearch:
    def test_first_eigenvalues_against_bisection(self, beam, beam_zeros):
        for n, z in enumerate(beam_zeros, 1):
            expect = beam_eigenvalue(n)
            assert abs(z.lam - expect) < 1e-8 * expect

    def test_zeros_sorted_and_simple(self, beam, beam_zeros):
        lams = [z.lam.real for z in beam_zeros]
        assert lams == sorted(lams)
        scale = delta_scale(beam, 2)
        for z in beam_zeros:
            assert simplicity_check(z, scale)

    def test_window_respected(self, beam):
        req = SpectrumRequest((2, 2), (0.0, 500.0))
        zeros = find_real_zeros(beam, req)
        assert len(zeros) == 2  # 12.36 and 485.52 only
        assert all(0 <= z.lam.real <= 500 for z in zeros)

    def test_negative_window_delta33(self, beam):
        # zeros of Delta_33 lie on the negative axis at -4 s^4
        expect = -4 * clamped_free_s(1) ** 4
        req = SpectrumRequest((3, 3), (-200.0, -1.0))
        zeros = find_real_zeros(beam, req)
        assert len(zeros) == 1
        assert zeros[0].lam.real == pytest.approx(expect, rel=1e-9)

    def test_complex_problem_rejected(self):
        pb = make_random_problem()
        with pytest.raises(SearchError):
            find_real_zeros(pb, SpectrumRequest((2, 2), (0.0, 100.0)))

    def test_ddelta_reported(self, beam_zeros):
        # the beam's dDelta_22 at lambda_1 is nonzero and real
        z = beam_zeros[0]
        assert abs(z.ddelta) > 1e-4
        assert abs(z.ddelta.imag) < 1e-9

    def test_count_cap_honest_failure(self, beam):
        # double precision cannot resolve Delta_22 past rho ~ 33; asking for
        # more zeros than that must fail loudly, not fabricate data
        with pytest.raises(SearchError):
            find_first_zeros(beam, (2, 2), 12)


class TestComplexSearch:
    def test_rectangle_around_case_v_point(self, beam):
        # one real zero of Delta_33 near -125.14
        expect = -4 * clamped_free_s(1) ** 4
        req = SpectrumRequest((3, 3), (-150.0, -100.0, -5.0, 5.0))
        zeros = find_complex_zeros(beam, req)
        assert len(zeros) == 1
        assert zeros[0].lam == pytest.approx(expect, rel=1e-8)

    def test_empty_rectangle(self, beam):
        req = SpectrumRequest((2, 2), (100.0, 400.0, -3.0, 3.0))
        assert find_complex_zeros(beam, req) == []

    def test_complex_coefficients_eigenvalue(self):
        # perturbing q off the real axis moves lambda_1 into the plane but
        # the rectangle search still pins it down; cross-check: the found
        # point drives |Delta_22| to the noise floor
        from quartspec import CoefficientField, ProblemSpec, validate_problem
        from quartspec.weyl import all_deltas
        pb = validate_problem(ProblemSpec(
            p=CoefficientField.zero(), q=CoefficientField.constant(0.4j)))
        req = SpectrumRequest((2, 2), (5.0, 20.0, -2.0, 2.0))
        zeros = find_complex_zeros(pb, req)
        assert len(zeros) == 1
        z = zeros[0]
        assert abs(z.lam.imag) > 1e-4
        assert abs(all_deltas(pb, z.lam)[(2, 2)].value) < 1e-8


class TestThreeSpectra:
    def test_interlacing_style_ordering(self, beam):
        b = three_spectra(beam, 3)
        assert len(b.s12) == len(b.s13) == len(b.s23) == 3
        for s in (b.s12, b.s13, b.s23):
            assert [z.real for z in s] == sorted(z.real for z in s)

    def test_s12_matches_main_spectrum(self, beam, beam_zeros):
        b = three_spectra(beam, 2)
        for got, z in zip(b.s12, beam_zeros[:2]):
            assert got == pytest.approx(z.lam, rel=1e-10)
