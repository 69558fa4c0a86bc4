"""Eigenfunctions and the spectral data (lambda_n, gamma_n, xi_n, beta_n).

An eigenfunction of the main problem is y = c3 C_3 + c4 C_4 where (c3, c4)
spans the null space of the 2x2 end-value matrix [[C3(1), C4(1)],
[C3'(1), C4'(1)]] at an eigenvalue.  It is normalized by int_0^1 y^2 dx = 1,
which fixes (gamma, xi) = (y(0), y'(0)) up to sign; a deterministic sign
convention (Re gamma > 0, ties broken by Im, falling back to xi) is used.

When Delta_33(lambda_n) != 0 (case I) the weight number is beta_n =
-gamma_n^2, and this value is cross-checked against the contour residue of
m_32 at lambda_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .problem import ProblemSpec, boundary_form_matrix
from .propagator import propagate
from .weyl import all_deltas, delta_scale

NORMALIZATION_FLOOR = 1e-8
GAMMA_FLOOR = 1e-6


class NormalizationError(ArithmeticError):
    """int y^2 dx is numerically zero; the data are undefined for this point."""


class NonSimpleError(ValueError):
    pass


@dataclass
class SpectralPoint:
    lam: complex
    gamma: complex | None = None
    xi: complex | None = None
    beta: complex | None = None
    norm_ok: bool = True
    case_tag: str = "unknown"
    # |residue-extracted beta - (-gamma^2)|, recorded by weight_numbers
    beta_residual: float | None = None
    extras: dict = field(default_factory=dict, repr=False)


def _sign_convention(gamma, xi):
    """Scale factor +-1 making Re gamma > 0 (then Im gamma > 0, then xi)."""
    for v in (gamma, xi):
        if abs(v) == 0:
            continue
        if v.real != 0:
            return 1.0 if v.real > 0 else -1.0
        return 1.0 if v.imag > 0 else -1.0
    return 1.0


def eigenfunction(problem: ProblemSpec, lam_n, x_grid=None):
    """Normalized eigenfunction trajectory at an eigenvalue; (traj, gamma, xi)."""
    deltas = all_deltas(problem, lam_n, want_dlambda=True)
    scale = delta_scale(problem, 2)
    d22 = deltas[(2, 2)]
    # at large lambda the residual at a true zero sits on the cancellation
    # floor of the end-value determinant, not on the global scale
    if abs(d22.value) > max(1e-5 * scale, 100 * d22.fp_floor):
        raise NonSimpleError(f"lambda={lam_n} is not a zero of Delta_22 "
                             f"(|Delta_22| = {abs(d22.value):.2e})")
    Uinv = np.linalg.inv(boundary_form_matrix(problem, "left"))
    endres = propagate(problem, lam_n, "forward", Uinv[:, 2:4], x_grid=[0.0, 1.0])
    A = endres.end[0:2, :]          # [[C3(1), C4(1)], [C3'(1), C4'(1)]]
    # smallest singular direction is robust when both entries nearly vanish
    _, s, vh = np.linalg.svd(A)
    c3, c4 = vh[-1].conj()

    y0 = c3 * Uinv[:, 2] + c4 * Uinv[:, 3]
    res = propagate(problem, lam_n, "forward", y0.reshape(4, 1),
                    quad_pairs=[(0, 0)], x_grid=x_grid)
    norm2 = res.quadratures[(0, 0)]
    if abs(norm2) < NORMALIZATION_FLOOR:
        raise NormalizationError(f"|int y^2 dx| = {abs(norm2):.2e} below the floor "
                                 f"at lambda={lam_n}")
    scale_y = 1.0 / np.sqrt(norm2)
    gamma = complex(scale_y * res.values[0, 0, 0])
    xi = complex(scale_y * res.values[0, 1, 0])
    sgn = _sign_convention(gamma, xi)
    gamma, xi = sgn * gamma, sgn * xi
    traj = res.values[:, :, 0] * (sgn * scale_y)
    return (res.xs, traj), gamma, xi


def weight_numbers(problem: ProblemSpec, zeros, residue_check=True) -> list:
    """Spectral points with beta_n = -gamma_n^2 where case I applies.

    For each simple eigenvalue with gamma != 0 and Delta_33(lambda_n) != 0,
    beta_n is set to -gamma_n^2; independently, beta_n is extracted as the
    (3,2) entry of the order -1 Laurent coefficient of M and the discrepancy
    is recorded on the point.
    """
    from . import weights as weights_mod  # deferred, avoids import cycle

    points = []
    scale2 = delta_scale(problem, 2)
    scale3 = delta_scale(problem, 3)
    for z in zeros:
        if abs(z.ddelta) <= 1e-6 * scale2:
            raise NonSimpleError(f"eigenvalue {z.lam} is not simple")
        try:
            _, gamma, xi = eigenfunction(problem, z.lam)
        except NormalizationError:
            points.append(SpectralPoint(lam=z.lam, norm_ok=False))
            continue
        pt = SpectralPoint(lam=z.lam, gamma=gamma, xi=xi)
        d33 = all_deltas(problem, z.lam)[(3, 3)].value
        pt.extras["delta33"] = d33
        if abs(d33) > 1e-6 * scale3 and abs(gamma) > GAMMA_FLOOR:
            pt.beta = -gamma ** 2
            pt.case_tag = "I"
            if residue_check:
                coeffs = weights_mod.laurent_coefficients(problem, z.lam, (-1,))
                res32 = coeffs[-1][2, 1]
                pt.beta_residual = abs(res32 - pt.beta)
                pt.extras["residue_beta"] = complex(res32)
        else:
            # gamma ~ 0 or Delta_33(lambda_n) ~ 0: cases II-IV, classified downstream
            pt.beta = None
        points.append(pt)
    return points
