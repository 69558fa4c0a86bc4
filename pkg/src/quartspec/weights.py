"""Laurent coefficients of M(lambda), weight matrices, and case classification.

At a simple pole lambda_0 of M, the weight matrix is

    N(lambda_0) = M_<0>(lambda_0)^{-1} M_<-1>(lambda_0),

where M_<k> are Laurent coefficients extracted by trapezoid quadrature on a
circle around lambda_0.  N is strictly lower-triangular and its nonzero
pattern depends on the classification of lambda_0:

    I   : only n32 != 0, n32 = beta_n = -gamma_n^2
    II  : 2x2 block n31, n32, n41, n42 with zero determinant, n31 = -n42
    III : n21 = n43 (residue of m43), n41 = xi_n^2
    IV  : only n41 = xi_n^2
    V   : only n21 = n43 != 0   (lambda_0 not an eigenvalue)

Regardless of the case, n21 = n43 and n31 = -n42 at every simple pole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mclaughlin import GAMMA_FLOOR, SpectralPoint
from .problem import ProblemSpec
from .weyl import PoleError, delta_scale, weyl_matrix

DEFAULT_NODES = 64
CONVERGENCE_TOL = 1e-8


class LaurentError(ArithmeticError):
    pass


@dataclass
class WeightMatrix:
    lam0: complex
    m_minus1: np.ndarray
    m_zero: np.ndarray
    n: np.ndarray
    contour_radius: float
    quadrature_nodes: int


def default_contour_radius(lam0, nearby_zeros=()):
    """Quarter-distance to the nearest other zero, capped at 1 + |lam0|/100."""
    cap = 1.0 + abs(lam0) / 100.0
    dists = [abs(z - lam0) for z in nearby_zeros if abs(z - lam0) > 1e-9]
    if dists:
        return min(0.25 * min(dists), cap)
    return cap


def _contour_average(problem, lam0, radius, order, nodes):
    """(2 pi i)^-1 contour integral of M(lam) (lam - lam0)^(-order-1) dlam.

    On the circle lam = lam0 + r e^(i t) the integral reduces to the mean of
    M(lam) (r e^(i t))^(-order) over equispaced t; summed pairwise for a
    deterministic reduction order.
    """
    ts = 2 * np.pi * np.arange(nodes) / nodes
    zs = radius * np.exp(1j * ts)
    terms = np.empty((nodes, 4, 4), dtype=complex)
    for i, z in enumerate(zs):
        try:
            sample = weyl_matrix(problem, lam0 + z)
        except PoleError as exc:
            raise LaurentError(f"contour node at {lam0 + z} hits a pole") from exc
        terms[i] = sample.m * z ** (-order)
    while terms.shape[0] > 1:
        half = terms.shape[0] // 2
        terms = terms[:half] + terms[half:]
    return terms[0] / nodes


def laurent_coefficients(problem: ProblemSpec, lam0, orders=(-1, 0),
                         radius=None, nodes=None) -> dict:
    """Laurent coefficients of M at lam0, with a node-doubling Cauchy check."""
    lam0 = complex(lam0)
    if radius is None:
        radius = default_contour_radius(lam0)
    if nodes is None:
        nodes = problem.tolerances.contour_nodes
    out = {}
    for order in orders:
        coarse = _contour_average(problem, lam0, radius, order, nodes)
        fine = _contour_average(problem, lam0, radius, order, 2 * nodes)
        if np.max(np.abs(fine - coarse)) > CONVERGENCE_TOL * (1 + np.max(np.abs(fine))):
            raise LaurentError(
                f"trapezoid quadrature for order {order} at {lam0} did not converge "
                f"under node doubling")
        out[order] = fine
    return out


def weight_matrix(problem: ProblemSpec, lam0, radius=None, nodes=None,
                  nearby_zeros=()) -> WeightMatrix:
    """N(lambda_0) = M_<0>^{-1} M_<-1> at a simple pole."""
    lam0 = complex(lam0)
    if radius is None:
        radius = default_contour_radius(lam0, nearby_zeros)
    if nodes is None:
        nodes = problem.tolerances.contour_nodes
    coeffs = laurent_coefficients(problem, lam0, (-1, 0), radius=radius, nodes=nodes)
    m_minus1, m_zero = coeffs[-1], coeffs[0]
    n = np.linalg.solve(m_zero, m_minus1)
    return WeightMatrix(lam0=lam0, m_minus1=m_minus1, m_zero=m_zero, n=n,
                        contour_radius=radius, quadrature_nodes=nodes)


def classify_eigenvalue(point: SpectralPoint, m43, delta33=None,
                        delta33_scale=1.0, match_tol=1e-6) -> str:
    """Assign the case tag (I)-(IV) from (gamma, xi) and m43.

    m43 is a callable lambda -> complex.  Whether lambda_n is a pole of m43
    is decided through the magnitude of Delta_33(lambda_n) (passed in as
    delta33), which is numerically robust near the pole itself.
    """
    gamma, xi = point.gamma, point.xi
    if gamma is None:
        raise ValueError("point carries no gamma; normalize the eigenfunction first")
    is_pole = delta33 is not None and abs(delta33) < 1e-10 * delta33_scale
    ag = abs(gamma)
    if 0.1 * GAMMA_FLOOR <= ag <= 10 * GAMMA_FLOOR:
        return "indeterminate"
    if ag < 0.1 * GAMMA_FLOOR:
        return "III" if is_pole else "IV"
    m = m43(point.lam)
    if abs(m - xi / gamma) <= match_tol * (1 + abs(m)):
        return "I"
    return "II"


def classify_on_problem(problem: ProblemSpec, point: SpectralPoint) -> str:
    from .weyl import all_deltas

    deltas = all_deltas(problem, point.lam)
    d33 = deltas[(3, 3)].value

    def m43(lam):
        d = all_deltas(problem, lam)
        return -d[(4, 3)].value / d[(3, 3)].value

    return classify_eigenvalue(point, m43, delta33=d33,
                               delta33_scale=delta_scale(problem, 3))


# per case: entries allowed nonzero, and equality constraints checked
_CASE_PATTERNS = {
    "I": {(3, 2)},
    "II": {(3, 1), (3, 2), (4, 1), (4, 2)},
    "III": {(2, 1), (4, 1), (4, 3)},
    "IV": {(4, 1)},
    "V": {(2, 1), (4, 3)},
}


def verify_weight_structure(w: WeightMatrix, point: SpectralPoint) -> dict:
    """Residuals of every structural relation for the point's case; never raises."""
    n = w.n
    tag = point.case_tag
    report = {"case": tag, "checks": {}}
    checks = report["checks"]
    scale = max(np.max(np.abs(n)), 1e-300)

    tri = np.abs(np.triu(n))  # strict lower-triangularity incl. the diagonal
    checks["strictly_lower_triangular"] = float(np.max(tri) / scale)
    checks["n21_equals_n43"] = float(abs(n[1, 0] - n[3, 2]) / scale)
    checks["n31_equals_minus_n42"] = float(abs(n[2, 0] + n[3, 1]) / scale)

    allowed = _CASE_PATTERNS.get(tag)
    if allowed is None:
        report["note"] = f"no structural pattern for case {tag!r}"
        return report
    off = 0.0
    for j in range(2, 5):
        for k in range(1, j):
            if (j, k) not in allowed:
                off = max(off, abs(n[j - 1, k - 1]))
    checks["off_pattern_entries"] = float(off / scale)

    if tag == "I" and point.gamma is not None:
        checks["n32_equals_minus_gamma_sq"] = float(
            abs(n[2, 1] + point.gamma ** 2) / (1 + abs(point.gamma) ** 2))
    if tag == "II":
        det = n[2, 0] * n[3, 1] - n[3, 0] * n[2, 1]
        checks["block_determinant_zero"] = float(abs(det) / scale ** 2)
    if tag in ("III", "IV") and point.xi is not None:
        checks["n41_equals_xi_sq"] = float(
            abs(n[3, 0] - point.xi ** 2) / (1 + abs(point.xi) ** 2))
    if tag == "V":
        checks["n21_nonzero"] = float(abs(n[1, 0]) / scale)
    return report


def case_search(problem_factory, parameter_grid, count=3):
    """Scan a family of problems for eigenvalues outside case I.

    problem_factory maps a parameter to a validated problem; every
    eigenvalue among the first `count` is classified and non-(I) hits are
    returned as (parameter, point, tag).  No claim is made that any family
    actually realizes cases II-IV.
    """
    from .mclaughlin import weight_numbers
    from .spectra import find_first_zeros

    hits = []
    for par in parameter_grid:
        problem = problem_factory(par)
        zeros = find_first_zeros(problem, (2, 2), count)
        for pt in weight_numbers(problem, zeros, residue_check=False):
            if not pt.norm_ok:
                continue
            tag = classify_on_problem(problem, pt)
            pt.case_tag = tag
            if tag != "I":
                hits.append((par, pt, tag))
    return hits
