"""Zeros of the characteristic functions Delta_jk.

The zeros of Delta_jk are the eigenvalues of the boundary problem obtained
by pairing the left-end forms U_1..U_{k-1}, U_j with the right-end forms
V_1..V_{4-k}.  The zeros of Delta_22 are the eigenvalues of the main
problem; the zero sets of Delta_22, Delta_32, Delta_42 are the three
Barcilon spectra.

Real-axis search scans in rho = |lambda|^(1/4) (zeros are near-uniform in
rho), detects sign changes, and polishes with Newton using the
variationally computed derivative.  Complex search uses the argument
principle over rectangles with recursive subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .problem import ProblemSpec
from .propagator import PropagationError
from .weyl import all_deltas, delta_scale

SIMPLICITY_FLOOR = 1e-6
RHO_SCAN_STEP = 0.05


class SearchError(RuntimeError):
    pass


@dataclass
class SpectrumRequest:
    selector: tuple                     # index pair (j, k)
    region: tuple                       # (xmin, xmax) or (re0, re1, im0, im1)
    max_count: int = 100
    refine_tol: float = 1e-12


@dataclass
class Zero:
    lam: complex
    selector: tuple
    multiplicity_estimate: int = 1
    ddelta: complex = 0.0


@dataclass
class BarcilonData:
    s12: list = field(default_factory=list)
    s13: list = field(default_factory=list)
    s23: list = field(default_factory=list)


def _delta_fun(problem, selector):
    selector = tuple(selector)

    def f(lam, want_dlambda=False):
        cv = all_deltas(problem, lam, want_dlambda=want_dlambda)[selector]
        f.last_floor = cv.fp_floor
        return cv.value, cv.dvalue

    f.last_floor = 0.0
    return f


def _newton_refine(f, lam0, tol, bracket=None, max_iter=40, local_scale=None):
    """Safeguarded Newton with secant fallback; bracket is kept if supplied.

    Accepts on a small step or on stagnation at the noise floor (|Delta| no
    longer decreasing), returning the best iterate seen.  local_scale sets
    the magnitude against which |Delta| at the root is judged; at large
    |lambda| the characteristic functions grow like exp(|lambda|^(1/4)) and
    a fixed reference scale would be meaningless.
    """
    lam = complex(lam0)
    val, dval = f(lam, want_dlambda=True)
    lo, hi = bracket if bracket is not None else (None, None)
    flo = np.real(f(complex(lo))[0]) if bracket is not None else None
    best = (lam, val, dval)
    prev = None
    stall = 0
    for _ in range(max_iter):
        if abs(val) == 0.0:
            best = (lam, val, dval)
            break
        if dval is not None and abs(dval) > 1e-300:
            step = -val / dval
        elif prev is not None and abs(val - prev[1]) > 0:
            step = -val * (lam - prev[0]) / (val - prev[1])
        else:
            step = -val
        new = lam + step
        if bracket is not None and not (lo < new.real < hi):
            new = complex(0.5 * (lo + hi))
        prev = (lam, val)
        lam = new
        val, dval = f(lam, want_dlambda=True)
        if bracket is not None:
            if flo * np.real(val) < 0:
                hi = lam.real
            else:
                lo = lam.real
                flo = np.real(val)
        if abs(val) < abs(best[1]):
            best = (lam, val, dval)
            stall = 0
        else:
            stall += 1
        if abs(step) < tol * (1 + abs(lam)) or stall >= 3:
            break
    lam, val, dval = best
    if local_scale is not None and abs(val) > 1e-6 * local_scale:
        # residual alone may sit above the noise floor at large |lambda|;
        # accept anyway when the implied root error |Delta/Delta'| is tiny
        err = abs(val / dval) if (dval is not None and dval != 0) else np.inf
        if err > 1e-9 * (1 + abs(lam)):
            raise SearchError(f"refinement stalled at lambda={lam}, "
                              f"|Delta| = {abs(val):.2e} vs local scale {local_scale:.2e}")
    return lam, val, dval


def find_real_zeros(problem: ProblemSpec, request: SpectrumRequest) -> list:
    """All real zeros of Delta_selector in [xmin, xmax], sorted ascending."""
    if not problem.is_real:
        raise SearchError("Delta is not real on the real axis for this problem; "
                          "use find_complex_zeros")
    xmin, xmax = request.region
    f = _delta_fun(problem, request.selector)
    scale = delta_scale(problem, request.selector[1])

    # scan positions uniform in rho = |lambda|^{1/4}, both signs of lambda
    lams = []
    if xmin < 0:
        r = np.arange(0.0, (-xmin) ** 0.25 + RHO_SCAN_STEP, RHO_SCAN_STEP)
        lams.extend((-(r ** 4))[::-1])
    if xmax > 0:
        r = np.arange(0.0, xmax ** 0.25 + RHO_SCAN_STEP, RHO_SCAN_STEP)
        lams.extend(r ** 4)
    lams = np.unique(np.clip(np.asarray(lams), xmin, xmax))

    vals = np.empty(len(lams))
    floors = np.empty(len(lams))
    for i, lam in enumerate(lams):
        vals[i] = np.real(f(lam)[0])
        floors[i] = f.last_floor
    zeros = []
    for i in range(len(lams) - 1):
        if len(zeros) >= request.max_count:
            break
        a, b = lams[i], lams[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if max(abs(fa), abs(fb)) <= 4.0 * max(floors[i], floors[i + 1]):
            # cancellation noise: at large |lambda| the determinant is the
            # difference of entry products that dwarf its true value, and a
            # sign change there carries no information about a root
            continue
        local = max(abs(fa), abs(fb), 1e-12 * scale)
        try:
            if fa == 0.0:
                lam, val, dval = _newton_refine(f, a, request.refine_tol,
                                                local_scale=local)
            elif fa * fb < 0:
                # a sign change guarantees a root in the bracket, so the best
                # iterate is accepted even when cancellation noise keeps
                # |Delta| above the residual floor at large |lambda|
                lam, val, dval = _newton_refine(f, 0.5 * (a + b),
                                                request.refine_tol,
                                                bracket=(a, b))
            else:
                continue
        except (PropagationError, SearchError):
            continue
        if not (xmin - 1e-12 <= lam.real <= xmax + 1e-12):
            continue
        mult = 1 if abs(dval) > SIMPLICITY_FLOOR * max(scale, local) else 2
        zeros.append(Zero(lam=complex(lam.real), selector=tuple(request.selector),
                          multiplicity_estimate=mult, ddelta=complex(dval)))
    zeros.sort(key=lambda z: z.lam.real)
    # drop duplicates from adjacent brackets converging to the same root
    dedup = []
    for z in zeros:
        if dedup and abs(z.lam - dedup[-1].lam) < 1e-6 * (1 + abs(z.lam)):
            continue
        dedup.append(z)
    return dedup[: request.max_count]


def _winding_number(f, re0, re1, im0, im1, n_per_side=32):
    """Winding of Delta along the rectangle boundary, by phase unwrapping.

    The sampling is doubled until the unwrapped phase is step-wise safe
    (no single increment close to pi).
    """
    while n_per_side <= 4096:
        top = re0 + np.linspace(0, 1, n_per_side, endpoint=False) * (re1 - re0) + 1j * im0
        right = re1 + 1j * (im0 + np.linspace(0, 1, n_per_side, endpoint=False) * (im1 - im0))
        bottom = re1 + np.linspace(0, 1, n_per_side, endpoint=False) * (re0 - re1) + 1j * im1
        left = re0 + 1j * (im1 + np.linspace(0, 1, n_per_side, endpoint=False) * (im0 - im1))
        pts = np.concatenate([top, right, bottom, left, [complex(re0, im0)]])
        vals = np.array([f(z)[0] for z in pts])
        if np.any(vals == 0):
            raise SearchError("contour passes through a zero; perturb the rectangle")
        phases = np.unwrap(np.angle(vals))
        if np.max(np.abs(np.diff(phases))) < 2.5:
            total = (phases[-1] - phases[0]) / (2 * np.pi)
            return int(round(total))
        n_per_side *= 2
    raise SearchError("winding number did not stabilize under sampling refinement")


def find_complex_zeros(problem: ProblemSpec, request: SpectrumRequest,
                       _depth=0) -> list:
    """Zeros inside a complex rectangle via the argument principle."""
    re0, re1, im0, im1 = request.region
    f = _delta_fun(problem, request.selector)
    scale = delta_scale(problem, request.selector[1])
    w = _winding_number(f, re0, re1, im0, im1)
    if w == 0:
        return []
    if w == 1 or _depth >= 8:
        center = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
        corner = f(complex(re0, im0))[0]
        lam, val, dval = _newton_refine(f, center, request.refine_tol,
                                        local_scale=max(abs(corner), 1e-12 * scale))
        mult = w if _depth >= 8 else 1
        if abs(dval) <= SIMPLICITY_FLOOR * scale and mult == 1:
            mult = 2
        return [Zero(lam=lam, selector=tuple(request.selector),
                     multiplicity_estimate=mult, ddelta=complex(dval))]
    # split the longer side, nudging the cut line to avoid landing on a zero
    zeros = []
    if (re1 - re0) >= (im1 - im0):
        mid = 0.5 * (re0 + re1) + 1e-3 * (re1 - re0)
        boxes = [(re0, mid, im0, im1), (mid, re1, im0, im1)]
    else:
        mid = 0.5 * (im0 + im1) + 1e-3 * (im1 - im0)
        boxes = [(re0, re1, im0, mid), (re0, re1, mid, im1)]
    for box in boxes:
        sub = SpectrumRequest(request.selector, box, request.max_count,
                              request.refine_tol)
        zeros.extend(find_complex_zeros(problem, sub, _depth=_depth + 1))
    if sum(z.multiplicity_estimate for z in zeros) != w:
        raise SearchError(f"winding count {w} does not match {len(zeros)} refined zeros")
    zeros.sort(key=lambda z: (z.lam.real, z.lam.imag))
    return zeros[: request.max_count]


def simplicity_check(zero: Zero, scale: float = 1.0) -> bool:
    """True iff the zero is simple: |dDelta| strictly above the floor."""
    return abs(zero.ddelta) > SIMPLICITY_FLOOR * scale


def find_first_zeros(problem: ProblemSpec, selector, count, start=1e-6) -> list:
    """First `count` real-axis zeros of Delta_selector, expanding the window."""
    # the zeros are near-uniform in rho = lambda^{1/4} with spacing about pi,
    # so (pi (count+3))^4 bounds the window; past that the propagated entries
    # overflow and the scan would only produce NaNs
    cap = (np.pi * (count + 3)) ** 4
    hi = min(1000.0, cap)
    for _ in range(12):
        req = SpectrumRequest(selector, (start, hi), max_count=count)
        zeros = find_real_zeros(problem, req)
        if len(zeros) >= count:
            return zeros[:count]
        if hi >= cap:
            break
        hi = min(hi * 8, cap)
    raise SearchError(f"could not locate {count} zeros of Delta_{selector}")


def three_spectra(problem: ProblemSpec, count: int) -> BarcilonData:
    """Barcilon's three spectra: first `count` zeros of Delta_22/32/42."""
    return BarcilonData(
        s12=[z.lam for z in find_first_zeros(problem, (2, 2), count)],
        s13=[z.lam for z in find_first_zeros(problem, (3, 2), count)],
        s23=[z.lam for z in find_first_zeros(problem, (4, 2), count)],
    )
