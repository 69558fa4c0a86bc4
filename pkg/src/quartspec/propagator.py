"""Integration of the first-order system Y' = (F(x) + Lambda) Y.

Columns of Y are quasi-state vectors (y, y', y'', y^[3]).  The coefficient
matrix is

    F(x) = [[0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, p(x), 0, 1],
            [-q(x), 0, 0, 0]],

and Lambda has the single entry lambda at position (4, 1).  Since
trace(F + Lambda) = 0, the determinant of any fundamental matrix is
constant in x (Liouville-Ostrogradski); the observed drift is recorded.

Lambda-derivatives are obtained by co-integrating the variational system
J' = (F + Lambda) J + E41 Y, and quadratures of the form int y_i y_j dx
by appending scalar states sharing the integrator's error control.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .problem import ProblemSpec, boundary_form_matrix


class PropagationError(RuntimeError):
    pass


@dataclass
class FundamentalMatrix:
    """Trajectory of a 4 x k solution matrix over a grid of x values."""

    lam: complex
    xs: np.ndarray            # ascending grid, includes both endpoints
    values: np.ndarray        # shape (len(xs), 4, k)
    dlambda: np.ndarray | None = None   # same shape, entrywise d/dlambda
    quadratures: dict | None = None     # (i, j) -> int_0^1 y_i y_j dx
    det_drift: float = 0.0

    def at(self, x):
        """Value matrix at a grid point x (must be on the stored grid)."""
        i = int(np.argmin(np.abs(self.xs - x)))
        if abs(self.xs[i] - x) > 1e-12:
            raise KeyError(f"x={x} not on stored grid")
        return self.values[i]

    @property
    def start(self):
        return self.values[0]

    @property
    def end(self):
        return self.values[-1]


def _default_grid(problem, npts=17):
    grid = np.union1d(np.linspace(0.0, 1.0, npts), problem.breakpoints)
    return grid


def propagate(problem: ProblemSpec, lam, direction="forward", init=None,
              want_dlambda=False, quad_pairs=None, x_grid=None,
              lam_per_col=None) -> FundamentalMatrix:
    """Integrate the system for a 4 x k initial matrix.

    direction 'forward' starts the init data at x=0, 'backward' at x=1.
    quad_pairs is a list of column index pairs (i, j); for each, the scalar
    int_0^1 y_i(x) y_j(x) dx is accumulated alongside the trajectory.
    lam_per_col optionally assigns a separate spectral parameter to every
    column (used for Lagrange-identity checks across two parameters).
    """
    lam = complex(lam)
    if not np.isfinite(lam.real) or not np.isfinite(lam.imag):
        raise PropagationError("non-finite lambda")
    if init is None:
        init = np.eye(4, dtype=complex)
    Y0 = np.asarray(init, dtype=complex)
    if Y0.ndim == 1:
        Y0 = Y0.reshape(4, 1)
    ncols = Y0.shape[1]
    lams = np.full(ncols, lam, dtype=complex) if lam_per_col is None \
        else np.asarray(lam_per_col, dtype=complex)

    quad_pairs = list(quad_pairs or [])
    nq = len(quad_pairs)
    ny = 4 * ncols
    tol = problem.tolerances
    p, q = problem.p, problem.q

    def rhs(x, state):
        Y = state[:ny].reshape(4, ncols)
        px, qx = p(x), q(x)
        dY = np.empty_like(Y)
        dY[0] = Y[1]
        dY[1] = Y[2]
        dY[2] = px * Y[1] + Y[3]
        dY[3] = (lams - qx) * Y[0]
        out = [dY.ravel()]
        if want_dlambda:
            J = state[ny:2 * ny].reshape(4, ncols)
            dJ = np.empty_like(J)
            dJ[0] = J[1]
            dJ[1] = J[2]
            dJ[2] = px * J[1] + J[3]
            dJ[3] = (lams - qx) * J[0] + Y[0]
            out.append(dJ.ravel())
        if nq:
            out.append(np.array([Y[0, i] * Y[0, j] for i, j in quad_pairs]))
        return np.concatenate(out)

    state0 = [Y0.ravel()]
    if want_dlambda:
        state0.append(np.zeros(ny, dtype=complex))
    if nq:
        state0.append(np.zeros(nq, dtype=complex))
    state0 = np.concatenate(state0)

    grid = _default_grid(problem) if x_grid is None else \
        np.union1d(np.asarray(x_grid, float), problem.breakpoints)
    nodes = problem.breakpoints
    if direction == "backward":
        seg_order = range(len(nodes) - 2, -1, -1)
    elif direction == "forward":
        seg_order = range(len(nodes) - 1)
    else:
        raise ValueError(f"unknown direction {direction!r}")

    xs_out = [nodes[0] if direction == "forward" else nodes[-1]]
    states_out = [state0]
    state = state0
    for si in seg_order:
        x0, x1 = nodes[si], nodes[si + 1]
        if direction == "backward":
            x0, x1 = x1, x0
        interior = grid[(grid > min(x0, x1) + 1e-15) & (grid < max(x0, x1) - 1e-15)]
        t_eval = np.concatenate([interior[:: -1 if direction == "backward" else 1], [x1]])
        sol = solve_ivp(rhs, (x0, x1), state, method="DOP853",
                        rtol=tol.ode_rel, atol=tol.ode_abs, t_eval=t_eval)
        if not sol.success:
            t_arr = np.asarray(sol.t)
            x_fail = t_arr[-1] if t_arr.size else x0
            raise PropagationError(f"integration failed near x={x_fail}: {sol.message}")
        xs_out.extend(sol.t)
        states_out.extend(sol.y.T)
        state = sol.y[:, -1]
        if not np.all(np.isfinite(state)):
            raise PropagationError(f"non-finite state at x={x1}")

    xs_out = np.asarray(xs_out)
    states_out = np.asarray(states_out)
    order = np.argsort(xs_out)
    xs_out = xs_out[order]
    states_out = states_out[order]

    values = states_out[:, :ny].reshape(-1, 4, ncols)
    dlam = states_out[:, ny:2 * ny].reshape(-1, 4, ncols) if want_dlambda else None
    quads = None
    if nq:
        qfinal = states_out[-1 if direction == "forward" else 0, -nq:]
        sign = 1.0 if direction == "forward" else -1.0
        quads = {pair: complex(sign * qfinal[k]) for k, pair in enumerate(quad_pairs)}

    det_drift = 0.0
    if ncols == 4:
        dets = np.linalg.det(values)
        det_drift = float(np.max(np.abs(dets - np.linalg.det(Y0))))

    return FundamentalMatrix(lam=lam, xs=xs_out, values=values, dlambda=dlam,
                             quadratures=quads, det_drift=det_drift)


def fundamental_C(problem: ProblemSpec, lam, want_dlambda=False,
                  quad_pairs=None, x_grid=None) -> FundamentalMatrix:
    """Solutions C_k with U_s(C_k) = delta_sk; initial matrix U^{-1} at x=0."""
    U = boundary_form_matrix(problem, "left")
    return propagate(problem, lam, "forward", np.linalg.inv(U),
                     want_dlambda=want_dlambda, quad_pairs=quad_pairs,
                     x_grid=x_grid)


def fundamental_S(problem: ProblemSpec, lam, want_dlambda=False,
                  quad_pairs=None, x_grid=None) -> FundamentalMatrix:
    """Solutions S_k with V_s(S_k) = delta_sk; identity data at x=1."""
    return propagate(problem, lam, "backward", np.eye(4, dtype=complex),
                     want_dlambda=want_dlambda, quad_pairs=quad_pairs,
                     x_grid=x_grid)


def propagate_pair(problem: ProblemSpec, lam, mu, y0, z0):
    """Propagate y at lam and z at mu jointly; returns (y_traj, z_traj, int y z dx).

    The solutions are carried as columns of one augmented system so the
    cross quadrature shares the integrator's error control.
    """
    init = np.column_stack([np.asarray(y0, complex), np.asarray(z0, complex)])
    res = propagate(problem, lam, "forward", init, quad_pairs=[(0, 1)],
                    lam_per_col=[lam, mu])
    return res.values[:, :, 0], res.values[:, :, 1], res.quadratures[(0, 1)]
