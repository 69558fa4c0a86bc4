"""Boundary value problem definition.

The operator under study is

    l(y) = y'''' - (p(x) y')' + q(x) y  on (0, 1),

with the quasi-derivative y^[3] = y''' - p y' and boundary forms

    U1(y) = y''(0) + a y'(0) - b y(0),
    U2(y) = y^[3](0) + b y'(0) + c y(0),
    U3(y) = y(0),  U4(y) = y'(0),
    Vs(y) = y^[s-1](1),  s = 1..4.

Coefficients p and q are piecewise polynomials on [0, 1] (sampled data is
converted to piecewise interpolants at load time).  All objects are treated
as immutable after validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline


class ProblemError(ValueError):
    """Invalid problem definition (overlapping segments, bad tolerances, ...)."""


# ---------------------------------------------------------------------------
# coefficient fields

class CoefficientField:
    """A piecewise-polynomial complex coefficient on [0, 1].

    Segments are (x0, x1, coeffs) with coeffs in ascending powers of the
    local variable (x - x0).  Breakpoints must be strictly increasing and
    cover exactly [0, 1].
    """

    def __init__(self, segments):
        segs = []
        for x0, x1, coeffs in segments:
            coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
            segs.append((float(x0), float(x1), coeffs))
        if not segs:
            raise ProblemError("coefficient field needs at least one segment")
        segs.sort(key=lambda s: s[0])
        if abs(segs[0][0]) > 1e-14 or abs(segs[-1][1] - 1.0) > 1e-14:
            raise ProblemError("segments must cover exactly [0, 1]")
        for (a0, a1, _), (b0, b1, _) in zip(segs[:-1], segs[1:]):
            if a1 >= b1 or abs(a1 - b0) > 1e-14:
                raise ProblemError("overlapping segments")
            if a1 <= a0:
                raise ProblemError("empty segment")
        if segs[-1][1] <= segs[-1][0]:
            raise ProblemError("empty segment")
        self.segments = tuple(segs)
        self.breakpoints = np.array([s[0] for s in segs] + [segs[-1][1]])

    @classmethod
    def zero(cls):
        return cls([(0.0, 1.0, [0.0])])

    @classmethod
    def constant(cls, value):
        return cls([(0.0, 1.0, [value])])

    @classmethod
    def from_samples(cls, values, interp=3):
        """Build a field from uniform samples on [0, 1].

        interp 0 gives piecewise-constant (cell-centred), 1 piecewise-linear,
        3 a natural cubic spline converted to piecewise cubics.
        """
        values = np.asarray(values, dtype=complex)
        n = values.size
        if interp == 0:
            if n == 1:
                return cls.constant(values[0])
            edges = np.linspace(0.0, 1.0, n + 1)
            return cls([(edges[i], edges[i + 1], [values[i]]) for i in range(n)])
        if n < 2:
            raise ProblemError("need at least 2 samples for interpolation order >= 1")
        xs = np.linspace(0.0, 1.0, n)
        if interp == 1:
            segs = []
            for i in range(n - 1):
                slope = (values[i + 1] - values[i]) / (xs[i + 1] - xs[i])
                segs.append((xs[i], xs[i + 1], [values[i], slope]))
            return cls(segs)
        if interp == 3:
            if n < 4:
                return cls.from_samples(values, interp=1)
            spl = CubicSpline(xs, values)
            segs = []
            for i in range(n - 1):
                # PPoly coefficients are highest power first
                c = spl.c[:, i][::-1]
                segs.append((xs[i], xs[i + 1], c))
            return cls(segs)
        raise ProblemError(f"unsupported interpolation order {interp}")

    def __call__(self, x):
        """Evaluate at scalar x in [0, 1]."""
        # breakpoints belong to the segment on their right (last point to the left)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        idx = min(max(idx, 0), len(self.segments) - 1)
        x0, _, coeffs = self.segments[idx]
        t = x - x0
        acc = 0.0 + 0.0j
        for c in coeffs[::-1]:
            acc = acc * t + c
        return acc

    @property
    def is_real(self):
        return all(np.allclose(c.imag, 0.0) for _, _, c in self.segments)

    @property
    def is_zero(self):
        return all(np.allclose(c, 0.0) for _, _, c in self.segments)

    def to_dict(self):
        return {
            "kind": "piecewise_poly",
            "segments": [
                {"x0": x0, "x1": x1, "coeffs": [[c.real, c.imag] for c in coeffs]}
                for x0, x1, coeffs in self.segments
            ],
        }

    @classmethod
    def from_dict(cls, obj):
        kind = obj.get("kind", "piecewise_poly")
        if kind == "piecewise_poly":
            return cls([
                (s["x0"], s["x1"], [complex(re, im) for re, im in s["coeffs"]])
                for s in obj["segments"]
            ])
        if kind == "samples":
            values = [complex(re, im) for re, im in obj["values"]]
            return cls.from_samples(values, interp=obj.get("interp", 3))
        raise ProblemError(f"unknown coefficient kind {kind!r}")


# ---------------------------------------------------------------------------
# problem spec

@dataclass(frozen=True)
class BoundaryParams:
    a: complex = 0.0
    b: complex = 0.0
    c: complex = 0.0


@dataclass(frozen=True)
class Tolerances:
    ode_rel: float = 1e-10
    ode_abs: float = 1e-12
    root_tol: float = 1e-10
    contour_nodes: int = 64


@dataclass(frozen=True)
class QuasiState:
    """The 4-vector (y, y', y'', y^[3])."""

    y: complex
    dy: complex
    d2y: complex
    qd3y: complex

    @classmethod
    def from_vector(cls, v):
        return cls(*(complex(c) for c in np.asarray(v).ravel()[:4]))

    @property
    def vector(self):
        return np.array([self.y, self.dy, self.d2y, self.qd3y], dtype=complex)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    p: CoefficientField
    q: CoefficientField
    boundary: BoundaryParams = BoundaryParams()
    tolerances: Tolerances = Tolerances()
    self_adjoint_hint: bool = False
    validated: bool = False
    # scratch space for per-problem caches (delta scales etc.); not state
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def is_real(self):
        b = self.boundary
        return (self.p.is_real and self.q.is_real
                and abs(complex(b.a).imag) == 0.0
                and abs(complex(b.b).imag) == 0.0
                and abs(complex(b.c).imag) == 0.0)

    @property
    def breakpoints(self):
        pts = np.union1d(self.p.breakpoints, self.q.breakpoints)
        return pts


def validate_problem(raw: ProblemSpec) -> ProblemSpec:
    """Check all invariants and return a validated (immutable) spec."""
    for name in ("a", "b", "c"):
        v = complex(getattr(raw.boundary, name))
        if not np.isfinite(v.real) or not np.isfinite(v.imag):
            raise ProblemError(f"boundary constant {name} is not finite")
    tol = raw.tolerances
    for name in ("ode_rel", "ode_abs", "root_tol"):
        if not (getattr(tol, name) > 0):
            raise ProblemError(f"tolerance {name} must be positive")
    n = tol.contour_nodes
    if n < 16 or (n & (n - 1)) != 0:
        raise ProblemError("contour_nodes must be >= 16 and a power of two")
    for fname, fld in (("p", raw.p), ("q", raw.q)):
        for x in np.linspace(0.0, 1.0, 13):
            v = fld(x)
            if not np.isfinite(v.real) or not np.isfinite(v.imag):
                raise ProblemError(f"coefficient {fname} not finite at x={x}")
    return replace(raw, validated=True)


def beam_problem(a=0.0, b=0.0, c=0.0, **kwargs) -> ProblemSpec:
    """The zero-coefficient problem (Euler-Bernoulli beam when a=b=c=0)."""
    return validate_problem(ProblemSpec(
        p=CoefficientField.zero(), q=CoefficientField.zero(),
        boundary=BoundaryParams(a, b, c), **kwargs))


# ---------------------------------------------------------------------------
# boundary forms and the Lagrange bracket

def boundary_form_matrix(spec: ProblemSpec, end: str) -> np.ndarray:
    """Matrix of the boundary linear forms acting on (y, y', y'', y^[3]).

    Row k of the left matrix represents U_k, of the right matrix V_k.
    """
    if end == "right":
        return np.eye(4, dtype=complex)
    if end != "left":
        raise ValueError(f"end must be 'left' or 'right', got {end!r}")
    a, b, c = spec.boundary.a, spec.boundary.b, spec.boundary.c
    return np.array([
        [-b, a, 1, 0],
        [c, b, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ], dtype=complex)


def lagrange_bracket(y, z) -> complex:
    """<y, z> = y^[3] z - y'' z' + y' z'' - y z^[3], bilinear and antisymmetric."""
    yv = y.vector if isinstance(y, QuasiState) else np.asarray(y, dtype=complex)
    zv = z.vector if isinstance(z, QuasiState) else np.asarray(z, dtype=complex)
    return complex(yv[3] * zv[0] - yv[2] * zv[1] + yv[1] * zv[2] - yv[0] * zv[3])


# ---------------------------------------------------------------------------
# JSON interface

def problem_to_dict(spec: ProblemSpec) -> dict:
    b = spec.boundary
    tol = spec.tolerances
    return {
        "p": spec.p.to_dict(),
        "q": spec.q.to_dict(),
        "a": [complex(b.a).real, complex(b.a).imag],
        "b": [complex(b.b).real, complex(b.b).imag],
        "c": [complex(b.c).real, complex(b.c).imag],
        "tolerances": {
            "ode_rel": tol.ode_rel, "ode_abs": tol.ode_abs,
            "root_tol": tol.root_tol, "contour_nodes": tol.contour_nodes,
        },
        "self_adjoint_hint": spec.self_adjoint_hint,
    }


def problem_from_dict(obj: dict) -> ProblemSpec:
    def c(v):
        if isinstance(v, (list, tuple)):
            return complex(v[0], v[1])
        return complex(v)

    tol = obj.get("tolerances", {})
    spec = ProblemSpec(
        p=CoefficientField.from_dict(obj["p"]),
        q=CoefficientField.from_dict(obj["q"]),
        boundary=BoundaryParams(c(obj.get("a", 0)), c(obj.get("b", 0)), c(obj.get("c", 0))),
        tolerances=Tolerances(
            ode_rel=tol.get("ode_rel", 1e-10),
            ode_abs=tol.get("ode_abs", 1e-12),
            root_tol=tol.get("root_tol", 1e-10),
            contour_nodes=tol.get("contour_nodes", 64),
        ),
        self_adjoint_hint=bool(obj.get("self_adjoint_hint", False)),
    )
    return validate_problem(spec)


def load_problem(path) -> ProblemSpec:
    with open(path) as fh:
        return problem_from_dict(json.load(fh))


def save_problem(spec: ProblemSpec, path):
    with open(path, "w") as fh:
        json.dump(problem_to_dict(spec), fh, indent=2)
