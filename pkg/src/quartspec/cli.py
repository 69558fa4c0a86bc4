"""Command-line front end.

Subcommands: spectrum, weyl, mclaughlin, weights, classify, barcilon,
reconstruct, twin, verify.  Results are machine-readable JSON (or CSV for
grid outputs); complex numbers are serialized as [re, im] pairs everywhere.
Exit codes: 0 success, 1 domain error (structured JSON on stderr), 2 usage
error.  QS_THREADS bounds the worker count for grid evaluations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bridge, mclaughlin, spectra, weights, weyl
from .problem import ProblemError, load_problem
from .propagator import fundamental_C, propagate_pair
from .problem import lagrange_bracket


class DomainError(RuntimeError):
    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


def _jsonify(obj):
    """Complex -> [re, im]; arrays -> nested lists; passthrough otherwise."""
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit(args, payload):
    text = json.dumps(_jsonify(payload), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(args):
    if not os.path.exists(args.problem):
        print(f"error: problem file not found: {args.problem}", file=sys.stderr)
        raise SystemExit(2)
    return load_problem(args.problem)


def _selector(text):
    if len(text) != 2 or not text.isdigit():
        raise argparse.ArgumentTypeError("selector must be two digits, e.g. 22")
    return (int(text[0]), int(text[1]))


def _complex_arg(text):
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    return complex(float(parts[0]), float(parts[1]))


def _n_workers():
    try:
        return max(1, int(os.environ.get("QS_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# subcommands

def cmd_spectrum(args):
    problem = _load(args)
    req = spectra.SpectrumRequest(args.selector, (args.xmin, args.xmax),
                                  max_count=args.count)
    zeros = spectra.find_real_zeros(problem, req)
    scale = weyl.delta_scale(problem, args.selector[1])
    _emit(args, [
        {"lambda": z.lam, "ddelta": z.ddelta,
         "simple": spectra.simplicity_check(z, scale)}
        for z in zeros
    ])
    return 0


def cmd_weyl(args):
    problem = _load(args)
    lams = np.linspace(args.lambda_min, args.lambda_max, args.lambda_count)

    def one(lam):
        sample = weyl.weyl_matrix(problem, lam, want_dlambda=False)
        m = sample.m
        row = [lam.real if isinstance(lam, complex) else float(lam), 0.0]
        row += [m[1, 0], m[2, 0], m[2, 1], m[3, 0], m[3, 1], m[3, 2]]
        row += [sample.deltas[jk].value for jk in weyl.ALL_INDEX_PAIRS]
        return row

    workers = _n_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, lams))
    else:
        rows = [one(lam) for lam in lams]

    if args.format == "csv":
        header = ["lambda_re", "lambda_im",
                  "m21", "m31", "m32", "m41", "m42", "m43"]
        header += [f"delta{j}{k}" for j, k in weyl.ALL_INDEX_PAIRS]
        lines = [",".join(header)]
        for row in rows:
            cells = []
            for v in row:
                v = complex(v)
                cells.append(repr(v.real) if v.imag == 0 else f"{v.real!r}+{v.imag!r}j")
            lines.append(",".join(cells))
        text = "\n".join(lines)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        _emit(args, rows)
    return 0


def cmd_mclaughlin(args):
    problem = _load(args)
    zeros = spectra.find_first_zeros(problem, (2, 2), args.count)
    points = mclaughlin.weight_numbers(problem, zeros)
    for pt in points:
        if pt.case_tag == "unknown" and pt.norm_ok:
            pt.case_tag = weights.classify_on_problem(problem, pt)
    _emit(args, [
        {"lambda": pt.lam, "gamma": pt.gamma, "xi": pt.xi, "beta": pt.beta,
         "case": pt.case_tag, "norm_ok": pt.norm_ok}
        for pt in points
    ])
    return 0


def cmd_weights(args):
    problem = _load(args)
    w = weights.weight_matrix(problem, args.lambda0)
    d22 = weyl.all_deltas(problem, args.lambda0)[(2, 2)]
    if abs(d22.value) < 1e-6 * weyl.delta_scale(problem, 2):
        zeros = spectra.find_real_zeros(
            problem, spectra.SpectrumRequest((2, 2), (args.lambda0.real - 1, args.lambda0.real + 1)))
        pts = mclaughlin.weight_numbers(problem, zeros, residue_check=False)
        point = pts[0]
        point.case_tag = weights.classify_on_problem(problem, point)
    else:
        point = mclaughlin.SpectralPoint(lam=args.lambda0, case_tag="V")
    report = weights.verify_weight_structure(w, point)
    _emit(args, {"lambda0": w.lam0, "m_minus1": w.m_minus1, "m_zero": w.m_zero,
                 "n": w.n, "case": point.case_tag, "residuals": report["checks"]})
    return 0


def cmd_classify(args):
    problem = _load(args)
    zeros = spectra.find_first_zeros(problem, (2, 2), args.count)
    points = mclaughlin.weight_numbers(problem, zeros, residue_check=False)
    out = []
    for pt in points:
        tag = weights.classify_on_problem(problem, pt) if pt.norm_ok else "unknown"
        pt.case_tag = tag
        out.append({"lambda": pt.lam, "gamma": pt.gamma, "xi": pt.xi, "case": tag})
    _emit(args, out)
    return 0


def cmd_barcilon(args):
    problem = _load(args)
    b = spectra.three_spectra(problem, args.count)
    _emit(args, {"s12": b.s12, "s13": b.s13, "s23": b.s23})
    return 0


def cmd_reconstruct(args):
    problem = _load(args)
    zeros = spectra.find_first_zeros(problem, (2, 2), args.count)
    points = mclaughlin.weight_numbers(problem, zeros, residue_check=False)
    data = [(pt.lam, pt.beta) for pt in points if pt.beta is not None]
    out = {"kind": args.kind, "terms": len(data), "points": []}
    if args.kind == "m32":
        for lam in np.linspace(-10.0, -1.0, 5):
            value, tail = bridge.reconstruct_m32(data, lam)
            direct = weyl.weyl_matrix(problem, lam).m[2, 1]
            out["points"].append({"lambda": complex(lam), "value": value,
                                  "direct": direct, "tail": tail,
                                  "error": abs(value - direct)})
    elif args.kind == "delta33":
        d33_zeros = [z.lam for z in spectra.find_real_zeros(
            problem, spectra.SpectrumRequest((3, 3), (-args.zero_window, -1e-6),
                                             max_count=args.count))]
        anchor = weyl.all_deltas(problem, 0.0)[(3, 3)].value
        for lam in np.linspace(-20.0, 20.0, 5):
            value, bound = bridge.reconstruct_delta_hadamard(d33_zeros, anchor, lam)
            direct = weyl.all_deltas(problem, lam)[(3, 3)].value
            out["points"].append({"lambda": complex(lam), "value": value,
                                  "direct": direct, "bound": bound,
                                  "error": abs(value - direct)})
    else:
        raise DomainError(f"unknown reconstruction kind {args.kind!r}")
    _emit(args, out)
    return 0


def cmd_twin(args):
    for path in (args.a, args.b):
        if not os.path.exists(path):
            print(f"error: problem file not found: {path}", file=sys.stderr)
            raise SystemExit(2)
    pa, pb = load_problem(args.a), load_problem(args.b)
    report = bridge.twin_comparison(pa, pb, data_kind=args.kind, count=args.count)
    _emit(args, report)
    return 0


def cmd_verify(args):
    problem = _load(args)
    rng = np.random.default_rng(args.seed)
    checks = []

    def record(name, residual, threshold):
        ok = residual < threshold
        checks.append({"check": name, "residual": residual,
                       "threshold": threshold, "pass": bool(ok)})
        status = "pass" if ok else "FAIL"
        print(f"{status}  {name}: residual {residual:.3e} (threshold {threshold:.1e})")

    grid = [lam for lam in np.linspace(0.7, 47.3, 12)]
    sym_res, rel_res, aux_res = 0.0, 0.0, 0.0
    for lam in grid:
        try:
            sample = weyl.weyl_matrix(problem, lam)
        except weyl.PoleError:
            continue
        m = sample.m
        sym_res = max(sym_res, abs(m[1, 0] - m[3, 2]) / (1 + abs(m[3, 2])))
        rel_res = max(rel_res, abs(m[2, 0] - m[1, 0] * m[2, 1] + m[3, 1]))
        d = sample.deltas
        c4 = -d[(3, 3)].value
        aux_res = max(aux_res, abs(d[(1, 1)].value - c4) / (1 + abs(c4)))
        aux_res = max(aux_res, abs(d[(2, 1)].value + d[(4, 3)].value) / (1 + abs(d[(4, 3)].value)))
        for jk in ((3, 1), (4, 1)):
            aux_res = max(aux_res, abs(d[jk].value - d[jk].alt_value) / (1 + abs(d[jk].value)))
    record("weyl_symmetry_m21_eq_m43", float(sym_res), 1e-8)
    record("weyl_relation_m31_m21m32_m42", float(rel_res), 1e-8)
    record("delta_shortcut_identities", float(aux_res), 1e-8)

    drift = 0.0
    for lam in rng.uniform(-50, 500, 6):
        drift = max(drift, fundamental_C(problem, complex(lam)).det_drift)
    record("determinant_conservation", float(drift), 1e-8)

    lag = 0.0
    for _ in range(6):
        lam, mu = (complex(*rng.uniform(-5, 5, 2)), complex(*rng.uniform(-5, 5, 2)))
        y0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        z0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        yt, zt, integ = propagate_pair(problem, lam, mu, y0, z0)
        br = lagrange_bracket(yt[-1], zt[-1]) - lagrange_bracket(yt[0], zt[0])
        lag = max(lag, abs(br - (lam - mu) * integ))
    record("lagrange_identity", float(lag), 1e-7)

    if problem.is_real:
        zeros = spectra.find_first_zeros(problem, (2, 2), 2)
        points = mclaughlin.weight_numbers(problem, zeros)
        data_res = 0.0
        for pt in points:
            if pt.beta_residual is not None:
                data_res = max(data_res, pt.beta_residual / (1 + abs(pt.gamma) ** 2))
        record("residue_identity_beta_eq_minus_gamma_sq", float(data_res), 1e-6)

    payload = {"problem": args.problem, "checks": checks,
               "all_pass": all(c["pass"] for c in checks)}
    _emit(args, payload)
    return 0 if payload["all_pass"] else 1


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="quartspec")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--output", default=None)
        return p

    p = add("spectrum", cmd_spectrum, help="real-axis zeros of a characteristic function")
    p.add_argument("--problem", required=True)
    p.add_argument("--selector", type=_selector, default=(2, 2))
    p.add_argument("--xmin", type=float, default=0.0)
    p.add_argument("--xmax", type=float, default=1000.0)
    p.add_argument("--count", type=int, default=10)

    p = add("weyl", cmd_weyl, help="Weyl matrix entries on a lambda grid")
    p.add_argument("--problem", required=True)
    p.add_argument("--lambda-min", type=float, default=0.5)
    p.add_argument("--lambda-max", type=float, default=50.0)
    p.add_argument("--lambda-count", type=int, default=20)
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = add("mclaughlin", cmd_mclaughlin, help="spectral data (lambda, gamma, xi, beta)")
    p.add_argument("--problem", required=True)
    p.add_argument("--count", type=int, default=5)

    p = add("weights", cmd_weights, help="weight matrix at a pole")
    p.add_argument("--problem", required=True)
    p.add_argument("--lambda0", type=_complex_arg, required=True)

    p = add("classify", cmd_classify, help="case tags of the first eigenvalues")
    p.add_argument("--problem", required=True)
    p.add_argument("--count", type=int, default=5)

    p = add("barcilon", cmd_barcilon, help="the three spectra")
    p.add_argument("--problem", required=True)
    p.add_argument("--count", type=int, default=5)

    p = add("reconstruct", cmd_reconstruct, help="series/product reconstructions")
    p.add_argument("--problem", required=True)
    p.add_argument("--kind", choices=("m32", "delta33"), default="m32")
    p.add_argument("--count", type=int, default=30)
    p.add_argument("--zero-window", type=float, default=1e5)

    p = add("twin", cmd_twin, help="compare spectral data of two problems")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kind", choices=("mclaughlin", "barcilon", "weyl"),
                   default="mclaughlin")
    p.add_argument("--count", type=int, default=3)

    p = add("verify", cmd_verify, help="run the identity suite on a problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except (ProblemError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # domain errors -> structured JSON on stderr
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
