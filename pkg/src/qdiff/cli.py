"""Command line interface.

Subcommands: ``solve``, ``verify``, ``eval``, ``expand``, ``demo-poincare``.
JSON goes to standard output unless ``--out`` (or the config's
``output.json``) names a file.

Exit codes:

    0  success
    1  usage or configuration error
    2  iteration did not converge, or an iterate left the ball
    3  theorem hypotheses fail (``solve --strict``), or |q| is below the
       threshold of the configured mode
    4  a requested check failed (``verify``, ``demo-poincare``)
    5  evaluation error (pole on the grid, coefficient pole on an
       evaluation ray, unsupported input)
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import errors
from .config import RunConfig, load_config
from .extend import evaluate_at, poincare_residual
from .series import (CoefficientSet, check_cj_bounds, expand_c_coefficients,
                     monomials, oracle_R_taylor, term_count)
from .solver import ball_membership, picard_solve
from .verify import check_hypotheses, check_numeric_lemmas, residual_on_grid

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGENCE = 2
EXIT_HYPOTHESIS = 3
EXIT_CHECK_FAILED = 4
EXIT_EVALUATION = 5

_EXIT_FOR = [
    (errors.ConfigError, EXIT_CONFIG),
    (errors.NonConvergence, EXIT_NONCONVERGENCE),
    (errors.BallEscape, EXIT_NONCONVERGENCE),
    (errors.UnsupportedQ, EXIT_HYPOTHESIS),
    (errors.QDiffError, EXIT_EVALUATION),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit_error("usage", message)
        sys.exit(EXIT_CONFIG)


def _emit_error(code, message):
    print(json.dumps({"schema": 1, "error": code, "message": message}), file=sys.stderr)


def _cx(z):
    return [z.real, z.imag]


def _finite(obj):
    """JSON has no inf/nan; spell them as strings."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _write_json(doc, path):
    text = json.dumps(_finite(doc), indent=2, allow_nan=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _problem_dict(cfg: RunConfig) -> dict:
    p = cfg.problem
    return {"q": _cx(p.q), "mode": p.mode.value,
            "a": [e.text for e in p.coeffs.a], "b": [e.text for e in p.coeffs.b],
            "domain": p.domain.as_dict(), "scaling_rule": p.rule.value,
            "grid_count": cfg.grid_count, "stop_tol": p.stop_tol, "tail_tol": p.tail_tol,
            "residual_tol": p.residual_tol}


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    p = cfg.problem
    grid = cfg.grid()
    doc = {"schema": 1, "command": "solve", "problem": _problem_dict(cfg)}
    if args.strict:
        hyp = check_hypotheses(p, grid)
        doc["hypotheses"] = hyp.as_dict()
        if p.mode not in hyp.applicable_modes:
            _write_json(doc, args.out or cfg.json_path)
            return EXIT_HYPOTHESIS
    field, report = picard_solve(p, grid, workers=args.workers)
    residual = residual_on_grid(field, p)
    doc["policy"] = p.policy.as_dict()
    doc["report"] = report.as_dict()
    doc["equation_residual"] = residual.as_dict()
    doc["ball_membership"] = ball_membership(field, p.q)
    csv_path = args.csv or cfg.csv_path
    if csv_path:
        Path(csv_path).write_text(field.to_csv(), encoding="utf-8")
        doc["csv"] = str(csv_path)
    _write_json(doc, args.out or cfg.json_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    p = cfg.problem
    grid = cfg.grid()
    wanted = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(wanted) - {"hypotheses", "bounds", "lemmas", "residual"}
    if unknown:
        raise errors.ConfigError(f"unknown checks: {sorted(unknown)}")
    doc = {"schema": 1, "command": "verify", "problem": _problem_dict(cfg), "checks": {}}
    ok = True
    if "hypotheses" in wanted:
        hyp = check_hypotheses(p, grid)
        d = hyp.as_dict()
        d["passed"] = p.mode in hyp.applicable_modes
        doc["checks"]["hypotheses"] = d
        ok &= d["passed"]
    if "bounds" in wanted:
        sc = p.new_series()
        d = check_cj_bounds(sc, grid, p.mode, p.q).as_dict()
        doc["checks"]["bounds"] = d
        ok &= d["passed"]
    if "lemmas" in wanted:
        rep = check_numeric_lemmas()
        doc["checks"]["lemmas"] = {"passed": rep.passed, "rows": len(rep.rows),
                                   "failures": rep.failures()}
        ok &= rep.passed
    if "residual" in wanted:
        field, _ = picard_solve(p, grid, workers=args.workers)
        d = residual_on_grid(field, p).as_dict()
        doc["checks"]["residual"] = d
        ok &= d["passed"]
    doc["passed"] = bool(ok)
    _write_json(doc, args.out or cfg.json_path)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    p = cfg.problem
    field, _ = picard_solve(p, cfg.grid(), workers=args.workers)
    w = complex(*args.point)
    result = evaluate_at(field, p, w, max_steps=args.max_steps)
    _write_json(result.as_dict(), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    cfg = load_config(args.config)
    coeffs: CoefficientSet = cfg.problem.coeffs
    J = args.order
    sc = expand_c_coefficients(coeffs, J, method="enumeration")
    doc = {"schema": 1, "command": "expand", "order": J, "p": coeffs.p, "t": coeffs.t,
           "a": [e.text for e in coeffs.a], "b": [e.text for e in coeffs.b], "c": {}}
    for j in range(2, J + 1):
        doc["c"][str(j)] = {"monomials": [m.render() for m in monomials(j, coeffs.p, coeffs.t)],
                            "terms": term_count(j, coeffs.p, coeffs.t)}
    if args.point is not None:
        z = complex(*args.point)
        enum_vals = sc.values_at(z)
        div_vals = oracle_R_taylor(coeffs, z, J)
        doc["point"] = _cx(z)
        doc["values"] = {str(j): {"enumeration": _cx(complex(enum_vals[j])),
                                  "division": _cx(div_vals[j - 1])}
                         for j in range(2, J + 1)}
    _write_json(doc, args.out)
    return EXIT_OK


def cmd_demo_poincare(args) -> int:
    q = complex(args.q, args.q_im)
    angles = 2 * np.pi * np.arange(args.samples) / args.samples
    pts = np.exp(1j * angles) * args.radius
    res = [poincare_residual(complex(z), q, args.terms) for z in pts]
    worst = max(res)
    doc = {"schema": 1, "command": "demo-poincare", "q": _cx(q), "terms": args.terms,
           "samples": args.samples, "radius": args.radius, "max_residual": worst,
           "tol": args.tol, "passed": worst <= args.tol}
    _write_json(doc, args.out)
    return EXIT_OK if worst <= args.tol else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdiff", description="Fixed-point solver for first-order "
                     "q-difference equations y(qz) = R(z, y(z)).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--out", metavar="PATH", help="write JSON here instead of stdout")

    sp = sub.add_parser("solve", help="Picard iteration on the configured grid")
    common(sp)
    sp.add_argument("--strict", action="store_true", help="refuse to solve when hypotheses fail")
    sp.add_argument("--csv", metavar="PATH")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="hypothesis, bound, lemma and residual checks")
    common(sp)
    sp.add_argument("--checks", default="hypotheses,bounds,lemmas,residual")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("eval", help="evaluate the solution at a point")
    common(sp)
    sp.add_argument("--point", nargs=2, type=float, required=True, metavar=("RE", "IM"))
    sp.add_argument("--max-steps", type=int, default=20)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("expand", help="series coefficients c_j")
    common(sp)
    sp.add_argument("--order", type=int, default=4, metavar="J")
    sp.add_argument("--point", nargs=2, type=float, metavar=("RE", "IM"))
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("demo-poincare", help="residual of Poincare's theta-type example")
    common(sp, config=False)
    sp.add_argument("--q", type=float, default=2.0)
    sp.add_argument("--q-im", type=float, default=0.0)
    sp.add_argument("--terms", type=int, default=20, metavar="N")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_demo_poincare)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except errors.QDiffError as exc:
        for cls, code in _EXIT_FOR:
            if isinstance(exc, cls):
                _emit_error(exc.code, str(exc))
                return code
        raise
    except OSError as exc:
        _emit_error("io_error", str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
