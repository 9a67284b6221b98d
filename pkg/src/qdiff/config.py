"""TOML run configuration.

Example::

    scaling_rule = "complex"          # or "modulus"

    [equation]
    q_re = 3.0
    q_im = 0.0
    mode = "T1"
    a = ["0.05", "0.15/z"]
    b = ["1/z"]

    [domain]                          # optional; defaults depend on the mode
    rho = 3.0

    [grid]                            # optional
    count = 256

    [tolerances]                      # optional
    stop_tol = 1e-12

    [output]                          # optional; paths relative to the cwd
    csv = "solution.csv"
    json = "report.json"

Complex numbers are always given as separate real and imaginary keys.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import tomli

from .domain import HalfPlanes, Rectangle, TheoremMode, default_domain
from .errors import ConfigError, QDiffError
from .expr import parse_expr
from .operator import ScalingRule
from .series import CoefficientSet
from .solver import ProblemSpec

SCHEMA = {
    "": {"scaling_rule", "equation", "domain", "grid", "tolerances", "output"},
    "equation": {"q_re", "q_im", "mode", "a", "b"},
    "domain": {"rho", "sigma"},
    "grid": {"count", "re_max", "im_max"},
    "tolerances": {"stop_tol", "tail_tol", "residual_tol"},
    "output": {"csv", "json"},
}


@dataclass
class RunConfig:
    problem: ProblemSpec
    grid_count: int = 256
    re_max: float | None = None
    im_max: float | None = None
    csv_path: str | None = None
    json_path: str | None = None
    source: str = "<string>"

    def grid(self) -> np.ndarray:
        return self.problem.domain.patch_grid(self.grid_count, self.re_max, self.im_max)


def _line_of(text, key):
    m = re.search(rf"^\s*{re.escape(key)}\s*=", text, re.MULTILINE)
    if m is None:
        m = re.search(rf"^\s*\[{re.escape(key)}\]", text, re.MULTILINE)
    if m is None:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    col += len(m.group()) - len(m.group().lstrip())
    return line, col


def _fail(text, key, message):
    line, col = _line_of(text, key)
    raise ConfigError(message, line, col)


def _number(text, section, key, value, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(text, key, f"{section}.{key} must be a number")
    value = float(value)
    if not math.isfinite(value) or (positive and value <= 0):
        _fail(text, key, f"{section}.{key} must be a {'positive' if positive else 'finite'} number")
    return value


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None

    for key in data:
        if key not in SCHEMA[""]:
            _fail(text, key, f"unknown key {key!r}")
    for section in SCHEMA:
        if not section or section not in data:
            continue
        if not isinstance(data[section], dict):
            _fail(text, section, f"{section!r} must be a table")
        for key in data[section]:
            if key not in SCHEMA[section]:
                _fail(text, key, f"unknown key {section}.{key}")

    eq = data.get("equation")
    if eq is None:
        raise ConfigError("missing [equation] table")
    if "q_re" not in eq:
        _fail(text, "equation", "equation.q_re is required")
    q = complex(_number(text, "equation", "q_re", eq["q_re"]),
                _number(text, "equation", "q_im", eq.get("q_im", 0.0)))
    try:
        mode = TheoremMode(eq.get("mode", ""))
    except ValueError:
        _fail(text, "mode", "equation.mode must be one of T1, T2, T3, T4")

    exprs = {}
    for key in ("a", "b"):
        items = eq.get(key, [])
        if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
            _fail(text, key, f"equation.{key} must be a list of expression strings")
        try:
            exprs[key] = [parse_expr(s) for s in items]
        except QDiffError as exc:
            _fail(text, key, f"equation.{key}: {exc}")
    if not exprs["a"]:
        _fail(text, "a", "equation.a needs at least one coefficient")

    rule_name = data.get("scaling_rule", "complex")
    try:
        rule = ScalingRule(rule_name)
    except ValueError:
        _fail(text, "scaling_rule", "scaling_rule must be 'complex' or 'modulus'")

    dom = data.get("domain", {})
    if mode.half_plane:
        if "sigma" in dom:
            _fail(text, "sigma", f"domain.sigma is not used by {mode.value}")
        domain = (HalfPlanes(_number(text, "domain", "rho", dom["rho"], True))
                  if "rho" in dom else default_domain(mode, q))
    elif not dom:
        domain = default_domain(mode, q)
    else:
        rho = _number(text, "domain", "rho", dom["rho"], True) if "rho" in dom else None
        sigma = _number(text, "domain", "sigma", dom["sigma"], True) if "sigma" in dom else None
        if rho is None or sigma is None:
            given = rho if rho is not None else sigma
            rest = abs(q) ** 2 - given ** 2
            if rest <= 0:
                _fail(text, "domain", "rho^2 + sigma^2 <= |q|^2 leaves no room for the other side")
            rho, sigma = (given, math.sqrt(rest)) if rho is not None else (math.sqrt(rest), given)
        domain = Rectangle(rho, sigma)

    tol = data.get("tolerances", {})
    kwargs = {k: _number(text, "tolerances", k, v, True) for k, v in tol.items()}
    try:
        problem = ProblemSpec(q, mode, CoefficientSet(exprs["a"], exprs["b"]), domain, rule,
                              **kwargs)
    except (ValueError, QDiffError) as exc:
        raise ConfigError(f"{source}: {exc}") from None

    grid = data.get("grid", {})
    count = grid.get("count", 256)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        _fail(text, "count", "grid.count must be a positive integer")
    re_max = _number(text, "grid", "re_max", grid["re_max"], True) if "re_max" in grid else None
    im_max = _number(text, "grid", "im_max", grid["im_max"], True) if "im_max" in grid else None

    out = data.get("output", {})
    for key in ("csv", "json"):
        if key in out and not isinstance(out[key], str):
            _fail(text, key, f"output.{key} must be a path string")
    cfg = RunConfig(problem, count, re_max, im_max, out.get("csv"), out.get("json"), source)
    try:
        cfg.grid()
    except ValueError as exc:
        raise ConfigError(f"{source}: grid: {exc}") from None
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def bundled_config(name: str = "t1_q3") -> Path:
    """Path of a configuration shipped with the package."""
    ref = resources.files("qdiff") / "configs" / f"{name}.toml"
    return Path(str(ref))
