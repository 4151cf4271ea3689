"""Command-line front end.

    jaclab solve-radial | perturb | scan | estimate-check | sharpness | minimality | verify

Settings come from an optional JSON config (``--config``) overridden by
flags. Exit codes: 0 ok, 1 invariant failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import blowup, minimality, norms, perturbation, radial, verify
from .errors import (
    BoundaryViolation,
    ConfigError,
    FitRefused,
    InvalidDensity,
    JaclabError,
    ParameterDomainError,
)
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("solve-radial", "perturb", "scan", "estimate-check", "sharpness", "minimality", "verify")
PARAM_KEYS = ("n", "p", "q", "alpha", "R", "R_list")
OPTION_KEYS = ("exponents", "samples", "delta", "center", "base", "grid", "twists", "suite", "points")
CONFIG_KEYS = ("command", "params", "density", "output", "quadrature", "seed", "options")
DEFAULT_PARAMS = {"n": 2, "p": 2.0, "q": 4.0, "alpha": -1.5, "R": 0.9, "R_list": list(blowup.DEFAULT_R_LIST)}


# --------------------------------------------------------------------------
# deterministic JSON
# --------------------------------------------------------------------------


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in seq):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in seq) + "]"
        return "[" + pad + ("," + pad).join(_encode(x, indent, level + 1) for x in seq) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON with insertion-ordered keys, 17 significant digits, non-finite floats as null."""
    return _encode(obj, indent, 0) + "\n"


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=lambda: dict(DEFAULT_PARAMS))
    density: dict | None = None
    out: str | None = None
    fmt: str = "json"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    seed: int = 0
    options: dict = field(default_factory=dict)


def _strict(data, allowed, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {where} fields: {sorted(unknown)}")
    return data


def _load_density(spec, base: Path | None):
    if isinstance(spec, dict) and set(spec) == {"file"}:
        path = Path(spec["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            spec = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read density file {path}: {exc}") from None
    if not isinstance(spec, dict):
        raise ConfigError("density must be a JSON object or {\"file\": path}")
    return spec


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    base = None
    if args.config:
        path = Path(args.config)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        base = path.parent
        _strict(data, CONFIG_KEYS, "config")
    if "command" in data and data["command"] != args.command:
        raise ConfigError(f"config is for {data['command']!r}, not {args.command!r}")
    params = dict(DEFAULT_PARAMS)
    params.update(_strict(data.get("params", {}), PARAM_KEYS, "params"))
    output = _strict(data.get("output", {}), ("path", "format"), "output")
    options = dict(_strict(data.get("options", {}), OPTION_KEYS, "options"))
    try:
        quad = QuadratureConfig.from_json(data.get("quadrature", {}))
    except (ValueError, TypeError, JaclabError) as exc:
        raise ConfigError(f"invalid quadrature settings: {exc}") from None
    density = _load_density(data["density"], base) if "density" in data else None
    seed = data.get("seed", 0)

    for key in ("n", "p", "q", "alpha", "R"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if args.R_list is not None:
        params["R_list"] = _parse_floats(args.R_list, "--R-list")
    if args.density is not None:
        try:
            density = _load_density(json.loads(args.density), None)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--density is not valid JSON: {exc}") from None
    if args.seed is not None:
        seed = args.seed
    for key in ("delta", "grid", "twists", "samples"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    if getattr(args, "suite", None):
        options["suite"] = args.suite
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    fmt = args.format or output.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    out = args.out or output.get("path")
    return RunConfig(args.command, params, density, out, fmt, quad, seed, options)


def _params(cfg: RunConfig, R=None) -> perturbation.PerturbationParams:
    p = cfg.params
    return perturbation.PerturbationParams(int(p["n"]), float(p["p"]), float(p["q"]), float(p["alpha"]),
                                           float(p["R"] if R is None else R))


def _density(cfg: RunConfig) -> radial.RadialDensity:
    n = int(cfg.params["n"])
    if cfg.density is None:
        return radial.constant_density(n)
    f = radial.density_from_json(cfg.density)
    if f.n != n:
        raise ConfigError(f"density dimension {f.n} disagrees with n = {n}")
    return f


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_solve_radial(cfg: RunConfig):
    f = _density(cfg)
    prof = radial.solve_radial(f, cfg.quadrature)
    points = int(cfg.options.get("points", 101))
    r = np.linspace(0.0, 1.0, points)
    rho = prof.rho(r)
    inner = r[1:]
    rd = np.concatenate([[math.nan], prof.rho_dot(inner)])
    jac = np.concatenate([[math.nan], radial.jacobian(prof, inner)])
    fr = f(r)
    residual = float(np.max(np.abs(jac[1:] - fr[1:]) / np.maximum(np.abs(fr[1:]), 1e-300)))
    exponents = cfg.options.get("exponents", [2.0, float(f.n)])
    energies = {format(float(e), "g"): radial.sobolev_energy(prof, float(e), (0.0, 1.0), cfg.quadrature)
                for e in exponents}
    table = {"header": ["r", "rho", "rho_dot", "jacobian", "f"],
             "rows": np.column_stack([r, rho, rd, jac, fr]).tolist()}
    report = {
        "command": "solve-radial",
        "density": f.to_json(),
        "mean": f.mean(cfg.quadrature),
        "rho_at_1": float(prof.rho(1.0)),
        "roundtrip_residual": residual,
        "sobolev_energies": energies,
        "profile": table,
    }
    return report, table


def cmd_perturb(cfg: RunConfig):
    f = _density(cfg)
    params = _params(cfg)
    fp = perturbation.build(f, params, cfg.quadrature)
    energy = perturbation.annulus_energy(params)
    prof = radial.solve_radial(fp, cfg.quadrature)
    report = {
        "command": "perturb",
        "params": params.to_json(),
        "gamma_in_range": params.gamma_in_range,
        "lambda": params.threshold,
        "mean": fp.mean(cfg.quadrature),
        "rho_at_1": float(prof.rho(1.0)),
        "annulus_mass": perturbation.annulus_mass(params, cfg.quadrature, check=True),
        "energy_exact": energy.exact,
        "energy_surrogate": energy.surrogate,
        "energy_lower_bound": energy.exact / minimality.quasimin_constant(params.n, params.q),
        "dist_p": norms.dist(f, fp, params.p, cfg.quadrature),
        "lp_tail": perturbation.lp_tail(params, f, None, cfg.quadrature).value,
        "llogl_tail": norms.llogl_norm(fp, (params.R, 1.0), cfg.quadrature).value,
        "lower_bound": fp.lower_bound,
        "base_density": f.to_json(),
    }
    return report, None


def cmd_scan(cfg: RunConfig):
    f = _density(cfg)
    p = cfg.params
    template = blowup.SweepTemplate(int(p["n"]), float(p["p"]), float(p["q"]), float(p["alpha"]))
    rep = blowup.scan(f, template, p["R_list"], cfg.quadrature)
    return {"command": "scan", **rep.to_json()}, rep


def cmd_estimate_check(cfg: RunConfig):
    p = float(cfg.params["p"])
    n = int(cfg.params["n"])
    if cfg.density is not None:
        rep = blowup.estimate_check(_density(cfg), p, cfg.quadrature)
        return {"command": "estimate-check", "p": p, "density": cfg.density, **rep.to_json()}, None
    rng = np.random.default_rng(cfg.seed)
    samples = int(cfg.options.get("samples", 20))
    rows = [blowup.estimate_check(radial.random_piecewise_density(n, rng), p, cfg.quadrature).to_json()
            for _ in range(samples)]
    ratios = [r["ratio"] for r in rows]
    return {"command": "estimate-check", "p": p, "n": n, "seed": cfg.seed, "family": "random piecewise, c = 0.5",
            "max_ratio": max(ratios), "reports": rows}, None


def cmd_sharpness(cfg: RunConfig):
    p = cfg.params
    rep = blowup.sharpness_family(
        float(p["p"]), float(p["q"]), float(cfg.options.get("delta", 0.5)),
        n=int(p["n"]), center=float(cfg.options.get("center", 0.9)), base=float(cfg.options.get("base", 0.5)),
        cfg=cfg.quadrature,
    )
    return {"command": "sharpness", **rep.to_json()}, None


def cmd_minimality(cfg: RunConfig):
    params = _params(cfg)
    grid = int(cfg.options.get("grid", 256))
    twists = int(cfg.options.get("twists", 10))
    rng = np.random.default_rng(cfg.seed)
    u = minimality.radial_map(params, grid, grid, seed=cfg.seed)
    part = minimality.partition(u, params)
    out = {
        "command": "minimality",
        "params": params.to_json(),
        "grid": [grid, grid],
        "radial": minimality.quasimin_ratio(u, params).to_json(),
        "partition": {"lambda": part.lam, "theta1": int(part.theta1.size), "theta2": int(part.theta2.size)},
        "image": minimality.image_accounting(u, part, params).to_json(),
        "twists": [],
    }
    if params.n == 2:
        for _ in range(twists):
            tw = minimality.random_twist(params.R, rng)
            v = minimality.twist_competitor(params, tw, grid, grid)
            out["twists"].append({"twist": tw.description, **minimality.quasimin_ratio(v, params).to_json()})
    return out, None


def cmd_verify(cfg: RunConfig, fault: str | None = None):
    suites = cfg.options.get("suite")
    if isinstance(suites, str):
        suites = [suites]
    try:
        results = verify.run(suites, seed=cfg.seed, fault=fault)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = {
        "command": "verify",
        "checks": [{"check": r.label, "ok": r.ok, "detail": r.detail} for r in results],
        "passed": all(r.ok for r in results),
    }
    return report, results


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _table_csv(table) -> str:
    lines = [",".join(table["header"])]
    for row in table["rows"]:
        lines.append(",".join(format(float(x), ".17g") for x in row))
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def emit(cfg: RunConfig, report: dict, extra) -> None:
    if cfg.command == "scan" and cfg.out:
        stem = Path(cfg.out)
        stem = stem.with_suffix("") if stem.suffix in (".csv", ".json") else stem
        _write(stem.with_name(stem.name + ".csv"), extra.to_csv())
        _write(stem.with_name(stem.name + ".json"), dumps(report))
        return
    if cfg.fmt == "csv":
        if cfg.command == "scan":
            text = extra.to_csv()
        elif cfg.command == "solve-radial":
            text = _table_csv(extra)
        else:
            raise ConfigError("csv output is only available for scan and solve-radial")
    else:
        text = dumps(report)
    if cfg.out:
        _write(Path(cfg.out), text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override its values")
    common.add_argument("--n", type=int, help="dimension")
    common.add_argument("--p", type=float, help="integrability exponent p")
    common.add_argument("--q", type=float, help="energy exponent q")
    common.add_argument("--alpha", type=float, help="blow-up parameter alpha in (-q/p, -1)")
    common.add_argument("--R", type=float, help="inner radius of the boundary layer")
    common.add_argument("--R-list", dest="R_list", help="comma-separated radii for a sweep")
    common.add_argument("--density", help="inline JSON density spec (default f = 1)")
    common.add_argument("--out", help="output path (scan: file stem for .csv and .json)")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--seed", type=int, help="seed for randomized fixtures (default 0)")

    parser = argparse.ArgumentParser(prog="jaclab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve-radial", parents=[common], help="radial solution of det Du = f")
    sub.add_parser("perturb", parents=[common], help="build f_{gamma,R} and report its quantities")
    sub.add_parser("scan", parents=[common], help="sweep R and fit blow-up exponents")
    est = sub.add_parser("estimate-check", parents=[common], help="radial W^{1,p} estimate ratio")
    est.add_argument("--samples", type=int, help="random densities in the family (default 20)")
    sh = sub.add_parser("sharpness", parents=[common], help="L^p but not L^q witness")
    sh.add_argument("--delta", type=float, help="inner radius of the witness support (default 0.5)")
    mn = sub.add_parser("minimality", parents=[common], help="quasiminimality chain for competitors")
    mn.add_argument("--grid", type=int, help="angles and radii per axis (default 256)")
    mn.add_argument("--twists", type=int, help="number of random twist competitors (default 10)")
    vf = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    vf.add_argument("--suite", action="append", choices=verify.SUITES, help="restrict to a suite (repeatable)")
    vf.add_argument("--inject-fault", choices=verify.FAULTS, help=argparse.SUPPRESS)
    return parser


_COMMANDS = {
    "solve-radial": cmd_solve_radial,
    "perturb": cmd_perturb,
    "scan": cmd_scan,
    "estimate-check": cmd_estimate_check,
    "sharpness": cmd_sharpness,
    "minimality": cmd_minimality,
}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if cfg.command == "verify":
            report, results = cmd_verify(cfg, getattr(args, "inject_fault", None))
            print(verify.summary(results), file=sys.stderr)
            if cfg.out:
                emit(cfg, report, None)
            failed = [r.label for r in results if not r.ok]
            if failed:
                print(f"invariant failure: {', '.join(failed)}", file=sys.stderr)
                return EXIT_INVARIANT
            return EXIT_OK
        report, extra = _COMMANDS[cfg.command](cfg)
        emit(cfg, report, extra)
        return EXIT_OK
    except (ConfigError, ParameterDomainError, InvalidDensity, FitRefused, BoundaryViolation,
            TypeError, ValueError) as exc:
        print(f"jaclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (JaclabError, ArithmeticError) as exc:
        print(f"jaclab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
