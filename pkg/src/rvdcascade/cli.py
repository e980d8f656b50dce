"""Command-line front end producing deterministic JSON reports.

Subcommands::

    verify-limits                     degeneration-limit harness
    qheun spectrum|continuum|normal-form
    lax-match d5|e6|e7
    eval                              apply an operator to exp(2 pi i k z) at a point

Exit codes: 0 pass, 1 numeric failure, 2 configuration error, 3 constraint error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import (ConstraintViolated, CountertermPole, NoPolynomialSector, NumericalOverflow,
                     RvDError)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_CONSTRAINT = 0, 1, 2, 3


class ConfigError(Exception):
    pass


# --- value helpers -------------------------------------------------------------------

def parse_complex(v, name="value") -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"{name}: expected a number")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(f"{name}: cannot read {v!r} as a complex number (use a number, [re, im] or '1+2j')")


def parse_vector(v, n, name) -> tuple:
    if not isinstance(v, (list, tuple)) or (n is not None and len(v) != n):
        raise ConfigError(f"{name}: expected a list of {n} numbers")
    return tuple(parse_complex(x, f"{name}[{i}]") for i, x in enumerate(v))


def cjson(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return cjson(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def _merge(defaults: dict, cfg: dict, allowed=None) -> dict:
    allowed = set(defaults) if allowed is None else set(allowed)
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    out = dict(defaults)
    out.update(cfg)
    return out


# --- verify-limits -------------------------------------------------------------------

VERIFY_DEFAULTS = {
    "stage": 2,
    "N": 1,
    "a_minus": 0.4,
    "h": None,
    "l": None,
    "mu": [0.21, 0.03],
    "scales": None,
    "n_samples": 10,
    "dps": 40,
    "expected_rate": None,
    "rate_tol": 0.1,
}

DEFAULT_H4 = [[0.11, 0.02], [-0.07, 0.05], [0.23, -0.03], [-0.19, 0.01]]
DEFAULT_L4 = [[0.05, -0.04], [0.17, 0.03], [-0.12, 0.06], [0.08, -0.02]]
DEFAULT_H8 = [[0.11, 0.02], [-0.07, 0.05], [0.23, -0.03], [-0.19, 0.01],
              [0.05, -0.04], [0.17, 0.03], [-0.12, 0.06], [0.08, -0.02]]


def resolve_verify(cfg: dict, tol) -> dict:
    c = _merge(VERIFY_DEFAULTS, cfg)
    if c["stage"] not in (1, 2, 3, 4):
        raise ConfigError("stage must be one of 1, 2, 3, 4")
    if c["N"] not in (1, 2):
        raise ConfigError("N must be 1 or 2")
    if c["h"] is None:
        c["h"] = DEFAULT_H8 if c["stage"] == 1 else DEFAULT_H4
    if c["l"] is None:
        c["l"] = [] if c["stage"] == 1 else DEFAULT_L4
    if tol is not None:
        c["rate_tol"] = tol
    return c


def cmd_verify_limits(cfg: dict, seed: int, tol) -> tuple[dict, int]:
    from .cascade import DegenParams, verify_limit
    from .qcalc import ModulusPair

    c = resolve_verify(cfg, tol)
    am = parse_complex(c["a_minus"], "a_minus")
    if c["stage"] == 1 and abs(am) < 1e-14:
        raise CountertermPole("counterterm pole: a_minus = 0 makes (1 - exp(pi a_-)) vanish")
    try:
        modulus = ModulusPair(math.inf, am)
    except RvDError as exc:
        raise ConfigError(str(exc)) from exc
    nh = 8 if c["stage"] == 1 else 4
    h = parse_vector(c["h"], nh, "h")
    l = parse_vector(c["l"], 0 if c["stage"] == 1 else 4, "l")
    p = DegenParams(modulus, h, l, parse_complex(c["mu"], "mu"), int(c["N"]))
    rep = verify_limit(c["stage"], p, scales=c["scales"], n_samples=int(c["n_samples"]), seed=seed,
                       dps=int(c["dps"]), expected_rate=c["expected_rate"], rate_tol=float(c["rate_tol"]))
    return {"result": rep.to_json(), "passed": rep.passed, "config": c}, (EXIT_PASS if rep.passed else EXIT_FAIL)


# --- qheun -------------------------------------------------------------------------

SPECTRUM_DEFAULTS = {"q": 0.25, "h1": 2.0, "h2": 3.0, "h3": 0.375, "l1": 1.0, "l2": 2.0, "l3": 0.5,
                     "l4": 1.0, "degree": 0, "tol": 1e-10}
CONTINUUM_DEFAULTS = {"t1": 0.7, "t2": 1.9, "h1": 0.3, "h2": -0.2, "h3": 0.45, "l1": 0.1, "l2": 0.25,
                      "l3": 0.6, "l4": -0.35, "E_tilde": 0.8, "eps": [1e-2, 3e-3, 1e-3],
                      "test_functions": [[1], [0, 0, 1]], "x": [1.3, 0.2], "draws": 0,
                      "min_slope": 0.9}
NORMAL_DEFAULTS = {"t1": 0.7, "t2": 1.9, "h1": 0.3, "h2": -0.2, "h3": 0.45, "l1": 0.1, "l2": 0.25,
                   "l3": 0.6, "l4": -0.35, "E_tilde": 0.8}
_CP_KEYS = ("t1", "t2", "h1", "h2", "h3", "l1", "l2", "l3", "l4", "E_tilde")


def _continuum_params(c):
    from .qheun import ContinuumParams
    return ContinuumParams(**{k: parse_complex(c[k], k) for k in _CP_KEYS})


def random_continuum(rng):
    from .qheun import ContinuumParams
    u = lambda: complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.2, 0.2))
    t1 = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.3, 0.3))
    t2 = t1 + complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
    return ContinuumParams(t1, t2, u(), u(), u(), u(), u(), u(), u(), E_tilde=u() * 3)


def cmd_qheun(sub: str, cfg: dict, seed: int, tol) -> tuple[dict, int]:
    from . import qheun

    if sub == "spectrum":
        c = _merge(SPECTRUM_DEFAULTS, cfg)
        if tol is not None:
            c["tol"] = tol
        vals = {k: parse_complex(c[k], k) for k in ("h1", "h2", "h3", "l1", "l2", "l3", "l4")}
        q = parse_complex(c["q"], "q")
        if abs(q.imag) > 0 or not 0 < q.real < 1:
            raise ConfigError("spectrum needs real q in (0, 1)")
        p = qheun.QHeunParams.from_values(q.real, **vals)
        d = int(c["degree"])
        cons = qheun.sector_constraints(p, d)
        res = qheun.polynomial_spectrum(p, d, tol=float(c["tol"]))
        resid = []
        for E in res.eigenvalues:
            g = qheun.polynomial_solution(p, d, E)
            r = qheun.apply_to_polynomial(p.with_E(E), g)
            scale = max(1.0, max((abs(x) for x in g.coeffs.values()), default=1.0))
            resid.append(max((abs(x) for x in r.coeffs.values()), default=0.0) / scale)
        ok = all(x < 1e-10 for x in resid)
        out = {"eigenvalues": res.eigenvalues,
               "constraints_enforced": {"leading x^{d+2} coefficient": cons["leading"],
                                        "trailing x^0 coefficient": cons["trailing"]},
               "identity_residuals": resid}
        return {"result": out, "passed": ok, "config": c}, (EXIT_PASS if ok else EXIT_FAIL)

    if sub == "continuum":
        c = _merge(CONTINUUM_DEFAULTS, cfg)
        if tol is not None:
            c["min_slope"] = tol
        eps = [float(e) for e in c["eps"]]
        if len(eps) < 2:
            raise ConfigError("eps needs at least two values")
        x = parse_complex(c["x"], "x")
        fs = [parse_vector(f, None, "test_functions") for f in c["test_functions"]]
        draws = int(c["draws"])
        params = [_continuum_params(c)] if draws == 0 else \
            [random_continuum(np.random.default_rng([seed, i])) for i in range(draws)]
        rows = []
        for cp in params:
            for f in fs:
                slope = qheun.continuum_slope(cp, list(f), x, eps)
                res = [abs(qheun.continuum_residual(cp.with_eps(e), list(f), x)) for e in eps]
                rows.append({"test_function": [cjson(a) for a in f], "residuals": res, "slope": slope})
        worst = min(r["slope"] for r in rows)
        ok = worst >= float(c["min_slope"])
        return ({"result": {"runs": rows, "slope": worst}, "passed": ok, "config": c},
                EXIT_PASS if ok else EXIT_FAIL)

    if sub == "normal-form":
        c = _merge(NORMAL_DEFAULTS, cfg)
        cp = _continuum_params(c)
        hp = qheun.heun_normal_form(cp)
        rs = qheun.riemann_scheme(cp)
        out = {"heun": {k: getattr(hp, k) for k in ("t", "gamma", "delta", "eps_hat", "alpha", "beta",
                                                     "accessory")},
               "fuchs_defect": abs(hp.fuchs_defect()),
               "riemann_scheme": {"points": [str(p) if isinstance(p, str) else cjson(p) for p in rs.points],
                                  "exponents": rs.exponents, "max_indicial_mismatch": rs.max_mismatch}}
        ok = abs(hp.fuchs_defect()) < 1e-12 and rs.max_mismatch < 1e-10
        return {"result": out, "passed": ok, "config": c}, (EXIT_PASS if ok else EXIT_FAIL)

    raise ConfigError(f"unknown qheun subcommand {sub!r}")


# --- lax-match ---------------------------------------------------------------------

LAX_DEFAULTS = {"draws": 50, "tol": 1e-12, "params": None}


def _explicit_lax(family: str, prm: dict):
    from . import laxlink
    if family == "d5":
        keys = ("q", "kappa1", "kappa2", "theta1", "a1", "a2", "a3", "a4", "t", "lam", "mu")
        missing = [k for k in keys if k not in prm]
        if missing:
            raise ConfigError(f"d5 params missing {missing}")
        vals = {k: parse_complex(prm[k], k) for k in keys}
        th2 = parse_complex(prm["theta2"], "theta2") if "theta2" in prm else None
        return laxlink.JSParams.create(theta2=th2, **vals)
    keys = ("q", "b", "t", "accessory")
    missing = [k for k in keys if k not in prm]
    if missing:
        raise ConfigError(f"{family} params missing {missing}")
    b = parse_vector(prm["b"], None, "b")
    return laxlink.YamadaParams.create(parse_complex(prm["q"], "q"), b, parse_complex(prm["t"], "t"),
                                       parse_complex(prm["accessory"], "accessory"))


def cmd_lax_match(family: str, cfg: dict, seed: int, tol) -> tuple[dict, int]:
    from . import laxlink
    if family not in laxlink.MATCHERS:
        raise ConfigError(f"unknown family {family!r}")
    c = _merge(LAX_DEFAULTS, cfg)
    if tol is not None:
        c["tol"] = tol
    draws = int(c["draws"])
    if draws < 1:
        raise ConfigError("draws must be >= 1")
    if c["params"] is not None:
        p = _explicit_lax(family, c["params"])
        results = [laxlink.MATCHERS[family][1](p, float(c["tol"]))]
    else:
        results = laxlink.run_draws(family, draws, seed, float(c["tol"]))
    disc = [r.discrepancy for r in results]
    ok = all(r.passed for r in results)
    out = {"family": family.upper(), "discrepancies": disc, "max_discrepancy": max(disc),
           "accessory_slot_excluded": results[0].accessory_slot,
           "offending": [r.offending for r in results if not r.passed],
           "first_dictionary": results[0].dictionary}
    return {"result": out, "passed": ok, "config": c}, (EXIT_PASS if ok else EXIT_FAIL)


# --- eval ------------------------------------------------------------------------------

EVAL_DEFAULTS = {"operator": "stage4", "form": "plain", "a_minus": 0.4, "a_plus": 1.0, "h": None,
                 "l": None, "mu": [0.21, 0.03], "k": 1, "z": [0.1, 0.05]}


def cmd_eval(cfg: dict, seed: int, tol) -> tuple[dict, int]:
    from .cascade import DegenParams, build_stage
    from .qcalc import ModulusPair, e2pi
    from .rvd import RvDParams, build_rvd
    from .shiftops import apply

    c = _merge(EVAL_DEFAULTS, cfg)
    op_name = c["operator"]
    z = parse_complex(c["z"], "z")
    k = int(c["k"])
    f = lambda w: e2pi(k * w)
    am = parse_complex(c["a_minus"], "a_minus")
    if op_name == "rvd":
        h = parse_vector(c["h"] or DEFAULT_H8, 8, "h")
        op = build_rvd(RvDParams(ModulusPair(parse_complex(c["a_plus"], "a_plus"), am), h,
                                 parse_complex(c["mu"], "mu")))
    elif op_name in ("stage1", "stage2", "stage3", "stage4"):
        stage = int(op_name[-1])
        h = parse_vector(c["h"] or (DEFAULT_H8 if stage == 1 else DEFAULT_H4), 8 if stage == 1 else 4, "h")
        l = parse_vector(c["l"] or ([] if stage == 1 else DEFAULT_L4), 0 if stage == 1 else 4, "l")
        if c["form"] not in ("plain", "gauged", "x-form", "barred"):
            raise ConfigError("form must be plain, gauged, x-form or barred")
        op = build_stage(stage, c["form"], DegenParams(ModulusPair(math.inf, am), h, l))
    else:
        raise ConfigError("operator must be rvd or stage1..stage4")
    val = apply(op, f, z)
    c["h"] = [cjson(x) for x in h]
    return {"result": {"value": complex(val), "basis": f"exp(2 pi i {k} z)"}, "passed": True, "config": c}, EXIT_PASS


# --- driver ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rvdcascade", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for random draws and sample points")
    common.add_argument("--tol", type=float, default=None, help="override the primary tolerance")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-limits", parents=[common], help="degeneration-limit harness")
    q = sub.add_parser("qheun", parents=[common], help="q-Heun spectra and continuum checks")
    q.add_argument("mode", choices=["spectrum", "continuum", "normal-form"])
    lx = sub.add_parser("lax-match", parents=[common], help="Lax-pair dictionary matches")
    lx.add_argument("family", choices=["d5", "e6", "e7"])
    sub.add_parser("eval", parents=[common], help="apply an operator to a basis function")
    return ap


def _load_config(path) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    sub = getattr(args, "mode", None) or getattr(args, "family", None)
    report = {"artifact": {"name": "rvdcascade", "version": __version__},
              "command": command if sub is None else f"{command} {sub}", "seed": args.seed}
    try:
        cfg = _load_config(args.config)
        report["config"] = cfg
        if command == "verify-limits":
            body, code = cmd_verify_limits(cfg, args.seed, args.tol)
        elif command == "qheun":
            body, code = cmd_qheun(sub, cfg, args.seed, args.tol)
        elif command == "lax-match":
            body, code = cmd_lax_match(sub, cfg, args.seed, args.tol)
        else:
            body, code = cmd_eval(cfg, args.seed, args.tol)
        report.update(body)
    except (ConstraintViolated, NoPolynomialSector) as exc:
        report.update({"passed": False, "error": {"type": type(exc).__name__, "message": str(exc)}})
        code = EXIT_CONSTRAINT
    except NumericalOverflow as exc:
        report.update({"passed": False, "error": {"type": type(exc).__name__, "message": str(exc)}})
        code = EXIT_FAIL
    except (ConfigError, RvDError, ValueError, TypeError) as exc:
        report.update({"passed": False, "error": {"type": type(exc).__name__, "message": str(exc)}})
        code = EXIT_CONFIG
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        print(f"error: {report['error']['message']}", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())
