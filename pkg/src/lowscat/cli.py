"""Command-line front end.

Usage examples::

    lowscat compute --potential well --v 1.2337 --mu 1.0
    lowscat wavefunction --potential mpt --v 1 --mu 2 --out u.csv
    lowscat tune --potential gaussian --a-target 5.4 --r0-target 1.7 --nodes 1
    lowscat scan --potential well --mu 1 --vary v --start 0.2 --stop 5 --num 100
    lowscat phaseshift --potential well --v 1.7575 --mu 0.5 --k 0.01,0.05,0.1
    lowscat bound --preset deuteron
    lowscat table 3

Errors go to stderr as one JSON object; exit codes are 0 (ok), 1 (a table
comparison failed), 2 (bad configuration), 3 (numerical failure) and
4 (I/O failure).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, tables
from .errors import ConfigError, ScatteringError
from .observables import (
    RULES,
    SIMPSON,
    bound_state_energies,
    compute_observables,
    is_unitary,
    kcot_expansion,
    normalize,
    phase_shift_scan,
    scattering_length,
)
from .potentials import (
    DEFAULT_CORE_THRESHOLD,
    DEFAULT_EPSILON_TAIL,
    LJ_CONVENTIONS,
    PotentialSpec,
    derive_range,
)
from .solver import DEFAULT_DR, METHODS, NUMEROV, integrate, wavefunction_csv
from .tuner import SolverConfig, TuneTarget, scan, tune
from .units import MASS_PRESETS, make_scale, mev_to_millikelvin, preset_scale

EXIT_OK, EXIT_FAILED_CHECK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3, 4
SIG_DIGITS = 10

DEFAULTS = {
    "dr": DEFAULT_DR,
    "method": NUMEROV,
    "rule": SIMPSON,
    "units": "dimensionless",
    "format": "json",
    "epsilon_tail": DEFAULT_EPSILON_TAIL,
    "core_threshold": DEFAULT_CORE_THRESHOLD,
    "lj_convention": "m_r",
    "l": 0,
    "nodes": 0,
    "tol_a": 1e-3,
    "tol_r0": 1e-3,
    "max_outer": 60,
    "num": 50,
}

BOUND_PRESETS = {
    "deuteron": (5.4112, 1.7436, "np"),
    "he4-dimer": (90.4, 8.0, "he4-dimer"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _round(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.generic):
        return _round(x.item())
    return x


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def dumps(obj) -> str:
    return json.dumps(_round(obj), indent=2)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


# -- argument handling --------------------------------------------------------

def _add_potential(p):
    g = p.add_argument_group("potential")
    g.add_argument("--potential", help="family: well, mpt, gaussian, lj, tabulated")
    g.add_argument("--v", type=float, help="depth (attractive families)")
    g.add_argument("--mu", type=float, help="inverse range (attractive families)")
    g.add_argument("--lam", type=float, help="Poschl-Teller lambda instead of v")
    g.add_argument("--c12", type=float)
    g.add_argument("--c6", type=float)
    g.add_argument("--lj-convention", choices=sorted(LJ_CONVENTIONS),
                   help="read C12/C6 as coefficients of hbar^2/m_r (default) or hbar^2/(2 m_r)")
    g.add_argument("--file", help="JSON file with a potential spec or tabulated r/v samples")
    g.add_argument("--epsilon-tail", type=float)
    g.add_argument("--core-threshold", type=float)


def _add_solver(p):
    g = p.add_argument_group("solver")
    g.add_argument("--dr", type=float)
    g.add_argument("--method", choices=METHODS)
    g.add_argument("--rule", choices=RULES)
    g.add_argument("--units", choices=["dimensionless", "fm", "angstrom", *MASS_PRESETS],
                   help="unit scale for physical outputs")


def _add_common(p, formats=("json", "csv")):
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=list(formats))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lowscat", description="Low-energy s-wave scattering observables.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("compute", help="scattering length and effective range")
    _add_potential(p), _add_solver(p), _add_common(p)

    p = sub.add_parser("wavefunction", help="normalised zero-energy u(r) as CSV")
    _add_potential(p), _add_solver(p), _add_common(p)
    p.add_argument("--r-max", type=float, help="extend past R with the free solution 1 - r/a")

    p = sub.add_parser("tune", help="fit the two potential parameters to (a, r0)")
    _add_potential(p), _add_solver(p), _add_common(p)
    p.add_argument("--a-target", help="target a, or 'unitary'")
    p.add_argument("--r0-target", type=float)
    p.add_argument("--nodes", type=int, help="desired bound-state count")
    p.add_argument("--tol-a", type=float)
    p.add_argument("--tol-r0", type=float)
    p.add_argument("--max-outer", type=int)
    p.add_argument("--trace", action="store_true", default=None, help="include every evaluation")

    p = sub.add_parser("scan", help="a and r0 along one parameter")
    _add_potential(p), _add_solver(p), _add_common(p)
    p.add_argument("--vary", help="parameter to vary (v, mu, c12, c6)")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--num", type=int)
    p.add_argument("--grid", help="comma-separated values (overrides start/stop/num)")

    p = sub.add_parser("phaseshift", help="phase shifts on a k grid")
    _add_potential(p), _add_solver(p), _add_common(p)
    p.add_argument("--l", type=int)
    p.add_argument("--k", help="comma-separated wave numbers")
    p.add_argument("--k-min", type=float)
    p.add_argument("--k-max", type=float)
    p.add_argument("--num", type=int)

    p = sub.add_parser("bound", help="zero- and finite-range binding energies")
    _add_common(p)
    p.add_argument("--preset", choices=sorted(BOUND_PRESETS))
    p.add_argument("--a", type=float, help="scattering length in the scale's length unit")
    p.add_argument("--r0", type=float)
    p.add_argument("--system", choices=sorted(MASS_PRESETS), help="reduced-mass preset")
    p.add_argument("--reduced-mass", type=float, help="MeV/c^2")
    p.add_argument("--length-unit", choices=["fm", "angstrom"])

    p = sub.add_parser("table", help="recompute a benchmark table")
    _add_common(p, formats=("text", "json"))
    p.add_argument("number", type=int, nargs="?", choices=sorted(tables.TABLES))
    p.add_argument("--verify", help="compute JSON record to check against its pinned row")
    p.add_argument("--dr", type=float)
    p.add_argument("--method", choices=METHODS)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge --config values under the explicit flags, then fill defaults."""
    values = vars(args)
    if values.get("config"):
        try:
            with open(values["config"]) as fh:
                cfg = json.load(fh)
        except OSError:
            raise
        except ValueError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, val in cfg.items():
            key = key.replace("-", "_")
            if key == "command":
                continue
            if key not in values and key != "potential_spec":
                raise ConfigError(f"unknown config key {key!r}")
            if values.get(key) is None:
                values[key] = val
    defaults = dict(DEFAULTS, format="text") if values.get("command") == "table" else DEFAULTS
    for key, val in defaults.items():
        if key in values and values[key] is None:
            values[key] = val
    return argparse.Namespace(**values)


def potential_from_args(args) -> PotentialSpec:
    pot = getattr(args, "potential", None)
    if isinstance(pot, dict):
        return PotentialSpec.from_dict(pot)
    if getattr(args, "file", None):
        with open(args.file) as fh:
            try:
                data = json.load(fh)
            except ValueError as exc:
                raise ConfigError(f"potential file is not valid JSON: {exc}") from None
        if "family" not in data:
            data = {"family": pot or "tabulated", **data}
        return PotentialSpec.from_dict(data)
    if not pot:
        raise ConfigError("--potential is required")
    data = {"family": pot}
    for key in ("v", "mu", "lam", "c12", "c6"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    if args.lj_convention:
        data["convention"] = args.lj_convention
    return PotentialSpec.from_dict(data)


def _config(args) -> SolverConfig:
    return SolverConfig(args.dr, args.method, args.rule, args.epsilon_tail, args.core_threshold)


def _range(spec, args):
    return derive_range(spec, args.epsilon_tail, args.core_threshold)


def _unit_scale(args):
    if args.units == "dimensionless":
        return None
    if args.units in MASS_PRESETS:
        return preset_scale(args.units)
    return make_scale(1.0, MASS_PRESETS["np"], args.units)


# -- commands -----------------------------------------------------------------

def cmd_compute(args):
    spec = potential_from_args(args)
    obs = compute_observables(spec, _range(spec, args), args.dr, args.method, args.rule)
    out = obs.to_dict()
    out["R"] = obs.R
    out["potential"] = spec.to_dict()
    out["config"] = {
        "dr": args.dr, "method": args.method, "rule": args.rule,
        "epsilon_tail": args.epsilon_tail, "core_threshold": args.core_threshold,
    }
    scale = _unit_scale(args)
    if scale is not None:
        out["physical"] = {
            "length_unit": scale.length_unit,
            "a": None if obs.unitary else obs.a * scale.length_scale,
            "r0": None if obs.r0 is None else obs.r0 * scale.length_scale,
            "energy_scale_mev": scale.energy_scale,
        }
    if args.format == "csv":
        flat = {k: v for k, v in out.items() if not isinstance(v, dict)}
        return to_csv([flat])
    return dumps(out)


def cmd_wavefunction(args):
    spec = potential_from_args(args)
    sol = integrate(spec, _range(spec, args), 0, 0.0, args.dr, args.method)
    a = scattering_length(sol)
    unitary = is_unitary(a, sol.R)
    if a == 0.0:
        # g = 1 - r/a is singular; use u ~ r - a = r outside instead
        sol = sol.scaled(sol.R / sol.u[sol.i_range], normalized=True)
        tail = lambda r: r  # noqa: E731
    else:
        sol = normalize(sol, a, unitary)
        tail = (lambda r: np.ones_like(r)) if unitary else (lambda r: 1.0 - r / a)
    text = wavefunction_csv(sol)
    if args.r_max is not None and args.r_max > sol.r[-1]:
        n_extra = int(math.floor((args.r_max - sol.r[-1]) / sol.dr + 1e-9))
        r = sol.r[-1] + sol.dr * np.arange(1, n_extra + 1)
        text += "".join(f"{ri:.17g},{ui:.17g}\n" for ri, ui in zip(r, tail(r)))
    return text


def _target(args) -> TuneTarget:
    if args.a_target is None or args.r0_target is None:
        raise ConfigError("tune needs --a-target and --r0-target")
    a = args.a_target
    if isinstance(a, str) and not a.lower().startswith("unitary"):
        try:
            a = float(a)
        except ValueError:
            raise ConfigError(f"--a-target must be a number or 'unitary', got {a!r}") from None
    return TuneTarget(a, args.r0_target, args.nodes, args.tol_a, args.tol_r0, args.max_outer)


def cmd_tune(args):
    if not args.potential:
        raise ConfigError("--potential is required")
    target = _target(args)
    family = args.potential
    guess = None
    if any(getattr(args, k) is not None for k in ("v", "mu", "c12", "c6", "lam")):
        guess = potential_from_args(args).params
    result = tune(family, target, dict(guess) if guess else None, _config(args))
    out = {"target": target.to_dict(), **result.to_dict(trace=bool(args.trace))}
    return dumps(out)


def _grid(args):
    if args.grid:
        try:
            return [float(x) for x in args.grid.split(",") if x.strip()]
        except ValueError:
            raise ConfigError("--grid must be comma-separated numbers") from None
    if args.start is None or args.stop is None:
        raise ConfigError("scan needs --grid or --start/--stop")
    return list(np.linspace(args.start, args.stop, args.num))


def cmd_scan(args):
    if not args.potential or not args.vary:
        raise ConfigError("scan needs --potential and --vary")
    fixed = {k: getattr(args, k) for k in ("v", "mu", "c12", "c6") if getattr(args, k) is not None}
    fixed.pop(args.vary, None)
    if args.lj_convention and args.lj_convention != "m_r":
        fixed["convention"] = args.lj_convention
    rows = scan(args.potential, fixed, args.vary, _grid(args), _config(args))
    records = [
        {args.vary: r.value, "a": r.a, "r0": r.r0, "nodes": r.nodes, "divergence": r.divergence, "error": r.error}
        for r in rows
    ]
    if args.format == "json":
        return dumps(records)
    return to_csv(records)


def _k_grid(args):
    if args.k:
        try:
            ks = [float(x) for x in args.k.split(",") if x.strip()]
        except ValueError:
            raise ConfigError("--k must be comma-separated numbers") from None
    elif args.k_min is not None and args.k_max is not None:
        ks = list(np.linspace(args.k_min, args.k_max, args.num))
    else:
        raise ConfigError("phaseshift needs --k or --k-min/--k-max")
    if any(not k > 0 for k in ks):
        raise ConfigError("wave numbers must be > 0")
    return ks


def cmd_phaseshift(args):
    spec = potential_from_args(args)
    info = _range(spec, args)
    ks = _k_grid(args)
    results = phase_shift_scan(spec, ks, args.l, args.dr, args.method, info)
    expansion = None
    if args.l == 0:
        obs = compute_observables(spec, info, args.dr, args.method, args.rule)
        if obs.r0 is not None:
            expansion = obs
    records = []
    for p in results:
        rec = {"k": p.k, "l": p.l, "delta": p.delta, "cot_delta": p.cot_delta, "kcot": p.kcot,
               "beta": p.beta, "resonant": p.resonant}
        if expansion is not None:
            rec["kcot_expansion"] = float(kcot_expansion(expansion.a, expansion.r0, p.k, expansion.unitary))
        records.append(rec)
    if args.format == "csv":
        return to_csv(records)
    return dumps(records)


def cmd_bound(args):
    if args.preset:
        a, r0, system = BOUND_PRESETS[args.preset]
        a = args.a if args.a is not None else a
        r0 = args.r0 if args.r0 is not None else r0
        scale = preset_scale(system)
    else:
        if args.a is None or args.r0 is None:
            raise ConfigError("bound needs --preset or both --a and --r0")
        a, r0 = args.a, args.r0
        if args.reduced_mass is not None:
            scale = make_scale(1.0, args.reduced_mass, args.length_unit or "fm")
        elif args.system:
            scale = preset_scale(args.system)
        else:
            raise ConfigError("bound needs --system or --reduced-mass")
    est = bound_state_energies(a, r0, scale)
    out = {
        "a": a, "r0": r0, "length_unit": scale.length_unit,
        "reduced_mass_mev": scale.reduced_mass, "kappa": est.kappa,
        "E_zr_mev": est.E_zr, "E_fr_mev": est.E_fr,
    }
    if scale.length_unit == "angstrom":
        out["E_zr_mk"] = mev_to_millikelvin(est.E_zr)
        out["E_fr_mk"] = mev_to_millikelvin(est.E_fr)
    if args.format == "csv":
        return to_csv([out])
    return dumps(out)


def cmd_table(args):
    if args.verify:
        with open(args.verify) as fh:
            try:
                record = json.load(fh)
            except ValueError as exc:
                raise ConfigError(f"record is not valid JSON: {exc}") from None
        try:
            rows = [tables.verify_record(record)]
        except (LookupError, TypeError) as exc:
            raise ConfigError(f"cannot verify record: {exc}") from None
    else:
        if args.number is None:
            raise ConfigError("table needs a table number or --verify")
        kwargs = {} if args.number == 1 else {"dr": args.dr, "method": args.method}
        rows = tables.reproduce(args.number, **kwargs)
    ok = all(r.passed for r in rows)
    if args.format == "json":
        text = dumps({"rows": [r.to_dict() for r in rows], "passed": ok})
    else:
        text = tables.format_rows(rows)
    return text, (EXIT_OK if ok else EXIT_FAILED_CHECK)


COMMANDS = {
    "compute": cmd_compute,
    "wavefunction": cmd_wavefunction,
    "tune": cmd_tune,
    "scan": cmd_scan,
    "phaseshift": cmd_phaseshift,
    "bound": cmd_bound,
    "table": cmd_table,
}


def _error(kind, exc, code):
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc), "exit_code": code}
    last = getattr(exc, "last", None)
    if last is not None and hasattr(last, "to_dict"):
        payload["last"] = _round(last.to_dict())
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise ConfigError("a command is required: " + ", ".join(COMMANDS))
        args = resolve(args)
        result = COMMANDS[args.command](args)
        text, code = result if isinstance(result, tuple) else (result, EXIT_OK)
        if not text.endswith("\n"):
            text += "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except ConfigError as exc:
        return _error("config", exc, EXIT_CONFIG)
    except ScatteringError as exc:
        return _error("numerical", exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _error("io", exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
