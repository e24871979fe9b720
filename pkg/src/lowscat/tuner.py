"""Two-parameter tuning of a potential to a target (a, r0) pair.

The a-step varies the depth (C6 for Lennard-Jones) and the r0-step the
range (C12 for Lennard-Jones).  Depth searches work on the phase

    theta = -arctan(a / r0_target) + pi * nodes

which increases monotonically and continuously with depth: a runs from 0
to -inf inside a node sector and restarts at +inf in the next one, which
is exactly where the node count steps up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analytic
from .errors import ConfigError, ConvergenceError, NoBracketError, ScatteringError
from .observables import SIMPSON, ScatteringObservables, compute_observables
from .potentials import (
    ALIASES,
    DEFAULT_CORE_THRESHOLD,
    DEFAULT_EPSILON_TAIL,
    LJ,
    PotentialSpec,
    derive_range,
    make_potential,
)
from .solver import DEFAULT_DR, NUMEROV

UNITARY = "unitary"

COLD_START = {
    "spherical-well": {"v": 1.0, "mu": 1.0},
    "modified-poschl-teller": {"v": 1.0, "mu": 1.0},
    "gaussian": {"v": 1.0, "mu": 1.0},
    LJ: {"c12": 1.0, "c6": 5.0},
}


@dataclass(frozen=True)
class TuneTarget:
    """Target observables; ``a_target`` may be ``"unitary"`` (or inf)."""

    a_target: float | str
    r0_target: float
    desired_nodes: int = 0
    tol_a: float = 1e-3
    tol_r0: float = 1e-3
    max_outer_iterations: int = 60

    def __post_init__(self):
        a = self.a_target
        if isinstance(a, str):
            if a.lower() not in (UNITARY, "unitary+", "unitary-", "inf"):
                raise ConfigError(f"unknown a_target {a!r}")
            object.__setattr__(self, "a_target", UNITARY)
        elif math.isinf(a):
            object.__setattr__(self, "a_target", UNITARY)
        elif not math.isfinite(a):
            raise ConfigError("a_target must be finite or 'unitary'")
        if not self.r0_target > 0:
            raise ConfigError("r0_target must be > 0")
        if not (self.tol_a > 0 and self.tol_r0 > 0):
            raise ConfigError("tolerances must be > 0")
        if self.desired_nodes < 0 or int(self.desired_nodes) != self.desired_nodes:
            raise ConfigError("desired_nodes must be a non-negative integer")
        if self.max_outer_iterations < 1:
            raise ConfigError("max_outer_iterations must be >= 1")

    @property
    def unitary(self) -> bool:
        return self.a_target == UNITARY

    def satisfied_by(self, obs: ScatteringObservables) -> bool:
        if obs.r0 is None or obs.node_count != self.desired_nodes:
            return False
        if abs(obs.r0 - self.r0_target) / self.r0_target > self.tol_r0:
            return False
        if self.unitary:
            return abs(1.0 / obs.a) <= self.tol_a / self.r0_target
        return abs(obs.a - self.a_target) / max(1.0, abs(self.a_target)) <= self.tol_a

    def phase(self) -> float:
        """Depth phase of the target."""
        if self.unitary:
            # Approach unitarity from the shallow side, where the sign of a
            # agrees with the node count: |1/a| = tol_a / (2 r0_target).
            return math.pi / 2 + math.pi * self.desired_nodes - 0.5 * self.tol_a
        return -math.atan(self.a_target / self.r0_target) + math.pi * self.desired_nodes

    def phase_tolerance(self) -> float:
        if self.unitary:
            return 0.25 * self.tol_a
        a, L = self.a_target, self.r0_target
        # d(theta)/da = -L / (a^2 + L^2); keep well inside tol_a
        return 0.2 * self.tol_a * max(1.0, abs(a)) * L / (a * a + L * L)

    def to_dict(self) -> dict:
        return {
            "a_target": self.a_target,
            "r0_target": self.r0_target,
            "desired_nodes": self.desired_nodes,
            "tol_a": self.tol_a,
            "tol_r0": self.tol_r0,
            "max_outer_iterations": self.max_outer_iterations,
        }


@dataclass(frozen=True)
class TuneResult:
    spec: PotentialSpec
    achieved: ScatteringObservables
    outer_iterations: int
    converged: bool
    history: tuple = field(default=(), compare=False)

    def to_dict(self, trace: bool = False) -> dict:
        out = {
            "potential": self.spec.to_dict(),
            "achieved": self.achieved.to_dict(),
            "outer_iterations": self.outer_iterations,
            "converged": self.converged,
        }
        if trace:
            out["history"] = [dict(h) for h in self.history]
        return out


@dataclass(frozen=True)
class SolverConfig:
    dr: float = DEFAULT_DR
    method: str = NUMEROV
    rule: str = SIMPSON
    epsilon_tail: float = DEFAULT_EPSILON_TAIL
    core_threshold: float = DEFAULT_CORE_THRESHOLD

    def observe(self, spec: PotentialSpec) -> ScatteringObservables:
        info = derive_range(spec, self.epsilon_tail, self.core_threshold)
        return compute_observables(spec, info, self.dr, self.method, self.rule)


# -- 1-D root finding ---------------------------------------------------------

def _classify(f, nodes, desired):
    if desired is not None and nodes is not None and nodes != desired:
        return -1 if nodes < desired else 1
    return -1 if f < 0 else (1 if f > 0 else 0)


def solve_1d(
    func: Callable,
    bracket: tuple[float, float],
    tol: float,
    target: float = 0.0,
    desired_nodes: int | None = None,
    max_iter: int = 200,
    log_space: bool = False,
    x0: float | None = None,
) -> float:
    """Root of an increasing function inside ``bracket``.

    Parameters
    ----------
    func : callable
        ``func(x)`` returns ``f`` or ``(f, nodes)``; ``f`` must increase with x
        within the node sector.
    bracket : (lo, hi)
        The target must lie between ``func(lo)`` and ``func(hi)``.
    tol : float
        Accept x once ``|f(x) - target| <= tol`` with the right node count.
    desired_nodes : int, optional
        Node guard: a candidate with more nodes counts as above the target,
        fewer as below, whatever its ``f``.
    log_space : bool
        Bisect and interpolate in log(x) (requires positive x).
    x0 : float, optional
        Tried first; returned at once if it already meets the tolerance.

    Returns
    -------
    float

    Raises
    ------
    NoBracketError
        The ends do not straddle the target.
    ConvergenceError
        The bracket collapsed or ``max_iter`` ran out.
    """
    fwd = math.log if log_space else (lambda x: x)
    inv = math.exp if log_space else (lambda y: y)

    def ev(y):
        out = func(inv(y))
        if isinstance(out, tuple):
            f, nodes = out
        else:
            f, nodes = out, None
        return f - target, nodes

    if x0 is not None:
        f0, n0 = ev(fwd(x0))
        if abs(f0) <= tol and (desired_nodes is None or n0 == desired_nodes):
            return float(x0)

    lo, hi = fwd(bracket[0]), fwd(bracket[1])
    if not lo < hi:
        raise ConfigError("bracket must satisfy lo < hi")
    flo, nlo = ev(lo)
    fhi, nhi = ev(hi)
    slo, shi = _classify(flo, nlo, desired_nodes), _classify(fhi, nhi, desired_nodes)
    for y, f, s, n in ((lo, flo, slo, nlo), (hi, fhi, shi, nhi)):
        if s == 0 and abs(f) <= tol:
            return float(inv(y))
    if not (slo < 0 < shi):
        raise NoBracketError(
            f"target not bracketed: f(lo)={flo + target:.6g}, f(hi)={fhi + target:.6g}",
            value_range=(flo + target, fhi + target),
        )
    # Illinois regula falsi; plain bisection while an end has the wrong node count.
    ok_lo = desired_nodes is None or nlo == desired_nodes
    ok_hi = desired_nodes is None or nhi == desired_nodes
    side = 0
    for _ in range(max_iter):
        if ok_lo and ok_hi and fhi != flo:
            y = hi - fhi * (hi - lo) / (fhi - flo)
            if not lo < y < hi:
                y = 0.5 * (lo + hi)
        else:
            y = 0.5 * (lo + hi)
        if y <= lo or y >= hi:
            break
        f, n = ev(y)
        s = _classify(f, n, desired_nodes)
        good = desired_nodes is None or n == desired_nodes
        if good and abs(f) <= tol:
            return float(inv(y))
        if s < 0:
            lo, flo, ok_lo = y, f, good
            if side < 0:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi, ok_hi = y, f, good
            if side > 0:
                flo *= 0.5
            side = 1
    raise ConvergenceError(
        f"1-D solve did not reach tolerance {tol:g}", last=float(inv(0.5 * (lo + hi)))
    )


def expand_bracket(classify: Callable[[float], int], x: float, factor: float = 1.5, max_steps: int = 60):
    """Grow a positive bracket geometrically from ``x`` until the sign changes.

    ``classify(x)`` returns -1 below the target, +1 above it.
    """
    s = classify(x)
    if s == 0:
        return x, x
    lo = hi = x
    for _ in range(max_steps):
        if s < 0:
            lo, hi = hi, hi * factor
            if classify(hi) >= 0:
                return lo, hi
        else:
            lo, hi = lo / factor, lo
            if classify(lo) <= 0:
                return lo, hi
    raise NoBracketError("could not bracket the target", value_range=(lo, hi))


# -- tuning -------------------------------------------------------------------

def _phase(obs: ScatteringObservables, target: TuneTarget) -> float:
    return -math.atan(obs.a / target.r0_target) + math.pi * obs.node_count


class _Evaluator:
    """Caches observables per parameter set and records every evaluation."""

    def __init__(self, family, config: SolverConfig):
        self.family = family
        self.config = config
        self.cache = {}
        self.history = []

    def __call__(self, **params) -> ScatteringObservables:
        key = tuple(sorted(params.items()))
        if key not in self.cache:
            spec = make_potential(self.family, **params)
            obs = self.config.observe(spec)
            self.cache[key] = obs
            self.history.append({**params, "a": obs.a, "r0": obs.r0, "nodes": obs.node_count})
        return self.cache[key]


def _depth_bracket(family, target: TuneTarget):
    """Starting bracket on v from the spherical-well thresholds."""
    n = target.desired_nodes
    if n == 0:
        return 0.1, 0.98 * analytic.well_threshold(0)
    return 1.02 * analytic.well_threshold(n - 1), 0.98 * analytic.well_threshold(n)


def _solve_depth(evaluate, name, fixed, target, bracket, x0):
    """Depth parameter ``name`` that puts the phase on target at fixed other parameter."""
    theta_t = target.phase()
    tol = target.phase_tolerance()

    def f(x):
        obs = evaluate(**{name: x, **fixed})
        return _phase(obs, target), obs.node_count

    def classify(x):
        val, nodes = f(x)
        return _classify(val - theta_t, nodes, target.desired_nodes)

    lo, hi = bracket
    if classify(lo) > 0 or classify(hi) < 0:
        start = lo if classify(lo) > 0 else hi
        lo, hi = expand_bracket(classify, start)
        if lo == hi:
            return lo
    return solve_1d(f, (lo, hi), tol, theta_t, target.desired_nodes, log_space=True, x0=x0)


def _solve_range(evaluate, name, fixed, target, x0):
    """Range parameter ``name`` matching r0 at fixed depth; r0 decreases with ``name``."""
    log_r0t = math.log(target.r0_target)
    tol = 0.2 * target.tol_r0

    def f(x):
        obs = evaluate(**{name: x, **fixed})
        if obs.r0 is None or obs.r0 <= 0:
            raise ConvergenceError("effective range undefined during the range step", last=x)
        return log_r0t - math.log(obs.r0), obs.node_count

    f0, _ = f(x0)
    if abs(f0) <= tol:
        return x0
    # pure length rescaling gives r0 proportional to 1/mu; use it for the bracket
    guess = x0 * math.exp(-f0)
    lo, hi = sorted((guess / 1.05, guess * 1.05))

    def classify(x):
        return -1 if f(x)[0] < 0 else 1

    if classify(lo) > 0 or classify(hi) < 0:
        lo, hi = expand_bracket(classify, guess)
        if lo == hi:
            return lo
    return solve_1d(f, (lo, hi), tol, 0.0, None, log_space=True, x0=guess)


def _tune_attractive(family, params, target, evaluate):
    v, mu = float(params["v"]), float(params["mu"])
    bracket = _depth_bracket(family, target)
    for it in range(1, target.max_outer_iterations + 1):
        v = _solve_depth(evaluate, "v", {"mu": mu}, target, bracket, x0=v)
        mu = _solve_range(evaluate, "mu", {"v": v}, target, x0=mu)
        obs = evaluate(v=v, mu=mu)
        if target.satisfied_by(obs):
            return {"v": v, "mu": mu}, obs, it, True
    return {"v": v, "mu": mu}, obs, target.max_outer_iterations, False


def _tune_lj(params, target, evaluate):
    """C6 solves for a at fixed C12 (inner); C12 is then solved for r0 (outer)."""
    c12, c6 = float(params["c12"]), float(params["c6"])
    state = {"c6": c6, "outer": 0}

    def inner(c12_):
        # Scaling r -> s r maps (C12, C6) to (C12 s^10, C6 s^4); keeping the
        # strength C6^(5/3)/C12^(2/3) fixed gives a close first guess.
        guess = state["c6"] * (c12_ / state["c12"]) ** 0.4 if "c12" in state else state["c6"]
        c6_ = _solve_depth(evaluate, "c6", {"c12": c12_}, target, (guess / 1.2, guess * 1.2), x0=guess)
        state["c12"], state["c6"] = c12_, c6_
        return c6_

    def r0_mismatch(c12_):
        state["outer"] += 1
        if state["outer"] > target.max_outer_iterations:
            raise ConvergenceError("outer iteration limit reached", last=(c12_, state["c6"]))
        c6_ = inner(c12_)
        obs = evaluate(c12=c12_, c6=c6_)
        if obs.r0 is None or obs.r0 <= 0:
            raise ConvergenceError("effective range undefined during the range step", last=(c12_, c6_))
        # at fixed a, r0 grows with the hard-core size
        return math.log(obs.r0) - math.log(target.r0_target), obs

    f0, obs0 = r0_mismatch(c12)
    if target.satisfied_by(obs0):
        return {"c12": c12, "c6": state["c6"]}, obs0, state["outer"], True
    guess = c12 * math.exp(-10.0 * f0)

    def f(x):
        return r0_mismatch(x)[0]

    def classify(x):
        return -1 if f(x) < 0 else 1

    lo, hi = sorted((guess / 1.5, guess * 1.5))
    if classify(lo) > 0 or classify(hi) < 0:
        lo, hi = expand_bracket(classify, guess, factor=2.0)
    # the inner solve already met tol_a; r0 tolerance is what remains
    c12 = solve_1d(f, (lo, hi), 0.2 * target.tol_r0, 0.0, None, log_space=True, x0=guess) if lo != hi else lo
    c6 = inner(c12)
    obs = evaluate(c12=c12, c6=c6)
    return {"c12": c12, "c6": c6}, obs, state["outer"], target.satisfied_by(obs)


def tune(
    family: str,
    target: TuneTarget,
    initial_guess: dict | None = None,
    config: SolverConfig | None = None,
) -> TuneResult:
    """Adjust the two parameters of ``family`` until (a, r0) hit ``target``.

    Attractive families alternate a solve on the depth v for a with a solve
    on the inverse range mu for r0.  Lennard-Jones nests a C6 solve for a
    inside a C12 solve for r0.  Every accepted depth has the requested node
    count.

    Raises
    ------
    NoBracketError
        The target a is not reachable in the requested node sector.
    ConvergenceError
        The loop did not converge; ``last`` holds the final TuneResult.
    """
    config = config or SolverConfig()
    family = ALIASES.get(str(family).lower(), family)
    if family not in COLD_START:
        raise ConfigError(f"cannot tune family {family!r}")
    params = dict(COLD_START[family] if initial_guess is None else initial_guess)
    evaluate = _Evaluator(family, config)
    try:
        if family == LJ:
            best, obs, iters, ok = _tune_lj(params, target, evaluate)
        else:
            best, obs, iters, ok = _tune_attractive(family, params, target, evaluate)
    except ConvergenceError as exc:
        if isinstance(exc.last, TuneResult):
            raise
        raise ConvergenceError(str(exc), last=_last_result(family, evaluate)) from exc
    result = TuneResult(make_potential(family, **best), obs, iters, ok, tuple(evaluate.history))
    if not ok:
        raise ConvergenceError(
            f"no joint convergence after {iters} outer iterations", last=result
        )
    return result


def _last_result(family, evaluate):
    if not evaluate.history:
        return None
    last = evaluate.history[-1]
    params = {k: last[k] for k in last if k not in ("a", "r0", "nodes")}
    obs = evaluate(**params)
    return TuneResult(make_potential(family, **params), obs, 0, False, tuple(evaluate.history))


# -- scans --------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    value: float
    a: float | None
    r0: float | None
    nodes: int | None
    divergence: bool = False
    error: str | None = None


def scan(
    family: str,
    fixed: dict,
    varied: str,
    grid,
    config: SolverConfig | None = None,
) -> list[ScanRow]:
    """Observables along ``grid`` for parameter ``varied`` with the rest ``fixed``.

    A row is flagged as a divergence crossing when a changes sign there and
    |a| was growing into the flip from either side.  Failed points keep their
    error message and the scan continues.
    """
    config = config or SolverConfig()
    grid = np.asarray(grid, dtype=float)
    if grid.size and not np.all(np.isfinite(grid)):
        raise ConfigError("scan grid must be finite")
    rows = []
    for x in grid:
        try:
            obs = config.observe(make_potential(family, **{**fixed, varied: float(x)}))
            rows.append(ScanRow(float(x), obs.a, obs.r0, obs.node_count))
        except ScatteringError as exc:
            rows.append(ScanRow(float(x), None, None, None, error=f"{type(exc).__name__}: {exc}"))
    return _flag_divergences(rows)


def _flag_divergences(rows):
    a = [r.a for r in rows]
    out = list(rows)
    for i in range(1, len(rows)):
        if a[i] is None or a[i - 1] is None or a[i] * a[i - 1] >= 0:
            continue
        grow_left = i >= 2 and a[i - 2] is not None and abs(a[i - 1]) > abs(a[i - 2])
        grow_right = i + 1 < len(rows) and a[i + 1] is not None and abs(a[i]) > abs(a[i + 1])
        if grow_left or grow_right:
            r = rows[i]
            out[i] = ScanRow(r.value, r.a, r.r0, r.nodes, True, r.error)
    return out
