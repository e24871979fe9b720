"""Radial potential families in dimensionless units (V in units of hbar^2/(m_r ell^2)).

Families
--------
spherical-well          -v mu^2                 for r < 1/mu, else 0
modified-poschl-teller  -v mu^2 / cosh^2(mu r)
gaussian                -v mu^2 exp(-mu^2 r^2)
lennard-jones           C12/r^12 - C6/r^6
tabulated               linear interpolation of samples, 0 beyond the last one
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ConfigError, DomainError, RangeNotFoundError

WELL = "spherical-well"
MPT = "modified-poschl-teller"
GAUSSIAN = "gaussian"
LJ = "lennard-jones"
TABULATED = "tabulated"

FAMILIES = (WELL, MPT, GAUSSIAN, LJ, TABULATED)
ATTRACTIVE = (WELL, MPT, GAUSSIAN)

ALIASES = {
    "well": WELL, "sw": WELL, WELL: WELL,
    "mpt": MPT, "pt": MPT, "poschl-teller": MPT, MPT: MPT,
    "gaussian": GAUSSIAN, "gauss": GAUSSIAN, "g": GAUSSIAN,
    "lj": LJ, LJ: LJ,
    "tabulated": TABULATED, "table": TABULATED,
}

# Multiplier applied to (C12, C6) on construction.  "m_r" takes the constants
# as coefficients of hbar^2/m_r, "2m_r" as coefficients of hbar^2/(2 m_r).
LJ_CONVENTIONS = {"m_r": 1.0, "2m_r": 0.5}

DEFAULT_EPSILON_TAIL = 1e-15
DEFAULT_CORE_THRESHOLD = 1e10
DEFAULT_MAX_RADIUS = 1e3
N_TAIL_CHECKS = 8


@dataclass(frozen=True)
class PotentialSpec:
    family: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        family = ALIASES.get(self.family)
        if family is None:
            raise ConfigError(f"unknown potential family {self.family!r}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        _validate(self)

    def __getitem__(self, key):
        return self.params[key]

    def __hash__(self):
        return hash((self.family, tuple(sorted((k, str(v)) for k, v in self.params.items()))))

    def replace(self, **params) -> "PotentialSpec":
        new = dict(self.params)
        new.update(params)
        return PotentialSpec(self.family, new)

    def to_dict(self) -> dict:
        d = {"family": self.family}
        for k, v in self.params.items():
            d[k] = list(v) if isinstance(v, tuple) else v
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> "PotentialSpec":
        data = dict(data)
        try:
            family = ALIASES[str(data.pop("family")).lower()]
        except KeyError:
            raise ConfigError("potential spec needs a known 'family'") from None
        if family == TABULATED:
            return tabulated(data["r"], data["v"])
        if family == LJ:
            try:
                return lennard_jones(float(data["c12"]), float(data["c6"]), data.get("convention", "m_r"))
            except KeyError as exc:
                raise ConfigError(f"missing parameter {exc} for {family}") from None
        if family == MPT and "lam" in data:
            return poschl_teller_lambda(float(data["lam"]), float(data["mu"]))
        try:
            return PotentialSpec(family, {"v": float(data["v"]), "mu": float(data["mu"])})
        except KeyError as exc:
            raise ConfigError(f"missing parameter {exc} for {family}") from None


def _validate(spec: PotentialSpec):
    p = spec.params
    if spec.family in ATTRACTIVE:
        if set(p) != {"v", "mu"}:
            raise ConfigError(f"{spec.family} takes parameters v and mu")
        if not (math.isfinite(p["v"]) and p["v"] >= 0):
            raise ConfigError("depth v must be finite and >= 0")
        if not (math.isfinite(p["mu"]) and p["mu"] > 0):
            raise ConfigError("mu must be > 0")
    elif spec.family == LJ:
        if set(p) != {"c12", "c6"}:
            raise ConfigError("lennard-jones takes parameters c12 and c6")
        if not p["c12"] > 0 or not p["c6"] >= 0:
            raise ConfigError("need c12 > 0 and c6 >= 0")
    else:
        r = np.asarray(p["r"], dtype=float)
        v = np.asarray(p["v"], dtype=float)
        if r.ndim != 1 or r.shape != v.shape or len(r) < 2:
            raise ConfigError("tabulated potential needs matching r and v arrays (>= 2 samples)")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
            raise ConfigError("tabulated samples must be finite")
        if r[0] < 0 or np.any(np.diff(r) <= 0):
            raise ConfigError("tabulated radii must be non-negative and strictly increasing")


def spherical_well(v: float, mu: float) -> PotentialSpec:
    return PotentialSpec(WELL, {"v": float(v), "mu": float(mu)})


def poschl_teller(v: float, mu: float) -> PotentialSpec:
    return PotentialSpec(MPT, {"v": float(v), "mu": float(mu)})


def poschl_teller_lambda(lam: float, mu: float) -> PotentialSpec:
    return poschl_teller(lambda_to_v(lam), mu)


def gaussian(v: float, mu: float) -> PotentialSpec:
    return PotentialSpec(GAUSSIAN, {"v": float(v), "mu": float(mu)})


def lennard_jones(c12: float, c6: float, convention: str = "m_r") -> PotentialSpec:
    """Lennard-Jones spec; stored constants always multiply hbar^2/m_r.

    With ``convention="2m_r"`` the inputs are read as coefficients of
    hbar^2/(2 m_r) and halved before storage.
    """
    try:
        f = LJ_CONVENTIONS[convention]
    except KeyError:
        raise ConfigError(f"convention must be one of {sorted(LJ_CONVENTIONS)}") from None
    return PotentialSpec(LJ, {"c12": f * float(c12), "c6": f * float(c6)})


def tabulated(r, v) -> PotentialSpec:
    return PotentialSpec(TABULATED, {"r": tuple(float(x) for x in r), "v": tuple(float(x) for x in v)})


def make_potential(family: str, **params) -> PotentialSpec:
    return PotentialSpec.from_dict({"family": family, **params})


def lambda_to_v(lam: float) -> float:
    return lam * (lam - 1.0) / 2.0


def v_to_lambda(v: float) -> float:
    """Root of v = lam(lam-1)/2 with lam >= 1."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 8.0 * v))


def evaluate(spec: PotentialSpec, r):
    """Dimensionless potential at radius ``r`` (scalar or array)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("radius must be >= 0")
    fam = spec.family
    if fam == WELL:
        v, mu = spec["v"], spec["mu"]
        out = np.where(r_arr < 1.0 / mu, -v * mu * mu, 0.0)
    elif fam == MPT:
        v, mu = spec["v"], spec["mu"]
        x = np.minimum(mu * r_arr, 350.0)
        out = -v * mu * mu / np.cosh(x) ** 2
    elif fam == GAUSSIAN:
        v, mu = spec["v"], spec["mu"]
        out = -v * mu * mu * np.exp(-((mu * r_arr) ** 2))
    elif fam == LJ:
        if np.any(r_arr == 0):
            raise DomainError("Lennard-Jones potential diverges at r = 0")
        inv2 = 1.0 / (r_arr * r_arr)
        inv6 = inv2 * inv2 * inv2
        out = (spec["c12"] * inv6 - spec["c6"]) * inv6
    else:
        rs = np.asarray(spec["r"])
        vs = np.asarray(spec["v"])
        out = np.interp(r_arr, rs, vs, left=vs[0], right=0.0)
        out = np.where(r_arr > rs[-1], 0.0, out)
    if np.ndim(r) == 0:
        return float(out)
    return out


def discontinuity(spec: PotentialSpec):
    """``(R, V_inside, V_outside)`` for a potential with a jump at its edge, else None."""
    if spec.family == WELL:
        return 1.0 / spec["mu"], -spec["v"] * spec["mu"] ** 2, 0.0
    return None


@dataclass(frozen=True)
class RangeInfo:
    R: float
    r_min: float = 0.0
    epsilon_tail: float = DEFAULT_EPSILON_TAIL
    core_threshold: float = DEFAULT_CORE_THRESHOLD


def _tail_ok(spec, r, eps):
    # Eight equally spaced probes out to 2r.
    probes = r * (1.0 + np.arange(1, N_TAIL_CHECKS + 1) / N_TAIL_CHECKS)
    return abs(evaluate(spec, r)) <= eps and bool(np.all(np.abs(evaluate(spec, probes)) <= eps))


def _tail_start(spec) -> float:
    """A radius beyond which |V| decreases monotonically."""
    fam = spec.family
    if fam in (MPT, GAUSSIAN):
        return 0.0
    c12, c6 = spec["c12"], spec["c6"]
    if c6 > 0:
        return (2.0 * c12 / c6) ** (1.0 / 6.0)
    return c12 ** (1.0 / 12.0) * 1e-3


def _bisect(f, lo, hi, iterations=200):
    """Boundary between f(lo) True and f(hi) False."""
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def derive_range(
    spec: PotentialSpec,
    epsilon_tail: float = DEFAULT_EPSILON_TAIL,
    core_threshold: float = DEFAULT_CORE_THRESHOLD,
    max_radius: float = DEFAULT_MAX_RADIUS,
) -> RangeInfo:
    """Numerical range R (|V| <= epsilon_tail beyond it) and hard-core cutoff r_min."""
    if not epsilon_tail > 0 or not core_threshold > 0:
        raise ConfigError("thresholds must be positive")
    fam = spec.family
    if fam == WELL:
        return RangeInfo(1.0 / spec["mu"], 0.0, epsilon_tail, core_threshold)
    if fam == TABULATED:
        return RangeInfo(float(spec["r"][-1]), 0.0, epsilon_tail, core_threshold)

    r_min = 0.0
    if fam == LJ:
        c12, c6 = spec["c12"], spec["c6"]
        # V decreases monotonically below the zero crossing (or everywhere if c6 == 0)
        hi = (c12 / c6) ** (1.0 / 6.0) if c6 > 0 else (c12 / core_threshold) ** (1.0 / 12.0) * 2.0
        lo = hi
        while evaluate(spec, lo) < core_threshold:
            lo *= 0.5
        r_min, _ = _bisect(lambda r: evaluate(spec, r) >= core_threshold, lo, hi)

    start = _tail_start(spec)
    if abs(evaluate(spec, max(start, 1e-300))) <= epsilon_tail and _tail_ok(spec, max(start, 1e-300), epsilon_tail):
        # Negligible potential everywhere we care about (e.g. v = 0)
        scale = 1.0 / spec["mu"] if fam in (MPT, GAUSSIAN) else max(start, 1.0)
        return RangeInfo(max(scale, 2.0 * r_min, 1e-6), r_min, epsilon_tail, core_threshold)

    step = 1.0 / spec["mu"] if fam in (MPT, GAUSSIAN) else max(start, 1e-3)
    lo, hi = start, start + step
    while not _tail_ok(spec, hi, epsilon_tail):
        lo, hi = hi, hi + step
        step *= 2.0
        if hi > max_radius:
            raise RangeNotFoundError(f"|V| did not fall below {epsilon_tail:g} before r = {max_radius:g}")
    _, R = _bisect(lambda r: abs(evaluate(spec, r)) > epsilon_tail, lo, hi)
    while not _tail_ok(spec, R, epsilon_tail):
        R = np.nextafter(R, np.inf) * (1.0 + 1e-12)
    if R > max_radius:
        raise RangeNotFoundError(f"range {R:g} exceeds max radius {max_radius:g}")
    return RangeInfo(float(R), float(r_min), epsilon_tail, core_threshold)
