"""Low-energy observables extracted from radial solutions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .errors import (
    ConfigError,
    ContractError,
    DegenerateDerivativeError,
    EffectiveRangeUndefinedError,
    FiniteRangeInvalidError,
    MatchingError,
    NoBoundStateError,
)
from .potentials import PotentialSpec, RangeInfo, derive_range
from .solver import DEFAULT_DR, NUMEROV, UNITARY_FACTOR, RadialSolution, integrate
from .units import UnitScale, to_physical_energy

SIMPSON = "simpson"
TRAPEZOID = "trapezoid"
RULES = (SIMPSON, TRAPEZOID)

SMALL_R0_RATIO = 1e-8


@dataclass(frozen=True)
class ScatteringObservables:
    a: float
    r0: float | None
    node_count: int
    dr: float
    method: str
    rule: str
    R: float = float("nan")
    unitary: bool = False

    @property
    def inverse_a(self) -> float:
        return 0.0 if self.unitary else 1.0 / self.a

    def a_label(self):
        if self.unitary:
            return "unitary+" if self.a > 0 else "unitary-"
        return self.a

    def to_dict(self) -> dict:
        return {
            "a": self.a_label(),
            "r0": self.r0,
            "nodes": self.node_count,
            "dr": self.dr,
            "method": self.method,
            "rule": self.rule,
        }


@dataclass(frozen=True)
class PhaseShiftResult:
    l: int
    k: float
    beta: float
    cot_delta: float
    delta: float
    resonant: bool = False

    @property
    def kcot(self) -> float:
        return self.k * self.cot_delta


@dataclass(frozen=True)
class BoundStateEstimate:
    kappa: float
    E_zr: float
    E_fr: float


# -- quadrature ---------------------------------------------------------------

def trapezoid(f: np.ndarray, dx: float) -> float:
    f = np.asarray(f, dtype=float)
    if len(f) < 2:
        return 0.0
    return float(dx * (np.sum(f) - 0.5 * (f[0] + f[-1])))


def simpson(f: np.ndarray, dx: float) -> float:
    """Composite Simpson; an odd interval count ends with a 3/8-rule panel."""
    f = np.asarray(f, dtype=float)
    n = len(f) - 1
    if n < 2:
        return trapezoid(f, dx)
    if n % 2 == 1:
        if n == 3:
            return float(3.0 * dx / 8.0 * (f[0] + 3 * f[1] + 3 * f[2] + f[3]))
        tail = 3.0 * dx / 8.0 * (f[-4] + 3 * f[-3] + 3 * f[-2] + f[-1])
        return simpson(f[:-3], dx) + float(tail)
    return float(dx / 3.0 * (f[0] + f[-1] + 4.0 * np.sum(f[1:-1:2]) + 2.0 * np.sum(f[2:-1:2])))


def integrate_samples(f, dx, rule=SIMPSON) -> float:
    if rule == SIMPSON:
        return simpson(f, dx)
    if rule == TRAPEZOID:
        return trapezoid(f, dx)
    raise ConfigError(f"rule must be one of {RULES}")


# -- zero energy --------------------------------------------------------------

def scattering_length(sol: RadialSolution, i_match: int | None = None) -> float:
    """a = r_m - 2 dr u(r_m) / [u(r_m + dr) - u(r_m - dr)] at the matching node."""
    if sol.l != 0 or sol.k != 0:
        raise ContractError("scattering length needs the zero-energy s-wave solution")
    m = sol.i_match if i_match is None else i_match
    du = sol.central_difference(m)
    if du == 0.0:
        raise DegenerateDerivativeError("numerical derivative vanishes at the matching radius")
    return float(sol.r[m] - 2.0 * sol.dr * sol.u[m] / du)


def is_unitary(a: float, R: float) -> bool:
    """|a| beyond UNITARY_FACTOR * R; the sign there is noise."""
    return abs(a) > UNITARY_FACTOR * R


def normalize(sol: RadialSolution, a: float, unitary: bool = False) -> RadialSolution:
    """Scale u so that u(R) = g(R) = 1 - R/a (g = 1 in the unitary limit)."""
    if not unitary and a == 0:
        raise EffectiveRangeUndefinedError("a = 0: g = 1 - r/a cannot be normalised")
    uR = sol.u[sol.i_range]
    if uR == 0:
        raise MatchingError("u(R) = 0; normalisation constant is singular")
    gR = 1.0 if unitary else 1.0 - sol.R / a
    return sol.scaled(gR / uR, normalized=True)


def _g_squared_integral(x: float, a: float, unitary: bool) -> float:
    """Exact integral of (1 - r/a)^2 from 0 to x."""
    if unitary:
        return x
    return x - x * x / a + x**3 / (3.0 * a * a)


def effective_range(sol: RadialSolution, a: float, rule: str = SIMPSON, unitary: bool = False) -> float:
    """r0 = 2 int_0^R [g^2 - u^2] dr with the selected composite rule."""
    if not sol.normalized:
        raise ContractError("effective_range needs a normalised solution")
    i0, n = sol.i_start, sol.i_range
    r = sol.r[i0 : n + 1]
    g = np.ones_like(r) if unitary else 1.0 - r / a
    integrand = g * g - sol.u[i0 : n + 1] ** 2
    core = _g_squared_integral(sol.r[i0], a, unitary)
    return float(2.0 * (core + integrate_samples(integrand, sol.dr, rule)))


def compute_observables(
    spec: PotentialSpec,
    range_info: RangeInfo | None = None,
    dr: float = DEFAULT_DR,
    method: str = NUMEROV,
    rule: str = SIMPSON,
) -> ScatteringObservables:
    """Scattering length and effective range of ``spec`` in dimensionless units."""
    if rule not in RULES:
        raise ConfigError(f"rule must be one of {RULES}")
    if range_info is None:
        range_info = derive_range(spec)
    sol = integrate(spec, range_info, 0, 0.0, dr, method)
    a = scattering_length(sol)
    unitary = is_unitary(a, sol.R)
    if a == 0.0:
        r0 = None
    else:
        r0 = effective_range(normalize(sol, a, unitary), a, rule, unitary)
    return ScatteringObservables(a, r0, sol.node_count, sol.dr, method, rule, sol.R, unitary)


# -- finite energy ------------------------------------------------------------

def log_derivative(sol: RadialSolution, m: int) -> float:
    u = sol.u
    if u[m] == 0:
        raise MatchingError("u vanishes at the matching radius")
    return float(sol.r[m] * sol.central_difference(m) / (2.0 * sol.dr * u[m]))


def cot_from_beta(l: int, k: float, R: float, beta: float):
    """cot(delta_l) from the log derivative; returns (cot, resonant flag)."""
    x = k * R
    j, n = analytic.sph_bessel_j(l, x), analytic.sph_bessel_n(l, x)
    jp, np_ = analytic.sph_bessel_j_prime(l, x), analytic.sph_bessel_n_prime(l, x)
    num = x * np_ - (beta - 1.0) * n
    den = x * jp - (beta - 1.0) * j
    scale = abs(x * jp) + abs((beta - 1.0) * j)
    if abs(den) <= 1e-14 * scale:
        return math.copysign(math.inf, num), True
    return float(num / den), False


def phase_shift(
    spec: PotentialSpec,
    range_info: RangeInfo | None = None,
    l: int = 0,
    k: float = 0.1,
    dr: float = DEFAULT_DR,
    method: str = NUMEROV,
) -> PhaseShiftResult:
    """delta_l(k) from log-derivative matching; principal branch (-pi/2, pi/2]."""
    if not k > 0:
        raise ConfigError("phase shift needs k > 0")
    if range_info is None:
        range_info = derive_range(spec)
    sol = integrate(spec, range_info, l, k, dr, method)
    m = sol.i_match
    if sol.u[m] == 0:
        m += 1  # one grid step further out
    beta = log_derivative(sol, m)
    cot, resonant = cot_from_beta(l, k, sol.r[m], beta)
    if math.isinf(cot):
        delta = 0.0
    elif cot == 0:
        delta = math.pi / 2
    else:
        delta = math.atan(1.0 / cot)
    return PhaseShiftResult(l, float(k), beta, cot, delta, resonant)


def unwrap_phases(deltas) -> np.ndarray:
    """Shift by multiples of pi so delta(k) is continuous along a k scan."""
    return np.unwrap(np.asarray(deltas, dtype=float), period=math.pi)


def phase_shift_scan(spec, ks, l=0, dr=DEFAULT_DR, method=NUMEROV, range_info=None):
    if range_info is None:
        range_info = derive_range(spec)
    results = [phase_shift(spec, range_info, l, k, dr, method) for k in ks]
    unwrapped = unwrap_phases([p.delta for p in results])
    return [
        PhaseShiftResult(p.l, p.k, p.beta, p.cot_delta, float(d), p.resonant)
        for p, d in zip(results, unwrapped)
    ]


def kcot_expansion(a: float, r0: float, k, unitary: bool = False):
    """Effective-range expansion k cot(delta_0) ~ -1/a + r0 k^2 / 2."""
    inv_a = 0.0 if unitary or math.isinf(a) else 1.0 / a
    k2 = np.square(k)
    out = -inv_a + 0.5 * r0 * k2
    return out if np.ndim(k2) else float(out)


# -- bound states -------------------------------------------------------------

def bound_state_energies(a: float, r0: float, scale: UnitScale) -> BoundStateEstimate:
    """Zero-range and finite-range binding energies.

    ``a`` and ``r0`` are given in the length unit of ``scale``; energies come
    back in MeV for physical scales (multiples of eps in dimensionless mode).
    """
    if not a > 0:
        raise NoBoundStateError("no shallow bound state for a <= 0")
    if 2.0 * r0 >= a:
        raise FiniteRangeInvalidError("finite-range formula needs 2 r0 < a")
    a_bar = a / scale.length_scale
    r0_bar = r0 / scale.length_scale
    x = r0_bar / a_bar
    if abs(x) < SMALL_R0_RATIO:
        # kappa = (1 - sqrt(1 - 2x)) / r0 expanded: (1/a)(1 + x/2)
        kappa = (1.0 + 0.5 * x) / a_bar
    else:
        kappa = (1.0 - math.sqrt(1.0 - 2.0 * x)) / r0_bar
    E_zr = to_physical_energy(-0.5 / a_bar**2, scale)
    E_fr = to_physical_energy(-0.5 * kappa**2, scale)
    return BoundStateEstimate(kappa / scale.length_scale, E_zr, E_fr)
