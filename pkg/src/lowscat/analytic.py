"""Closed-form benchmarks and the special functions they need.

Spherical Bessel functions use n_l upward recurrence and, for x < l, a
Miller downward recurrence for j_l normalised against j_0 (or j_1 when j_0
is close to a zero).  The digamma function shifts its argument with
psi(x) = psi(x+1) - 1/x and sums the asymptotic series to 1/x^12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, DomainError, UnsupportedOrderError

EULER_GAMMA = 0.5772156649015329
MAX_ORDER = 25
POLE_TOL = 1e-9


@dataclass(frozen=True)
class SpecialFunctionValue:
    value: float
    estimated_abs_error: float


def _check_bessel_args(l, x):
    if not 0 <= l <= MAX_ORDER or int(l) != l:
        raise UnsupportedOrderError(f"order l={l} outside supported range 0..{MAX_ORDER}")
    if not x > 0:
        raise DomainError("spherical Bessel functions need x > 0")


def _j_downward(l, x):
    start = l + 20 + int(math.sqrt(40.0 * (l + 1)))
    start = max(start, int(x) + 20)
    j_next, j_cur = 0.0, 1e-300
    j_l = j_1 = j_0 = 0.0
    for k in range(start, 0, -1):
        j_prev = (2 * k + 1) / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_next *= 1e-250
            j_cur *= 1e-250
            j_l *= 1e-250
            j_1 *= 1e-250
        if k - 1 == l:
            j_l = j_cur
        if k - 1 == 1:
            j_1 = j_cur
    j_0 = j_cur
    true_j0 = math.sin(x) / x
    true_j1 = math.sin(x) / x**2 - math.cos(x) / x
    if abs(true_j0) >= abs(true_j1):
        return j_l * (true_j0 / j_0)
    return j_l * (true_j1 / j_1)


def sph_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel function of the first kind j_l(x)."""
    _check_bessel_args(l, x)
    j0 = math.sin(x) / x
    if l == 0:
        return j0
    if x < l:
        return _j_downward(l, x)
    j1 = math.sin(x) / x**2 - math.cos(x) / x
    for k in range(1, l):
        j0, j1 = j1, (2 * k + 1) / x * j1 - j0
    return j1


def sph_bessel_n(l: int, x: float) -> float:
    """Spherical Bessel function of the second kind n_l(x) (n_0 = -cos x / x)."""
    _check_bessel_args(l, x)
    n0 = -math.cos(x) / x
    if l == 0:
        return n0
    n1 = -math.cos(x) / x**2 - math.sin(x) / x
    for k in range(1, l):
        n0, n1 = n1, (2 * k + 1) / x * n1 - n0
    return n1


def _derivative(f, l, x):
    # f_l' = f_{l-1} - (l+1) f_l / x ; f_0' = -f_1
    if l == 0:
        return -f(1, x)
    return f(l - 1, x) - (l + 1) * f(l, x) / x


def sph_bessel_j_prime(l: int, x: float) -> float:
    _check_bessel_args(l, x)
    if l == MAX_ORDER:
        return sph_bessel_j(l - 1, x) - (l + 1) * sph_bessel_j(l, x) / x
    return _derivative(sph_bessel_j, l, x)


def sph_bessel_n_prime(l: int, x: float) -> float:
    _check_bessel_args(l, x)
    if l == MAX_ORDER:
        return sph_bessel_n(l - 1, x) - (l + 1) * sph_bessel_n(l, x) / x
    return _derivative(sph_bessel_n, l, x)


def sph_bessel_j_value(l: int, x: float) -> SpecialFunctionValue:
    v = sph_bessel_j(l, x)
    return SpecialFunctionValue(v, 8 * (l + 1) * 2.2e-16 * max(abs(v), 1e-300))


_ASYMPTOTIC = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760)


def _digamma_positive(x):
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_ASYMPTOTIC):
        series = (series + c) * inv2
    return acc + math.log(x) - 0.5 / x - series


def digamma(x: float) -> float:
    """Digamma function psi(x) for real x away from the poles 0, -1, -2, ..."""
    if x <= 0 and abs(x - round(x)) < POLE_TOL:
        raise DomainError(f"digamma has a pole at x = {round(x)}")
    if x > 0:
        return _digamma_positive(x)
    # reflection: psi(x) = psi(1 - x) - pi cot(pi x)
    return _digamma_positive(1.0 - x) - math.pi / math.tan(math.pi * x)


def digamma_value(x: float) -> SpecialFunctionValue:
    v = digamma(x)
    shifted = max(x, 10.0)
    tail = 1.0 / 12.0 / shifted**14
    return SpecialFunctionValue(v, tail + 64 * 2.2e-16 * max(1.0, abs(v)))


# -- spherical well -----------------------------------------------------------

def well_threshold(n: int) -> float:
    """Depth v0 at which the well acquires its (n+1)-th bound state."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return (math.pi / 2 + n * math.pi) ** 2 / 2


def well_bound_state_count(v0: float) -> int:
    if v0 < 0:
        raise DomainError("v0 must be >= 0")
    x = math.sqrt(2 * v0)
    if x <= math.pi / 2:
        return 0
    return int(math.floor((x - math.pi / 2) / math.pi)) + 1


def _nearest_tan_pole(x):
    n = round((x - math.pi / 2) / math.pi)
    return math.pi / 2 + n * math.pi


def well_scattering_length(v0: float, R: float) -> float:
    if v0 < 0 or R <= 0:
        raise DomainError("need v0 >= 0 and R > 0")
    x = math.sqrt(2 * v0)
    if x == 0:
        return 0.0
    pole = _nearest_tan_pole(x)
    if abs(x - pole) < POLE_TOL:
        raise DivergenceError("scattering length diverges (new bound state threshold)", pole=pole**2 / 2)
    return R * (1.0 - math.tan(x) / x)


def well_effective_range(v0: float, R: float) -> float:
    if v0 <= 0 or R <= 0:
        raise DomainError("need v0 > 0 and R > 0")
    x = math.sqrt(2 * v0)
    s, c = math.sin(x), math.cos(x)
    # Written with cot(x) so the unitarity poles of tan(x) are harmless.
    if abs(s) < 1e-15:
        return R * (2.0 / 3.0 - 1.0 / x**2)
    cot = c / s
    d = 1.0 - x * cot
    if abs(d) < POLE_TOL:
        raise DivergenceError("effective range diverges where a = 0 (tan x = x)", pole=x**2 / 2)
    return R * (1.0 - (x * cot / d) ** 2 / 3.0 + cot / (x * d))


def well_phase_shift(v0: float, R: float, k: float) -> float:
    """s-wave phase shift, continued from delta ~ -k a at k -> 0+."""
    if k <= 0:
        raise DomainError("k must be > 0")
    k0sq = 2 * v0 / R**2
    K = math.sqrt(k * k + k0sq)
    arg = K * R
    pole = _nearest_tan_pole(arg)
    if abs(arg - pole) < POLE_TOL:
        raise DivergenceError("tan(sqrt(k^2 + k0^2) R) is singular", pole=pole)
    delta = -k * R + math.atan(k * math.tan(arg) / K)
    # each tan pole crossed since k = 0 shifts the principal arctan by pi
    crossings = math.floor((arg - math.pi / 2) / math.pi) - math.floor((math.sqrt(k0sq) * R - math.pi / 2) / math.pi)
    return delta + math.pi * crossings


# -- modified Poschl-Teller ---------------------------------------------------

def mpt_scattering_length(lam: float, mu: float) -> float:
    """a = [pi/2 cot(pi lam/2) + gamma + psi(lam)] / mu."""
    if mu <= 0:
        raise DomainError("mu must be > 0")
    nearest_even = 2 * round(lam / 2)
    if abs(lam - nearest_even) < POLE_TOL:
        raise DivergenceError(
            f"scattering length diverges at lam = {nearest_even} (unitarity when lam = 2, v = 1)",
            pole=nearest_even,
        )
    if lam <= 0 and abs(lam - round(lam)) < POLE_TOL:
        raise DivergenceError("digamma pole (lam = -1 is the unitarity point)", pole=round(lam))
    return (math.pi / 2 / math.tan(math.pi * lam / 2) + EULER_GAMMA + digamma(lam)) / mu


def mpt_unitarity_u(mu: float, R: float, r):
    """Zero-energy solution at v = 1, normalised to 1 at R."""
    import numpy as np

    return np.tanh(mu * np.asarray(r, dtype=float)) / math.tanh(mu * R)


def mpt_unitarity_r0(mu: float) -> float:
    return 2.0 / mu


def mpt_unitarity_r0_finite(mu: float, R: float) -> float:
    """Same integral evaluated without the tanh(mu R) -> 1 shortcut."""
    t = math.tanh(mu * R)
    return 2.0 * (R - R / t**2 + 1.0 / (mu * t))
