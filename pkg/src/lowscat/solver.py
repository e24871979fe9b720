"""Integration of u'' = [2V(r) + l(l+1)/r^2 - k^2] u on a uniform grid.

The grid is aligned so that R falls exactly on a node (index ``i_range``)
and extends three steps beyond it; observables are matched one step
outside R, where the potential has switched off on both sides of the
three-point stencil.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .errors import ConfigError, InstabilityError, StepFailureError
from .potentials import LJ, PotentialSpec, RangeInfo, derive_range, discontinuity, evaluate

CENTRAL = "central"
NUMEROV = "numerov"
METHODS = (CENTRAL, NUMEROV)
DEFAULT_DR = 1e-4
EXTRA_POINTS = 3
# |a| above this many ranges R counts as unitary (a zero at numerical infinity).
UNITARY_FACTOR = 1e4

# Powers of two keep the rescaling exact.
_BIG = 2.0**500
_SHRINK = 2.0**-500
_OVERFLOW = 1e300


@dataclass(frozen=True, eq=False)
class RadialSolution:
    dr: float
    r: np.ndarray
    u: np.ndarray
    node_count: int
    l: int
    k: float
    i_range: int
    i_start: int = 0
    normalized: bool = False
    method: str = NUMEROV
    du: np.ndarray | None = None

    @property
    def R(self) -> float:
        return self.i_range * self.dr

    @property
    def i_match(self) -> int:
        return self.i_range + 1

    def scaled(self, c: float, normalized: bool = False) -> "RadialSolution":
        du = None if self.du is None else self.du * c
        return replace(self, u=self.u * c, du=du, normalized=normalized)

    def central_difference(self, m: int) -> float:
        """u[m+1] - u[m-1], from the integrator's running differences when available."""
        if self.du is None:
            return float(self.u[m + 1] - self.u[m - 1])
        return float(self.du[m] + self.du[m + 1])


def step_central(u_prev, u_curr, w_prev_unused, w_curr, dr):
    """One central-difference step, w = 2V + l(l+1)/r^2 - k^2."""
    return 2.0 * u_curr - u_prev + dr * dr * w_curr * u_curr


def step_numerov(u_prev, u_curr, xi_prev, xi_curr, xi_next, dr):
    """One Numerov step for u'' = -xi u."""
    h12 = dr * dr / 12.0
    denom = 1.0 + h12 * xi_next
    if abs(denom) < 1e-14:
        raise StepFailureError("Numerov denominator vanished; reduce dr")
    return (2.0 * u_curr * (1.0 - 5.0 * h12 * xi_curr) - u_prev * (1.0 + h12 * xi_prev)) / denom


@njit(cache=True)
def _numerov_kernel(u, du, xi, dr, i_from, i_to, i_floor):
    # Fills u[i_from+1 .. i_to] and the backward differences du; returns -1
    # or the index of a failed step.  Carries y = (1 + h xi) u and its first
    # difference d: the textbook three-term form loses ~eps/(k dr)^2 to
    # cancellation on fine grids.
    h2 = dr * dr
    h12 = h2 / 12.0
    y = (1.0 + h12 * xi[i_from]) * u[i_from]
    d = y - (1.0 + h12 * xi[i_from - 1]) * u[i_from - 1]
    for i in range(i_from, i_to):
        denom = 1.0 + h12 * xi[i + 1]
        if abs(denom) < 1e-14:
            return i + 1
        d -= h2 * xi[i] * u[i]
        y += d
        u[i + 1] = y / denom
        du[i + 1] = d - h12 * (xi[i + 1] * u[i + 1] - xi[i] * u[i])
        if abs(u[i + 1]) > _BIG:
            for j in range(i_floor, i + 2):
                u[j] *= _SHRINK
                du[j] *= _SHRINK
            y *= _SHRINK
            d *= _SHRINK
    return -1


@njit(cache=True)
def _central_kernel(u, du, xi, dr, i_from, i_to, i_floor):
    h2 = dr * dr
    d = u[i_from] - u[i_from - 1]
    for i in range(i_from, i_to):
        d -= h2 * xi[i] * u[i]
        u[i + 1] = u[i] + d
        du[i + 1] = d
        if abs(u[i + 1]) > _BIG:
            for j in range(i_floor, i + 2):
                u[j] *= _SHRINK
                du[j] *= _SHRINK
            d *= _SHRINK
    return -1


def _xi(V, r, l, k):
    xi = k * k - 2.0 * V
    if l:
        with np.errstate(divide="ignore"):
            xi = xi - l * (l + 1) / (r * r)
    return xi


@njit(cache=True)
def _sign_changes(u):
    count = 0
    last = 0.0
    for x in u:
        if x != 0.0:
            if last != 0.0 and (x > 0.0) != (last > 0.0):
                count += 1
            last = x
    return count


@njit(cache=True)
def _overflowed(u, limit):
    for x in u:
        if not abs(x) <= limit:  # also catches nan
            return True
    return False


def count_nodes(u: np.ndarray) -> int:
    """Strict sign changes, exact zeros skipped."""
    return int(_sign_changes(np.ascontiguousarray(u, dtype=float)))


def aligned_grid(R: float, dr: float):
    """Step no larger than ``dr`` with R an exact multiple of it."""
    n = max(int(math.ceil(R / dr - 1e-9)), 1)
    return R / n, n


def integrate(
    spec: PotentialSpec,
    range_info: RangeInfo | None = None,
    l: int = 0,
    k: float = 0.0,
    dr: float = DEFAULT_DR,
    method: str = NUMEROV,
    seed: float = 1.0,
) -> RadialSolution:
    """Integrate the reduced radial equation outward from the origin.

    Parameters
    ----------
    spec : PotentialSpec
    range_info : RangeInfo, optional
        Derived with default thresholds when omitted.
    l : int
        Orbital angular momentum.
    k : float
        Dimensionless wave number (0 for the zero-energy solution).
    dr : float
        Requested step; reduced so that R / dr is an integer.
    method : {"numerov", "central"}
    seed : float
        Overall scale of the starting values (observables do not depend on it).

    Returns
    -------
    RadialSolution
        Grid from 0 to R + 3 dr with arbitrary normalisation.
    """
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    if l < 0 or int(l) != l:
        raise ConfigError("l must be a non-negative integer")
    if k < 0:
        raise ConfigError("k must be >= 0")
    if range_info is None:
        range_info = derive_range(spec)
    R = range_info.R
    if not dr > 0 or dr >= R / 100.0:
        raise ConfigError(f"dr must be positive and below R/100 = {R / 100:g}")
    l = int(l)
    dr, n = aligned_grid(R, dr)
    npts = n + EXTRA_POINTS + 1
    r = np.arange(npts) * dr
    r[n] = R

    V = np.zeros(npts)
    i_start = 0
    if spec.family == LJ:
        i_start = int(math.ceil(range_info.r_min / dr - 1e-9))
        V[i_start + 1:] = evaluate(spec, r[i_start + 1:])
    else:
        V[1:] = evaluate(spec, r[1:])
    xi = _xi(V, r, l, k)
    xi[: i_start + 1] = 0.0

    if method == NUMEROV and spec.family == LJ:
        # Skip core points where the Numerov step is unresolved (1 + dr^2 xi/12 <= 1/2);
        # the exact solution there is smaller than at r_min + dr by e^(thousands).
        bad = np.nonzero(1.0 + dr * dr * xi[i_start + 1 : n] / 12.0 <= 0.5)[0]
        if bad.size:
            i_start = i_start + 1 + int(bad[-1])
            xi[: i_start + 1] = 0.0

    # Seeds are (r/dr)^(l+1): integers, so a free solution stays exact.
    u = np.zeros(npts)
    if spec.family == LJ:
        u[i_start + 1] = seed
        first = i_start + 1
    elif l == 0:
        u[1] = seed
        first = 1
    else:
        # regular solution ~ r^(l+1) until the centrifugal term is resolved
        j = max(1, int(math.ceil(math.sqrt(l * (l + 1) / 6.0))))
        u[: j + 1] = seed * np.arange(j + 1, dtype=float) ** (l + 1)
        first = j

    du = np.zeros(npts)
    du[1:] = np.diff(u)

    jump = discontinuity(spec)
    kernel = _numerov_kernel if method == NUMEROV else _central_kernel
    if jump is None or method == CENTRAL:
        if jump is not None:
            # midpoint value at the jump keeps the central scheme second order
            V_in, V_out = jump[1], jump[2]
            xi[n] = 0.5 * (_xi(V_in, R, l, k) + _xi(V_out, R, l, k))
        bad = kernel(u, du, xi, dr, first, npts - 1, i_start)
    else:
        bad = _numerov_across_jump(u, du, xi, dr, first, n, npts, i_start, jump, l, k)
    if bad >= 0:
        raise StepFailureError(f"Numerov denominator vanished at r = {r[bad]:g}; reduce dr")
    if _overflowed(u, _OVERFLOW):
        raise InstabilityError("radial solution overflowed; reduce dr")

    nodes = count_nodes(u[i_start + 1 : n + 1])
    if k == 0 and l == 0:
        nodes += _exterior_zero(u, du, r, n, dr)
    return RadialSolution(dr, r, u, nodes, l, float(k), n, i_start, False, method, du)


def _exterior_zero(u, du, r, n, dr) -> int:
    """1 if the free zero-energy s-wave continuation u ~ (r - a) vanishes beyond R.

    With this zero included the count equals the number of bound states.
    """
    m = n + 1
    slope = du[m] + du[m + 1]
    if slope == 0.0:
        return 0
    a = r[m] - 2.0 * dr * u[m] / slope
    return int(a > r[n])


def _numerov_across_jump(u, du_out, xi, dr, first, n, npts, i_floor, jump, l, k):
    """Numerov with a restart at a potential discontinuity sitting on node n.

    The interior solution is carried one step past the jump to get a
    fourth-order derivative at R; u(R + dr) then follows from the exterior
    Numerov relation together with the matching derivative condition.
    """
    R, V_in, V_out = jump
    xi_in_R = _xi(V_in, R, l, k)
    xi[n] = xi_in_R
    bad = _numerov_kernel(u, du_out, xi, dr, first, n, i_floor)
    if bad >= 0:
        return bad
    h12 = dr * dr / 12.0
    xi_in_next = _xi(V_in, R + dr, l, k)
    xi_prev = xi[n - 1]
    u_in_next = (2.0 * u[n] * (1.0 - 5.0 * h12 * xi_in_R) - u[n - 1] * (1.0 + h12 * xi_prev)) / (
        1.0 + h12 * xi_in_next
    )
    du = ((1.0 + 2.0 * h12 * xi_in_next) * u_in_next - (1.0 + 2.0 * h12 * xi_prev) * u[n - 1]) / (2.0 * dr)

    xi_out_prev = _xi(V_out, R - dr, l, k)
    xi_out_R = _xi(V_out, R, l, k)
    xi_out_next = xi[n + 1]
    A = 1.0 + h12 * xi_out_prev
    B = 1.0 + 2.0 * h12 * xi_out_prev
    C = 1.0 + h12 * xi_out_next
    D = 1.0 + 2.0 * h12 * xi_out_next
    E = 2.0 * u[n] * (1.0 - 5.0 * h12 * xi_out_R)
    u[n + 1] = (2.0 * dr * du * A + B * E) / (D * A + B * C)
    xi[n] = xi_out_R
    du_out[n + 1] = u[n + 1] - u[n]
    return _numerov_kernel(u, du_out, xi, dr, n + 1, npts - 1, i_floor)


def wavefunction_csv(sol: RadialSolution, r_max: float | None = None) -> str:
    """CSV text with header "r,u" and 17 significant digits."""
    lines = ["r,u"]
    stop = len(sol.r) if r_max is None else int(np.searchsorted(sol.r, r_max, side="right"))
    for ri, ui in zip(sol.r[:stop], sol.u[:stop]):
        lines.append(f"{ri:.17g},{ui:.17g}")
    return "\n".join(lines) + "\n"
