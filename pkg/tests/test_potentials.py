import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lowscat import potentials as P
from lowscat.errors import ConfigError, DomainError, RangeNotFoundError

depth = st.floats(min_value=0.0, max_value=50.0)
inv_range = st.floats(min_value=0.05, max_value=5.0)
radius = st.floats(min_value=0.0, max_value=100.0)


def test_well_values():
    s = P.spherical_well(1.2337, 1.0)
    assert P.evaluate(s, 0.5) == pytest.approx(-1.2337)
    assert P.evaluate(s, 1.0) == 0.0  # outside includes the edge
    assert P.evaluate(s, 2.0) == 0.0


def test_mpt_and_gaussian_at_origin():
    assert P.evaluate(P.poschl_teller(1.0, 2.0), 0.0) == pytest.approx(-4.0)
    assert P.evaluate(P.gaussian(1.5, 0.5), 0.0) == pytest.approx(-0.375)


def test_lennard_jones_shape():
    c12, c6 = 2.0, 7.0
    s = P.lennard_jones(c12, c6)
    r_zero = (c12 / c6) ** (1 / 6)
    r_min = (2 * c12 / c6) ** (1 / 6)
    assert P.evaluate(s, r_zero) == pytest.approx(0.0, abs=1e-12)
    h = 1e-5
    slope = (P.evaluate(s, r_min + h) - P.evaluate(s, r_min - h)) / (2 * h)
    assert slope == pytest.approx(0.0, abs=1e-6)
    assert P.evaluate(s, r_min) == pytest.approx(-c6**2 / (4 * c12))


def test_lennard_jones_origin_is_domain_error():
    with pytest.raises(DomainError):
        P.evaluate(P.lennard_jones(1.0, 1.0), 0.0)


def test_negative_radius():
    with pytest.raises(DomainError):
        P.evaluate(P.gaussian(1.0, 1.0), -0.1)


def test_lj_convention_halves_constants():
    s = P.lennard_jones(3.0, 10.0, convention="2m_r")
    assert s["c12"] == 1.5 and s["c6"] == 5.0
    with pytest.raises(ConfigError):
        P.lennard_jones(1.0, 1.0, convention="bogus")


@given(st.sampled_from(P.ATTRACTIVE), depth, inv_range, radius)
def test_attractive_families_are_nonpositive(family, v, mu, r):
    assert P.evaluate(P.make_potential(family, v=v, mu=mu), r) <= 0.0


@given(st.sampled_from([P.MPT, P.GAUSSIAN]), st.floats(min_value=0.01, max_value=50), inv_range)
def test_smooth_families_rise_monotonically(family, v, mu):
    r = np.linspace(0.0, 10.0 / mu, 500)
    assert np.all(np.diff(P.evaluate(P.make_potential(family, v=v, mu=mu), r)) >= 0)


def test_well_range_is_exact():
    info = P.derive_range(P.spherical_well(2.0, 0.4))
    assert info.R == 2.5 and info.r_min == 0.0


@pytest.mark.parametrize("v,mu", [(0.9071, 0.7991), (1.0, 2.0), (1.4388, 0.8631)])
def test_mpt_range_matches_inversion(v, mu):
    eps = 1e-15
    exact = math.acosh(math.sqrt(v * mu * mu / eps)) / mu
    R = P.derive_range(P.poschl_teller(v, mu), epsilon_tail=eps).R
    assert exact <= R <= exact * (1 + 1e-9)


@pytest.mark.parametrize("v,mu", [(1.2121, 0.5672), (1.9102, 0.6754)])
def test_gaussian_range_matches_inversion(v, mu):
    eps = 1e-15
    exact = math.sqrt(math.log(v * mu * mu / eps)) / mu
    R = P.derive_range(P.gaussian(v, mu), epsilon_tail=eps).R
    assert exact <= R <= exact * (1 + 1e-9)


@pytest.mark.parametrize("c12,c6", [(1.54418349, 4.93334456), (0.00017034, 0.13231231), (0.45242660, 3.40736000)])
def test_lj_core_cutoff_and_tail(c12, c6):
    s = P.lennard_jones(c12, c6)
    info = P.derive_range(s)
    assert 1e10 <= P.evaluate(s, info.r_min) <= 1e11
    assert P.evaluate(s, info.r_min * 1.01) < 1e10
    probes = info.R * (1 + np.arange(0, 9) / 8)
    assert np.all(np.abs(P.evaluate(s, probes)) <= 1e-15)


def test_range_is_idempotent():
    s = P.gaussian(1.2121, 0.5672)
    assert P.derive_range(s) == P.derive_range(s)


def test_range_not_found():
    with pytest.raises(RangeNotFoundError):
        P.derive_range(P.gaussian(1.0, 0.01), max_radius=50.0)


def test_tabulated_interpolates_and_vanishes_beyond_last_sample():
    s = P.tabulated([0.0, 1.0, 2.0], [-2.0, -1.0, -0.5])
    assert P.evaluate(s, 0.5) == pytest.approx(-1.5)
    assert P.evaluate(s, 2.5) == 0.0
    assert P.derive_range(s).R == 2.0


@pytest.mark.parametrize("make", [
    lambda: P.spherical_well(-1.0, 1.0),
    lambda: P.gaussian(1.0, 0.0),
    lambda: P.poschl_teller(float("nan"), 1.0),
    lambda: P.lennard_jones(0.0, 1.0),
    lambda: P.lennard_jones(1.0, -1.0),
    lambda: P.tabulated([0.0, 0.0], [1.0, 1.0]),
    lambda: P.tabulated([0.0], [1.0]),
    lambda: P.make_potential("square", v=1.0, mu=1.0),
    lambda: P.make_potential("gaussian", v=1.0),
])
def test_invalid_specs(make):
    with pytest.raises(ConfigError):
        make()


def test_aliases_and_json_round_trip():
    s = P.make_potential("mpt", lam=2.0, mu=2.0)
    assert s.family == P.MPT and s["v"] == pytest.approx(1.0)
    for spec in (s, P.lennard_jones(1.0, 2.0), P.tabulated([0, 1], [-1, 0])):
        again = P.PotentialSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
        assert again == spec


@given(st.floats(min_value=1.0, max_value=100.0))
def test_lambda_depth_inverse(lam):
    assert P.v_to_lambda(P.lambda_to_v(lam)) == pytest.approx(lam, rel=1e-12)
