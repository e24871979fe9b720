import math

import pytest
from hypothesis import given, strategies as st

from lowscat import units
from lowscat.errors import ConfigError

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_reduced_mass_presets():
    assert units.MASS_PRESETS["nn"] == pytest.approx(units.NEUTRON_MASS / 2, rel=1e-15)
    mp, mn = units.PROTON_MASS, units.NEUTRON_MASS
    assert units.MASS_PRESETS["np"] == pytest.approx(mp * mn / (mp + mn), rel=1e-15)
    he = 4.002603254 * units.ATOMIC_MASS_UNIT
    assert units.MASS_PRESETS["he4-dimer"] == pytest.approx(he / 2, rel=1e-12)


def test_energy_scale_np_at_one_fm():
    # hbar c = 197.3269804 MeV fm, m_r(np) = 469.4591 MeV
    scale = units.preset_scale("np")
    assert scale.energy_scale == pytest.approx(197.3269804**2 / 469.4591, rel=1e-6)
    assert scale.energy_scale == pytest.approx(82.94, rel=1e-3)


def test_angstrom_scale_is_1e10_smaller():
    fm = units.make_scale(1.0, units.MASS_PRESETS["he4-dimer"], "fm")
    ang = units.preset_scale("he4-dimer")
    assert ang.energy_scale == pytest.approx(fm.energy_scale * 1e-10, rel=1e-14)


@given(positive, positive)
def test_energy_scale_goes_as_inverse_length_squared(ell, factor):
    m = units.MASS_PRESETS["np"]
    e1 = units.make_scale(ell, m).energy_scale
    e2 = units.make_scale(ell * factor, m).energy_scale
    assert e2 * factor**2 == pytest.approx(e1, rel=1e-12)


@given(positive, positive, st.floats(min_value=-1e6, max_value=1e6))
def test_round_trips(ell, m, x):
    scale = units.make_scale(ell, m)
    assert units.to_dimensionless_length(units.to_physical_length(x, scale), scale) == pytest.approx(x, rel=1e-14, abs=1e-300)
    assert units.to_dimensionless_energy(units.to_physical_energy(x, scale), scale) == pytest.approx(x, rel=1e-14, abs=1e-300)


def test_dimensionless_scale_has_unit_energy():
    s = units.dimensionless_scale()
    assert s.energy_scale == 1.0
    assert units.to_physical_energy(-0.5, s) == -0.5


def test_zero_range_deuteron_energy_by_hand():
    a = 5.4112
    scale = units.preset_scale("np")
    e = units.to_physical_energy(-0.5 / a**2, scale)
    by_hand = -(197.3269804**2) / (2 * units.MASS_PRESETS["np"] * a**2)
    assert e == pytest.approx(by_hand, rel=1e-14)
    assert e == pytest.approx(-1.416, abs=2e-3)


def test_millikelvin_conversion():
    assert units.mev_to_millikelvin(units.BOLTZMANN) == pytest.approx(1e3, rel=1e-15)


@pytest.mark.parametrize("bad", [dict(length_scale=0.0, reduced_mass=1.0),
                                 dict(length_scale=1.0, reduced_mass=-1.0),
                                 dict(length_scale=1.0, reduced_mass=1.0, length_unit="furlong")])
def test_invalid_scales(bad):
    with pytest.raises(ConfigError):
        units.UnitScale(**bad)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        units.preset_scale("muonium")
