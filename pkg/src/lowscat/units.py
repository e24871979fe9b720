"""Dimensionless working units and conversion back to fm/MeV or Angstrom/mK.

All solver work happens in units where hbar = m_r = 1: lengths are measured
in a chosen scale ``ell`` and energies in ``eps = hbar^2 / (m_r ell^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

# CODATA 2018
HBAR_C = 197.3269804  # MeV fm
PROTON_MASS = 938.27208816  # MeV/c^2
NEUTRON_MASS = 939.56542052  # MeV/c^2
ELECTRON_MASS = 0.51099895000  # MeV/c^2
ATOMIC_MASS_UNIT = 931.49410242  # MeV/c^2
BOLTZMANN = 8.617333262e-11  # MeV/K

# Alpha-particle mass is 3727.3794066 MeV/c^2. The dimer is atom-atom
# scattering, so the neutral-atom mass is used: alpha + 2 m_e minus 79 eV of
# electron binding, i.e. 4.002603254 u. The two conventions differ by 0.03%.
HELIUM4_MASS = 4.002603254 * ATOMIC_MASS_UNIT  # MeV/c^2

FM_PER_UNIT = {"fm": 1.0, "angstrom": 1.0e5, "dimensionless": 1.0}


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = HBAR_C
    proton_mass_c2: float = PROTON_MASS
    neutron_mass_c2: float = NEUTRON_MASS
    helium4_mass_c2: float = HELIUM4_MASS
    boltzmann_mev_per_k: float = BOLTZMANN


CONSTANTS = PhysicalConstants()


def reduced_mass(m1: float, m2: float) -> float:
    return m1 * m2 / (m1 + m2)


MASS_PRESETS = {
    "nn": reduced_mass(NEUTRON_MASS, NEUTRON_MASS),
    "np": reduced_mass(PROTON_MASS, NEUTRON_MASS),
    "he4-dimer": reduced_mass(HELIUM4_MASS, HELIUM4_MASS),
}


@dataclass(frozen=True)
class UnitScale:
    """Length scale and reduced mass fixing the dimensionless units.

    ``length_scale`` is expressed in ``length_unit``; ``reduced_mass`` in
    MeV/c^2.  In ``"dimensionless"`` mode hbar is 1 as well, so the energy
    scale is ``1 / (m_r ell^2)``.
    """

    length_scale: float
    reduced_mass: float
    length_unit: str = "fm"

    def __post_init__(self):
        if not self.length_scale > 0 or not self.reduced_mass > 0:
            raise ConfigError("length scale and reduced mass must be positive")
        if self.length_unit not in FM_PER_UNIT:
            raise ConfigError(f"unknown length unit {self.length_unit!r}")

    @property
    def hbar_c(self) -> float:
        return 1.0 if self.length_unit == "dimensionless" else HBAR_C

    @property
    def energy_scale(self) -> float:
        """eps = hbar^2/(m_r ell^2), in MeV for physical scales."""
        ell_fm = self.length_scale * FM_PER_UNIT[self.length_unit]
        return self.hbar_c**2 / (self.reduced_mass * ell_fm**2)


def make_scale(length_scale: float, reduced_mass: float, length_unit: str = "fm") -> UnitScale:
    return UnitScale(float(length_scale), float(reduced_mass), length_unit)


def dimensionless_scale() -> UnitScale:
    return UnitScale(1.0, 1.0, "dimensionless")


def preset_scale(system: str) -> UnitScale:
    """Scales used for the two physical systems of interest.

    ``"np"``/``"nn"`` use 1 fm, ``"he4-dimer"`` uses 1 Angstrom.
    """
    try:
        m_r = MASS_PRESETS[system]
    except KeyError:
        raise ConfigError(f"unknown mass preset {system!r}") from None
    unit = "angstrom" if system == "he4-dimer" else "fm"
    return UnitScale(1.0, m_r, unit)


def to_physical_length(x, scale: UnitScale):
    return x * scale.length_scale


def to_dimensionless_length(x, scale: UnitScale):
    return x / scale.length_scale


def to_physical_energy(e, scale: UnitScale):
    return e * scale.energy_scale


def to_dimensionless_energy(e, scale: UnitScale):
    return e / scale.energy_scale


def mev_to_millikelvin(e_mev):
    return e_mev / BOLTZMANN * 1.0e3
