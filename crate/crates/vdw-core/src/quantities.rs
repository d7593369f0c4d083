//! Physical constants and conversions between spectroscopic and SI units.
//!
//! Everything downstream of this module works in SI: energies in joules,
//! angular frequencies in rad/s, dipole moments in C·m, lengths in metres.
//! Spectroscopic units (eV, debye, nanometres) appear only at construction
//! and reporting boundaries, and every conversion goes through the constants
//! defined here so there is exactly one source of truth.

/// Fundamental constants used by the dispersion integrals.
///
/// Values follow CODATA 2018; `c`, `electronvolt`, and `hbar` are exact in
/// the 2019 SI, while `eps0` and `mu0` carry the recommended experimental
/// values (they are no longer exact, but satisfy `mu0·eps0·c² = 1` to better
/// than 1e-12 relative).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant ħ \[J·s\].
    pub hbar: f64,
    /// Speed of light in vacuum c \[m/s\].
    pub c: f64,
    /// Vacuum permittivity ε₀ \[F/m\].
    pub eps0: f64,
    /// Vacuum permeability μ₀ \[N/A²\].
    pub mu0: f64,
    /// One debye \[C·m\]; numerically 1e-21/c.
    pub debye: f64,
    /// One electronvolt \[J\].
    pub electronvolt: f64,
}

/// The CODATA 2018 constant set.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    eps0: 8.854_187_812_8e-12,
    mu0: 1.256_637_062_12e-6,
    debye: 3.335_640_951_981_52e-30,
    electronvolt: 1.602_176_634e-19,
};

/// Level energy in eV → transition angular frequency in rad/s (ω = E/ħ).
#[inline]
#[must_use]
pub fn energy_to_angular_frequency(energy_ev: f64) -> f64 {
    energy_ev * CODATA_2018.electronvolt / CODATA_2018.hbar
}

/// Angular frequency in rad/s → energy in eV; inverse of
/// [`energy_to_angular_frequency`].
#[inline]
#[must_use]
pub fn angular_frequency_to_energy(omega: f64) -> f64 {
    omega * CODATA_2018.hbar / CODATA_2018.electronvolt
}

/// Dipole magnitude in debye → C·m.
#[inline]
#[must_use]
pub fn dipole_to_si(debye: f64) -> f64 {
    debye * CODATA_2018.debye
}

/// Dipole magnitude in C·m → debye; inverse of [`dipole_to_si`].
#[inline]
#[must_use]
pub fn dipole_from_si(coulomb_metre: f64) -> f64 {
    coulomb_metre / CODATA_2018.debye
}

/// Energy in joules → eV.
#[inline]
#[must_use]
pub fn joule_to_ev(joule: f64) -> f64 {
    joule / CODATA_2018.electronvolt
}

/// Energy in eV → joules.
#[inline]
#[must_use]
pub fn ev_to_joule(ev: f64) -> f64 {
    ev * CODATA_2018.electronvolt
}

/// Length in nanometres → metres.
#[inline]
#[must_use]
pub fn nm_to_m(nm: f64) -> f64 {
    nm * 1e-9
}

/// Length in metres → nanometres.
#[inline]
#[must_use]
pub fn m_to_nm(m: f64) -> f64 {
    m * 1e9
}
