//! Dispersion interactions between few-level quantum emitters.
//!
//! Two polarisable systems in vacuum attract through the fluctuating
//! electromagnetic field. This crate computes that interaction for emitters
//! described by a handful of levels and transition dipoles, at three levels
//! of approximation:
//!
//! * **bare** — second-order perturbation theory with the unperturbed
//!   polarisabilities of both systems (the textbook van der Waals /
//!   Casimir–Polder result),
//! * **one-sided** — one emitter is dressed by the interaction self-energy
//!   generated by its (bare) partner before the potential is evaluated,
//! * **self-consistent** — both emitters are dressed by each other's
//!   *dressed* response, iterated to a fixed point, so the mutual radiative
//!   backaction is treated on equal footing on both sides.
//!
//! All spectral integrals run along the imaginary frequency axis, where the
//! integrands are smooth and exponentially damped by retardation. Internal
//! units are SI throughout: energies in joules, angular frequencies in rad/s,
//! dipole moments in C·m, lengths in metres. Conversions from spectroscopic
//! units (eV, debye, nm) live in [`quantities`].
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature to use it in such environments.
//!
//! Module map, bottom-up:
//!
//! * [`quantities`] — physical constants and unit conversions
//! * [`tensor`] — minimal 3-vector / 3×3-matrix algebra
//! * [`green`] — free-space dyadic Green tensor at imaginary frequency
//! * [`levels`] — level-system description and validation
//! * [`quad`] — adaptive Gauss–Legendre quadrature on the half-line
//! * [`response`] — bare, transition, and corrected polarisabilities
//! * [`backaction`] — interaction self-energies, dressing, fixed-point solver
//! * [`potential`] — dispersion potentials, effective C6, scaling estimates

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod backaction;
pub mod green;
pub mod levels;
mod math;
pub mod potential;
pub mod quad;
pub mod quantities;
pub mod response;
pub mod tensor;
