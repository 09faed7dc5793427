//! Electromagnetic Casimir energies between compact and extended bodies, computed
//! from on-shell scattering amplitudes and translation matrices at imaginary
//! frequency.
//!
//! Units are ħ = c = 1 throughout: lengths are in a caller-chosen unit, wave
//! numbers in its inverse, and energies in ħc per unit length (per unit area or
//! per unit length again for extended bodies).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// Float math comes from the libm-backed `num_traits::Float`. Whenever std is
// linked into the build (tests, or a dependency enabling num-traits/std),
// f64's inherent methods win and those imports go unused, hence the allows.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod conversion;
pub mod energy;
mod error;
pub mod geometries;
pub mod linalg;
pub mod materials;
pub mod quadrature;
pub mod scattering;
pub mod specfun;
pub mod translation;
pub mod waves;

pub use error::Error;
pub use num_complex::Complex64 as C64;

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Transverse-electric (M) or transverse-magnetic (E) polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    M,
    E,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::M, Polarization::E];

    pub fn other(self) -> Self {
        match self {
            Polarization::M => Polarization::E,
            Polarization::E => Polarization::M,
        }
    }
}
