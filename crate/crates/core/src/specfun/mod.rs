//! Special functions on the real positive axis: modified Bessel functions
//! (cylindrical and spherical), associated Legendre functions for arguments
//! `x >= 1`, spherical harmonics and Wigner 3j symbols.

mod bessel;
mod harmonics;
mod legendre;
mod wigner;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_i_seq, bessel_k, bessel_k_scaled, bessel_k_seq,
    sph_bessel_i, sph_bessel_i_scaled, sph_bessel_i_seq, sph_bessel_k, sph_bessel_k_scaled,
    sph_bessel_k_seq, BesselPair, ScaledPair, MAX_ORDER,
};
pub use harmonics::{spherical_harmonic, spherical_harmonic_dtheta, YlmTable};
pub use legendre::{assoc_legendre_ge1, legendre_derivatives, legendre_derivatives_scaled};
pub use wigner::{wigner3j, wigner3j_exact, wigner3j_series, wigner3j_zero_series};
