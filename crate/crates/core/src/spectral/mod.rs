//! Torus grid, spectral fields, Fourier transforms, potentials and the
//! conserved quantities of the flow.

mod fft;
mod field;
mod grid;
mod potential;

pub use field::{
    analyze, convolve_potential, energy, mass, sobolev_norm, synthesize, EnergyReport, Samples,
    SpectralField,
};
pub use grid::{japanese_bracket, make_grid, Mode, TorusGrid};
pub use potential::{make_potential, Potential, PotentialPreset};

pub(crate) use field::{pad_project, pad_synthesize, padded_potential};
