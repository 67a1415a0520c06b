use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::InitialSpec;
use crate::iop::ThetaParams;
use crate::spectral::{japanese_bracket, SpectralField, TorusGrid};
use crate::{Error, Result};

/// Builds the initial field. Random phases are drawn in the grid's
/// lexicographic mode order.
pub fn initial_data(
    spec: &InitialSpec,
    grid: &TorusGrid,
    theta: &ThetaParams,
) -> Result<SpectralField> {
    match *spec {
        InitialSpec::PlaneWave { alpha, mode } => SpectralField::single_mode(grid, mode, alpha),
        InitialSpec::RandomSmooth {
            amplitude,
            decay,
            seed,
        } => {
            if decay <= theta.s() + 1.0 {
                return Err(Error::param(
                    "initial.decay",
                    format!("must exceed s + 1 = {}, got {decay}", theta.s() + 1.0),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(SpectralField::from_fn(grid, |n| {
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(amplitude * japanese_bracket(n).powf(-decay), phase)
            }))
        }
        InitialSpec::GaussianBump { amplitude, width } => Ok(SpectralField::from_fn(grid, |n| {
            Complex64::new(
                amplitude * (-0.5 * width * width * n.norm_sq() as f64).exp(),
                0.0,
            )
        })),
    }
}
