use super::{Mode, TorusGrid};
use crate::{Error, Result};

/// Supported convolution kernels V, described by their Fourier multiplier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialPreset {
    /// V = δ, so V̂ ≡ 1 and the equation is the cubic NLS.
    Delta,
    /// Periodized Gaussian surrogate, V̂(n) = e^{−|n|²/σ²}.
    Gaussian { sigma: f64 },
    /// V̂(n) = c·[n = 0].
    Constant { c: f64 },
}

impl PotentialPreset {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialPreset::Delta => "delta",
            PotentialPreset::Gaussian { .. } => "gaussian",
            PotentialPreset::Constant { .. } => "constant",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PotentialPreset::Delta => Ok(()),
            PotentialPreset::Gaussian { sigma } if sigma.is_finite() && sigma > 0.0 => Ok(()),
            PotentialPreset::Gaussian { sigma } => Err(Error::param(
                "potential.sigma",
                format!("must be finite and positive, got {sigma}"),
            )),
            PotentialPreset::Constant { c } if c.is_finite() && c >= 0.0 => Ok(()),
            PotentialPreset::Constant { c } => Err(Error::param(
                "potential.c",
                format!("must be finite and nonnegative, got {c}"),
            )),
        }
    }

    fn multiplier(&self, n: Mode) -> f64 {
        match *self {
            PotentialPreset::Delta => 1.0,
            PotentialPreset::Gaussian { sigma } => (-(n.norm_sq() as f64) / (sigma * sigma)).exp(),
            PotentialPreset::Constant { c } => {
                if n.is_zero() {
                    c
                } else {
                    0.0
                }
            }
        }
    }
}

/// Real, even Fourier multiplier V̂ tabulated on a grid's retained modes.
///
/// The multiplier is also defined off the grid (products of band-limited
/// fields reach frequencies up to ±(K − 2)); see [`Potential::vhat`].
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    preset: PotentialPreset,
    grid: TorusGrid,
    table: Vec<f64>,
}

pub fn make_potential(preset: PotentialPreset, grid: &TorusGrid) -> Result<Potential> {
    preset.validate()?;
    let mut table = vec![0.0; grid.len()];
    for n in grid.modes() {
        table[grid.index_unchecked(n)] = preset.multiplier(n);
    }
    Ok(Potential {
        preset,
        grid: grid.clone(),
        table,
    })
}

impl Potential {
    pub fn preset(&self) -> PotentialPreset {
        self.preset
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// V̂(n) at any lattice point.
    pub fn vhat(&self, n: Mode) -> f64 {
        match self.grid.index(n) {
            Some(i) => self.table[i],
            None => self.preset.multiplier(n),
        }
    }

    /// Tabulated values on the retained modes, in storage order
    /// (Nyquist entries are zero).
    pub fn table(&self) -> &[f64] {
        &self.table
    }
}
