#![allow(dead_code)]

use hartree::modified_energy::ENERGY_FLUX_CONSTANT;
use hartree::spectral::{japanese_bracket, Mode, SpectralField, TorusGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficients with modulus A⟨n⟩^{−p} and uniform phases.
pub fn smooth_field(grid: &TorusGrid, amplitude: f64, decay: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(grid, |n| {
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(amplitude * japanese_bracket(n).powf(-decay), phase)
    })
}

/// Independent real and imaginary parts uniform in [−1, 1].
pub fn rough_field(grid: &TorusGrid, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(grid, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// ρ̂(n) = Σ_m û(m) conj(û(m − n)), the Fourier coefficients of |u|².
pub fn density_coefficient(f: &SpectralField, n: Mode) -> Complex64 {
    f.iter()
        .map(|(m, a)| {
            let b = if f.grid().contains(m - n) {
                f.get(m - n)
            } else {
                Complex64::new(0.0, 0.0)
            };
            a * b.conj()
        })
        .sum()
}

/// Every lattice point with |n_x|, |n_y| ≤ r.
pub fn box_modes(r: i64) -> Vec<Mode> {
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            out.push(Mode::new(x, y));
        }
    }
    out
}

pub fn gaussian_multiplier(n: Mode, sigma: f64) -> f64 {
    (-(n.norm_sq() as f64) / (sigma * sigma)).exp()
}

/// λ₄ by direct quadruple loop over coefficient indices with
/// m₁ − m₂ + m₃ − m₄ = 0, the multiplier written out from its definition,
/// resonance decided in integer arithmetic for β₀ = 1/N.
pub fn lambda4_oracle(f: &SpectralField, n_cut: i64, s: f64, sigma: f64) -> Complex64 {
    let theta_sq = |m: Mode| {
        let r = m.norm();
        if r <= n_cut as f64 {
            1.0
        } else {
            (r / n_cut as f64).powf(2.0 * s)
        }
    };
    let support: Vec<(Mode, Complex64)> = f.iter().collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(m1, a1) in &support {
        for &(m2, a2) in &support {
            for &(m3, a3) in &support {
                let m4 = m1 - m2 + m3;
                if !f.grid().contains(m4) {
                    continue;
                }
                let a4 = f.get(m4);
                let n12 = m1 - m2;
                let n14 = m1 - m4;
                if n12 == Mode::ZERO || n14 == Mode::ZERO {
                    continue;
                }
                let dot = n12.dot(n14);
                // |cos| ≤ 1/N  ⟺  N² dot² ≤ |n12|² |n14|².
                if n_cut * n_cut * dot * dot <= n12.norm_sq() * n14.norm_sq() {
                    continue;
                }
                let numer = theta_sq(m1) - theta_sq(m2) + theta_sq(m3) - theta_sq(m4);
                let mult = ENERGY_FLUX_CONSTANT * numer * gaussian_multiplier(m3 - m4, sigma)
                    / (2.0 * dot as f64);
                total += mult * a1 * a2.conj() * a3 * a4.conj();
            }
        }
    }
    total
}
