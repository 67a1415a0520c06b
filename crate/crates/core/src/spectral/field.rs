use num_complex::Complex64;

use super::fft::transform2;
use super::{japanese_bracket, Mode, Potential, TorusGrid};
use crate::{Error, Result};

/// Fourier coefficients û(n) of a complex field on the retained modes.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

/// Values on the K×K collocation grid, row-major in (j_x, j_y).
#[derive(Clone, Debug, PartialEq)]
pub struct Samples<T> {
    pub k: usize,
    pub values: Vec<T>,
}

/// One observation of the flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub hs_norm: f64,
    pub e1: f64,
    pub e2: f64,
    pub lambda4: f64,
}

impl SpectralField {
    pub fn zeros(grid: &TorusGrid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: &TorusGrid, mut f: impl FnMut(Mode) -> Complex64) -> Self {
        let mut out = Self::zeros(grid);
        for n in grid.modes() {
            out.coeffs[grid.index_unchecked(n)] = f(n);
        }
        out
    }

    pub fn single_mode(grid: &TorusGrid, n: Mode, amplitude: Complex64) -> Result<Self> {
        let mut out = Self::zeros(grid);
        out.set(n, amplitude)?;
        Ok(out)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// û(n), zero for modes outside the retained set.
    pub fn get(&self, n: Mode) -> Complex64 {
        self.grid
            .index(n)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set(&mut self, n: Mode, value: Complex64) -> Result<()> {
        let i = self.grid.index(n).ok_or(Error::ModeOutsideGrid {
            mode: n,
            k: self.grid.k(),
        })?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// Raw coefficients in storage order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        self.grid
            .modes()
            .map(move |n| (n, self.coeffs[self.grid.index_unchecked(n)]))
    }

    /// Modes carrying a nonzero coefficient, with their values.
    pub fn active(&self) -> Vec<(Mode, Complex64)> {
        self.iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn check_grid(&self, other: &TorusGrid) -> Result<()> {
        if &self.grid != other {
            return Err(Error::GridMismatch {
                left: self.grid.k(),
                right: other.k(),
            });
        }
        Ok(())
    }

    /// Copy onto a grid at least as large, zero-filling the new modes.
    pub fn embed(&self, target: &TorusGrid) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(target);
        for (n, c) in self.iter() {
            out.set(n, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, a: Complex64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        other.check_grid(&self.grid)?;
        let mut out = self.clone();
        out.coeffs
            .iter_mut()
            .zip(&other.coeffs)
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    /// (Σ_n |û(n) − v̂(n)|²)^{1/2}.
    pub fn l2_distance(&self, other: &SpectralField) -> Result<f64> {
        other.check_grid(&self.grid)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// u(x_j) = Σ_n û(n) e^{i⟨n, x_j⟩} at x_j = 2πj/K.
pub fn synthesize(f: &SpectralField) -> Samples<Complex64> {
    let k = f.grid.k();
    let mut values = f.coeffs.clone();
    transform2(&mut values, k, f.grid.plans().inverse.as_ref());
    Samples { k, values }
}

/// Inverse of [`synthesize`] on the retained modes; Nyquist lines are zeroed.
pub fn analyze(grid: &TorusGrid, samples: &[Complex64]) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::SampleCount {
            expected: grid.len(),
            got: samples.len(),
        });
    }
    let k = grid.k();
    let mut coeffs = samples.to_vec();
    transform2(&mut coeffs, k, grid.plans().forward.as_ref());
    let norm = 1.0 / (k * k) as f64;
    let half = k / 2;
    for (i, c) in coeffs.iter_mut().enumerate() {
        if i / k == half || i % k == half {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= norm;
        }
    }
    Ok(SpectralField {
        grid: grid.clone(),
        coeffs,
    })
}

/// M = Σ_n |û(n)|² (the mean of |u|² over T²).
pub fn mass(f: &SpectralField) -> f64 {
    f.coeffs.iter().map(|c| c.norm_sqr()).sum()
}

/// ‖f‖_{H^s} = (Σ_n |û(n)|² ⟨n⟩^{2s})^{1/2}.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    f.iter()
        .map(|(n, c)| c.norm_sqr() * japanese_bracket(n).powf(2.0 * s))
        .sum::<f64>()
        .sqrt()
}

/// Samples of u on the 2K×2K grid.
pub(crate) fn pad_synthesize(f: &SpectralField) -> Vec<Complex64> {
    let m = 2 * f.grid.k();
    let mut u = vec![Complex64::new(0.0, 0.0); m * m];
    for (n, c) in f.iter() {
        let ix = n.x.rem_euclid(m as i64) as usize;
        let iy = n.y.rem_euclid(m as i64) as usize;
        u[ix * m + iy] = c;
    }
    transform2(&mut u, m, f.grid.plans().padded_inverse.as_ref());
    u
}

/// Retained-mode coefficients of 2K×2K samples (the L² projection when the
/// samples are band-limited to |n| < 3K/2).
pub(crate) fn pad_project(grid: &TorusGrid, mut samples: Vec<Complex64>) -> SpectralField {
    let k = grid.k();
    let m = 2 * k;
    debug_assert_eq!(samples.len(), m * m);
    transform2(&mut samples, m, grid.plans().padded_forward.as_ref());
    let norm = 1.0 / (m * m) as f64;
    let mut out = SpectralField::zeros(grid);
    for n in grid.modes() {
        let j = n.x.rem_euclid(m as i64) as usize * m + n.y.rem_euclid(m as i64) as usize;
        let i = grid.index_unchecked(n);
        out.coeffs[i] = samples[j] * norm;
    }
    out
}

/// V∗|u|² on the 2K×2K grid from samples u of a K-band field there.
///
/// |u|² of a K-band field has frequencies up to ±(K − 2), which the 2K grid
/// resolves without aliasing.
pub(crate) fn padded_potential(v: &Potential, u: &[Complex64]) -> Vec<f64> {
    let grid = v.grid();
    let k = grid.k();
    let m = 2 * k;
    let plans = grid.plans();
    let mut rho: Vec<Complex64> = u
        .iter()
        .map(|z| Complex64::new(z.norm_sqr(), 0.0))
        .collect();
    transform2(&mut rho, m, plans.padded_forward.as_ref());
    let norm = 1.0 / (m * m) as f64;
    let wrap = |i: usize| {
        if i < k {
            i as i64
        } else {
            i as i64 - m as i64
        }
    };
    for (i, r) in rho.iter_mut().enumerate() {
        let n = Mode::new(wrap(i / m), wrap(i % m));
        *r *= norm * v.vhat(n);
    }
    transform2(&mut rho, m, plans.padded_inverse.as_ref());

    let scale = rho.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    debug_assert!(
        rho.iter()
            .all(|z| z.im.is_nan() || z.im.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE)),
        "potential field has a non-negligible imaginary part"
    );
    rho.into_iter().map(|z| z.re).collect()
}

/// Dealiased V∗|u|² together with u, both on the 2K×2K grid.
pub(crate) fn dealiased_potential_product(
    v: &Potential,
    f: &SpectralField,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    f.check_grid(v.grid())?;
    let u = pad_synthesize(f);
    Ok((padded_potential(v, &u), u))
}

/// (V∗|u|²)(x_j) on the K×K collocation grid, computed without aliasing.
pub fn convolve_potential(v: &Potential, f: &SpectralField) -> Result<Samples<f64>> {
    let (w, _) = dealiased_potential_product(v, f)?;
    let k = f.grid.k();
    let m = 2 * k;
    let values = (0..k * k)
        .map(|i| w[(2 * (i / k)) * m + 2 * (i % k)])
        .collect();
    Ok(Samples { k, values })
}

/// E = ½ Σ|n|²|û(n)|² + ¼ ⟨(V∗|u|²)|u|²⟩, the average taken over T².
pub fn energy(f: &SpectralField, v: &Potential) -> Result<f64> {
    let (w, u) = dealiased_potential_product(v, f)?;
    let kinetic: f64 = f
        .iter()
        .map(|(n, c)| n.norm_sq() as f64 * c.norm_sqr())
        .sum();
    let quartic = w.iter().zip(&u).map(|(w, u)| w * u.norm_sqr()).sum::<f64>() / w.len() as f64;
    Ok(0.5 * kinetic + 0.25 * quartic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, make_potential, PotentialPreset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_field(grid: &TorusGrid, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralField::from_fn(grid, |_| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn constant_mode_synthesizes_to_constant() {
        let g = make_grid(8).unwrap();
        let f = SpectralField::single_mode(&g, Mode::ZERO, c(0.3, -1.2)).unwrap();
        let u = synthesize(&f);
        assert!(u.values.iter().all(|z| (z - c(0.3, -1.2)).norm() < 1e-15));
    }

    #[test]
    fn unit_mode_synthesizes_to_plane_wave() {
        let g = make_grid(8).unwrap();
        let f = SpectralField::single_mode(&g, Mode::new(1, 0), c(1.0, 0.0)).unwrap();
        let u = synthesize(&f);
        for (i, z) in u.values.iter().enumerate() {
            let x = g.point(i);
            assert!((z - Complex64::from_polar(1.0, x[0])).norm() < 1e-14);
        }
    }

    #[test]
    fn analyze_plane_wave() {
        let g = make_grid(8).unwrap();
        let samples: Vec<_> = (0..g.len())
            .map(|i| {
                let x = g.point(i);
                Complex64::from_polar(1.0, x[0] + x[1])
            })
            .collect();
        let f = analyze(&g, &samples).unwrap();
        for (n, z) in f.iter() {
            let want = if n == Mode::new(1, 1) { 1.0 } else { 0.0 };
            assert!((z - want).norm() < 1e-14, "{n}: {z}");
        }
    }

    #[test]
    fn analyze_rejects_wrong_length() {
        let g = make_grid(4).unwrap();
        assert!(matches!(
            analyze(&g, &[c(0.0, 0.0); 15]),
            Err(Error::SampleCount { .. })
        ));
    }

    #[test]
    fn round_trip_random_field() {
        let g = make_grid(16).unwrap();
        let f = random_field(&g, 11);
        let back = analyze(&g, &synthesize(&f).values).unwrap();
        assert!(back.l2_distance(&f).unwrap() / mass(&f).sqrt() < 1e-12);
    }

    #[test]
    fn mass_is_mean_of_modulus_squared() {
        let g = make_grid(16).unwrap();
        let f = random_field(&g, 3);
        let u = synthesize(&f);
        let quad = u.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / g.len() as f64;
        assert!((quad - mass(&f)).abs() / mass(&f) < 1e-12);
        assert_eq!(mass(&SpectralField::zeros(&g)), 0.0);
    }

    #[test]
    fn sobolev_examples() {
        let g = make_grid(8).unwrap();
        let f = SpectralField::single_mode(&g, Mode::ZERO, c(2.0, 0.0)).unwrap();
        assert_eq!(sobolev_norm(&f, 3.7), 2.0);
        let f = SpectralField::single_mode(&g, Mode::new(1, 0), c(1.0, 0.0)).unwrap();
        assert!((sobolev_norm(&f, 1.0) - 2f64.sqrt()).abs() < 1e-15);
        let mut f = SpectralField::zeros(&g);
        f.set(Mode::new(1, 0), c(1.0, 0.0)).unwrap();
        f.set(Mode::new(0, 1), c(1.0, 0.0)).unwrap();
        let direct: f64 = [Mode::new(1, 0), Mode::new(0, 1)]
            .iter()
            .map(|n| (1.0 + n.norm_sq() as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((sobolev_norm(&f, 2.0) - direct).abs() < 1e-14);
        assert!((direct - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn plane_wave_potential_is_constant() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Gaussian { sigma: 1.5 }, &g).unwrap();
        let f = SpectralField::single_mode(&g, Mode::new(2, -1), c(0.6, 0.8)).unwrap();
        let w = convolve_potential(&v, &f).unwrap();
        assert!(w.values.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn zero_multiplier_gives_zero_field() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Constant { c: 0.0 }, &g).unwrap();
        let w = convolve_potential(&v, &random_field(&g, 1)).unwrap();
        assert!(w.values.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let v = make_potential(PotentialPreset::Delta, &make_grid(8).unwrap()).unwrap();
        let f = SpectralField::zeros(&make_grid(4).unwrap());
        assert!(matches!(
            convolve_potential(&v, &f),
            Err(Error::GridMismatch { .. })
        ));
        assert!(energy(&f, &v).is_err());
    }

    #[test]
    fn plane_wave_energy_closed_form() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Gaussian { sigma: 2.0 }, &g).unwrap();
        let alpha = c(0.5, -1.5);
        let n0 = Mode::new(2, 1);
        let f = SpectralField::single_mode(&g, n0, alpha).unwrap();
        let a2 = alpha.norm_sqr();
        let want = 0.5 * 5.0 * a2 + 0.25 * a2 * a2;
        assert!((energy(&f, &v).unwrap() - want).abs() < 1e-13 * want);
        assert_eq!(energy(&SpectralField::zeros(&g), &v).unwrap(), 0.0);
    }

    #[test]
    fn energy_without_potential_is_kinetic() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Constant { c: 0.0 }, &g).unwrap();
        let f = random_field(&g, 9);
        let kinetic: f64 = 0.5
            * f.iter()
                .map(|(n, z)| n.norm_sq() as f64 * z.norm_sqr())
                .sum::<f64>();
        assert!((energy(&f, &v).unwrap() - kinetic).abs() < 1e-13 * kinetic);
    }
}
