//! The multiplier θ, the upside-down I operator 𝒟 and the first modified
//! energy E¹ = ‖𝒟u‖².

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{Mode, SpectralField};
use crate::{Error, Result};

/// Frequency threshold N and Sobolev index s of θ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams {
    n_cut: f64,
    s: f64,
}

impl ThetaParams {
    /// Requires N ≥ 1 and s ≥ 1. The small-grid audits run at N = 1, s = 1,
    /// where θ is still well defined and continuous.
    pub fn new(n_cut: f64, s: f64) -> Result<Self> {
        if !(n_cut.is_finite() && n_cut >= 1.0) {
            return Err(Error::param("theta.N", format!("must be ≥ 1, got {n_cut}")));
        }
        if !(s.is_finite() && s >= 1.0) {
            return Err(Error::param("theta.s", format!("must be ≥ 1, got {s}")));
        }
        Ok(ThetaParams { n_cut, s })
    }

    pub fn n_cut(&self) -> f64 {
        self.n_cut
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn with_cutoff(&self, n_cut: f64) -> Result<Self> {
        Self::new(n_cut, self.s)
    }
}

/// θ as a function of the radius |n|: 1 below N, (|n|/N)^s above.
pub fn theta_radial(r: f64, p: &ThetaParams) -> f64 {
    if r <= p.n_cut {
        1.0
    } else {
        (r / p.n_cut).powf(p.s)
    }
}

pub fn theta(n: Mode, p: &ThetaParams) -> f64 {
    theta_radial(n.norm(), p)
}

/// (𝒟f)^(n) = θ(n) f̂(n).
pub fn apply_d(f: &SpectralField, p: &ThetaParams) -> SpectralField {
    let grid = f.grid();
    let mut out = f.clone();
    let coeffs = out.coeffs_mut();
    for n in grid.modes() {
        let i = grid.index(n).expect("retained mode");
        coeffs[i] *= theta(n, p);
    }
    out
}

/// E¹(f) = Σ_n θ(n)² |f̂(n)|².
pub fn e1(f: &SpectralField, p: &ThetaParams) -> f64 {
    f.iter()
        .map(|(n, c)| {
            let t = theta(n, p);
            t * t * c.norm_sqr()
        })
        .sum()
}

fn theta_sq_at(x: [f64; 2], p: &ThetaParams) -> f64 {
    let t = theta_radial(x[0].hypot(x[1]), p);
    t * t
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn add2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

/// Second difference of θ² at x relative to the envelope
/// |η||μ| θ(x)²/|x|².
///
/// Requires |x| ≥ 2N and |η|, |μ| ≤ |x|/8, which keeps all four points on the
/// smooth branch of θ.
pub fn dmvt_check(p: &ThetaParams, x: [f64; 2], eta: [f64; 2], mu: [f64; 2]) -> Result<f64> {
    let r = norm2(x);
    let (a, b) = (norm2(eta), norm2(mu));
    if r.is_nan() || r < 2.0 * p.n_cut {
        return Err(Error::Precondition(format!(
            "|x| = {r} must be at least 2N = {}",
            2.0 * p.n_cut
        )));
    }
    if a > r / 8.0 || b > r / 8.0 {
        return Err(Error::Precondition(format!(
            "offsets |η| = {a}, |μ| = {b} exceed |x|/8 = {}",
            r / 8.0
        )));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    let second = theta_sq_at(add2(add2(x, eta), mu), p)
        - theta_sq_at(add2(x, eta), p)
        - theta_sq_at(add2(x, mu), p)
        + theta_sq_at(x, p);
    let envelope = a * b * theta_sq_at(x, p) / (r * r);
    Ok(second.abs() / envelope)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmvtReport {
    pub n_cut: f64,
    pub s: f64,
    pub samples: usize,
    pub max_ratio: f64,
}

/// Maximum of [`dmvt_check`] over random admissible samples: |x| uniform in
/// [2N, 8N], offsets of radius uniform in [0, |x|/8], all angles uniform.
pub fn dmvt_sweep(p: &ThetaParams, samples: usize, seed: u64) -> Result<DmvtReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polar = |r: f64, rng: &mut ChaCha8Rng| {
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        [r * phi.cos(), r * phi.sin()]
    };
    let mut max_ratio = 0.0f64;
    for _ in 0..samples {
        let r = rng.gen_range(2.0 * p.n_cut..=8.0 * p.n_cut);
        let x = polar(r, &mut rng);
        // Shrink slightly so rounding in the polar map never breaks |η| ≤ |x|/8.
        let cap = norm2(x) / 8.0 * (1.0 - 1e-12);
        let a = rng.gen_range(0.0..=cap);
        let eta = polar(a, &mut rng);
        let b = rng.gen_range(0.0..=cap);
        let mu = polar(b, &mut rng);
        max_ratio = max_ratio.max(dmvt_check(p, x, eta, mu)?);
    }
    Ok(DmvtReport {
        n_cut: p.n_cut,
        s: p.s,
        samples,
        max_ratio,
    })
}
