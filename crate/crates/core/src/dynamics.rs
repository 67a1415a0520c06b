//! Strang splitting for i u_t + Δu = (V∗|u|²)u on the retained modes.

use num_complex::Complex64;

use crate::iop::e1;
use crate::modified_energy::{lambda4, M4Params};
use crate::spectral::{
    energy, mass, pad_project, pad_synthesize, padded_potential, sobolev_norm, EnergyReport, Mode,
    Potential, SpectralField, TorusGrid,
};
use crate::{Error, Result};

/// Coefficient magnitude treated as blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 1e-3,
            t_end: 1.0,
            stride: 10,
        }
    }
}

impl StepperConfig {
    /// `t_end` may be 0 (a single observation); otherwise it must be a
    /// whole number of steps of size `dt ≤ t_end`.
    pub fn new(dt: f64, t_end: f64, stride: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param(
                "stepper.dt",
                format!("must be positive, got {dt}"),
            ));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::param(
                "stepper.t_end",
                format!("must be nonnegative, got {t_end}"),
            ));
        }
        if t_end > 0.0 && dt > t_end {
            return Err(Error::param(
                "stepper.dt",
                format!("dt = {dt} exceeds t_end = {t_end}"),
            ));
        }
        let steps = (t_end / dt).round();
        if (steps * dt - t_end).abs() > 1e-9 * t_end.max(dt) {
            return Err(Error::param(
                "stepper.t_end",
                format!("t_end = {t_end} is not a whole number of steps of {dt}"),
            ));
        }
        if stride == 0 {
            return Err(Error::param("stepper.stride", "must be at least 1"));
        }
        Ok(StepperConfig { dt, t_end, stride })
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Free flow: û(n) ↦ e^{−i|n|²τ} û(n).
pub fn linear_step(f: &SpectralField, tau: f64) -> SpectralField {
    let mut out = f.clone();
    let grid = f.grid().clone();
    let coeffs = out.coeffs_mut();
    for n in grid.modes() {
        let i = grid.index(n).expect("retained mode");
        coeffs[i] *= Complex64::from_polar(1.0, -(n.norm_sq() as f64) * tau);
    }
    out
}

/// Potential flow of the band-limited system, i û_t = P(W u) with
/// W = V∗|u|² and P the projection onto the retained modes.
///
/// Solved by u₁ = exp(−iτ P W̄ P) u₀ with W̄ = (W(u₀) + W(u₁))/2, iterated to
/// a fixed point. P W̄ P is Hermitian, so mass is conserved to rounding; the
/// scheme is symmetric in time, so a step of −τ undoes a step of τ (for
/// τ‖W‖ small enough that the kick is not split); and a
/// single mode, where W is constant, picks up exactly the phase e^{−iτW}.
/// All products are formed on the 2K grid, where they are alias-free.
pub fn nonlinear_step(f: &SpectralField, v: &Potential, tau: f64) -> Result<SpectralField> {
    f.check_grid(v.grid())?;
    kick(f, v, tau, 0)
}

const MAX_KICK_ITERATIONS: usize = 60;
/// Each halving of a kick whose fixed point did not converge.
const MAX_KICK_HALVINGS: u32 = 12;

/// The fixed-point iteration contracts when τ‖W‖ is small; otherwise the
/// kick is split into two half kicks. Splitting keeps the kick unitary, but
/// a forward and a backward kick may then split differently, so exact
/// reversibility holds only where no split is needed.
fn kick(f: &SpectralField, v: &Potential, tau: f64, depth: u32) -> Result<SpectralField> {
    let scale = mass(f).sqrt();
    let tol = 4.0 * f64::EPSILON * scale;
    let w0 = padded_potential(v, &pad_synthesize(f));
    let mut u1 = propagate(f, &w0, tau);
    let mut last_change = f64::INFINITY;
    for _ in 0..MAX_KICK_ITERATIONS {
        let w1 = padded_potential(v, &pad_synthesize(&u1));
        let wbar: Vec<f64> = w0.iter().zip(&w1).map(|(a, b)| 0.5 * (a + b)).collect();
        let next = propagate(f, &wbar, tau);
        let change = next.l2_distance(&u1)?;
        u1 = next;
        if !change.is_finite() {
            // Left for the caller's blow-up check.
            return Ok(u1);
        }
        if change <= tol || (change >= last_change && change <= 16.0 * tol) {
            return Ok(u1);
        }
        if change >= last_change {
            break;
        }
        last_change = change;
    }
    if depth == MAX_KICK_HALVINGS {
        return Err(Error::Precondition(format!(
            "potential substep did not converge for τ = {tau}; reduce dt"
        )));
    }
    let half = kick(f, v, 0.5 * tau, depth + 1)?;
    kick(&half, v, 0.5 * tau, depth + 1)
}

/// exp(−iτ P W P) f by a Taylor series, substepped so each piece has
/// τ‖W‖_∞ ≤ 1/2.
fn propagate(f: &SpectralField, w: &[f64], tau: f64) -> SpectralField {
    let wmax = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pieces = ((2.0 * tau.abs() * wmax).ceil() as usize).max(1);
    let h = tau / pieces as f64;
    let mut u = f.clone();
    for _ in 0..pieces {
        let mut term = u.clone();
        let mut sum = u.clone();
        for j in 1..=40 {
            let samples: Vec<Complex64> = pad_synthesize(&term)
                .into_iter()
                .zip(w)
                .map(|(z, w)| z * *w)
                .collect();
            term = pad_project(f.grid(), samples).scale(Complex64::new(0.0, -h / j as f64));
            for (s, t) in sum.coeffs_mut().iter_mut().zip(term.coeffs()) {
                *s += t;
            }
            if mass(&term) <= (f64::EPSILON * f64::EPSILON) * 1e-2 * mass(&sum) {
                break;
            }
        }
        u = sum;
    }
    u
}

/// L(dt/2) ∘ N(dt) ∘ L(dt/2).
pub fn strang_step(f: &SpectralField, v: &Potential, dt: f64) -> Result<SpectralField> {
    let half = linear_step(f, 0.5 * dt);
    let kicked = nonlinear_step(&half, v, dt)?;
    Ok(linear_step(&kicked, 0.5 * dt))
}

/// Advance by `steps` Strang steps of size `dt` (negative dt runs backwards).
pub fn advance(f: &SpectralField, v: &Potential, dt: f64, steps: usize) -> Result<SpectralField> {
    let mut u = f.clone();
    for _ in 0..steps {
        u = strang_step(&u, v, dt)?;
    }
    Ok(u)
}

/// Diagnostics of one state: mass, energy, ‖u‖_{H^s}, E¹, λ₄ and E².
pub fn observe(f: &SpectralField, v: &Potential, diag: &M4Params, t: f64) -> Result<EnergyReport> {
    let e1 = e1(f, &diag.theta);
    let lambda4 = lambda4(diag, f)?;
    Ok(EnergyReport {
        t,
        mass: mass(f),
        energy: energy(f, v)?,
        hs_norm: sobolev_norm(f, diag.theta.s()),
        e1,
        e2: e1 + lambda4,
        lambda4,
    })
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub reports: Vec<EnergyReport>,
    pub final_state: SpectralField,
}

/// Evolves with [`strang_step`], handing a report to `on_report` at t = 0,
/// every `stride` steps, and at `t_end`.
pub fn evolve_observed(
    f: &SpectralField,
    v: &Potential,
    cfg: &StepperConfig,
    diag: &M4Params,
    mut on_report: impl FnMut(&EnergyReport),
) -> Result<SpectralField> {
    f.check_grid(v.grid())?;
    let steps = cfg.steps();
    let mut u = f.clone();
    on_report(&observe(&u, v, diag, 0.0)?);
    for step in 1..=steps {
        let next = strang_step(&u, v, cfg.dt)?;
        let t = step as f64 * cfg.dt;
        if !next.is_finite() || next.max_abs() > BLOWUP_THRESHOLD {
            return Err(Error::BlowUp {
                t,
                last_good_t: (step - 1) as f64 * cfg.dt,
            });
        }
        u = next;
        if step % cfg.stride == 0 || step == steps {
            on_report(&observe(&u, v, diag, t)?);
        }
    }
    Ok(u)
}

pub fn evolve(
    f: &SpectralField,
    v: &Potential,
    cfg: &StepperConfig,
    diag: &M4Params,
) -> Result<Trajectory> {
    let mut reports = Vec::new();
    let final_state = evolve_observed(f, v, cfg, diag, |r| reports.push(*r))?;
    Ok(Trajectory {
        reports,
        final_state,
    })
}

/// α e^{−iV̂(0)|α|²t} e^{i(⟨n₀,x⟩ − |n₀|²t)}, an exact solution.
pub fn plane_wave_reference(
    alpha: Complex64,
    n0: Mode,
    v: &Potential,
    t: f64,
    grid: &TorusGrid,
) -> Result<SpectralField> {
    let phase = -(v.vhat(Mode::ZERO) * alpha.norm_sqr() + n0.norm_sq() as f64) * t;
    SpectralField::single_mode(grid, n0, alpha * Complex64::from_polar(1.0, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, make_potential, PotentialPreset};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_step_examples() {
        let g = make_grid(8).unwrap();
        let f = SpectralField::from_fn(&g, |n| c(n.x as f64, 1.0 + n.y as f64));
        assert_eq!(linear_step(&f, 0.0), f);
        let one = SpectralField::single_mode(&g, Mode::new(1, 0), c(1.0, 0.0)).unwrap();
        let z = linear_step(&one, std::f64::consts::PI).get(Mode::new(1, 0));
        assert!((z - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((mass(&linear_step(&f, 0.37)) - mass(&f)).abs() < 1e-12 * mass(&f));
    }

    #[test]
    fn nonlinear_step_without_potential_is_identity() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Constant { c: 0.0 }, &g).unwrap();
        let f = SpectralField::from_fn(&g, |n| c(1.0 / (1 + n.norm_sq()) as f64, 0.2));
        let out = nonlinear_step(&f, &v, 0.3).unwrap();
        assert!(out.l2_distance(&f).unwrap() < 1e-14);
    }

    #[test]
    fn nonlinear_step_on_plane_wave() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Gaussian { sigma: 3.0 }, &g).unwrap();
        let alpha = c(0.8, 0.6);
        let f = SpectralField::single_mode(&g, Mode::new(1, -2), alpha).unwrap();
        let out = nonlinear_step(&f, &v, 0.25).unwrap();
        let want = alpha * Complex64::from_polar(1.0, -0.25);
        assert!((out.get(Mode::new(1, -2)) - want).norm() < 1e-14);
    }

    #[test]
    fn strang_reduces_to_free_flow_without_potential() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Constant { c: 0.0 }, &g).unwrap();
        let f = SpectralField::from_fn(&g, |n| c(0.5f64.powi(n.norm_sq() as i32), 0.1));
        let a = strang_step(&f, &v, 0.01).unwrap();
        let b = linear_step(&f, 0.01);
        assert!(a.l2_distance(&b).unwrap() < 1e-14);
    }

    #[test]
    fn plane_wave_reference_examples() {
        let g = make_grid(8).unwrap();
        let v = make_potential(PotentialPreset::Delta, &g).unwrap();
        let n0 = Mode::new(1, 0);
        let at0 = plane_wave_reference(c(1.0, 0.0), n0, &v, 0.0, &g).unwrap();
        assert_eq!(at0.get(n0), c(1.0, 0.0));
        let z = plane_wave_reference(c(1.0, 0.0), n0, &v, std::f64::consts::PI, &g)
            .unwrap()
            .get(n0);
        assert!((z - c(1.0, 0.0)).norm() < 1e-14);
        for t in [0.1, 1.0, 17.3] {
            let z = plane_wave_reference(c(0.3, -0.4), n0, &v, t, &g)
                .unwrap()
                .get(n0);
            assert!((z.norm() - 0.5).abs() < 1e-15);
        }
        assert!(plane_wave_reference(c(1.0, 0.0), Mode::new(4, 0), &v, 0.0, &g).is_err());
    }

    #[test]
    fn stepper_config_validation() {
        assert!(StepperConfig::new(1e-3, 1.0, 10).is_ok());
        assert_eq!(StepperConfig::new(1e-3, 0.0, 1).unwrap().steps(), 0);
        assert!(StepperConfig::new(0.0, 1.0, 1).is_err());
        assert!(StepperConfig::new(0.5, 0.2, 1).is_err());
        assert!(StepperConfig::new(0.3, 1.0, 1).is_err());
        assert!(StepperConfig::new(0.1, 1.0, 0).is_err());
    }
}
