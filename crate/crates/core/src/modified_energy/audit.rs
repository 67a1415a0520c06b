use rayon::prelude::*;

use super::multiplier::{m4, theta_sq_alternating, M4Params};
use super::resonance::{
    classify_quadruplet, Quadruplet, Resonance, ResonanceParams, ResonanceRule,
};
use crate::iop::theta;
use crate::spectral::{Mode, TorusGrid};
use crate::{Error, Result};

/// Every zero-sum quadruplet of retained modes, in a fixed order.
fn for_each_quadruplet(grid: &TorusGrid, mut visit: impl FnMut(Quadruplet)) {
    let modes: Vec<Mode> = grid.modes().collect();
    for &n1 in &modes {
        for &n2 in &modes {
            for &n3 in &modes {
                let n4 = -(n1 + n2 + n3);
                if grid.contains(n4) {
                    visit(Quadruplet::new(n1, n2, n3, n4).expect("zero-sum"));
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gamma4Report {
    pub k: usize,
    pub checked: u64,
    pub violations: u64,
}

/// Checks |n₁|² − |n₂|² + |n₃|² − |n₄|² = 2 n₁₂·n₁₄ in integer arithmetic over
/// all of Γ₄ on the grid. Any violation is an error.
pub fn gamma4_identity_audit(grid: &TorusGrid) -> Result<Gamma4Report> {
    if grid.k() > 16 {
        return Err(Error::Precondition(format!(
            "Γ₄ enumeration limited to K ≤ 16, got {}",
            grid.k()
        )));
    }
    let mut checked = 0;
    let mut first_violation = None;
    let mut violations = 0;
    for_each_quadruplet(grid, |q| {
        let [n1, n2, n3, n4] = q.modes();
        let lhs = n1.norm_sq() - n2.norm_sq() + n3.norm_sq() - n4.norm_sq();
        let rhs = 2 * q.n12().dot(q.n14());
        checked += 1;
        if lhs != rhs {
            violations += 1;
            first_violation.get_or_insert(format!("{n1} {n2} {n3} {n4}: {lhs} ≠ {rhs}"));
        }
    });
    match first_violation {
        Some(msg) => Err(Error::IdentityViolation(format!(
            "{violations} of {checked} quadruplets, first: {msg}"
        ))),
        None => Ok(Gamma4Report {
            k: grid.k(),
            checked,
            violations,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResonantZeroReport {
    pub resonant_checked: u64,
    pub degenerate_checked: u64,
}

/// Exhaustively confirms that M₄ vanishes on Ω_r and that the θ² numerator
/// vanishes whenever n₁₂ = 0 or n₁₄ = 0.
pub fn resonant_zero_audit(grid: &TorusGrid, p: &M4Params) -> Result<ResonantZeroReport> {
    let mut report = ResonantZeroReport {
        resonant_checked: 0,
        degenerate_checked: 0,
    };
    let mut failure = None;
    for_each_quadruplet(grid, |q| {
        if classify_quadruplet(&q, &p.resonance) == Resonance::Resonant {
            report.resonant_checked += 1;
            if m4(&q, p) != 0.0 {
                failure.get_or_insert(format!("M₄ ≠ 0 on resonant {:?}", q.modes()));
            }
        }
        if q.n12().is_zero() || q.n14().is_zero() {
            report.degenerate_checked += 1;
            let alt = theta_sq_alternating(q.modes(), &p.theta);
            if alt != 0.0 {
                failure.get_or_insert(format!("numerator {alt} ≠ 0 at {:?}", q.modes()));
            }
        }
    });
    match failure {
        Some(msg) => Err(Error::IdentityViolation(msg)),
        None => Ok(report),
    }
}

/// Smallest power of two ≥ |n| (1 for n = 0).
fn dyadic(n: Mode) -> f64 {
    let mut d = 1i64;
    while d * d < n.norm_sq() {
        d *= 2;
    }
    d as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct M4BoundReport {
    pub n_cut: f64,
    pub beta0: f64,
    /// sup over Ω_nr of |M₄| β₀ (N₁*)² / (θ(N₁*) θ(N₂*)).
    pub c_sup: f64,
    pub nonresonant: u64,
    pub argmax: Option<[Mode; 4]>,
}

/// Measures the constant in |M₄| ≲ 1/β₀ · θ(N₁*)θ(N₂*)/(N₁*)² over Γ₄.
pub fn m4_bound_audit(grid: &TorusGrid, p: &M4Params) -> Result<M4BoundReport> {
    if grid.k() > 16 {
        return Err(Error::Precondition(format!(
            "Γ₄ enumeration limited to K ≤ 16, got {}",
            grid.k()
        )));
    }
    let modes: Vec<Mode> = grid.modes().collect();
    let per_n1: Vec<(f64, u64, Option<[Mode; 4]>)> = modes
        .par_iter()
        .map(|&n1| {
            let mut best = (0.0f64, 0u64, None);
            for &n2 in &modes {
                for &n3 in &modes {
                    let n4 = -(n1 + n2 + n3);
                    if !grid.contains(n4) {
                        continue;
                    }
                    let q = Quadruplet::new(n1, n2, n3, n4).expect("zero-sum");
                    if classify_quadruplet(&q, &p.resonance) == Resonance::Resonant {
                        continue;
                    }
                    best.1 += 1;
                    let mut scales = q.modes().map(dyadic);
                    scales.sort_by(|a, b| b.total_cmp(a));
                    let t = |d: f64| theta(Mode::new(d as i64, 0), &p.theta);
                    let ratio = m4(&q, p).abs() * p.resonance.beta0 * scales[0] * scales[0]
                        / (t(scales[0]) * t(scales[1]));
                    if ratio > best.0 {
                        best.0 = ratio;
                        best.2 = Some(q.modes());
                    }
                }
            }
            best
        })
        .collect();
    let mut report = M4BoundReport {
        n_cut: p.theta.n_cut(),
        beta0: p.resonance.beta0,
        c_sup: 0.0,
        nonresonant: 0,
        argmax: None,
    };
    for (ratio, count, arg) in per_n1 {
        report.nonresonant += count;
        if ratio > report.c_sup {
            report.c_sup = ratio;
            report.argmax = arg;
        }
    }
    Ok(report)
}

/// [`m4_bound_audit`] for each cutoff, with θ and β₀ regenerated per N.
pub fn m4_bound_sweep(
    grid: &TorusGrid,
    base: &M4Params,
    rule: ResonanceRule,
    c_beta: f64,
    cutoffs: &[f64],
) -> Result<Vec<M4BoundReport>> {
    cutoffs
        .iter()
        .map(|&n_cut| {
            let mut p = base.clone();
            p.theta = base.theta.with_cutoff(n_cut)?;
            p.resonance = ResonanceParams::for_cutoff(rule, n_cut, c_beta)?;
            m4_bound_audit(grid, &p)
        })
        .collect()
}
