//! The verification suite: every audit runs, failures are collected, and
//! the report records each measured constant next to the tolerance applied.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, InitialSpec};
use super::initial::initial_data;
use crate::dynamics::advance;
use crate::iop::{dmvt_sweep, e1, ThetaParams};
use crate::modified_energy::{
    de1_dt_direct, de2_dt_terms, e2, gamma4_identity_audit, m4_bound_sweep, resonant_zero_audit,
    M4Params, ResonanceParams,
};
use crate::spectral::{make_grid, make_potential, sobolev_norm, SpectralField};
use crate::{Error, Result};

/// Step of the centered finite differences along the flow.
pub const FD_STEP: f64 = 1e-4;
pub const DE1_FD_TOLERANCE: f64 = 1e-6;
pub const DE2_FD_TOLERANCE: f64 = 1e-4;
/// Allowed max/min spread of C_sup across N ∈ {2, 4, 8}.
pub const M4_BOUND_SPREAD: f64 = 4.0;
pub const M4_BOUND_CUTOFFS: [f64; 3] = [2.0, 4.0, 8.0];
/// Allowed max/min spread of the DMVT ratio across N ∈ {8, 16}.
pub const DMVT_SPREAD: f64 = 2.0;
pub const DMVT_CUTOFFS: [f64; 2] = [8.0, 16.0];
pub const DMVT_SAMPLES: usize = 10_000;
pub const HS_BOUND_FIELDS: usize = 100;

/// Data grid and embedding grid of the dE¹/dt check.
pub const DE1_GRIDS: (usize, usize) = (8, 32);
/// Cutoff of the dE¹/dt check, so that θ is nontrivial on the K = 8 modes.
pub const DE1_CUTOFF: f64 = 2.0;
/// Data grid and embedding grid of the dE²/dt check.
pub const DE2_GRIDS: (usize, usize) = (4, 16);
/// β₀ of the dE²/dt check at N = 1, where the torus rule would give β₀ = 1.
pub const DE2_BETA0: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub name: &'static str,
    pub pass: bool,
    pub values: Vec<(String, String)>,
}

impl AuditEntry {
    fn new(name: &'static str) -> Self {
        AuditEntry {
            name,
            pass: false,
            values: Vec::new(),
        }
    }

    fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.push((key.into(), value.to_string()));
    }

    fn failed(name: &'static str, err: &Error) -> Self {
        let mut e = AuditEntry::new(name);
        e.put("error", err);
        e
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub entries: Vec<AuditEntry>,
    pub path: Option<PathBuf>,
}

impl SuiteReport {
    pub fn overall(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `audit.key: value` lines, a `audit.status` line per audit, and a
    /// final `overall: pass|fail`.
    pub fn render(&self) -> String {
        let word = |b: bool| if b { "pass" } else { "fail" };
        let mut out = String::new();
        for e in &self.entries {
            for (k, v) in &e.values {
                // A message may contain newlines; keep one record per line.
                let _ = writeln!(out, "{}.{}: {}", e.name, k, v.replace('\n', " "));
            }
            let _ = writeln!(out, "{}.status: {}", e.name, word(e.pass));
        }
        let _ = writeln!(out, "overall: {}", word(self.overall()));
        out
    }
}

/// Runs every audit on grids small enough to enumerate, applies the
/// fault injection from `cfg.audit`, and writes `audit.txt`.
pub fn run_verification_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let audits: [fn(&ExperimentConfig) -> Result<AuditEntry>; 7] = [
        gamma4_entry,
        resonant_zero_entry,
        m4_bound_entry,
        dmvt_entry,
        hs_bound_entry,
        de1_fd_entry,
        cancellation_entry,
    ];
    let names = [
        "gamma4_identity",
        "resonant_zero",
        "m4_bound",
        "dmvt",
        "hs_bound",
        "de1_fd",
        "cancellation",
    ];
    let entries = audits
        .iter()
        .zip(names)
        .map(|(run, name)| run(cfg).unwrap_or_else(|e| AuditEntry::failed(name, &e)))
        .collect();
    let mut report = SuiteReport {
        entries,
        path: None,
    };
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    let path = cfg.output_dir.join("audit.txt");
    std::fs::write(&path, report.render()).map_err(|e| Error::io(&path, e))?;
    report.path = Some(path);
    Ok(report)
}

fn seed_of(cfg: &ExperimentConfig) -> u64 {
    match cfg.initial {
        InitialSpec::RandomSmooth { seed, .. } => seed,
        _ => 0,
    }
}

/// Random smooth data on a small grid; the decay follows the configured
/// data when it is random, else s + 2.
fn suite_data(cfg: &ExperimentConfig, k: usize, theta: &ThetaParams) -> Result<SpectralField> {
    let (amplitude, decay) = match cfg.initial {
        InitialSpec::RandomSmooth {
            amplitude, decay, ..
        } => (amplitude, decay),
        _ => (1.0, theta.s() + 2.0),
    };
    let spec = InitialSpec::RandomSmooth {
        amplitude,
        decay,
        seed: seed_of(cfg),
    };
    initial_data(&spec, &make_grid(k)?, theta)
}

fn gamma4_entry(_cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("gamma4_identity");
    e.put("k", 8);
    match gamma4_identity_audit(&make_grid(8)?) {
        Ok(r) => {
            e.put("checked", r.checked);
            e.put("violations", r.violations);
            e.put("tolerance", "0 violations, integer arithmetic");
            e.pass = r.violations == 0;
        }
        Err(err) => e.put("error", err),
    }
    Ok(e)
}

fn resonant_zero_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("resonant_zero");
    let grid = make_grid(8)?;
    let v = cfg.make_potential(&grid)?;
    let p = cfg.audited_m4_params(cfg.m4_params(&v, cfg.theta.n_cut())?)?;
    e.put("k", 8);
    e.put("N", p.theta.n_cut());
    e.put("beta0", p.resonance.beta0);
    match resonant_zero_audit(&grid, &p) {
        Ok(r) => {
            e.put("resonant_checked", r.resonant_checked);
            e.put("degenerate_checked", r.degenerate_checked);
            e.put("tolerance", "exact zero");
            e.pass = true;
        }
        Err(err) => e.put("error", err),
    }
    Ok(e)
}

fn m4_bound_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("m4_bound");
    let grid = make_grid(16)?;
    let v = cfg.make_potential(&grid)?;
    let base = cfg.audited_m4_params(cfg.m4_params(&v, cfg.theta.n_cut())?)?;
    let reports = m4_bound_sweep(&grid, &base, cfg.rule, cfg.c_beta, &M4_BOUND_CUTOFFS)?;
    e.put("k", 16);
    let mut sups = Vec::new();
    for r in &reports {
        e.put(format!("N={}.beta0", r.n_cut), r.beta0);
        e.put(format!("N={}.nonresonant", r.n_cut), r.nonresonant);
        e.put(format!("N={}.c_sup", r.n_cut), r.c_sup);
        sups.push(r.c_sup);
    }
    let spread = spread(&sups);
    e.put("spread", spread);
    e.put(
        "tolerance",
        format!("finite, positive, spread <= {M4_BOUND_SPREAD}"),
    );
    e.pass = sups.iter().all(|c| c.is_finite() && *c > 0.0) && spread <= M4_BOUND_SPREAD;
    Ok(e)
}

fn dmvt_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("dmvt");
    let mut maxima = Vec::new();
    for n in DMVT_CUTOFFS {
        let r = dmvt_sweep(&cfg.theta.with_cutoff(n)?, DMVT_SAMPLES, seed_of(cfg))?;
        e.put(format!("N={n}.max_ratio"), r.max_ratio);
        maxima.push(r.max_ratio);
    }
    let spread = spread(&maxima);
    e.put("samples", DMVT_SAMPLES);
    e.put("s", cfg.theta.s());
    e.put("spread", spread);
    e.put("tolerance", format!("finite, spread <= {DMVT_SPREAD}"));
    e.pass = maxima.iter().all(|c| c.is_finite() && *c > 0.0) && spread <= DMVT_SPREAD;
    Ok(e)
}

fn hs_bound_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("hs_bound");
    let grid = make_grid(16)?;
    let theta = cfg.theta;
    let (n, s) = (theta.n_cut(), theta.s());
    let upper = 2f64.powf(s / 2.0) * n.powf(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(cfg));
    let mut violations = 0;
    for _ in 0..HS_BOUND_FIELDS {
        let f = SpectralField::from_fn(&grid, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let root = e1(&f, &theta).sqrt();
        let hs = sobolev_norm(&f, s);
        if !(root <= hs && hs <= upper * root) {
            violations += 1;
        }
    }
    e.put("fields", HS_BOUND_FIELDS);
    e.put("upper_constant", upper);
    e.put("violations", violations);
    e.put("tolerance", "0 violations, no slack");
    e.pass = violations == 0;
    Ok(e)
}

/// (F(Φ_h u) − F(Φ_{−h} u)) / 2h with one Strang step of ±h.
fn centered_difference(
    f: &SpectralField,
    v: &crate::spectral::Potential,
    h: f64,
    functional: impl Fn(&SpectralField) -> Result<f64>,
) -> Result<f64> {
    let plus = advance(f, v, h, 1)?;
    let minus = advance(f, v, -h, 1)?;
    Ok((functional(&plus)? - functional(&minus)?) / (2.0 * h))
}

/// Direct Γ₄ sum for dE¹/dt on K = 8 data against a finite difference of
/// E¹ along the flow, computed on a grid large enough that the data's
/// cubic interactions are resolved.
pub fn de1_fd_check(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    let (k, k_big) = DE1_GRIDS;
    let theta = cfg.theta.with_cutoff(DE1_CUTOFF)?;
    let resonance = ResonanceParams::for_cutoff(cfg.rule, DE1_CUTOFF, cfg.c_beta)?;
    let f = suite_data(cfg, k, &theta)?;
    let v = make_potential(cfg.potential, f.grid())?;
    let p = cfg.audited_m4_params(M4Params::new(theta, resonance, v))?;
    let direct = de1_dt_direct(&f, &p)?;

    let big = f.embed(&make_grid(k_big)?)?;
    let v_big = make_potential(cfg.potential, big.grid())?;
    let fd = centered_difference(&big, &v_big, FD_STEP, |u| Ok(e1(u, &theta)))?;
    Ok((direct, fd))
}

fn de1_fd_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("de1_fd");
    let (direct, fd) = de1_fd_check(cfg)?;
    let err = relative_error(fd, direct);
    e.put("k", DE1_GRIDS.0);
    e.put("embedding_k", DE1_GRIDS.1);
    e.put("N", DE1_CUTOFF);
    e.put("h", FD_STEP);
    e.put("direct", direct);
    e.put("finite_difference", fd);
    e.put("relative_error", err);
    e.put("tolerance", DE1_FD_TOLERANCE);
    e.pass = err < DE1_FD_TOLERANCE;
    Ok(e)
}

/// dE²/dt = I + II at K = 4, N = 1: the resonant Γ₄ sum plus the Γ₆ sum
/// against a finite difference of E² along the flow.
pub fn cancellation_check(cfg: &ExperimentConfig) -> Result<(f64, f64, f64)> {
    let (k, k_big) = DE2_GRIDS;
    let theta = ThetaParams::new(1.0, 1.0)?;
    let resonance = ResonanceParams::fixed(DE2_BETA0)?;
    let f = suite_data(cfg, k, &theta)?;
    let v = make_potential(cfg.potential, f.grid())?;
    let p = cfg.audited_m4_params(M4Params::new(theta, resonance, v))?;
    let terms = de2_dt_terms(&f, &p)?;

    let big = f.embed(&make_grid(k_big)?)?;
    let v_big = make_potential(cfg.potential, big.grid())?;
    let mut p_big = p.clone();
    p_big.potential = v_big.clone();
    let fd = centered_difference(&big, &v_big, FD_STEP, |u| e2(u, &p_big))?;
    Ok((terms.resonant, terms.sextic, fd))
}

fn cancellation_entry(cfg: &ExperimentConfig) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("cancellation");
    let (resonant, sextic, fd) = cancellation_check(cfg)?;
    let direct = resonant + sextic;
    let err = relative_error(fd, direct);
    e.put("k", DE2_GRIDS.0);
    e.put("embedding_k", DE2_GRIDS.1);
    e.put("N", 1);
    e.put("beta0", DE2_BETA0);
    e.put("h", FD_STEP);
    e.put("resonant", resonant);
    e.put("sextic", sextic);
    e.put("finite_difference", fd);
    e.put("relative_error", err);
    e.put("tolerance", DE2_FD_TOLERANCE);
    e.pass = err < DE2_FD_TOLERANCE;
    Ok(e)
}

fn relative_error(measured: f64, reference: f64) -> f64 {
    (measured - reference).abs() / reference.abs()
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}
