use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::initial::initial_data;
use crate::dynamics::{advance, evolve_observed};
use crate::iop::e1;
use crate::modified_energy::{e2, lambda4};
use crate::spectral::EnergyReport;
use crate::{Error, Result};

pub const GROWTH_HEADER: [&str; 7] = ["t", "mass", "energy", "hs_norm", "e1", "e2", "lambda4"];
pub const NSWEEP_HEADER: [&str; 4] = ["N", "e2_t0", "e2_t1", "rel_increment"];
pub const EQUIVALENCE_HEADER: [&str; 2] = ["N", "equiv_ratio"];

/// Increments below this are indistinguishable from conservation roundoff
/// and are clamped to it before taking logarithms.
pub const INCREMENT_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    Completed,
    BlowUp { t: f64, last_good_t: f64 },
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct GrowthRun {
    pub reports: Vec<EnergyReport>,
    pub status: RunStatus,
    pub csv: PathBuf,
    pub status_file: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NsweepRow {
    pub n_cut: f64,
    pub e2_t0: f64,
    pub e2_t1: f64,
    pub rel_increment: f64,
}

#[derive(Clone, Debug)]
pub struct Nsweep {
    pub rows: Vec<NsweepRow>,
    pub failures: Vec<(f64, String)>,
    /// Least-squares slope of log(max(increment, floor)) against log N.
    pub slope: Option<f64>,
    pub csv: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceRow {
    pub n_cut: f64,
    pub ratio: f64,
    /// β₀ was clamped to 1, so M₄ ≡ 0 and the ratio is trivially 0.
    pub clamped: bool,
}

#[derive(Clone, Debug)]
pub struct Equivalence {
    pub rows: Vec<EquivalenceRow>,
    pub failures: Vec<(f64, String)>,
    pub csv: PathBuf,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(Error::from)
}

/// Evolves the configured data and writes `growth.csv` (one row per
/// observation) and `status.txt`.
pub fn run_growth_experiment(cfg: &ExperimentConfig) -> Result<GrowthRun> {
    let grid = cfg.grid()?;
    let v = cfg.make_potential(&grid)?;
    let diag = cfg.m4_params(&v, cfg.theta.n_cut())?;
    let f = initial_data(&cfg.initial, &grid, &cfg.theta)?;

    ensure_dir(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("growth.csv");
    let status_path = cfg.output_dir.join("status.txt");
    let mut w = csv_writer(&csv_path)?;
    w.write_record(GROWTH_HEADER)?;

    let mut reports = Vec::new();
    let mut write_err = None;
    let outcome = evolve_observed(&f, &v, &cfg.stepper, &diag, |r| {
        let row = [r.t, r.mass, r.energy, r.hs_norm, r.e1, r.e2, r.lambda4].map(|x| x.to_string());
        if let Err(e) = w.write_record(&row) {
            write_err.get_or_insert(e);
        }
        reports.push(*r);
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let status = match outcome {
        Ok(_) => RunStatus::Completed,
        Err(Error::BlowUp { t, last_good_t }) => RunStatus::BlowUp { t, last_good_t },
        Err(e) => RunStatus::Failed(e.to_string()),
    };
    let text = match &status {
        RunStatus::Completed => format!("status: completed\nt_end: {}\n", cfg.stepper.t_end),
        RunStatus::BlowUp { t, last_good_t } => {
            format!("status: blowup\nt: {t}\nlast_good_t: {last_good_t}\n")
        }
        RunStatus::Failed(msg) => format!("status: failed\nerror: {msg}\n"),
    };
    write_text(&status_path, &text)?;
    Ok(GrowthRun {
        reports,
        status,
        csv: csv_path,
        status_file: status_path,
    })
}

/// For each N, regenerates θ, β₀ and M₄, evolves over [0, δ_meas] and
/// records |E²(δ_meas) − E²(0)| / E²(0). Writes `nsweep.csv` and
/// `nsweep_summary.txt`.
pub fn run_nsweep(cfg: &ExperimentConfig) -> Result<Nsweep> {
    let results: Vec<(f64, Result<NsweepRow>)> = cfg
        .n_sweep
        .par_iter()
        .map(|&n_cut| (n_cut, nsweep_member(cfg, n_cut)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n_cut, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((n_cut, e.to_string())),
        }
    }

    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n_cut, r.rel_increment.max(INCREMENT_FLOOR)))
        .collect();
    let slope = loglog_slope(&points);

    ensure_dir(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("nsweep.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record(NSWEEP_HEADER)?;
    for r in &rows {
        w.write_record([r.n_cut, r.e2_t0, r.e2_t1, r.rel_increment].map(|x| x.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let mut summary = format!(
        "delta_meas: {}\nincrement_floor: {INCREMENT_FLOOR:e}\nslope: {}\n",
        cfg.delta_meas,
        slope.map_or("undefined".to_string(), |s| s.to_string())
    );
    for (n, msg) in &failures {
        summary.push_str(&format!("failed.N={n}: {msg}\n"));
    }
    write_text(&cfg.output_dir.join("nsweep_summary.txt"), &summary)?;
    Ok(Nsweep {
        rows,
        failures,
        slope,
        csv: csv_path,
    })
}

fn nsweep_member(cfg: &ExperimentConfig, n_cut: f64) -> Result<NsweepRow> {
    let grid = cfg.grid()?;
    let v = cfg.make_potential(&grid)?;
    let p = cfg.m4_params(&v, n_cut)?;
    let f = initial_data(&cfg.initial, &grid, &p.theta)?;
    let e2_t0 = e2(&f, &p)?;
    let u = advance(&f, &v, cfg.stepper.dt, cfg.delta_steps())?;
    if !u.is_finite() {
        return Err(Error::BlowUp {
            t: cfg.delta_meas,
            last_good_t: 0.0,
        });
    }
    let e2_t1 = e2(&u, &p)?;
    Ok(NsweepRow {
        n_cut,
        e2_t0,
        e2_t1,
        rel_increment: (e2_t1 - e2_t0).abs() / e2_t0.abs(),
    })
}

/// Static measurement of |E² − E¹| / E¹ at t = 0 for each N. Writes
/// `equivalence.csv` and `equivalence_summary.txt`, which flags clamped β₀.
pub fn run_equivalence_sweep(cfg: &ExperimentConfig) -> Result<Equivalence> {
    let results: Vec<(f64, Result<EquivalenceRow>)> = cfg
        .n_sweep
        .par_iter()
        .map(|&n_cut| (n_cut, equivalence_member(cfg, n_cut)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n_cut, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((n_cut, e.to_string())),
        }
    }

    ensure_dir(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("equivalence.csv");
    let mut w = csv_writer(&csv_path)?;
    w.write_record(EQUIVALENCE_HEADER)?;
    for r in &rows {
        w.write_record([r.n_cut, r.ratio].map(|x| x.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let mut summary = String::new();
    for r in &rows {
        summary.push_str(&format!("clamped.N={}: {}\n", r.n_cut, r.clamped));
    }
    for (n, msg) in &failures {
        summary.push_str(&format!("failed.N={n}: {msg}\n"));
    }
    write_text(&cfg.output_dir.join("equivalence_summary.txt"), &summary)?;
    Ok(Equivalence {
        rows,
        failures,
        csv: csv_path,
    })
}

fn equivalence_member(cfg: &ExperimentConfig, n_cut: f64) -> Result<EquivalenceRow> {
    let grid = cfg.grid()?;
    let v = cfg.make_potential(&grid)?;
    let p = cfg.m4_params(&v, n_cut)?;
    let f = initial_data(&cfg.initial, &grid, &p.theta)?;
    let energy1 = e1(&f, &p.theta);
    let ratio = lambda4(&p, &f)?.abs() / energy1;
    Ok(EquivalenceRow {
        n_cut,
        ratio,
        clamped: p.resonance.clamped || p.resonance.is_degenerate(),
    })
}

/// Least-squares slope of log y against log x; None with fewer than two
/// distinct abscissae.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// True when no value exceeds its predecessor by more than the relative `slack`.
pub fn nonincreasing_with_slack(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}
