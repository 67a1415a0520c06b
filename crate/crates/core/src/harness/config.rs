//! Experiment configuration: a flat TOML file, validated in full at load.
//!
//! ```toml
//! grid.K = 16
//! theta.N = 4
//! theta.s = 2.0
//! resonance.rule = "torus"        # or "plane", with resonance.alpha
//! potential.preset = "gaussian"   # delta | gaussian (sigma) | constant (c)
//! potential.sigma = 2.0
//! initial.kind = "random_smooth"  # plane_wave | random_smooth | gaussian_bump
//! stepper.dt = 1e-3
//! N_sweep = [4, 8, 16, 32]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use toml::Value;

use crate::dynamics::StepperConfig;
use crate::iop::ThetaParams;
use crate::modified_energy::{beta0_for, M4Params, M4Variant, ResonanceParams, ResonanceRule};
use crate::spectral::{make_grid, make_potential, Mode, Potential, PotentialPreset, TorusGrid};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    PlaneWave {
        alpha: Complex64,
        mode: Mode,
    },
    /// û(n) = A ⟨n⟩^{−p} e^{iφ(n)} with seeded phases.
    RandomSmooth {
        amplitude: f64,
        decay: f64,
        seed: u64,
    },
    /// û(n) = A e^{−w²|n|²/2}.
    GaussianBump {
        amplitude: f64,
        width: f64,
    },
}

/// Fault injection for the verification suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditOptions {
    pub c_scale: f64,
    pub flip_m4_denominator: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            c_scale: 1.0,
            flip_m4_denominator: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub k: usize,
    pub theta: ThetaParams,
    pub rule: ResonanceRule,
    pub c_beta: f64,
    pub potential: PotentialPreset,
    pub initial: InitialSpec,
    pub stepper: StepperConfig,
    pub delta_meas: f64,
    pub n_sweep: Vec<f64>,
    pub output_dir: PathBuf,
    pub audit: AuditOptions,
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<TorusGrid> {
        make_grid(self.k)
    }

    pub fn make_potential(&self, grid: &TorusGrid) -> Result<Potential> {
        make_potential(self.potential, grid)
    }

    /// Diagnostic parameters at cutoff `n_cut`, with β₀ from the configured rule.
    pub fn m4_params(&self, potential: &Potential, n_cut: f64) -> Result<M4Params> {
        let theta = self.theta.with_cutoff(n_cut)?;
        let resonance = ResonanceParams::for_cutoff(self.rule, n_cut, self.c_beta)?;
        Ok(M4Params::new(theta, resonance, potential.clone()))
    }

    /// [`Self::m4_params`] at the configured N with the audit fault injection applied.
    pub fn audited_m4_params(&self, p: M4Params) -> Result<M4Params> {
        let variant = if self.audit.flip_m4_denominator {
            M4Variant::FlippedDenominator
        } else {
            M4Variant::Standard
        };
        let c = p.c * self.audit.c_scale;
        Ok(p.with_c(c)?.with_variant(variant))
    }

    /// Number of Strang steps in the measurement window.
    pub fn delta_steps(&self) -> usize {
        (self.delta_meas / self.stepper.dt).round() as usize
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        if let InitialSpec::RandomSmooth { seed: s, .. } = &mut self.initial {
            *s = seed;
        }
        self
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Parses and validates a config document; missing optional fields take
/// their documented defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
    let mut fields = Fields::default();
    flatten("", &table, &mut fields.values);
    let cfg = build(&mut fields)?;
    if let Some(key) = fields.values.keys().next() {
        return Err(Error::UnknownField(key.clone()));
    }
    Ok(cfg)
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

#[derive(Default)]
struct Fields {
    values: BTreeMap<String, Value>,
}

impl Fields {
    fn take(&mut self, name: &'static str) -> Option<Value> {
        self.values.remove(name)
    }

    fn f64(&mut self, name: &'static str) -> Result<Option<f64>> {
        match self.take(name) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(x)),
            Some(Value::Integer(i)) => Ok(Some(i as f64)),
            Some(v) => Err(type_error(name, "a number", &v)),
        }
    }

    fn int(&mut self, name: &'static str) -> Result<Option<i64>> {
        match self.take(name) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(i)),
            Some(v) => Err(type_error(name, "an integer", &v)),
        }
    }

    fn usize(&mut self, name: &'static str) -> Result<Option<usize>> {
        match self.int(name)? {
            None => Ok(None),
            Some(i) => usize::try_from(i)
                .map(Some)
                .map_err(|_| Error::param(name, format!("must be nonnegative, got {i}"))),
        }
    }

    fn string(&mut self, name: &'static str) -> Result<Option<String>> {
        match self.take(name) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(type_error(name, "a string", &v)),
        }
    }

    fn bool(&mut self, name: &'static str) -> Result<Option<bool>> {
        match self.take(name) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(b)),
            Some(v) => Err(type_error(name, "a boolean", &v)),
        }
    }

    fn array(&mut self, name: &'static str) -> Result<Option<Vec<Value>>> {
        match self.take(name) {
            None => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a)),
            Some(v) => Err(type_error(name, "an array", &v)),
        }
    }
}

fn type_error(name: &'static str, want: &str, got: &Value) -> Error {
    Error::param(name, format!("expected {want}, got {}", got.type_str()))
}

fn build(f: &mut Fields) -> Result<ExperimentConfig> {
    let k = f.usize("grid.K")?.ok_or(Error::MissingField("grid.K"))?;
    make_grid(k)?;

    let n_cut = f.f64("theta.N")?.unwrap_or(4.0);
    if !(n_cut.is_finite() && n_cut > 1.0) {
        return Err(Error::param("theta.N", format!("must be > 1, got {n_cut}")));
    }
    let s = f.f64("theta.s")?.unwrap_or(2.0);
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::param("theta.s", format!("must be > 1, got {s}")));
    }
    let theta = ThetaParams::new(n_cut, s)?;

    let rule_name = f
        .string("resonance.rule")?
        .unwrap_or_else(|| "torus".into());
    let alpha = f.f64("resonance.alpha")?;
    let rule = match rule_name.as_str() {
        "torus" => ResonanceRule::Torus,
        "plane" => ResonanceRule::Plane {
            alpha: alpha.unwrap_or(0.5),
        },
        other => {
            return Err(Error::param(
                "resonance.rule",
                format!("expected \"torus\" or \"plane\", got {other:?}"),
            ))
        }
    };
    let c_beta = f.f64("resonance.c_beta")?.unwrap_or(1.0);
    beta0_for(rule, n_cut, c_beta)?;

    let preset = f
        .string("potential.preset")?
        .unwrap_or_else(|| "gaussian".into());
    let sigma = f.f64("potential.sigma")?;
    let c = f.f64("potential.c")?;
    let potential = match preset.as_str() {
        "delta" => PotentialPreset::Delta,
        "gaussian" => PotentialPreset::Gaussian {
            sigma: sigma.unwrap_or(2.0),
        },
        "constant" => PotentialPreset::Constant {
            c: c.unwrap_or(1.0),
        },
        other => {
            return Err(Error::param(
                "potential.preset",
                format!("expected \"delta\", \"gaussian\" or \"constant\", got {other:?}"),
            ))
        }
    };
    let grid = make_grid(k)?;
    make_potential(potential, &grid)?;

    let initial = build_initial(f, &grid, s)?;

    let defaults = StepperConfig::default();
    let stepper = StepperConfig::new(
        f.f64("stepper.dt")?.unwrap_or(defaults.dt),
        f.f64("stepper.t_end")?.unwrap_or(defaults.t_end),
        f.usize("stepper.stride")?.unwrap_or(defaults.stride),
    )?;

    let delta_meas = f.f64("delta_meas")?.unwrap_or(0.1);
    if !(delta_meas.is_finite() && delta_meas >= 0.0 && delta_meas <= stepper.t_end) {
        return Err(Error::param(
            "delta_meas",
            format!(
                "must lie in [0, stepper.t_end = {}], got {delta_meas}",
                stepper.t_end
            ),
        ));
    }
    let steps = (delta_meas / stepper.dt).round();
    if (steps * stepper.dt - delta_meas).abs() > 1e-9 * delta_meas.max(stepper.dt) {
        return Err(Error::param(
            "delta_meas",
            format!(
                "{delta_meas} is not a whole number of steps of {}",
                stepper.dt
            ),
        ));
    }

    let n_sweep = match f.array("N_sweep")? {
        None => vec![4.0, 8.0, 16.0, 32.0],
        Some(items) => {
            let mut out = Vec::with_capacity(items.len());
            for v in items {
                let n = match v {
                    Value::Integer(i) => i as f64,
                    Value::Float(x) => x,
                    other => return Err(type_error("N_sweep", "an array of numbers", &other)),
                };
                if !(n.is_finite() && n > 1.0) {
                    return Err(Error::param(
                        "N_sweep",
                        format!("values must be > 1, got {n}"),
                    ));
                }
                beta0_for(rule, n, c_beta)?;
                out.push(n);
            }
            if out.is_empty() {
                return Err(Error::param("N_sweep", "must not be empty"));
            }
            out.sort_by(f64::total_cmp);
            out.dedup();
            out
        }
    };

    let output_dir = PathBuf::from(f.string("output_dir")?.unwrap_or_else(|| "out".into()));

    let c_scale = f.f64("audit.c_scale")?.unwrap_or(1.0);
    if !(c_scale.is_finite() && c_scale != 0.0) {
        return Err(Error::param(
            "audit.c_scale",
            format!("must be finite and nonzero, got {c_scale}"),
        ));
    }
    let audit = AuditOptions {
        c_scale,
        flip_m4_denominator: f.bool("audit.flip_m4_denominator")?.unwrap_or(false),
    };

    Ok(ExperimentConfig {
        k,
        theta,
        rule,
        c_beta,
        potential,
        initial,
        stepper,
        delta_meas,
        n_sweep,
        output_dir,
        audit,
    })
}

fn build_initial(f: &mut Fields, grid: &TorusGrid, s: f64) -> Result<InitialSpec> {
    let kind = f
        .string("initial.kind")?
        .unwrap_or_else(|| "random_smooth".into());
    let amplitude = f.f64("initial.amplitude")?;
    let decay = f.f64("initial.decay")?;
    let seed = f.int("initial.seed")?;
    let alpha_re = f.f64("initial.alpha_re")?;
    let alpha_im = f.f64("initial.alpha_im")?;
    let mode = f.array("initial.mode")?;
    let width = f.f64("initial.width")?;

    let positive = |name: &'static str, x: f64| {
        if x.is_finite() && x > 0.0 {
            Ok(x)
        } else {
            Err(Error::param(
                name,
                format!("must be finite and positive, got {x}"),
            ))
        }
    };

    match kind.as_str() {
        "plane_wave" => {
            let mode = match mode {
                None => Mode::new(1, 0),
                Some(items) => {
                    let ints: Vec<i64> = items.iter().filter_map(Value::as_integer).collect();
                    if ints.len() != 2 || items.len() != 2 {
                        return Err(Error::param("initial.mode", "expected [n_x, n_y] integers"));
                    }
                    Mode::new(ints[0], ints[1])
                }
            };
            if !grid.contains(mode) {
                return Err(Error::param(
                    "initial.mode",
                    format!("{mode} is outside the retained modes of K = {}", grid.k()),
                ));
            }
            let alpha = Complex64::new(alpha_re.unwrap_or(1.0), alpha_im.unwrap_or(0.0));
            if !(alpha.re.is_finite() && alpha.im.is_finite()) {
                return Err(Error::param("initial.alpha_re", "must be finite"));
            }
            Ok(InitialSpec::PlaneWave { alpha, mode })
        }
        "random_smooth" => {
            let amplitude = positive("initial.amplitude", amplitude.unwrap_or(1.0))?;
            let decay = decay.unwrap_or(s + 2.0);
            if !(decay.is_finite() && decay > s + 1.0) {
                return Err(Error::param(
                    "initial.decay",
                    format!("must exceed theta.s + 1 = {}, got {decay}", s + 1.0),
                ));
            }
            let seed = seed.unwrap_or(0);
            let seed = u64::try_from(seed).map_err(|_| {
                Error::param("initial.seed", format!("must be nonnegative, got {seed}"))
            })?;
            Ok(InitialSpec::RandomSmooth {
                amplitude,
                decay,
                seed,
            })
        }
        "gaussian_bump" => Ok(InitialSpec::GaussianBump {
            amplitude: positive("initial.amplitude", amplitude.unwrap_or(1.0))?,
            width: positive("initial.width", width.unwrap_or(0.5))?,
        }),
        other => Err(Error::param(
            "initial.kind",
            format!("expected plane_wave, random_smooth or gaussian_bump, got {other:?}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = parse_config("grid.K = 16\n").unwrap();
        assert_eq!(cfg.k, 16);
        assert_eq!(cfg.theta, ThetaParams::new(4.0, 2.0).unwrap());
        assert_eq!(cfg.rule, ResonanceRule::Torus);
        assert_eq!(cfg.c_beta, 1.0);
        assert_eq!(cfg.stepper, StepperConfig::default());
        assert_eq!(cfg.delta_meas, 0.1);
        assert_eq!(cfg.n_sweep, vec![4.0, 8.0, 16.0, 32.0]);
        assert_eq!(
            cfg.initial,
            InitialSpec::RandomSmooth {
                amplitude: 1.0,
                decay: 4.0,
                seed: 0
            }
        );
        assert_eq!(cfg.audit, AuditOptions::default());
    }

    #[test]
    fn sections_and_dotted_keys_agree() {
        let a = parse_config("grid.K = 8\ntheta.N = 2\ntheta.s = 1.5\n").unwrap();
        let b = parse_config("[grid]\nK = 8\n[theta]\nN = 2\ns = 1.5\n").unwrap();
        assert_eq!(a, b);
    }

    fn field_of(err: Error) -> String {
        match err {
            Error::InvalidParameter { name, .. } => name.to_string(),
            Error::MissingField(name) => name.to_string(),
            Error::UnknownField(name) => name,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejections_name_the_field() {
        let cases = [
            ("theta.N = 4\n", "grid.K"),
            (
                "grid.K = 8\nresonance.rule = \"plane\"\nresonance.alpha = 0.9\n",
                "resonance.alpha",
            ),
            ("grid.K = 8\ntheta.N = 1\n", "theta.N"),
            ("grid.K = 8\ntheta.s = 1\n", "theta.s"),
            ("grid.K = 8\nN_sweep = [4, 1]\n", "N_sweep"),
            ("grid.K = 8\nstepper.t_end = 0.05\n", "delta_meas"),
            ("grid.K = 8\ninitial.decay = 2.5\n", "initial.decay"),
            (
                "grid.K = 8\ninitial.kind = \"plane_wave\"\ninitial.mode = [4, 0]\n",
                "initial.mode",
            ),
            (
                "grid.K = 8\npotential.preset = \"gaussian\"\npotential.sigma = -1\n",
                "potential.sigma",
            ),
            ("grid.K = 8\nstepper.dt = \"fast\"\n", "stepper.dt"),
            ("grid.K = 8\ngrid.L = 3\n", "grid.L"),
        ];
        for (text, field) in cases {
            let err = parse_config(text).unwrap_err();
            assert!(err.is_config(), "{text}: {err}");
            assert_eq!(field_of(err), field, "{text}");
        }
        assert!(matches!(
            parse_config("grid.K = 12\n"),
            Err(Error::InvalidGrid(12))
        ));
    }

    #[test]
    fn parse_errors_carry_a_location() {
        let err = parse_config("grid.K = 16\ntheta.N = = 4\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn plane_wave_spec() {
        let cfg = parse_config(
            "grid.K = 16\ninitial.kind = \"plane_wave\"\ninitial.alpha_re = 0.5\ninitial.mode = [2, -1]\n",
        )
        .unwrap();
        assert_eq!(
            cfg.initial,
            InitialSpec::PlaneWave {
                alpha: Complex64::new(0.5, 0.0),
                mode: Mode::new(2, -1)
            }
        );
    }

    #[test]
    fn zero_horizon_needs_zero_window() {
        let cfg = parse_config("grid.K = 8\nstepper.t_end = 0\ndelta_meas = 0\n").unwrap();
        assert_eq!(cfg.stepper.steps(), 0);
    }

    #[test]
    fn seed_override() {
        let cfg = parse_config("grid.K = 8\ninitial.seed = 3\n")
            .unwrap()
            .with_seed(9);
        assert!(matches!(
            cfg.initial,
            InitialSpec::RandomSmooth { seed: 9, .. }
        ));
    }
}
