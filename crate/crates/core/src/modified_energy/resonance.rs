use crate::spectral::Mode;
use crate::{Error, Result};

/// How β₀ is tied to the cutoff N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResonanceRule {
    /// β₀ = c_β / N.
    Torus,
    /// β₀ = c_β / N^α with α ∈ [1/2, 3/4].
    Plane { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Beta0 {
    pub value: f64,
    /// The raw rule value exceeded 1 and was clamped.
    pub clamped: bool,
}

pub fn beta0_for(rule: ResonanceRule, n_cut: f64, c_beta: f64) -> Result<Beta0> {
    if !(n_cut.is_finite() && n_cut > 1.0) {
        return Err(Error::param("theta.N", format!("must be > 1, got {n_cut}")));
    }
    if !(c_beta.is_finite() && c_beta > 0.0) {
        return Err(Error::param(
            "resonance.c_beta",
            format!("must be positive, got {c_beta}"),
        ));
    }
    let raw = match rule {
        ResonanceRule::Torus => c_beta / n_cut,
        ResonanceRule::Plane { alpha } => {
            if !(0.5..=0.75).contains(&alpha) {
                return Err(Error::param(
                    "resonance.alpha",
                    format!("must lie in [1/2, 3/4], got {alpha}"),
                ));
            }
            c_beta / n_cut.powf(alpha)
        }
    };
    Ok(Beta0 {
        value: raw.min(1.0),
        clamped: raw > 1.0,
    })
}

/// Resonance-angle threshold β₀ and the rule that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceParams {
    pub beta0: f64,
    pub rule: Option<ResonanceRule>,
    pub c_beta: f64,
    pub clamped: bool,
}

impl ResonanceParams {
    pub fn fixed(beta0: f64) -> Result<Self> {
        if !(beta0 > 0.0 && beta0 <= 1.0) {
            return Err(Error::param(
                "resonance.beta0",
                format!("must lie in (0, 1], got {beta0}"),
            ));
        }
        Ok(ResonanceParams {
            beta0,
            rule: None,
            c_beta: beta0,
            clamped: false,
        })
    }

    pub fn for_cutoff(rule: ResonanceRule, n_cut: f64, c_beta: f64) -> Result<Self> {
        let b = beta0_for(rule, n_cut, c_beta)?;
        Ok(ResonanceParams {
            beta0: b.value,
            rule: Some(rule),
            c_beta,
            clamped: b.clamped,
        })
    }

    /// β₀ ≥ 1 leaves Ω_nr empty, so M₄ ≡ 0 and E² = E¹.
    pub fn is_degenerate(&self) -> bool {
        self.beta0 >= 1.0
    }
}

/// Four frequencies with n₁ + n₂ + n₃ + n₄ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadruplet {
    n: [Mode; 4],
}

impl Quadruplet {
    pub fn new(n1: Mode, n2: Mode, n3: Mode, n4: Mode) -> Result<Self> {
        let sum = n1 + n2 + n3 + n4;
        if !sum.is_zero() {
            return Err(Error::Precondition(format!(
                "quadruplet {n1}, {n2}, {n3}, {n4} sums to {sum}"
            )));
        }
        Ok(Quadruplet {
            n: [n1, n2, n3, n4],
        })
    }

    pub fn modes(&self) -> [Mode; 4] {
        self.n
    }

    pub fn n12(&self) -> Mode {
        self.n[0] + self.n[1]
    }

    pub fn n14(&self) -> Mode {
        self.n[0] + self.n[3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resonance {
    NonResonant,
    Resonant,
}

/// Non-resonant iff n₁₂, n₁₄ ≠ 0 and |cos ∠(n₁₂, n₁₄)| > β₀, tested as
/// (n₁₂·n₁₄)² > β₀² |n₁₂|² |n₁₄|² so that only β₀² is rounded.
#[inline]
pub fn classify_pair(n12: Mode, n14: Mode, beta0: f64) -> Resonance {
    if n12.is_zero() || n14.is_zero() {
        return Resonance::Resonant;
    }
    let dot = n12.dot(n14) as f64;
    if dot * dot > beta0 * beta0 * (n12.norm_sq() as f64) * (n14.norm_sq() as f64) {
        Resonance::NonResonant
    } else {
        Resonance::Resonant
    }
}

pub fn classify_quadruplet(q: &Quadruplet, r: &ResonanceParams) -> Resonance {
    classify_pair(q.n12(), q.n14(), r.beta0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Quadruplet {
        Quadruplet::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    #[test]
    fn orthogonal_pair_is_resonant() {
        let quad = q((1, 0), (0, 1), (-1, 0), (0, -1));
        assert_eq!(quad.n12(), Mode::new(1, 1));
        assert_eq!(quad.n14(), Mode::new(1, -1));
        for b in [1e-6, 0.1, 1.0] {
            let r = ResonanceParams::fixed(b).unwrap();
            assert_eq!(classify_quadruplet(&quad, &r), Resonance::Resonant);
        }
    }

    #[test]
    fn parallel_pair_is_nonresonant() {
        let quad = q((2, 0), (-1, 0), (0, 0), (-1, 0));
        for b in [1e-6, 0.5, 0.999] {
            let r = ResonanceParams::fixed(b).unwrap();
            assert_eq!(classify_quadruplet(&quad, &r), Resonance::NonResonant);
        }
    }

    #[test]
    fn vanishing_n12_is_resonant() {
        let quad = q((1, 0), (-1, 0), (2, 0), (-2, 0));
        let r = ResonanceParams::fixed(1e-9).unwrap();
        assert_eq!(classify_quadruplet(&quad, &r), Resonance::Resonant);
    }

    #[test]
    fn rejects_nonzero_sum() {
        assert!(Quadruplet::new(Mode::new(1, 0), Mode::ZERO, Mode::ZERO, Mode::ZERO).is_err());
    }

    #[test]
    fn beta0_rules() {
        let t = beta0_for(ResonanceRule::Torus, 16.0, 1.0).unwrap();
        assert_eq!(
            t,
            Beta0 {
                value: 1.0 / 16.0,
                clamped: false
            }
        );
        let p = beta0_for(ResonanceRule::Plane { alpha: 0.5 }, 16.0, 1.0).unwrap();
        assert_eq!(p.value, 0.25);
        assert!(matches!(
            beta0_for(ResonanceRule::Plane { alpha: 0.9 }, 16.0, 1.0),
            Err(Error::InvalidParameter {
                name: "resonance.alpha",
                ..
            })
        ));
        let c = beta0_for(ResonanceRule::Torus, 4.0, 8.0).unwrap();
        assert_eq!(
            c,
            Beta0 {
                value: 1.0,
                clamped: true
            }
        );
        assert!(beta0_for(ResonanceRule::Torus, 1.0, 1.0).is_err());
    }
}
