use super::resonance::{classify_pair, Quadruplet, Resonance, ResonanceParams};
use crate::iop::{theta, ThetaParams};
use crate::spectral::{Mode, Potential};
use crate::{Error, Result};

/// Constant c in dE¹/dt = i c Σ_{Γ₄} (θ₁² − θ₂² + θ₃² − θ₄²) V̂(n₃+n₄) û ū̂ û ū̂.
///
/// With u = Σ û(n) e^{i⟨n,x⟩}, differentiating Σ θ²|û|² along the flow gives
/// i Σ (θ(m₁)² − θ(m₂)²) V̂(m₃−m₄) P; symmetrizing over (m₁,m₂) ↔ (m₃,m₄)
/// (which leaves P and V̂ invariant) yields the alternating sum with c = 1/2.
pub const ENERGY_FLUX_CONSTANT: f64 = 0.5;

/// Fault-injection switch for sensitivity tests of the audits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum M4Variant {
    #[default]
    Standard,
    /// Uses −2 n₁₂·n₁₄ as the denominator.
    FlippedDenominator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct M4Params {
    pub theta: ThetaParams,
    pub resonance: ResonanceParams,
    pub potential: Potential,
    pub c: f64,
    pub variant: M4Variant,
}

impl M4Params {
    pub fn new(theta: ThetaParams, resonance: ResonanceParams, potential: Potential) -> Self {
        M4Params {
            theta,
            resonance,
            potential,
            c: ENERGY_FLUX_CONSTANT,
            variant: M4Variant::Standard,
        }
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::param(
                "m4.c",
                format!("must be finite and nonzero, got {c}"),
            ));
        }
        self.c = c;
        Ok(self)
    }

    pub fn with_variant(mut self, variant: M4Variant) -> Self {
        self.variant = variant;
        self
    }

    /// M₄ once the alternating θ² numerator and V̂(n₃+n₄) are known.
    #[inline]
    pub(crate) fn eval_parts(&self, n12: Mode, n14: Mode, theta_alt: f64, vhat: f64) -> f64 {
        if classify_pair(n12, n14, self.resonance.beta0) == Resonance::Resonant {
            return 0.0;
        }
        let mut denom = 2.0 * n12.dot(n14) as f64;
        if self.variant == M4Variant::FlippedDenominator {
            denom = -denom;
        }
        self.c * theta_alt * vhat / denom
    }
}

/// θ(n₁)² − θ(n₂)² + θ(n₃)² − θ(n₄)².
pub fn theta_sq_alternating(n: [Mode; 4], p: &ThetaParams) -> f64 {
    let t2 = |m: Mode| {
        let t = theta(m, p);
        t * t
    };
    alternate(t2(n[0]), t2(n[1]), t2(n[2]), t2(n[3]))
}

/// a − b + c − d grouped as (a − d) + (c − b), which is exactly zero in
/// floating point whenever a = b, c = d or a = d, b = c (n₁₂ = 0 or n₁₄ = 0).
#[inline]
pub(crate) fn alternate(a: f64, b: f64, c: f64, d: f64) -> f64 {
    (a - d) + (c - b)
}

/// M₄ on Γ₄: zero on Ω_r, otherwise
/// c (θ₁² − θ₂² + θ₃² − θ₄²) V̂(n₃+n₄) / (2 n₁₂·n₁₄).
pub fn m4(q: &Quadruplet, p: &M4Params) -> f64 {
    let n = q.modes();
    if classify_pair(q.n12(), q.n14(), p.resonance.beta0) == Resonance::Resonant {
        return 0.0;
    }
    p.eval_parts(
        q.n12(),
        q.n14(),
        theta_sq_alternating(n, &p.theta),
        p.potential.vhat(n[2] + n[3]),
    )
}

fn m4_unchecked(n1: Mode, n2: Mode, n3: Mode, n4: Mode, p: &M4Params) -> f64 {
    m4(
        &Quadruplet::new(n1, n2, n3, n4).expect("zero-sum by construction"),
        p,
    )
}

/// M₆ on Γ₆:
/// M₄(n₁₂₃,n₄,n₅,n₆)V̂(n₁+n₂) − M₄(n₁,n₂₃₄,n₅,n₆)V̂(n₂+n₃)
/// + M₄(n₁,n₂,n₃₄₅,n₆)V̂(n₃+n₄) − M₄(n₁,n₂,n₃,n₄₅₆)V̂(n₄+n₅).
pub fn m6(n: &[Mode; 6], p: &M4Params) -> Result<f64> {
    let sum = n.iter().fold(Mode::ZERO, |acc, &m| acc + m);
    if !sum.is_zero() {
        return Err(Error::Precondition(format!("sextuple sums to {sum}")));
    }
    let v = |m: Mode| p.potential.vhat(m);
    let [n1, n2, n3, n4, n5, n6] = *n;
    Ok(m4_unchecked(n1 + n2 + n3, n4, n5, n6, p) * v(n1 + n2)
        - m4_unchecked(n1, n2 + n3 + n4, n5, n6, p) * v(n2 + n3)
        + m4_unchecked(n1, n2, n3 + n4 + n5, n6, p) * v(n3 + n4)
        - m4_unchecked(n1, n2, n3, n4 + n5 + n6, p) * v(n4 + n5))
}
