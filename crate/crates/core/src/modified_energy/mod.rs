//! Higher modified energy E² = E¹ + λ₄(M₄; u).
//!
//! Sums over the hyperplanes Γ₄ and Γ₆ are taken over coefficient indices:
//! a quadruplet (m₁, m₂, m₃, m₄) with m₁ − m₂ + m₃ − m₄ = 0 carries the product
//! û(m₁) conj(û(m₂)) û(m₃) conj(û(m₄)) and the multiplier evaluated at the
//! zero-sum frequencies (m₁, −m₂, m₃, −m₄), since the Fourier coefficient of
//! ū at n is conj(û(−n)).

mod audit;
mod functional;
mod multiplier;
mod resonance;
mod sum;

pub use audit::{
    gamma4_identity_audit, m4_bound_audit, m4_bound_sweep, resonant_zero_audit, Gamma4Report,
    M4BoundReport, ResonantZeroReport,
};
pub use functional::{
    de1_dt_direct, de2_dt_terms, e2, lambda4, lambda4_complex, DE2Terms, GAMMA6_MAX_ACTIVE,
    LAMBDA4_MAX_ACTIVE,
};
pub use multiplier::{m4, m6, theta_sq_alternating, M4Params, M4Variant, ENERGY_FLUX_CONSTANT};
pub use resonance::{
    beta0_for, classify_pair, classify_quadruplet, Beta0, Quadruplet, Resonance, ResonanceParams,
    ResonanceRule,
};
pub use sum::pairwise_sum;
