//! Pseudospectral simulator for the periodic Hartree equation
//!
//! ```text
//! i u_t + Δu = (V ∗ |u|²) u,    x ∈ T² = [0, 2π)²
//! ```
//!
//! together with the machinery of the upside-down I-method: the multiplier
//! θ and operator 𝒟, the modified energies E¹ = ‖𝒟u‖² and E² = E¹ + λ₄(M₄; u),
//! the resonant/non-resonant split of the four-wave hyperplane Γ₄, and exact
//! formulas for dE¹/dt and dE²/dt that can be checked against finite
//! differences along the numerical flow.
//!
//! Fourier convention: u(x) = Σ_n û(n) e^{i⟨n,x⟩}, so the mass is Σ|û(n)|²
//! and convolution with V is coefficient-wise multiplication by V̂.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod iop;
pub mod modified_energy;
pub mod spectral;

pub use error::{Error, Result};
