use num_complex::Complex64;
use rayon::prelude::*;

use super::multiplier::{alternate, m6, M4Params};
use super::resonance::{classify_pair, Resonance};
use super::sum::pairwise_sum;
use crate::iop::{e1, theta};
use crate::spectral::{Mode, SpectralField};
use crate::{Error, Result};

/// Active-mode budget for Γ₄ sums (K = 16 has 225 retained modes).
pub const LAMBDA4_MAX_ACTIVE: usize = 256;
/// Active-mode budget for the Γ₆ sum in dE²/dt.
pub const GAMMA6_MAX_ACTIVE: usize = 25;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Active modes of a field with the per-mode tables used by the Γ₄ loops.
struct Active {
    modes: Vec<Mode>,
    coeffs: Vec<Complex64>,
    theta_sq: Vec<f64>,
    /// Grid storage index → position in `modes`.
    lookup: Vec<Option<usize>>,
    grid_k: i64,
}

impl Active {
    fn new(f: &SpectralField, p: &M4Params, budget: usize, what: &'static str) -> Result<Self> {
        let active = f.active();
        if active.len() > budget {
            return Err(Error::BudgetExceeded {
                what,
                active: active.len(),
                budget,
            });
        }
        let grid = f.grid();
        let mut lookup = vec![None; grid.len()];
        for (pos, (n, _)) in active.iter().enumerate() {
            lookup[grid.index_unchecked(*n)] = Some(pos);
        }
        Ok(Active {
            theta_sq: active
                .iter()
                .map(|(n, _)| {
                    let t = theta(*n, &p.theta);
                    t * t
                })
                .collect(),
            modes: active.iter().map(|(n, _)| *n).collect(),
            coeffs: active.iter().map(|(_, c)| *c).collect(),
            lookup,
            grid_k: grid.k() as i64,
        })
    }

    fn find(&self, n: Mode) -> Option<usize> {
        let b = self.grid_k / 2 - 1;
        if n.x.abs() > b || n.y.abs() > b {
            return None;
        }
        let ix = n.x.rem_euclid(self.grid_k) as usize;
        let iy = n.y.rem_euclid(self.grid_k) as usize;
        self.lookup[ix * self.grid_k as usize + iy]
    }
}

/// Table of V̂ on the difference lattice |n_x|, |n_y| ≤ K − 2.
struct DifferenceTable {
    reach: i64,
    values: Vec<f64>,
}

impl DifferenceTable {
    fn new(p: &M4Params, k: i64) -> Self {
        let reach = k - 2;
        let side = (2 * reach + 1) as usize;
        let mut values = Vec::with_capacity(side * side);
        for x in -reach..=reach {
            for y in -reach..=reach {
                values.push(p.potential.vhat(Mode::new(x, y)));
            }
        }
        DifferenceTable { reach, values }
    }

    #[inline]
    fn get(&self, n: Mode) -> f64 {
        let side = 2 * self.reach + 1;
        self.values[((n.x + self.reach) * side + n.y + self.reach) as usize]
    }
}

/// Which part of the Γ₄ flux sum to keep.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Flux {
    All,
    ResonantOnly,
}

/// Σ over coefficient quadruplets of `term(m₁, m₂, m₃, m₄)` · P, reduced
/// pairwise per m₁ and then across m₁.
fn gamma4_sum(act: &Active, term: impl Fn(usize, usize, usize, usize) -> f64 + Sync) -> Complex64 {
    let n = act.modes.len();
    let partials: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut terms = Vec::new();
            for b in 0..n {
                let left = act.coeffs[a] * act.coeffs[b].conj();
                for c in 0..n {
                    let Some(d) = act.find(act.modes[a] - act.modes[b] + act.modes[c]) else {
                        continue;
                    };
                    let w = term(a, b, c, d);
                    if w != 0.0 {
                        terms.push(w * left * act.coeffs[c] * act.coeffs[d].conj());
                    }
                }
            }
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&partials)
}

/// λ₄(M₄; f) including its (roundoff-level) imaginary part.
pub fn lambda4_complex(p: &M4Params, f: &SpectralField) -> Result<Complex64> {
    let act = Active::new(f, p, LAMBDA4_MAX_ACTIVE, "lambda4")?;
    let vhat = DifferenceTable::new(p, act.grid_k);
    Ok(gamma4_sum(&act, |a, b, c, d| {
        let (m1, m2, m3, m4) = (act.modes[a], act.modes[b], act.modes[c], act.modes[d]);
        let t = &act.theta_sq;
        let alt = alternate(t[a], t[b], t[c], t[d]);
        p.eval_parts(m1 - m2, m1 - m4, alt, vhat.get(m3 - m4))
    }))
}

/// λ₄(M₄; f) = Σ_{Γ₄} M₄(n₁,…,n₄) û(n₁) ū̂(n₂) û(n₃) ū̂(n₄), real part.
pub fn lambda4(p: &M4Params, f: &SpectralField) -> Result<f64> {
    lambda4_complex(p, f).map(|z| z.re)
}

/// E²(f) = E¹(f) + λ₄(M₄; f).
pub fn e2(f: &SpectralField, p: &M4Params) -> Result<f64> {
    Ok(e1(f, &p.theta) + lambda4(p, f)?)
}

fn flux(f: &SpectralField, p: &M4Params, part: Flux, budget: usize) -> Result<Complex64> {
    let act = Active::new(f, p, budget, "gamma4 flux")?;
    let vhat = DifferenceTable::new(p, act.grid_k);
    let sum = gamma4_sum(&act, |a, b, c, d| {
        let (m1, m2, m3, m4) = (act.modes[a], act.modes[b], act.modes[c], act.modes[d]);
        if part == Flux::ResonantOnly
            && classify_pair(m1 - m2, m1 - m4, p.resonance.beta0) == Resonance::NonResonant
        {
            return 0.0;
        }
        let t = &act.theta_sq;
        let alt = alternate(t[a], t[b], t[c], t[d]);
        alt * vhat.get(m3 - m4)
    });
    Ok(I * p.c * sum)
}

/// dE¹/dt = i c Σ_{Γ₄} (θ₁² − θ₂² + θ₃² − θ₄²) V̂(n₃+n₄) û ū̂ û ū̂.
pub fn de1_dt_direct(f: &SpectralField, p: &M4Params) -> Result<f64> {
    Ok(flux(f, p, Flux::All, LAMBDA4_MAX_ACTIVE)?.re)
}

/// The two pieces of dE²/dt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DE2Terms {
    /// i c Σ over resonant quadruplets of the dE¹/dt summand.
    pub resonant: f64,
    /// −i Σ_{Γ₆} M₆ û ū̂ û ū̂ û ū̂.
    pub sextic: f64,
    /// Imaginary residues of the two sums.
    pub imag: [f64; 2],
}

impl DE2Terms {
    pub fn total(&self) -> f64 {
        self.resonant + self.sextic
    }
}

/// dE²/dt = I + II, evaluated by enumeration (tiny supports only).
pub fn de2_dt_terms(f: &SpectralField, p: &M4Params) -> Result<DE2Terms> {
    let act = Active::new(f, p, GAMMA6_MAX_ACTIVE, "dE2/dt")?;
    let resonant = flux(f, p, Flux::ResonantOnly, GAMMA6_MAX_ACTIVE)?;

    let n = act.modes.len();
    let partials: Vec<Result<Complex64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut terms = Vec::new();
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            let m = &act.modes;
                            let Some(g) = act.find(m[a] - m[b] + m[c] - m[d] + m[e]) else {
                                continue;
                            };
                            let freqs = [m[a], -m[b], m[c], -m[d], m[e], -m[g]];
                            let w = m6(&freqs, p)?;
                            if w != 0.0 {
                                let z = &act.coeffs;
                                terms.push(
                                    w * z[a]
                                        * z[b].conj()
                                        * z[c]
                                        * z[d].conj()
                                        * z[e]
                                        * z[g].conj(),
                                );
                            }
                        }
                    }
                }
            }
            Ok(pairwise_sum(&terms))
        })
        .collect();
    let partials = partials.into_iter().collect::<Result<Vec<_>>>()?;
    let sextic = -I * pairwise_sum(&partials);

    Ok(DE2Terms {
        resonant: resonant.re,
        sextic: sextic.re,
        imag: [resonant.im, sextic.im],
    })
}
