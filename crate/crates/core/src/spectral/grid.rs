use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::fft::Plans;
use crate::{Error, Result};

/// A lattice frequency n = (n_x, n_y) ∈ ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mode {
    pub x: i64,
    pub y: i64,
}

impl Mode {
    pub const ZERO: Mode = Mode { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Mode { x, y }
    }

    pub fn norm_sq(self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn dot(self, other: Mode) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl Add for Mode {
    type Output = Mode;
    fn add(self, rhs: Mode) -> Mode {
        Mode::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Mode {
    type Output = Mode;
    fn sub(self, rhs: Mode) -> Mode {
        Mode::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        Mode::new(-self.x, -self.y)
    }
}

impl From<(i64, i64)> for Mode {
    fn from((x, y): (i64, i64)) -> Self {
        Mode::new(x, y)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// ⟨n⟩ = √(1 + |n|²).
pub fn japanese_bracket(n: Mode) -> f64 {
    (1.0 + n.norm_sq() as f64).sqrt()
}

/// K×K collocation grid on T² with modes −K/2 ≤ n_x, n_y ≤ K/2 − 1.
///
/// Coefficients on the n_x = −K/2 and n_y = −K/2 lines are held at zero so
/// that the retained set is symmetric under n ↦ −n; there are (K−1)² retained
/// modes.
#[derive(Clone)]
pub struct TorusGrid {
    k: usize,
    plans: Arc<Plans>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid").field("k", &self.k).finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
    }
}

impl Eq for TorusGrid {}

pub fn make_grid(k: usize) -> Result<TorusGrid> {
    TorusGrid::new(k)
}

impl TorusGrid {
    pub fn new(k: usize) -> Result<Self> {
        if k < 4 || !k.is_power_of_two() {
            return Err(Error::InvalidGrid(k));
        }
        Ok(TorusGrid {
            k,
            plans: Arc::new(Plans::new(k)),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest retained |n_x| (and |n_y|).
    pub fn band(&self) -> i64 {
        self.k as i64 / 2 - 1
    }

    pub fn len(&self) -> usize {
        self.k * self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn active_mode_count(&self) -> usize {
        (self.k - 1) * (self.k - 1)
    }

    pub fn contains(&self, n: Mode) -> bool {
        let b = self.band();
        n.x.abs() <= b && n.y.abs() <= b
    }

    /// True for the zeroed n_x = −K/2 or n_y = −K/2 lines.
    pub fn is_nyquist(&self, n: Mode) -> bool {
        let h = self.k as i64 / 2;
        n.x == -h || n.y == -h
    }

    /// Storage offset of a retained mode.
    pub fn index(&self, n: Mode) -> Option<usize> {
        self.contains(n).then(|| self.index_unchecked(n))
    }

    pub(crate) fn index_unchecked(&self, n: Mode) -> usize {
        let k = self.k as i64;
        let ix = n.x.rem_euclid(k) as usize;
        let iy = n.y.rem_euclid(k) as usize;
        ix * self.k + iy
    }

    /// Mode stored at a given offset (Nyquist lines map to −K/2).
    pub fn mode_at(&self, index: usize) -> Mode {
        let k = self.k as i64;
        let wrap = |i: i64| if i < k / 2 { i } else { i - k };
        Mode::new(wrap((index / self.k) as i64), wrap((index % self.k) as i64))
    }

    /// Retained modes in lexicographic order of (n_x, n_y).
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        let b = self.band();
        (-b..=b).flat_map(move |x| (-b..=b).map(move |y| Mode::new(x, y)))
    }

    /// Collocation point x_j = 2π j / K for the sample at `index`.
    pub fn point(&self, index: usize) -> [f64; 2] {
        let h = std::f64::consts::TAU / self.k as f64;
        [(index / self.k) as f64 * h, (index % self.k) as f64 * h]
    }

    pub(crate) fn plans(&self) -> &Plans {
        &self.plans
    }
}
