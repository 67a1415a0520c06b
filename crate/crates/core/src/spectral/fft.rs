use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse plans at K and at the zero-padded size 2K.
pub(crate) struct Plans {
    pub(crate) forward: Arc<dyn Fft<f64>>,
    pub(crate) inverse: Arc<dyn Fft<f64>>,
    pub(crate) padded_forward: Arc<dyn Fft<f64>>,
    pub(crate) padded_inverse: Arc<dyn Fft<f64>>,
}

impl Plans {
    pub(crate) fn new(k: usize) -> Self {
        let mut planner = FftPlanner::new();
        Plans {
            forward: planner.plan_fft_forward(k),
            inverse: planner.plan_fft_inverse(k),
            padded_forward: planner.plan_fft_forward(2 * k),
            padded_inverse: planner.plan_fft_inverse(2 * k),
        }
    }
}

/// Unnormalized 2D transform of a row-major n×n buffer.
pub(crate) fn transform2(buf: &mut [Complex64], n: usize, fft: &dyn Fft<f64>) {
    debug_assert_eq!(buf.len(), n * n);
    debug_assert_eq!(fft.len(), n);
    fft.process(buf);
    transpose(buf, n);
    fft.process(buf);
    transpose(buf, n);
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
