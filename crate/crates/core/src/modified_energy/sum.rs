use num_complex::Complex64;

/// Pairwise (tree) summation; the result depends only on the order of
/// `terms`, not on how callers partition the work around it.
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if terms.len() <= LEAF {
        return terms.iter().sum();
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}
