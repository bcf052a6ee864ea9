//! Unscrambled Halton sequence.

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Largest supported dimension (one prime base per axis).
pub const MAX_DIM: usize = PRIMES.len();

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * scale;
        index /= base;
        scale *= inv_base;
    }
    value
}

/// The first `count` Halton points in `[0,1)^dim`, starting at index 1,
/// bases equal to the first `dim` primes.
///
/// # Panics
/// If `dim` is zero or larger than [`MAX_DIM`].
pub fn halton_points(count: usize, dim: usize) -> Vec<Vec<f64>> {
    assert!((1..=MAX_DIM).contains(&dim), "Halton dimension must be in 1..={MAX_DIM}");
    (1..=count as u64)
        .map(|i| PRIMES[..dim].iter().map(|&b| radical_inverse(i, b)).collect())
        .collect()
}
