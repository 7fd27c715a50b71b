//! Deterministic inputs shared by the benchmarks.

use qba_core::{Complex64, ComplexVec};

/// Unit-norm vector with a cheap, reproducible pattern of entries.
pub fn test_vector(n: usize) -> ComplexVec {
    let raw: Vec<Complex64> = (0..n)
        .map(|j| {
            let t = j as f64;
            Complex64::new((0.7 * t).sin() + 0.1, (1.3 * t).cos())
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ComplexVec::new(raw.into_iter().map(|z| z / norm).collect()).expect("entries are finite")
}
