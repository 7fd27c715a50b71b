//! Complex-vector utilities and the classical reference stack.
//!
//! Everything here uses the unnormalized forward kernel `e^{-2πi jk/N}`; the
//! inverse FFT carries the `1/N` factor. Quadratic phases `e^{±iπ t²/N}` are
//! evaluated after reducing `t² mod 2N` in integer arithmetic, which keeps
//! them accurate for large `t`.

use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QbaError, Result};

/// A non-empty sequence of finite complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(QbaError::Size("complex vector must be non-empty".into()));
        }
        if let Some(index) = entries.iter().position(|z| !z.is_finite()) {
            return Err(QbaError::NonFinite { index });
        }
        Ok(Self(entries))
    }

    /// Builds a vector from real parts only.
    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.0)
    }
}

impl Deref for ComplexVec {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVec {
    type Error = QbaError;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ComplexVec> for Vec<Complex64> {
    fn from(v: ComplexVec) -> Self {
        v.0
    }
}

pub fn l2_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest componentwise `|a_i - b_i|`. Panics on length mismatch.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "max_abs_diff: length mismatch");
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}

/// `‖a - reference‖₂ / ‖reference‖₂`, or the absolute error when the
/// reference is the zero vector.
pub fn relative_l2_error(a: &[Complex64], reference: &[Complex64]) -> f64 {
    assert_eq!(
        a.len(),
        reference.len(),
        "relative_l2_error: length mismatch"
    );
    let diff: f64 = a
        .iter()
        .zip(reference)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = l2_norm(reference);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `e^{sign·iπ t²/n}` with `t² mod 2n` taken exactly.
pub fn chirp_phase(n: usize, t: usize, sign: f64) -> Complex64 {
    debug_assert!(n >= 1);
    let modulus = 2 * n as u128;
    let r = (t as u128 * t as u128) % modulus;
    Complex64::from_polar(1.0, sign * PI * r as f64 / n as f64)
}

/// Unit-modulus twiddles `e^{∓2πi k/len}` for `k < len`.
fn twiddles(len: usize, inverse: bool) -> Vec<Complex64> {
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..len)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
        .collect()
}

/// Direct O(N²) evaluation of `y_k = Σ_j x_j e^{-2πi jk/N}`.
pub fn dft_direct(x: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.is_empty() {
        return Err(QbaError::Size("dft_direct: input is empty".into()));
    }
    let n = x.len();
    let w = twiddles(n, false);
    let y = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &xj in x {
                acc += xj * w[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect();
    Ok(y)
}

/// In-place iterative radix-2 FFT (bit-reversal permutation followed by
/// butterfly stages). The inverse includes the `1/len` factor.
pub fn fft_in_place(data: &mut [Complex64], inverse: bool) -> Result<()> {
    let len = data.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(QbaError::Size(format!(
            "fft_radix2: length {len} is not a power of two"
        )));
    }
    if len == 1 {
        return Ok(());
    }
    let bits = len.trailing_zeros();
    for i in 0..len {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    let w = twiddles(len, inverse);
    let mut half = 1;
    while half < len {
        let stride = len / (2 * half);
        for start in (0..len).step_by(2 * half) {
            for k in 0..half {
                let t = w[k * stride] * data[start + k + half];
                let u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
        half *= 2;
    }

    if inverse {
        let scale = 1.0 / len as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }
    Ok(())
}

/// Radix-2 FFT returning a new vector.
pub fn fft_radix2(x: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    let mut out = x.to_vec();
    fft_in_place(&mut out, inverse)?;
    Ok(out)
}

/// Circular convolution by the defining sum; the O(M²) oracle.
pub fn convolve_circular_direct(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    check_conv_lengths(a, b)?;
    let m = a.len();
    Ok((0..m)
        .map(|k| {
            a.iter()
                .enumerate()
                .map(|(j, &aj)| aj * b[(k + m - j) % m])
                .sum()
        })
        .collect())
}

/// `c_k = Σ_j a_j b_{(k-j) mod M}`. Power-of-two lengths go through the FFT;
/// anything else falls back to the direct sum.
pub fn convolve_circular(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    check_conv_lengths(a, b)?;
    if !a.len().is_power_of_two() {
        return convolve_circular_direct(a, b);
    }
    let mut fa = fft_radix2(a, false)?;
    let fb = fft_radix2(b, false)?;
    fa.iter_mut().zip(&fb).for_each(|(p, q)| *p *= q);
    fft_in_place(&mut fa, true)?;
    Ok(fa)
}

fn check_conv_lengths(a: &[Complex64], b: &[Complex64]) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return Err(QbaError::Size(format!(
            "circular convolution needs equal non-zero lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Smallest power of two `M` with `M >= 2n - 1`.
pub fn bluestein_length(n: usize) -> usize {
    (2 * n).saturating_sub(1).max(1).next_power_of_two()
}

/// Length-`len` chirp kernel `e^{+iπ t²/n}` laid out for circular indexing:
/// `b[t]` for `0 <= t < n`, mirrored into `b[len - t]` for `1 <= t < n`, zero
/// in between. Requires `len >= 2n - 1`.
pub fn wrapped_chirp_kernel(n: usize, len: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(QbaError::Argument(
            "kernel length n must be positive".into(),
        ));
    }
    if len < 2 * n - 1 {
        return Err(QbaError::Size(format!(
            "workspace of {len} is too small for n = {n} (needs {})",
            2 * n - 1
        )));
    }
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    for t in 0..n {
        let v = chirp_phase(n, t, 1.0);
        b[t] = v;
        if t > 0 {
            b[len - t] = v;
        }
    }
    Ok(b)
}

/// N-point DFT for arbitrary N via chirp, power-of-two circular convolution
/// and de-chirp.
pub fn bluestein_classical(x: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.is_empty() {
        return Err(QbaError::Size("bluestein_classical: input is empty".into()));
    }
    let n = x.len();
    let len = bluestein_length(n);
    let chirp: Vec<Complex64> = (0..n).map(|t| chirp_phase(n, t, -1.0)).collect();

    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for (slot, (&xj, &c)) in a.iter_mut().zip(x.iter().zip(&chirp)) {
        *slot = xj * c;
    }
    let mut kernel = wrapped_chirp_kernel(n, len)?;

    fft_in_place(&mut a, false)?;
    fft_in_place(&mut kernel, false)?;
    a.iter_mut().zip(&kernel).for_each(|(p, q)| *p *= q);
    fft_in_place(&mut a, true)?;

    Ok(a.into_iter()
        .take(n)
        .zip(chirp)
        .map(|(c, w)| c * w)
        .collect())
}
