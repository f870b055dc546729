//! In-place radix-2 complex FFT.
//!
//! Twiddle factors are evaluated directly with `sin`/`cos` per entry (no
//! recurrence) and stored stage by stage, so every butterfly stage reads its
//! table contiguously.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Precomputed plan for transforms of one power-of-two length.
#[derive(Debug, Clone)]
pub struct Radix2 {
    n: usize,
    // stage with half-length m occupies twiddles[m - 1 .. 2m - 1]
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let mut twiddles = Vec::with_capacity(n.saturating_sub(1));
        let mut m = 1;
        while m < n {
            for j in 0..m {
                let theta = -PI * (j as f64) / (m as f64);
                twiddles.push(Complex64::new(libm::cos(theta), libm::sin(theta)));
            }
            m <<= 1;
        }
        Ok(Self { n, twiddles })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `X_k = sum_j x_j e^{-2 pi i jk/n}`, unnormalized.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, false);
    }

    /// `x_j = sum_k X_k e^{+2 pi i jk/n}`, unnormalized.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, true);
    }

    fn run(&self, buf: &mut [Complex64], conj: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        let n = self.n;
        if n <= 1 {
            return;
        }
        bit_reverse(buf);
        let mut m = 1;
        while m < n {
            let tw = &self.twiddles[m - 1..2 * m - 1];
            for chunk in buf.chunks_exact_mut(2 * m) {
                let (lo, hi) = chunk.split_at_mut(m);
                for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let w = if conj { w.conj() } else { *w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            m <<= 1;
        }
    }
}

fn bit_reverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
}

/// Convenience: forward transform of a fresh copy.
pub fn fft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = Radix2::new(input.len())?;
    let mut out = input.to_vec();
    plan.forward(&mut out);
    Ok(out)
}
