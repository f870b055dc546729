//! Non-centred Hardy-Littlewood maximal function and the maximal Hilbert
//! transform on grid functions.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Radix2;
use crate::spectral::GridFunction;

/// Interval lengths (in samples) used by [`maximal_function`]: every length
/// up to 16, then powers of two and three times powers of two.
pub fn maximal_ladder(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=16.min(n)).collect();
    let mut l = 16;
    while l <= n {
        out.push(l);
        if 3 * l / 2 <= n {
            out.push(3 * l / 2);
        }
        l *= 2;
    }
    out.push(n);
    out.sort_unstable();
    out.dedup();
    out
}

/// `M f(x_j) = max |I|^{-1} sum_{i in I} |f_i|` over runs `I` of
/// consecutive samples containing `j`, with lengths from
/// [`maximal_ladder`]. Runs stay inside the grid.
pub fn maximal_function(f: &GridFunction) -> Result<GridFunction> {
    let n = f.len();
    let abs = f.moduli();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for (i, v) in abs.iter().enumerate() {
        prefix.push(prefix[i] + v);
    }
    let mut best = abs.clone();
    let mut dq: VecDeque<usize> = VecDeque::new();
    for l in maximal_ladder(n) {
        let starts = n - l + 1;
        let avg: Vec<f64> = (0..starts).map(|a| (prefix[a + l] - prefix[a]) / l as f64).collect();
        // sliding max of avg over starts a in [j + 1 - l, j]
        dq.clear();
        let mut next = 0usize;
        for (j, b) in best.iter_mut().enumerate() {
            while next <= j && next < starts {
                while dq.back().is_some_and(|&i| avg[i] <= avg[next]) {
                    dq.pop_back();
                }
                dq.push_back(next);
                next += 1;
            }
            while dq.front().is_some_and(|&i| i + l <= j) {
                dq.pop_front();
            }
            if let Some(&i) = dq.front() {
                if avg[i] > *b {
                    *b = avg[i];
                }
            }
        }
    }
    GridFunction::from_real(f.half_width(), &best)
}

/// Truncation radii `2h, 4h, ...` up to `2T`.
pub fn hilbert_ladder(f: &GridFunction) -> Vec<f64> {
    let h = f.spacing();
    let mut out = Vec::new();
    let mut eps = 2.0 * h;
    while eps <= 2.0 * f.half_width() {
        out.push(eps);
        eps *= 2.0;
    }
    out
}

/// `H_eps f(x_j) = h sum_{|x_j - x_i| > eps} f_i / (x_j - x_i)` for one
/// radius (non-periodic: the input is zero outside the grid).
pub fn truncated_hilbert(f: &GridFunction, eps: f64) -> Result<Vec<Complex64>> {
    Ok(truncated_hilbert_many(f, &[eps])?.remove(0))
}

fn truncated_hilbert_many(f: &GridFunction, ladder: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    let n = f.len();
    let m = 2 * n;
    let h = f.spacing();
    let plan = Radix2::new(m)?;
    let mut fhat = vec![Complex64::new(0.0, 0.0); m];
    fhat[..n].copy_from_slice(f.samples());
    plan.forward(&mut fhat);
    let mut out = Vec::with_capacity(ladder.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for &eps in ladder {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for d in 1..n as i64 {
            let dist = d as f64 * h;
            if dist > eps {
                // h * 1 / (d h)
                let v = 1.0 / d as f64;
                buf[d as usize] = Complex64::new(v, 0.0);
                buf[m - d as usize] = Complex64::new(-v, 0.0);
            }
        }
        plan.forward(&mut buf);
        for (b, x) in buf.iter_mut().zip(&fhat) {
            *b *= x;
        }
        plan.inverse(&mut buf);
        let scale = 1.0 / m as f64;
        out.push(buf[..n].iter().map(|z| z * scale).collect());
    }
    Ok(out)
}

/// `H* f = max_eps |H_eps f|` over the ladder.
pub fn maximal_hilbert(f: &GridFunction, ladder: &[f64]) -> Result<GridFunction> {
    if ladder.is_empty() {
        return Err(Error::TooFew { need: 1, got: 0 });
    }
    if ladder.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::OutOfRange("truncation radii must be finite and nonnegative".into()));
    }
    let all = truncated_hilbert_many(f, ladder)?;
    let mut best = vec![0.0f64; f.len()];
    for vals in &all {
        for (b, z) in best.iter_mut().zip(vals) {
            *b = b.max(z.norm());
        }
    }
    GridFunction::from_real(f.half_width(), &best)
}
