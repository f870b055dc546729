//! Sampled functions on a symmetric interval and their discrete spectra.
//!
//! A [`GridFunction`] holds `n` samples on `[-T, T)` at `x_j = -T + j h`,
//! `h = 2T/n`. Its [`Spectrum`] approximates the continuous transform
//! `F(xi) = int f(x) e^{-2 pi i xi x} dx` at the grid frequencies
//! `xi_m = m / (2T)`, `m in [-n/2, n/2)`:
//!
//! ```text
//! F_m = h * sum_j f(x_j) e^{-2 pi i xi_m x_j}
//! f_j = (1 / 2T) * sum_m F_m e^{2 pi i xi_m x_j}
//! ```
//!
//! so that norms and plateau values are on the scale of the continuum
//! objects.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::Radix2;
use crate::lacunary::FrequencyInterval;
use crate::measures::LpNorm;

const GRID_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

fn check_half_width(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::BadHalfWidth(t))
    }
}

fn check_len(n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Signed frequency index of storage slot `i` in natural FFT order.
#[inline]
pub(crate) fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
pub(crate) fn slot_of(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Complex samples on the uniform grid `x_j = -T + j h` over `[-T, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    half_width: f64,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(half_width: f64, samples: Vec<Complex64>) -> Result<Self> {
        check_half_width(half_width)?;
        check_len(samples.len())?;
        check_finite(&samples)?;
        Ok(Self { half_width, samples })
    }

    pub fn from_real(half_width: f64, samples: &[f64]) -> Result<Self> {
        Self::new(half_width, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(half_width: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_half_width(half_width)?;
        check_len(n)?;
        let h = 2.0 * half_width / n as f64;
        let samples = (0..n).map(|j| f(-half_width + j as f64 * h)).collect();
        Self::new(half_width, samples)
    }

    pub fn zeros(half_width: f64, n: usize) -> Result<Self> {
        Self::new(half_width, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn nyquist(&self) -> f64 {
        self.len() as f64 / (4.0 * self.half_width)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.len() == other.len() && self.half_width == other.half_width
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction { half_width: self.half_width, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch("operands live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(GridFunction { half_width: self.half_width, samples })
    }

    /// Periodic translation `g(x) = f(x - dx)`; `dx` must be a multiple of
    /// the spacing.
    pub fn translate(&self, dx: f64) -> Result<GridFunction> {
        let steps = dx / self.spacing();
        let k = libm::round(steps);
        if (steps - k).abs() > GRID_TOL * steps.abs().max(1.0) {
            return Err(Error::OutOfRange("translation is not a whole number of samples".into()));
        }
        let n = self.len() as i64;
        let shift = (k as i64).rem_euclid(n) as usize;
        let mut samples = self.samples.clone();
        samples.rotate_right(shift);
        Ok(GridFunction { half_width: self.half_width, samples })
    }
}

/// Grid-frequency coefficients of a [`GridFunction`], stored in natural FFT
/// order (slot `i` holds `m = i` for `i < n/2`, `m = i - n` otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    half_width: f64,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(half_width: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        check_half_width(half_width)?;
        check_len(coeffs.len())?;
        check_finite(&coeffs)?;
        Ok(Self { half_width, coeffs })
    }

    /// Spectrum whose coefficient at each grid frequency is `symbol(xi)`.
    pub fn from_symbol<S: Into<Complex64>>(half_width: f64, n: usize, symbol: impl Fn(f64) -> S) -> Result<Self> {
        check_half_width(half_width)?;
        check_len(n)?;
        let coeffs = (0..n)
            .map(|i| symbol(signed_index(i, n) as f64 / (2.0 * half_width)).into())
            .collect();
        Self::new(half_width, coeffs)
    }

    pub fn zeros(half_width: f64, n: usize) -> Result<Self> {
        Self::new(half_width, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nyquist(&self) -> f64 {
        self.len() as f64 / (4.0 * self.half_width)
    }

    pub fn freq_step(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    /// Frequency `xi_m = m / 2T`.
    pub fn freq(&self, m: i64) -> f64 {
        m as f64 / (2.0 * self.half_width)
    }

    pub fn index_range(&self) -> core::ops::Range<i64> {
        let h = (self.len() / 2) as i64;
        -h..h
    }

    /// Grid index of `xi` if it lies on the frequency grid.
    pub fn grid_index(&self, xi: f64) -> Option<i64> {
        let q = xi * 2.0 * self.half_width;
        let m = libm::round(q);
        ((q - m).abs() <= GRID_TOL * q.abs().max(1.0)).then_some(m as i64)
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        if self.index_range().contains(&m) {
            self.coeffs[slot_of(m, self.len())]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set_coeff(&mut self, m: i64, value: Complex64) -> Result<()> {
        if !self.index_range().contains(&m) {
            return Err(Error::OutOfRange("frequency index beyond the grid".into()));
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite(slot_of(m, self.len())));
        }
        let n = self.len();
        self.coeffs[slot_of(m, n)] = value;
        Ok(())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `(m, F_m)` pairs in ascending frequency order.
    pub fn iter_ordered(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.index_range().map(move |m| (m, self.coeff(m)))
    }

    /// Range of grid indices whose frequency lies in the half-open interval.
    pub fn indices_in(&self, iv: &FrequencyInterval) -> core::ops::Range<i64> {
        let full = self.index_range();
        let step = 2.0 * self.half_width;
        let mut lo = (libm::ceil(iv.a() * step) as i64).clamp(full.start, full.end);
        while lo > full.start && self.freq(lo - 1) >= iv.a() {
            lo -= 1;
        }
        while lo < full.end && self.freq(lo) < iv.a() {
            lo += 1;
        }
        let mut hi = (libm::ceil(iv.b() * step) as i64).clamp(lo, full.end);
        while hi > lo && self.freq(hi - 1) >= iv.b() {
            hi -= 1;
        }
        while hi < full.end && self.freq(hi) < iv.b() {
            hi += 1;
        }
        lo..hi
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() / (2.0 * self.half_width)
    }

    /// Coefficients at the grid frequencies inside `iv`.
    pub fn band(&self, iv: &FrequencyInterval) -> Band {
        let r = self.indices_in(iv);
        Band {
            half_width: self.half_width,
            first_index: r.start,
            coeffs: r.clone().map(|m| self.coeff(m)).collect(),
        }
    }

    pub fn project(&self, iv: &FrequencyInterval) -> Spectrum {
        let mut out = Spectrum { half_width: self.half_width, coeffs: vec![Complex64::new(0.0, 0.0); self.len()] };
        let n = self.len();
        for m in self.indices_in(iv) {
            out.coeffs[slot_of(m, n)] = self.coeffs[slot_of(m, n)];
        }
        out
    }

    pub fn multiply<S: Into<Complex64>>(&self, symbol: impl Fn(f64) -> S) -> Result<Spectrum> {
        let n = self.len();
        let mut coeffs = self.coeffs.clone();
        for (i, c) in coeffs.iter_mut().enumerate() {
            let v: Complex64 = symbol(self.freq(signed_index(i, n))).into();
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
            *c *= v;
        }
        Ok(Spectrum { half_width: self.half_width, coeffs })
    }

    /// `L^p` norms of the inverse transform over the whole period, using
    /// the samples at `r` equally spaced sub-grid offsets.
    ///
    /// `r` is doubled (reusing earlier offsets) from `r_start` until the
    /// relative change against the half-density estimate is at most `tol`
    /// for every `p`, or `r_max` is reached.
    pub fn lp_norms_oversampled(&self, ps: &[f64], r_start: usize, r_max: usize, tol: f64) -> Result<Vec<LpNorm>> {
        if ps.iter().any(|&p| !(p >= 1.0) || !p.is_finite()) {
            return Err(Error::OutOfRange("p must be >= 1".into()));
        }
        let r_start = r_start.max(2).next_power_of_two();
        let r_max = r_max.max(r_start);
        let n = self.len();
        let plan = Radix2::new(n)?;
        let h = 2.0 * self.half_width / n as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut shift_sum = |num: usize, den: usize, out: &mut [f64]| {
            let sigma = h * num as f64 / den as f64;
            for (i, b) in buf.iter_mut().enumerate() {
                let m = signed_index(i, n);
                // (-1)^m e^{2 pi i xi_m sigma}
                let sign = if m & 1 == 0 { 1.0 } else { -1.0 };
                *b = self.coeffs[i] * cis(2.0 * PI * self.freq(m) * sigma) * sign;
            }
            plan.inverse(&mut buf);
            let scale = 1.0 / (2.0 * self.half_width);
            for (o, &p) in out.iter_mut().zip(ps) {
                *o = buf.iter().map(|z| Float::powf(z.norm() * scale, p)).sum();
            }
        };
        let np = ps.len();
        let mut coarse = vec![0.0; np];
        let mut tmp = vec![0.0; np];
        let mut r = r_start / 2;
        for s in 0..r {
            shift_sum(s, r, &mut tmp);
            for (c, t) in coarse.iter_mut().zip(&tmp) {
                *c += t;
            }
        }
        loop {
            let mut fine = coarse.clone();
            for s in 0..r {
                shift_sum(2 * s + 1, 2 * r, &mut tmp);
                for (c, t) in fine.iter_mut().zip(&tmp) {
                    *c += t;
                }
            }
            r *= 2;
            let norms: Vec<LpNorm> = ps
                .iter()
                .zip(fine.iter().zip(&coarse))
                .map(|(&p, (&f, &c))| LpNorm::from_sums(f * h / r as f64, c * h / (r / 2) as f64, p))
                .collect();
            let worst = norms.iter().map(|v| v.rel_err).fold(0.0, f64::max);
            if worst <= tol || r >= r_max {
                return Ok(norms);
            }
            coarse = fine;
        }
    }
}

/// Coefficients of a spectrum restricted to consecutive grid frequencies
/// `first_index .. first_index + len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    half_width: f64,
    first_index: i64,
    coeffs: Vec<Complex64>,
}

/// Samples at `start + t * spacing`, `t = 0..values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSamples {
    pub start: f64,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl Band {
    pub fn new(half_width: f64, first_index: i64, coeffs: Vec<Complex64>) -> Self {
        Self { half_width, first_index, coeffs }
    }

    /// The same band with leading and trailing zero coefficients removed.
    pub fn trimmed(&self) -> Band {
        let zero = |z: &Complex64| z.re == 0.0 && z.im == 0.0;
        let lo = self.coeffs.iter().position(|z| !zero(z)).unwrap_or(self.coeffs.len());
        let hi = self.coeffs.iter().rposition(|z| !zero(z)).map_or(lo, |i| i + 1);
        Band { half_width: self.half_width, first_index: self.first_index + lo as i64, coeffs: self.coeffs[lo..hi].to_vec() }
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `sum |c_q|^2 / 2T`, the `L^2` energy of the projection.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() / (2.0 * self.half_width)
    }

    /// `|P_I f|` at equally spaced points covering `[u, v]` (both ends
    /// included) with at least `density` points per unit length.
    pub fn window_moduli(&self, u: f64, v: f64, density: f64) -> Result<WindowSamples> {
        let lags: Vec<(i64, Complex64)> = self.coeffs.iter().enumerate().map(|(q, &c)| (q as i64, c)).collect();
        let scale = 1.0 / (2.0 * self.half_width);
        let (spacing, vals) = eval_window(&lags, self.half_width, u, v, density)?;
        Ok(WindowSamples { start: u, spacing, values: vals.into_iter().map(|z| z.norm() * scale).collect() })
    }

    /// Lags `d` and values `A_d = sum_q c_{q+d} conj(c_q)`, so that
    /// `|sum_q c_q e^{i q theta}|^2 = sum_d A_d e^{i d theta}`.
    pub fn autocorrelation(&self) -> Vec<(i64, Complex64)> {
        autocorrelation(&self.coeffs)
    }
}

pub(crate) fn autocorrelation(c: &[Complex64]) -> Vec<(i64, Complex64)> {
    let m = c.len();
    if m == 0 {
        return Vec::new();
    }
    if m <= 32 {
        let mut out = Vec::with_capacity(2 * m - 1);
        for d in -(m as i64 - 1)..=(m as i64 - 1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..m as i64 {
                let p = q + d;
                if (0..m as i64).contains(&p) {
                    acc += c[p as usize] * c[q as usize].conj();
                }
            }
            out.push((d, acc));
        }
        return out;
    }
    let size = (2 * m).next_power_of_two();
    let plan = Radix2::new(size).expect("power of two");
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..m].copy_from_slice(c);
    plan.forward(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    plan.inverse(&mut buf);
    let inv = 1.0 / size as f64;
    (-(m as i64 - 1)..=(m as i64 - 1))
        .map(|d| (d, buf[slot_of(d, size)] * inv))
        .collect()
}

/// Evaluates `sum_k a_k e^{2 pi i k x / 2T}` at `x = u + t * spacing` for
/// `t = 0..=W`, with `spacing = 2T / (n_b r) <= 1/density` and
/// `W = (v - u) / spacing` required to be integral.
pub(crate) fn eval_window(
    terms: &[(i64, Complex64)],
    half_width: f64,
    u: f64,
    v: f64,
    density: f64,
) -> Result<(f64, Vec<Complex64>)> {
    if !(v > u) {
        return Err(Error::EmptyInterval { a: u, b: v });
    }
    let period = 2.0 * half_width;
    let (kmin, kmax) = terms
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), &(k, _)| (lo.min(k), hi.max(k)));
    let span = if terms.is_empty() { 1 } else { (kmax - kmin + 1) as usize };
    let n_b = span.max(2).next_power_of_two();
    let want = libm::ceil(period * density / n_b as f64).max(1.0) as usize;
    let r = want.next_power_of_two();
    let spacing = period / (n_b * r) as f64;
    let w_real = (v - u) / spacing;
    let w = libm::round(w_real);
    if (w_real - w).abs() > 1e-6 {
        return Err(Error::OutOfRange("window length is not a multiple of the sample spacing".into()));
    }
    let w = w as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); w + 1];
    if terms.is_empty() {
        return Ok((spacing, out));
    }
    let plan = Radix2::new(n_b)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); n_b];
    for s in 0..r {
        if s > w {
            break;
        }
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let x0 = u + s as f64 * spacing;
        for &(k, a) in terms {
            // shift indices to start at kmin; the common factor is restored below
            let q = k - kmin;
            buf[q as usize % n_b] += a * cis(2.0 * PI * (q as f64) * frac_phase(x0, period));
        }
        plan.inverse(&mut buf);
        let base = cis(2.0 * PI * kmin as f64 * frac_phase(x0, period));
        let step = cis(2.0 * PI * kmin as f64 * frac_phase(r as f64 * spacing, period));
        let mut rot = base;
        let mut t = s;
        let mut i = 0usize;
        while t <= w {
            out[t] = buf[i % n_b] * rot;
            rot *= step;
            if i % 64 == 63 {
                // re-anchor the rotating phase to avoid drift
                let x = u + t as f64 * spacing + r as f64 * spacing;
                rot = cis(2.0 * PI * kmin as f64 * frac_phase(x, period));
            }
            i += 1;
            t += r;
        }
    }
    Ok((spacing, out))
}

/// `x / period` reduced to `[0, 1)`.
#[inline]
fn frac_phase(x: f64, period: f64) -> f64 {
    let q = x / period;
    q - libm::floor(q)
}

/// Forward transform onto the grid-frequency spectrum.
pub fn forward_transform(f: &GridFunction) -> Result<Spectrum> {
    let n = f.len();
    check_len(n)?;
    check_finite(f.samples())?;
    let plan = Radix2::new(n)?;
    let mut buf = f.samples.clone();
    plan.forward(&mut buf);
    let h = f.spacing();
    for (i, z) in buf.iter_mut().enumerate() {
        let sign = if signed_index(i, n) & 1 == 0 { h } else { -h };
        *z *= sign;
    }
    Spectrum::new(f.half_width, buf)
}

pub fn inverse_transform(s: &Spectrum) -> Result<GridFunction> {
    let n = s.len();
    check_len(n)?;
    check_finite(s.coeffs())?;
    let plan = Radix2::new(n)?;
    let mut buf = s.coeffs.clone();
    let scale = 1.0 / (2.0 * s.half_width);
    for (i, z) in buf.iter_mut().enumerate() {
        let sign = if signed_index(i, n) & 1 == 0 { scale } else { -scale };
        *z *= sign;
    }
    plan.inverse(&mut buf);
    GridFunction::new(s.half_width, buf)
}

/// `T_m f`: multiplies the spectrum by `m(xi)` at every grid frequency.
pub fn apply_multiplier<S: Into<Complex64>>(f: &GridFunction, m: impl Fn(f64) -> S) -> Result<GridFunction> {
    inverse_transform(&forward_transform(f)?.multiply(m)?)
}

/// `P_I f`: keeps the grid frequencies in `[a, b)`.
pub fn project(f: &GridFunction, iv: &FrequencyInterval) -> Result<GridFunction> {
    inverse_transform(&forward_transform(f)?.project(iv))
}

/// Multiplies by `e^{-2 pi i t x}`, moving the spectrum by `-t`.
pub fn modulate(f: &GridFunction, t: f64) -> Result<GridFunction> {
    let step = 1.0 / (2.0 * f.half_width);
    let q = t / step;
    let m = libm::round(q);
    if !t.is_finite() || (q - m).abs() > GRID_TOL * q.abs().max(1.0) {
        return Err(Error::OffGrid(t));
    }
    let n = f.len();
    let m = m as i64;
    // e^{-2 pi i m x_j / 2T} = (-1)^m e^{-2 pi i m j / n}, with exact index reduction
    let sign = if m & 1 == 0 { 1.0 } else { -1.0 };
    let samples = f
        .samples
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let r = (m * j as i64).rem_euclid(n as i64) as f64;
            z * cis(-2.0 * PI * r / n as f64) * sign
        })
        .collect();
    GridFunction::new(f.half_width, samples)
}
