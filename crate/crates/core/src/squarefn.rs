//! Square functions: sharp `S_I` on grid functions, the periodic `S_2` on
//! trigonometric polynomials, and the smooth lattice-averaged variant.
//!
//! Sharp square functions are evaluated through the lag energies of the
//! projections: for a band with coefficients `c_q`,
//! `|P_I f|^2 = (2T)^{-2} sum_d A_d e^{2 pi i d x / 2T}` with `A_d` the
//! autocorrelation of `c`. Summing `A_d` over all bands gives `S^2` as a
//! single trigonometric sum, evaluated with one inverse FFT.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::bump::SmoothBump;
use crate::error::{Error, Result};
use crate::fft::Radix2;
use crate::lacunary::{FrequencyInterval, IntervalCollection, Sign};
use crate::measures::{lp_norm_periodic_samples, lp_norm_window, LpNorm};
use crate::spectral::{autocorrelation, eval_window, forward_transform, inverse_transform, slot_of, GridFunction, Spectrum, WindowSamples};

/// Summed autocorrelations `E_d`, `|d| <= max_lag`.
#[derive(Debug, Clone)]
pub struct LagEnergy {
    max_lag: usize,
    lags: Vec<Complex64>,
}

impl LagEnergy {
    pub fn new(max_lag: usize) -> Self {
        Self { max_lag, lags: vec![Complex64::new(0.0, 0.0); 2 * max_lag + 1] }
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn add_band(&mut self, coeffs: &[Complex64]) {
        assert!(coeffs.len() <= self.max_lag + 1, "band wider than the lag table");
        for (d, a) in autocorrelation(coeffs) {
            self.lags[(d + self.max_lag as i64) as usize] += a;
        }
    }

    pub fn lag(&self, d: i64) -> Complex64 {
        if d.unsigned_abs() as usize > self.max_lag {
            Complex64::new(0.0, 0.0)
        } else {
            self.lags[(d + self.max_lag as i64) as usize]
        }
    }

    fn terms(&self) -> Vec<(i64, Complex64)> {
        let l = self.max_lag as i64;
        (-l..=l).map(|d| (d, self.lags[(d + l) as usize])).filter(|(_, a)| a.norm_sqr() > 0.0).collect()
    }

    /// `sum_d E_d e^{2 pi i d j / m}` for `j in 0..m`.
    fn fold_eval(&self, m: usize, sign_flip: bool) -> Result<Vec<f64>> {
        let plan = Radix2::new(m)?;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let l = self.max_lag as i64;
        for d in -l..=l {
            let a = self.lags[(d + l) as usize];
            let s = if sign_flip && d & 1 != 0 { -a } else { a };
            buf[slot_of(d, m)] += s;
        }
        plan.inverse(&mut buf);
        Ok(buf.into_iter().map(|z| z.re.max(0.0)).collect())
    }

    /// `S^2` at the points of a `[-T, T)` grid with `n` samples.
    pub fn grid_squares(&self, half_width: f64, n: usize) -> Result<Vec<f64>> {
        // x_j = -T + j h gives e^{2 pi i d x_j / 2T} = (-1)^d e^{2 pi i d j / n}
        let scale = 1.0 / (4.0 * half_width * half_width);
        Ok(self.fold_eval(n, true)?.into_iter().map(|v| v * scale).collect())
    }

    /// `S` on the closed window `[u, v]` at `density` points per unit or more.
    pub fn window(&self, half_width: f64, u: f64, v: f64, density: f64) -> Result<WindowSamples> {
        let (spacing, vals) = eval_window(&self.terms(), half_width, u, v, density)?;
        let scale = 1.0 / (2.0 * half_width);
        Ok(WindowSamples { start: u, spacing, values: vals.into_iter().map(|z| libm::sqrt(z.re.max(0.0)) * scale).collect() })
    }
}

fn check_bands(s: &Spectrum, c: &IntervalCollection) -> Result<()> {
    let nyq = s.nyquist();
    for iv in c {
        if iv.a() < -nyq || iv.b() > nyq {
            return Err(Error::Aliasing { a: iv.a(), b: iv.b(), nyquist: nyq });
        }
    }
    Ok(())
}

/// Lag energies of all projections `P_I f`, `I in c`.
pub fn lag_energy(s: &Spectrum, c: &IntervalCollection) -> Result<LagEnergy> {
    check_bands(s, c)?;
    let bands: Vec<_> = c.iter().map(|iv| s.band(iv).trimmed()).filter(|b| !b.is_empty()).collect();
    let widest = bands.iter().map(|b| b.len()).max().unwrap_or(1);
    let mut e = LagEnergy::new(widest.saturating_sub(1));
    for b in &bands {
        e.add_band(b.coeffs());
    }
    Ok(e)
}

/// `S_I(f) = (sum_I |P_I f|^2)^{1/2}` at the grid points.
pub fn square_function_grid(f: &GridFunction, c: &IntervalCollection) -> Result<GridFunction> {
    let s = forward_transform(f)?;
    square_function_of_spectrum(&s, c)
}

pub fn square_function_of_spectrum(s: &Spectrum, c: &IntervalCollection) -> Result<GridFunction> {
    let e = lag_energy(s, c)?;
    let sq = e.grid_squares(s.half_width(), s.len())?;
    GridFunction::from_real(s.half_width(), &sq.into_iter().map(libm::sqrt).collect::<Vec<_>>())
}

/// `||S_I f||_{L^p([u, v])}` from window samples, doubling the density from
/// `density` until the refinement check passes `tol` or `max_density` is hit.
pub fn square_function_window_norm(
    e: &LagEnergy,
    half_width: f64,
    window: &FrequencyInterval,
    p: f64,
    density: f64,
    max_density: f64,
    tol: f64,
) -> Result<LpNorm> {
    let mut rho = density;
    loop {
        let w = e.window(half_width, window.a(), window.b(), rho)?;
        let est = lp_norm_window(&w, p)?;
        if est.rel_err <= tol || rho >= max_density {
            return Ok(est);
        }
        rho *= 2.0;
    }
}

/// Finite trigonometric polynomial `sum c_n e^{2 pi i n theta}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    /// Zero coefficients are dropped; repeated frequencies add up.
    pub fn new(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (i, (n, c)) in terms.into_iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
            *coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm_sqr() > 0.0);
        Ok(Self { coeffs })
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn degree(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms()
            .map(|(n, c)| {
                let ph = 2.0 * core::f64::consts::PI * frac(n as f64 * frac(theta));
                c * Complex64::new(libm::cos(ph), libm::sin(ph))
            })
            .sum()
    }

    /// Values at `theta_j = j / m`, `m` a power of two.
    pub fn eval_grid(&self, m: usize) -> Result<Vec<Complex64>> {
        let plan = Radix2::new(m)?;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (n, c) in self.terms() {
            buf[slot_of(n, m)] += c;
        }
        plan.inverse(&mut buf);
        Ok(buf)
    }

    /// `(sum |c_n|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.coeffs.values().map(|c| c.norm_sqr()).sum())
    }
}

#[inline]
fn frac(x: f64) -> f64 {
    x - libm::floor(x)
}

/// The `(k, l, sign)` of the dyadic block containing the integer `n != 0`:
/// `n in [2^k - 2^l, 2^k - 2^{l-1})` for `n >= 1`, and the reflected block
/// of `-n` for `n <= -1`.
pub fn s2_bucket(n: i64) -> Option<(i32, i32, Sign)> {
    if n == 0 {
        return None;
    }
    let m = n.unsigned_abs();
    let k = 64 - m.leading_zeros() as i32; // floor(log2 m) + 1
    let d = (1u64 << k) - m; // in [1, 2^{k-1}]
    let l = if d <= 1 { 0 } else { 64 - (d - 1).leading_zeros() as i32 }; // ceil(log2 d)
    Some((k, l, if n > 0 { Sign::Plus } else { Sign::Minus }))
}

/// Bucket interval of `s2_bucket` as a real interval of frequencies.
pub fn s2_bucket_interval(k: i32, l: i32, sign: Sign) -> FrequencyInterval {
    let plus = crate::lacunary::i_plus(k, l);
    match sign {
        Sign::Plus => plus,
        // integers of the reflected block: (-(2^k - 2^{l-1}), -(2^k - 2^l)]
        Sign::Minus => FrequencyInterval::new(-plus.b() + 0.5, -plus.a() + 0.5).expect("nonempty"),
    }
}

/// `S_2 f` of a trigonometric polynomial, held as its dyadic blocks.
#[derive(Debug, Clone)]
pub struct PeriodicS2 {
    constant: Complex64,
    blocks: BTreeMap<(i32, i32, bool), Vec<(i64, Complex64)>>,
    degree: u64,
}

pub fn square_function_periodic_s2(f: &TrigPolynomial, k_max: i32) -> Result<PeriodicS2> {
    let d = f.degree();
    if !(0..63).contains(&k_max) || (1u64 << k_max) <= d {
        return Err(Error::OutOfRange("2^k_max must exceed the degree".into()));
    }
    let mut blocks: BTreeMap<(i32, i32, bool), Vec<(i64, Complex64)>> = BTreeMap::new();
    for (n, c) in f.terms() {
        if let Some((k, l, sign)) = s2_bucket(n) {
            blocks.entry((k, l, sign == Sign::Plus)).or_default().push((n, c));
        }
    }
    Ok(PeriodicS2 { constant: f.coeff(0), blocks, degree: d })
}

impl PeriodicS2 {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn lag_energy(&self) -> LagEnergy {
        let dense: Vec<Vec<Complex64>> = self
            .blocks
            .values()
            .map(|terms| {
                let lo = terms.first().unwrap().0;
                let hi = terms.last().unwrap().0;
                let mut v = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
                for &(n, c) in terms {
                    v[(n - lo) as usize] = c;
                }
                v
            })
            .collect();
        let widest = dense.iter().map(|v| v.len()).max().unwrap_or(1);
        let mut e = LagEnergy::new(widest - 1);
        for v in &dense {
            e.add_band(v);
        }
        e.lags[e.max_lag] += self.constant.norm_sqr();
        e
    }

    /// `S_2 f` at `theta_j = j / m`.
    pub fn eval_grid(&self, m: usize) -> Result<Vec<f64>> {
        Ok(self.lag_energy().fold_eval(m, false)?.into_iter().map(libm::sqrt).collect())
    }

    /// Direct evaluation at one point.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.constant.norm_sqr();
        for terms in self.blocks.values() {
            let z: Complex64 = terms
                .iter()
                .map(|&(n, c)| {
                    let ph = 2.0 * core::f64::consts::PI * frac(n as f64 * frac(theta));
                    c * Complex64::new(libm::cos(ph), libm::sin(ph))
                })
                .sum();
            acc += z.norm_sqr();
        }
        libm::sqrt(acc)
    }

    fn base_grid(&self) -> usize {
        (8 * (2 * self.degree as usize + 1)).next_power_of_two()
    }

    /// `||S_2 f||_{L^2(T)}`; exact on the oversampled grid since `S_2^2` is
    /// a trigonometric polynomial of lower degree.
    pub fn l2_norm(&self) -> Result<f64> {
        Ok(lp_norm_periodic_samples(&self.eval_grid(self.base_grid())?, 2.0)?.value)
    }

    /// `||S_2 f||_{L^p(T)}`, doubling the grid until the refinement check
    /// passes `tol` (at most 64 doublings' worth of growth).
    pub fn lp_norm(&self, p: f64, tol: f64) -> Result<LpNorm> {
        let mut m = self.base_grid().max(4096);
        let cap = m << 6;
        loop {
            let est = lp_norm_periodic_samples(&self.eval_grid(m)?, p)?;
            if est.rel_err <= tol || m >= cap {
                return Ok(est);
            }
            m *= 2;
        }
    }
}

/// Dyadic lattice `{[s + j 2^-nu, s + (j + 1) 2^-nu)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicLattice {
    shift: f64,
}

impl DyadicLattice {
    pub fn new(shift: f64) -> Self {
        Self { shift }
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn interval(&self, nu: i32, j: i64) -> FrequencyInterval {
        let len = libm::exp2(-(nu as f64));
        FrequencyInterval::new(self.shift + j as f64 * len, self.shift + (j + 1) as f64 * len).expect("positive length")
    }

    /// Index `j` of the scale-`nu` cell containing `x`.
    pub fn cell_index(&self, nu: i32, x: f64) -> i64 {
        libm::floor((x - self.shift) * libm::exp2(nu as f64)) as i64
    }

    /// Cell length in samples and the sample index of the first boundary
    /// for the periodic grid on `[-T, T)` with `n` samples. Boundaries are
    /// snapped to the nearest grid point; the cell length must divide `2T`.
    pub fn cell_layout(&self, nu: i32, half_width: f64, n: usize) -> Result<(usize, usize)> {
        let h = 2.0 * half_width / n as f64;
        let len = libm::exp2(-(nu as f64));
        if len < 2.0 * h {
            return Err(Error::ScaleTooFine { nu });
        }
        let ratio = len / h;
        let cell = libm::round(ratio) as usize;
        if (ratio - cell as f64).abs() > 1e-9 * ratio || n % cell != 0 {
            return Err(Error::OutOfRange("lattice cells must tile the periodic grid".into()));
        }
        let off = libm::round((self.shift + half_width) / h) as i64;
        Ok((cell, off.rem_euclid(cell as i64) as usize))
    }
}

/// The three shifted lattices `0`, `1/3`, `-1/3`.
pub fn standard_lattices() -> [DyadicLattice; 3] {
    [DyadicLattice::new(0.0), DyadicLattice::new(1.0 / 3.0), DyadicLattice::new(-1.0 / 3.0)]
}

/// `(sum_nu sum_{|I| = 2^-nu} <|P_nu g|^2>_I chi_I)^{1/2}` with `P_nu` the
/// multiplier `phi(2^-nu xi)`; cells are lattice cells on the periodic grid.
pub fn smooth_square_function(
    g: &GridFunction,
    phi: &SmoothBump,
    lat: &DyadicLattice,
    nus: core::ops::RangeInclusive<i32>,
) -> Result<GridFunction> {
    let n = g.len();
    let layouts: Vec<(i32, usize, usize)> = nus
        .clone()
        .map(|nu| lat.cell_layout(nu, g.half_width(), n).map(|(c, o)| (nu, c, o)))
        .collect::<Result<_>>()?;
    if layouts.is_empty() {
        return Err(Error::TooFew { need: 1, got: 0 });
    }
    let s = forward_transform(g)?;
    let mut acc = vec![0.0; n];
    for (nu, cell, off) in layouts {
        let scale = libm::exp2(-(nu as f64));
        let piece = inverse_transform(&s.multiply(|xi| phi.eval(scale * xi))?)?;
        let sq: Vec<f64> = piece.samples().iter().map(|z| z.norm_sqr()).collect();
        for c in 0..n / cell {
            let start = off + c * cell;
            let mean = (0..cell).map(|i| sq[(start + i) % n]).sum::<f64>() / cell as f64;
            for i in 0..cell {
                acc[(start + i) % n] += mean;
            }
        }
    }
    GridFunction::from_real(g.half_width(), &acc.into_iter().map(libm::sqrt).collect::<Vec<_>>())
}
