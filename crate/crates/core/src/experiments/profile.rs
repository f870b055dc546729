use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;
use num_complex::Complex64;

use super::record::ExperimentRecord;
use super::witness::WitnessSpec;
use crate::error::{Error, Result};
use crate::lacunary::{i_plus, FrequencyInterval};
use crate::measures::{lp_norms_window, LpNorm, REFINEMENT_TOL};
use crate::spectral::Band;

/// Sampling policy for `||P_I f||_{L^p(window)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConfig {
    pub window: (f64, f64),
    /// Initial samples per unit length per unit of band width.
    pub per_lobe: f64,
    pub min_density: f64,
    pub max_density: f64,
    pub tol: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { window: (0.0, 1.0), per_lobe: 64.0, min_density: 256.0, max_density: (1u64 << 24) as f64, tol: REFINEMENT_TOL }
    }
}

/// `||P_I f||_{L^p(window)}` for each `p`, from the band's coefficients.
/// The sampling density doubles until every estimate passes the refinement
/// check or the density cap is reached.
pub fn projection_norms(band: &Band, half_width: f64, ps: &[f64], cfg: &ProfileConfig) -> Result<Vec<LpNorm>> {
    let width = band.len() as f64 / (2.0 * half_width);
    let mut density = (cfg.per_lobe * width).max(cfg.min_density);
    loop {
        let w = band.window_moduli(cfg.window.0, cfg.window.1, density)?;
        let norms = lp_norms_window(&w, ps)?;
        let worst = norms.iter().map(|n| n.rel_err).fold(0.0, f64::max);
        if worst <= cfg.tol || density >= cfg.max_density {
            return Ok(norms);
        }
        density *= 2.0;
    }
}

/// Reuses projection norms of bands with identical coefficient vectors;
/// `|P_I f|` depends on the coefficients only, not on the band position.
#[derive(Debug, Default)]
pub struct BandNormCache {
    entries: Vec<(Vec<Complex64>, Vec<LpNorm>)>,
}

impl BandNormCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn norms(&mut self, band: &Band, half_width: f64, ps: &[f64], cfg: &ProfileConfig) -> Result<Vec<LpNorm>> {
        if let Some((_, v)) = self.entries.iter().find(|(c, _)| c.as_slice() == band.coeffs()) {
            return Ok(v.clone());
        }
        let v = projection_norms(band, half_width, ps, cfg)?;
        self.entries.push((band.coeffs().to_vec(), v.clone()));
        Ok(v)
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `int_0^1 |sin(pi L x) / (pi x)| dx` by adaptive Simpson quadrature on
/// each lobe between consecutive zeros.
pub fn sinc_l1_oracle(len: f64) -> f64 {
    let f = |x: f64| {
        if x == 0.0 {
            len
        } else {
            (libm::sin(PI * len * x) / (PI * x)).abs()
        }
    };
    let mut total = 0.0;
    let mut j = 0u64;
    loop {
        let a = j as f64 / len;
        if a >= 1.0 {
            break;
        }
        let b = ((j + 1) as f64 / len).min(1.0);
        total += adaptive(&f, a, b, 1e-14);
        j += 1;
    }
    total
}

/// `m_{k,l} = ||P_{I+_{k,l}} g_N||_{L^1([0,1])}` and the oracle
/// `o_l = int_0^1 |sin(pi 2^{l-1} x) / (pi x)| dx` for each `l`.
pub fn projection_l1_profile(
    spec: &WitnessSpec,
    k: i32,
    ls: RangeInclusive<i32>,
    cfg: &ProfileConfig,
) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let plateau = spec.plateau();
    let mut out = Vec::new();
    let mut cache = BandNormCache::new();
    for l in ls {
        if l >= k {
            return Err(Error::OutOfRange("l must be below k".into()));
        }
        let iv: FrequencyInterval = i_plus(k, l);
        if !plateau.contains_interval(&iv) {
            return Err(Error::OutOfRange(alloc::format!(
                "interval [{}, {}) leaves the witness plateau [1, 2N)",
                iv.a(),
                iv.b()
            )));
        }
        let band = spec.band(&iv);
        let nm = cache.norms(&band, spec.half_width, &[1.0], cfg)?.remove(0);
        let oracle = sinc_l1_oracle(iv.len());
        out.push(
            ExperimentRecord::new()
                .with("k", k as i64)
                .with("l", l as i64)
                .with("m", nm.value)
                .with("oracle", oracle)
                .with("rel_diff", (nm.value - oracle).abs() / oracle)
                .with("quad_err", nm.rel_err),
        );
    }
    Ok(out)
}
