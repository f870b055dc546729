use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::record::ExperimentRecord;
use crate::bump::rho;
use crate::error::Result;
use crate::lacunary::{generate_points, intervals_from_points, IntervalCollection, LacunarySpec, SetKind, SignMode};
use crate::measures::{a2_characteristic, make_power_weight, weighted_l2_norm, A2Scan};
use crate::spectral::{inverse_transform, GridFunction, Spectrum};
use crate::squarefn::square_function_of_spectrum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedConfig {
    pub half_width: f64,
    pub samples: usize,
    pub seed: u64,
    pub family_size: usize,
    pub set: SetKind,
    pub a2: A2Scan,
}

impl Default for WeightedConfig {
    fn default() -> Self {
        Self { half_width: 8.0, samples: 1 << 12, seed: 0x5eed, family_size: 20, set: SetKind::E2, a2: A2Scan::default() }
    }
}

impl WeightedConfig {
    /// Partition induced by the points of the set (both signs) with
    /// magnitudes up to the largest power of two below the Nyquist frequency.
    pub fn collection(&self) -> Result<IntervalCollection> {
        let nyq = self.samples as f64 / (4.0 * self.half_width);
        let k_top = libm::floor(libm::log2(nyq)) as i32;
        let l_min = -(libm::ceil(libm::log2(2.0 * self.half_width)) as i32);
        let spec = match self.set {
            SetKind::E1 | SetKind::Sum(1) => {
                LacunarySpec { kind: SetKind::E1, k_min: l_min, k_max: k_top, l_min, sign: SignMode::Both }
            }
            SetKind::E2 => LacunarySpec { kind: SetKind::E2, k_min: 0, k_max: k_top, l_min, sign: SignMode::Both },
            SetKind::Sum(n) => LacunarySpec {
                kind: self.set,
                k_min: l_min + n as i32 - 1,
                k_max: k_top - 1,
                l_min,
                sign: SignMode::Both,
            },
        };
        intervals_from_points(&generate_points(&spec)?)
    }
}

/// Seeded test spectra supported on grid frequencies covered by `coll`:
/// single-band functions, modulated smooth bumps, and random-phase
/// band-limited functions, in that order.
pub fn test_family(cfg: &WeightedConfig, coll: &IntervalCollection) -> Result<Vec<Spectrum>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = cfg.half_width;
    let n = cfg.samples;
    let lo = coll.intervals().first().map_or(0.0, |i| i.a());
    let hi = coll.intervals().last().map_or(0.0, |i| i.b());
    let covered = move |xi: f64| lo <= xi && xi < hi;
    let step = 1.0 / (2.0 * t);
    let wide: Vec<_> = coll.iter().filter(|iv| iv.len() >= 2.0 * step).copied().collect();
    let phase = |xi: f64, x0: f64| Complex64::new(libm::cos(2.0 * PI * xi * x0), -libm::sin(2.0 * PI * xi * x0));

    let n_single = cfg.family_size / 4;
    let n_bump = cfg.family_size / 4;
    let mut out = Vec::with_capacity(cfg.family_size);
    for i in 0..cfg.family_size {
        let s = if i < n_single && !wide.is_empty() {
            let iv = wide[rng.gen_range(0..wide.len())];
            let x0 = rng.gen_range(-2.0..2.0);
            Spectrum::from_symbol(t, n, |xi| if iv.contains(xi) { phase(xi, x0) } else { Complex64::new(0.0, 0.0) })?
        } else if i < n_single + n_bump {
            let c = rng.gen_range(0.5 * lo..0.5 * hi);
            let w = rng.gen_range(0.25..4.0);
            let x0 = rng.gen_range(-4.0..4.0);
            Spectrum::from_symbol(t, n, |xi| if covered(xi) { phase(xi, x0) * rho((xi - c) / w) } else { Complex64::new(0.0, 0.0) })?
        } else {
            let width = rng.gen_range(1.0..32.0);
            let a = rng.gen_range(lo..hi - width);
            let mut s = Spectrum::zeros(t, n)?;
            for m in s.index_range() {
                let xi = s.freq(m);
                if covered(xi) && a <= xi && xi < a + width {
                    let th: f64 = rng.gen_range(0.0..2.0 * PI);
                    s.set_coeff(m, Complex64::new(libm::cos(th), libm::sin(th)))?;
                }
            }
            s
        };
        out.push(s);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    pub alpha: f64,
    pub a2: f64,
    pub rho: f64,
    /// Family index attaining `rho`.
    pub argmax: usize,
}

impl WeightedPoint {
    pub fn to_record(&self) -> ExperimentRecord {
        ExperimentRecord::new().with("alpha", self.alpha).with("a2", self.a2).with("rho", self.rho)
    }
}

/// `[w_alpha]_{A_2}` and `max_f ||S f||_{L^2(w)} / ||f||_{L^2(w)}` for
/// `w_alpha = |x|^alpha`, given the family as `(f, S f)` pairs.
pub fn weighted_point(alpha: f64, cfg: &WeightedConfig, pairs: &[(GridFunction, GridFunction)]) -> Result<WeightedPoint> {
    let w = make_power_weight(alpha, cfg.half_width, cfg.samples)?;
    let a2 = a2_characteristic(&w, &cfg.a2).characteristic;
    let mut best = (0.0, 0usize);
    for (i, (f, sf)) in pairs.iter().enumerate() {
        let den = weighted_l2_norm(f, &w)?;
        if den == 0.0 {
            continue;
        }
        let r = weighted_l2_norm(sf, &w)? / den;
        if r > best.0 {
            best = (r, i);
        }
    }
    Ok(WeightedPoint { alpha, a2, rho: best.0, argmax: best.1 })
}

/// Builds the family and its square functions once, then evaluates every
/// `alpha`.
pub fn weighted_scan(alphas: &[f64], cfg: &WeightedConfig) -> Result<Vec<WeightedPoint>> {
    for &a in alphas {
        make_power_weight(a, cfg.half_width, 2)?;
    }
    let pairs = family_pairs(cfg)?;
    alphas.iter().map(|&a| weighted_point(a, cfg, &pairs)).collect()
}

/// `(f, S f)` for every member of the test family.
pub fn family_pairs(cfg: &WeightedConfig) -> Result<Vec<(GridFunction, GridFunction)>> {
    let coll = cfg.collection()?;
    test_family(cfg, &coll)?
        .iter()
        .map(|s| Ok((inverse_transform(s)?, square_function_of_spectrum(s, &coll)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_ratio_is_one() {
        let cfg = WeightedConfig { samples: 1 << 10, half_width: 4.0, ..Default::default() };
        let pts = weighted_scan(&[0.0, 0.5], &cfg).unwrap();
        assert!((pts[0].rho - 1.0).abs() < 1e-8);
        assert!((pts[0].a2 - 1.0).abs() < 1e-12);
        assert!(pts[1].rho >= 1.0 - 1e-12);
        assert!(pts[1].a2 > 1.0);
        assert!(weighted_scan(&[1.5], &cfg).is_err());
    }

    #[test]
    fn family_is_deterministic() {
        let cfg = WeightedConfig { samples: 1 << 9, half_width: 4.0, ..Default::default() };
        let coll = cfg.collection().unwrap();
        assert_eq!(test_family(&cfg, &coll).unwrap(), test_family(&cfg, &coll).unwrap());
    }
}
