use alloc::vec::Vec;

use super::record::ExperimentRecord;
use crate::bump::make_witness_symbol;
use crate::error::{Error, Result};
use crate::lacunary::FrequencyInterval;
use crate::measures::REFINEMENT_TOL;
use crate::spectral::{inverse_transform, Band, GridFunction, Spectrum};

/// Witness `g_N` with spectrum `rho(xi / 2N) - rho(2 xi)` on a `[-T, T)`
/// grid of `n` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSpec {
    pub n_param: u64,
    pub half_width: f64,
    pub samples: usize,
}

impl WitnessSpec {
    pub fn new(n_param: u64, half_width: f64, samples: usize) -> Result<Self> {
        let s = Self { n_param, half_width, samples };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_param < 4 || !self.n_param.is_power_of_two() {
            return Err(Error::OutOfRange("N must be a power of two >= 4".into()));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::BadHalfWidth(self.half_width));
        }
        if self.samples < 2 || !self.samples.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.samples));
        }
        let top = 4.0 * self.n_param as f64;
        if !(top < self.nyquist()) {
            return Err(Error::Aliasing { a: -top, b: top, nyquist: self.nyquist() });
        }
        Ok(())
    }

    pub fn nyquist(&self) -> f64 {
        self.samples as f64 / (4.0 * self.half_width)
    }

    pub fn n(&self) -> f64 {
        self.n_param as f64
    }

    pub fn log2_n(&self) -> u32 {
        self.n_param.trailing_zeros()
    }

    pub fn symbol(&self, xi: f64) -> f64 {
        make_witness_symbol(self.n()).eval(xi)
    }

    pub fn plateau(&self) -> FrequencyInterval {
        FrequencyInterval::new(1.0, 2.0 * self.n()).expect("N >= 4")
    }

    /// Spectrum coefficients on the grid frequencies of `iv` only.
    pub fn band(&self, iv: &FrequencyInterval) -> Band {
        let step = 2.0 * self.half_width;
        let half = (self.samples / 2) as i64;
        let freq = |m: i64| m as f64 / step;
        let mut lo = (libm::ceil(iv.a() * step) as i64).clamp(-half, half);
        while lo > -half && freq(lo - 1) >= iv.a() {
            lo -= 1;
        }
        while lo < half && freq(lo) < iv.a() {
            lo += 1;
        }
        let mut hi = lo;
        while hi < half && freq(hi) < iv.b() {
            hi += 1;
        }
        let coeffs = (lo..hi).map(|m| self.symbol(freq(m)).into()).collect();
        Band::new(self.half_width, lo, coeffs)
    }
}

pub fn witness_spectrum(spec: &WitnessSpec) -> Result<Spectrum> {
    spec.validate()?;
    Spectrum::from_symbol(spec.half_width, spec.samples, |xi| spec.symbol(xi))
}

pub fn eta_witness(spec: &WitnessSpec) -> Result<GridFunction> {
    inverse_transform(&witness_spectrum(spec)?)
}

/// `||g_N||_{L^p(R)}` and `||g_N||_p / N^{(p-1)/p}` for each `p`.
pub fn witness_lp_profile(spec: &WitnessSpec, ps: &[f64]) -> Result<Vec<ExperimentRecord>> {
    if ps.iter().any(|&p| !(p > 1.0 && p <= 2.0)) {
        return Err(Error::OutOfRange("p must lie in (1, 2]".into()));
    }
    let s = witness_spectrum(spec)?;
    let norms = s.lp_norms_oversampled(ps, 2, 512, REFINEMENT_TOL)?;
    let mut out = Vec::with_capacity(ps.len());
    for nm in norms {
        let nm = nm.require(REFINEMENT_TOL)?;
        let scale = libm::pow(spec.n(), (nm.p - 1.0) / nm.p);
        out.push(
            ExperimentRecord::new()
                .with("N", spec.n_param as i64)
                .with("p", nm.p)
                .with("norm_p", nm.value)
                .with("ratio", nm.value / scale)
                .with("quad_err", nm.rel_err),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_support_and_energy() {
        let spec = WitnessSpec::new(16, 4.0, 1 << 11).unwrap();
        assert_eq!(spec.symbol(1.5 * 16.0), 1.0);
        assert_eq!(spec.symbol(0.4), 0.0);
        let e = witness_spectrum(&spec).unwrap().energy();
        assert!(e >= 2.0 * (2.0 * 16.0 - 1.0) && e <= 2.0 * (4.0 * 16.0 - 0.5));
        let g = eta_witness(&spec).unwrap();
        assert!(g.samples().iter().all(|z| z.im.abs() < 1e-10));
    }

    #[test]
    fn nyquist_violation() {
        assert!(matches!(WitnessSpec::new(64, 8.0, 1 << 10), Err(Error::Aliasing { .. })));
        assert!(WitnessSpec::new(6, 8.0, 1 << 14).is_err());
    }

    #[test]
    fn band_matches_spectrum() {
        let spec = WitnessSpec::new(8, 2.0, 1 << 9).unwrap();
        let s = witness_spectrum(&spec).unwrap();
        let iv = FrequencyInterval::new(-3.25, 40.0).unwrap();
        assert_eq!(spec.band(&iv), s.band(&iv));
    }

    #[test]
    fn l2_profile_bounds() {
        let spec = WitnessSpec::new(16, 8.0, 1 << 12).unwrap();
        let r = witness_lp_profile(&spec, &[2.0]).unwrap();
        let ratio = r[0].real("ratio").unwrap();
        let n = 16.0;
        assert!(ratio >= libm::sqrt(2.0) * libm::sqrt(2.0 - 1.0 / n) - 1e-9 && ratio <= libm::sqrt(8.0) + 1e-9);
    }
}
