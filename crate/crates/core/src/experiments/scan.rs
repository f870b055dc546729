use alloc::vec::Vec;

use super::profile::{BandNormCache, ProfileConfig};
use super::record::ExperimentRecord;
use super::witness::{witness_spectrum, WitnessSpec};
use crate::error::{Error, Result};
use crate::lacunary::{generate_points, i_plus, intervals_from_points, pow2, FrequencyInterval, IntervalCollection, LacunarySpec, SetKind, SignMode};
use crate::measures::{LpNorm, REFINEMENT_TOL};
use crate::squarefn::{lag_energy, square_function_window_norm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub half_width: f64,
    /// Grid size; `None` picks `2^(log2 N + 8)`.
    pub samples: Option<usize>,
    pub profile: ProfileConfig,
    pub tol: f64,
    /// Cap on sub-grid offsets for the full-line witness norm.
    pub max_oversampling: usize,
    /// Cap on the window sampling density for `S g_N`, as a multiple of the
    /// grid's own density.
    pub max_window_refine: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            half_width: 8.0,
            samples: None,
            profile: ProfileConfig::default(),
            tol: REFINEMENT_TOL,
            max_oversampling: 512,
            max_window_refine: 64.0,
        }
    }
}

impl ScanConfig {
    pub fn spec_for(&self, n_param: u64) -> Result<WitnessSpec> {
        if n_param < 4 || !n_param.is_power_of_two() {
            return Err(Error::OutOfRange("N must be a power of two >= 4".into()));
        }
        let k = n_param.trailing_zeros() as usize;
        WitnessSpec::new(n_param, self.half_width, self.samples.unwrap_or(1usize << (k + 8)))
    }
}

/// `p = 1 + 1 / log2 N`.
pub fn p_rule(n_param: u64) -> f64 {
    1.0 + 1.0 / libm::log2(n_param as f64)
}

/// The intervals of the set's partition that lie in `[1, N]` and have
/// length at least one: the finest blocks above each accumulation point.
pub fn growth_intervals(kind: SetKind, log2_n: i32) -> Vec<FrequencyInterval> {
    let k_top = log2_n;
    let mut out = Vec::new();
    match kind {
        SetKind::E1 | SetKind::Sum(1) => {
            for l in 1..=k_top {
                out.push(FrequencyInterval::new(pow2(l - 1), pow2(l)).expect("dyadic"));
            }
        }
        SetKind::E2 => {
            for k in 2..=k_top {
                for l in 1..k {
                    out.push(i_plus(k, l));
                }
            }
        }
        SetKind::Sum(n) => {
            // prefixes 2^{k_1} + ... + 2^{k_{n-1}}, k_1 <= log2 N - 1, last exponent >= 2
            fn prefixes(left: u32, below: i32, acc: f64, last: i32, out: &mut Vec<(f64, i32)>) {
                if left == 0 {
                    out.push((acc, last));
                    return;
                }
                let mut k = below - 1;
                while k >= 2 + left as i32 - 1 {
                    prefixes(left - 1, k, acc + pow2(k), k, out);
                    k -= 1;
                }
            }
            let mut pre = Vec::new();
            prefixes(n - 1, k_top, 0.0, 0, &mut pre);
            for (s, last) in pre {
                for l in 1..last {
                    out.push(FrequencyInterval::new(s + pow2(l - 1), s + pow2(l)).expect("dyadic"));
                }
            }
        }
    }
    out.sort_by(|x, y| x.a().partial_cmp(&y.a()).unwrap_or(core::cmp::Ordering::Equal));
    out
}

/// Truncation exponent whose blocks are no wider than the frequency step.
fn grid_l_min(half_width: f64) -> i32 {
    -(libm::ceil(libm::log2(2.0 * half_width)) as i32)
}

/// Partition induced by the set's points (both signs), covering the
/// witness support `+-[1/2, 4N]` inside the Nyquist band.
pub fn scan_collection(kind: SetKind, log2_n: i32, half_width: f64) -> Result<IntervalCollection> {
    let l_min = grid_l_min(half_width);
    let spec = match kind {
        SetKind::E1 | SetKind::Sum(1) => LacunarySpec { kind: SetKind::E1, k_min: -1, k_max: log2_n + 3, l_min: -1, sign: SignMode::Both },
        SetKind::E2 => LacunarySpec { kind, k_min: 0, k_max: log2_n + 3, l_min, sign: SignMode::Both },
        SetKind::Sum(n) => {
            LacunarySpec { kind, k_min: l_min + n as i32 - 1, k_max: log2_n + 2, l_min, sign: SignMode::Both }
        }
    };
    intervals_from_points(&generate_points(&spec)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessNorm {
    pub n_param: u64,
    pub norm: LpNorm,
}

/// `||g_N||_{L^p(R)}` at `p = p_rule(N)`.
pub fn witness_norm(n_param: u64, cfg: &ScanConfig) -> Result<WitnessNorm> {
    let spec = cfg.spec_for(n_param)?;
    let p = p_rule(n_param);
    let s = witness_spectrum(&spec)?;
    let norm = s.lp_norms_oversampled(&[p], 2, cfg.max_oversampling, cfg.tol)?.remove(0);
    Ok(WitnessNorm { n_param, norm })
}

/// One `(set, N)` point of the growth-law scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub kind: SetKind,
    pub n_param: u64,
    pub p: f64,
    /// `(sum ||P_I g_N||^2_{L^1([0,1])})^{1/2}` over the growth intervals.
    pub b: f64,
    /// The same with `L^p([0,1])` norms.
    pub b_p: f64,
    /// `||S g_N||_{L^p([0,1])}` for the full partition.
    pub s_p: f64,
    pub norm_p: f64,
    /// `s_p / norm_p`.
    pub r: f64,
    pub interval_count: usize,
    /// Largest relative refinement error among all quadratures.
    pub quad_err: f64,
}

impl ScanPoint {
    pub fn to_record(&self) -> ExperimentRecord {
        ExperimentRecord::new()
            .with("N", self.n_param as i64)
            .with("p", self.p)
            .with("B", self.b)
            .with("R", self.r)
            .with("norm_p", self.norm_p)
            .with("quad_err", self.quad_err)
    }
}

/// Computes one scan point; `norm` may carry a precomputed witness norm
/// for the same `N` (it does not depend on the set).
pub fn lower_bound_point(kind: SetKind, n_param: u64, cfg: &ScanConfig, norm: Option<&WitnessNorm>) -> Result<ScanPoint> {
    let spec = cfg.spec_for(n_param)?;
    let k = spec.log2_n() as i32;
    let p = p_rule(n_param);
    let t = spec.half_width;

    let mut cache = BandNormCache::new();
    let mut sum1 = 0.0;
    let mut sump = 0.0;
    let mut worst: f64 = 0.0;
    let ivs = growth_intervals(kind, k);
    for iv in &ivs {
        let nm = cache.norms(&spec.band(iv), t, &[1.0, p], &cfg.profile)?;
        sum1 += nm[0].value * nm[0].value;
        sump += nm[1].value * nm[1].value;
        worst = worst.max(nm[0].rel_err).max(nm[1].rel_err);
    }

    let coll = scan_collection(kind, k, t)?;
    let spectrum = witness_spectrum(&spec)?;
    let e = lag_energy(&spectrum, &coll)?;
    drop(spectrum);
    let grid_density = spec.samples as f64 / (2.0 * t);
    let window = FrequencyInterval::new(0.0, 1.0).expect("unit window");
    let s_norm =
        square_function_window_norm(&e, t, &window, p, grid_density, grid_density * cfg.max_window_refine, cfg.tol)?;
    worst = worst.max(s_norm.rel_err);

    let wn = match norm {
        Some(w) if w.n_param == n_param => *w,
        _ => witness_norm(n_param, cfg)?,
    };
    worst = worst.max(wn.norm.rel_err);
    if worst > cfg.tol {
        return Err(Error::Refinement { err: worst, tol: cfg.tol });
    }
    Ok(ScanPoint {
        kind,
        n_param,
        p,
        b: libm::sqrt(sum1),
        b_p: libm::sqrt(sump),
        s_p: s_norm.value,
        norm_p: wn.norm.value,
        r: s_norm.value / wn.norm.value,
        interval_count: ivs.len(),
        quad_err: worst,
    })
}

pub fn lower_bound_scan(kind: SetKind, n_list: &[u64], cfg: &ScanConfig) -> Result<Vec<ScanPoint>> {
    n_list.iter().map(|&n| lower_bound_point(kind, n, cfg, None)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lacunary::verify_partition;

    #[test]
    fn growth_interval_counts() {
        assert_eq!(growth_intervals(SetKind::E1, 6).len(), 6);
        assert_eq!(growth_intervals(SetKind::E2, 6).len(), 15);
        // k = 2..5, l = 1..k-1
        assert_eq!(growth_intervals(SetKind::Sum(2), 6).len(), 1 + 2 + 3 + 4);
        for kind in [SetKind::E1, SetKind::E2, SetKind::Sum(2), SetKind::Sum(3)] {
            let ivs = growth_intervals(kind, 8);
            let band = FrequencyInterval::new(1.0, 256.0).unwrap();
            assert!(ivs.iter().all(|iv| band.contains_interval(iv) && iv.len() >= 1.0));
            assert!(verify_partition(&ivs, &band).disjoint);
        }
    }

    #[test]
    fn growth_intervals_are_members() {
        for kind in [SetKind::E1, SetKind::E2, SetKind::Sum(2), SetKind::Sum(3)] {
            let coll = scan_collection(kind, 7, 8.0).unwrap();
            for iv in growth_intervals(kind, 7) {
                assert!(coll.intervals().contains(&iv), "{kind:?} {iv:?}");
            }
        }
    }

    #[test]
    fn smallest_point_is_finite() {
        let cfg = ScanConfig::default();
        let pt = lower_bound_point(SetKind::E2, 64, &cfg, None).unwrap();
        assert!(pt.b.is_finite() && pt.r.is_finite() && pt.norm_p > 0.0);
        assert!(pt.r >= 0.99 * pt.b_p / pt.norm_p);
        assert!(pt.to_record().is_finite());
    }
}
