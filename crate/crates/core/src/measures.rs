//! Norms, weights, and Muckenhoupt `A_2` characteristics.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lacunary::FrequencyInterval;
use crate::spectral::{GridFunction, WindowSamples};
use crate::squarefn::DyadicLattice;

/// Threshold on the relative refinement error for accepted norms.
pub const REFINEMENT_TOL: f64 = 1e-4;

/// A quadrature norm together with its half-resolution estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpNorm {
    pub p: f64,
    pub value: f64,
    pub coarse: f64,
    /// `|value - coarse| / value`.
    pub rel_err: f64,
}

impl LpNorm {
    /// From the integrals of `|f|^p` at full and half resolution.
    pub fn from_sums(fine: f64, coarse: f64, p: f64) -> Self {
        let value = libm::pow(fine, 1.0 / p);
        let coarse = libm::pow(coarse, 1.0 / p);
        let rel_err = if value > 0.0 {
            (value - coarse).abs() / value
        } else if coarse == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { p, value, coarse, rel_err }
    }

    pub fn accepted(&self, tol: f64) -> bool {
        self.rel_err <= tol
    }

    pub fn require(self, tol: f64) -> Result<Self> {
        if self.accepted(tol) {
            Ok(self)
        } else {
            Err(Error::Refinement { err: self.rel_err, tol })
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange("p must be a finite real >= 1".into()))
    }
}

#[inline]
fn powp(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else {
        libm::pow(v, p)
    }
}

/// Overlap of `[c - r, c + r]` with `[lo, hi]`.
#[inline]
fn clipped(c: f64, r: f64, lo: f64, hi: f64) -> f64 {
    ((c + r).min(hi) - (c - r).max(lo)).max(0.0)
}

/// Composite midpoint rule for `(int_D |f|^p)^{1/p}`: each sample owns the
/// cell of width `h` centred on it, clipped to `D`. The coarse estimate
/// uses every other sample with doubled cells. On the full domain the grid
/// is treated as periodic.
pub fn lp_norm_grid(f: &GridFunction, p: f64, domain: &FrequencyInterval) -> Result<LpNorm> {
    check_p(p)?;
    let t = f.half_width();
    if domain.a() < -t || domain.b() > t {
        return Err(Error::OutOfRange("domain must lie inside [-T, T)".into()));
    }
    let h = f.spacing();
    let n = f.len();
    if domain.a() == -t && domain.b() == t {
        let fine: f64 = f.samples().iter().map(|z| powp(z.norm(), p)).sum::<f64>() * h;
        let coarse: f64 = f.samples().iter().step_by(2).map(|z| powp(z.norm(), p)).sum::<f64>() * 2.0 * h;
        return Ok(LpNorm::from_sums(fine, coarse, p));
    }
    let (lo, hi) = (domain.a(), domain.b());
    let j_lo = (libm::floor((lo + t) / h - 2.0).max(0.0)) as usize;
    let j_hi = ((libm::ceil((hi + t) / h + 2.0)) as usize).min(n - 1);
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for j in j_lo..=j_hi {
        let x = f.x(j);
        let v = powp(f.samples()[j].norm(), p);
        fine += v * clipped(x, 0.5 * h, lo, hi);
        if j % 2 == 0 {
            coarse += v * clipped(x, h, lo, hi);
        }
    }
    Ok(LpNorm::from_sums(fine, coarse, p))
}

/// Midpoint rule on samples covering a closed window, both ends sampled.
/// The coarse estimate uses even-indexed samples and needs an odd count.
pub fn lp_norm_window(w: &WindowSamples, p: f64) -> Result<LpNorm> {
    check_p(p)?;
    Ok(lp_norms_window(w, &[p])?.remove(0))
}

/// [`lp_norm_window`] for several exponents in one pass.
pub fn lp_norms_window(w: &WindowSamples, ps: &[f64]) -> Result<Vec<LpNorm>> {
    for &p in ps {
        check_p(p)?;
    }
    let m = w.values.len();
    if m < 3 || m % 2 == 0 {
        return Err(Error::TooFew { need: 3, got: m });
    }
    let h = w.spacing;
    let mut fine = vec![0.0; ps.len()];
    let mut coarse = vec![0.0; ps.len()];
    for (i, &v) in w.values.iter().enumerate() {
        let end = i == 0 || i == m - 1;
        for (k, &p) in ps.iter().enumerate() {
            let vp = powp(v, p);
            fine[k] += vp * if end { 0.5 * h } else { h };
            if i % 2 == 0 {
                coarse[k] += vp * if end { h } else { 2.0 * h };
            }
        }
    }
    Ok(ps.iter().enumerate().map(|(k, &p)| LpNorm::from_sums(fine[k], coarse[k], p)).collect())
}

/// Equal-weight rule for samples of a 1-periodic function on a uniform
/// grid of the unit circle.
pub fn lp_norm_periodic_samples(values: &[f64], p: f64) -> Result<LpNorm> {
    check_p(p)?;
    let m = values.len();
    if m < 2 || m % 2 == 1 {
        return Err(Error::TooFew { need: 2, got: m });
    }
    let fine = values.iter().map(|&v| powp(v, p)).sum::<f64>() / m as f64;
    let coarse = values.iter().step_by(2).map(|&v| powp(v, p)).sum::<f64>() * 2.0 / m as f64;
    Ok(LpNorm::from_sums(fine, coarse, p))
}

/// `L^p(T)` norm of a trigonometric polynomial, doubling the sampling grid
/// from `max(4096, 8 (2D + 1))` points until the refinement check passes.
pub fn lp_norm_periodic(f: &crate::squarefn::TrigPolynomial, p: f64) -> Result<LpNorm> {
    check_p(p)?;
    let d = f.degree() as usize;
    let mut m = (8 * (2 * d + 1)).max(4096).next_power_of_two();
    let cap = m << 6;
    loop {
        let vals: Vec<f64> = f.eval_grid(m)?.iter().map(|z| z.norm()).collect();
        let est = lp_norm_periodic_samples(&vals, p)?;
        if est.rel_err <= 1e-12 || m >= cap {
            return Ok(est);
        }
        m *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    Constant,
    Power(f64),
    Step,
    Custom,
    /// Produced by dyadic averaging at scale `2^-nu`.
    Averaged(i32),
}

/// Positive weight sampled at cell midpoints `-T + (j + 1/2) h`; sample
/// `j` is the value on the cell `[-T + j h, -T + (j + 1) h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    half_width: f64,
    samples: Vec<f64>,
    kind: WeightKind,
}

impl Weight {
    pub fn new(half_width: f64, samples: Vec<f64>, kind: WeightKind) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::BadHalfWidth(half_width));
        }
        if samples.is_empty() {
            return Err(Error::TooFew { need: 1, got: 0 });
        }
        if let Some(i) = samples.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { half_width, samples, kind })
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

    pub fn midpoint(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn scaled(&self, c: f64) -> Result<Weight> {
        Weight::new(self.half_width, self.samples.iter().map(|v| v * c).collect(), self.kind)
    }

    /// Mass of the weight over cell `j`.
    pub fn cell_mass(&self, j: usize) -> f64 {
        self.samples[j] * self.spacing()
    }
}

pub fn make_constant_weight(half_width: f64, n: usize, c: f64) -> Result<Weight> {
    Weight::new(half_width, vec![c; n], WeightKind::Constant)
}

/// `|x|^alpha` at the cell midpoints; exactly symmetric.
pub fn make_power_weight(alpha: f64, half_width: f64, n: usize) -> Result<Weight> {
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::OutOfRange("alpha must lie in the open interval (-1, 1)".into()));
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::TooFew { need: 2, got: n });
    }
    let h = 2.0 * half_width / n as f64;
    let mut samples = vec![0.0; n];
    for j in 0..n / 2 {
        // distance of the midpoint of cell n/2 + j from the origin
        let r = (j as f64 + 0.5) * h;
        let v = libm::pow(r, alpha);
        samples[n / 2 + j] = v;
        samples[n / 2 - 1 - j] = v;
    }
    Weight::new(half_width, samples, WeightKind::Power(alpha))
}

/// `inside` on cells whose midpoint lies in `[lo, hi]`, `outside` elsewhere.
pub fn make_step_weight(half_width: f64, n: usize, lo: f64, hi: f64, inside: f64, outside: f64) -> Result<Weight> {
    let h = 2.0 * half_width / n.max(1) as f64;
    let samples = (0..n)
        .map(|j| {
            let x = -half_width + (j as f64 + 0.5) * h;
            if lo <= x && x <= hi {
                inside
            } else {
                outside
            }
        })
        .collect();
    Weight::new(half_width, samples, WeightKind::Step)
}

/// `(sum |f_j|^2 w_j h)^{1/2}`.
pub fn weighted_l2_norm(f: &GridFunction, w: &Weight) -> Result<f64> {
    if f.len() != w.len() || f.half_width() != w.half_width() {
        return Err(Error::GridMismatch("function and weight use different grids".into()));
    }
    let h = f.spacing();
    Ok(libm::sqrt(f.samples().iter().zip(w.samples()).map(|(z, &wv)| z.norm_sqr() * wv).sum::<f64>() * h))
}

/// Interval family for the `A_2` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Scan {
    /// Longest interval, in cells; `0` means the whole grid.
    pub max_cells: usize,
    /// Lengths up to this many cells are all scanned at every start.
    pub exact_cells: usize,
    /// Starting positions per length for longer intervals.
    pub starts_per_length: usize,
    /// Let intervals wrap around the end (arcs of a circle).
    pub wrap: bool,
}

impl Default for A2Scan {
    fn default() -> Self {
        Self { max_cells: 0, exact_cells: 16, starts_per_length: 16, wrap: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Report {
    pub characteristic: f64,
    /// Spatial interval attaining the maximum.
    pub argmax: FrequencyInterval,
    pub family_size: usize,
}

/// Interval lengths in cells: `1..=exact`, then powers of two and their
/// `sqrt 2` multiples, and the cap itself.
fn length_ladder(exact: usize, cap: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=exact.min(cap)).collect();
    let mut i = 0;
    loop {
        let l = libm::round(libm::exp2(i as f64 / 2.0)) as usize;
        if l > cap {
            break;
        }
        if l > exact {
            out.push(l);
        }
        i += 1;
    }
    out.push(cap);
    out.sort_unstable();
    out.dedup();
    out
}

/// `sup_I <w>_I <1/w>_I` over a geometric family of grid-aligned intervals:
/// every start for short lengths, a stride of `L / starts_per_length` for
/// longer ones, plus starts at multiples of `L` shifted by `0`, `L/3`,
/// `2L/3`. Ties go to the smaller left endpoint, then the shorter length.
pub fn a2_characteristic(w: &Weight, scan: &A2Scan) -> A2Report {
    let n = w.len();
    let cap = if scan.max_cells == 0 { n } else { scan.max_cells.min(n) };
    // prefix sums over a doubled array cover wrapped intervals
    let reps = if scan.wrap { 2 } else { 1 };
    let mut pw = Vec::with_capacity(reps * n + 1);
    let mut pi = Vec::with_capacity(reps * n + 1);
    pw.push(0.0);
    pi.push(0.0);
    for r in 0..reps * n {
        let v = w.samples()[r % n];
        pw.push(pw[r] + v);
        pi.push(pi[r] + 1.0 / v);
    }
    let mut best = (f64::NEG_INFINITY, 0usize, 1usize);
    let mut family = 0usize;
    let consider = |s: usize, l: usize, best: &mut (f64, usize, usize)| {
        let a = (pw[s + l] - pw[s]) / l as f64;
        let b = (pi[s + l] - pi[s]) / l as f64;
        let v = a * b;
        let better = match v.partial_cmp(&best.0) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => s < best.1 || (s == best.1 && l < best.2),
            _ => false,
        };
        if better {
            *best = (v, s, l);
        }
    };
    for l in length_ladder(scan.exact_cells, cap) {
        let last = if scan.wrap { n - 1 } else { n - l };
        let mut starts: Vec<usize> = if l <= scan.exact_cells {
            (0..=last).collect()
        } else {
            let stride = (l / scan.starts_per_length.max(1)).max(1);
            let mut v: Vec<usize> = (0..=last).step_by(stride).collect();
            for off in [l / 3, (2 * l) / 3] {
                v.extend((off..=last).step_by(l));
            }
            v.sort_unstable();
            v.dedup();
            v
        };
        if scan.wrap && l == n {
            starts.truncate(1);
        }
        for s in starts {
            family += 1;
            consider(s, l, &mut best);
        }
    }
    let h = w.spacing();
    let a = -w.half_width() + best.1 as f64 * h;
    let argmax = FrequencyInterval::new(a, a + best.2 as f64 * h).expect("positive length");
    A2Report { characteristic: best.0.max(1.0), argmax, family_size: family }
}

/// Piecewise-constant weight equal to `<sigma>_I` on each lattice cell of
/// length `2^-nu` (cells are taken modulo the period `2T`).
pub fn dyadic_average_weight(sigma: &Weight, nu: i32, lat: &DyadicLattice) -> Result<Weight> {
    let (cell, offset) = lat.cell_layout(nu, sigma.half_width(), sigma.len())?;
    let n = sigma.len();
    let mut out = vec![0.0; n];
    for c in 0..n / cell {
        let start = offset + c * cell;
        let mean = (0..cell).map(|i| sigma.samples()[(start + i) % n]).sum::<f64>() / cell as f64;
        for i in 0..cell {
            out[(start + i) % n] = mean;
        }
    }
    Weight::new(sigma.half_width(), out, WeightKind::Averaged(nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use num_complex::Complex64;

    fn iv(a: f64, b: f64) -> FrequencyInterval {
        FrequencyInterval::new(a, b).unwrap()
    }

    #[test]
    fn lp_norm_constant_and_sine() {
        let c = GridFunction::from_fn(2.0, 1024, |_| Complex64::new(-1.5, 0.0)).unwrap();
        let v = lp_norm_grid(&c, 3.0, &iv(0.0, 1.0)).unwrap();
        assert!((v.value - 1.5).abs() < 1e-12);
        let s = GridFunction::from_fn(1.0, 1 << 12, |x| Complex64::new((2.0 * PI * x).sin(), 0.0)).unwrap();
        let v = lp_norm_grid(&s, 1.0, &iv(0.0, 1.0)).unwrap();
        assert!((v.value - 2.0 / PI).abs() < 1e-6);
        assert!(v.rel_err < 1e-4);
    }

    #[test]
    fn lp_norm_full_domain_is_energy() {
        let f = GridFunction::from_fn(4.0, 512, |x| Complex64::new(libm::exp(-x * x), 0.5 * x * libm::exp(-x * x)))
            .unwrap();
        let v = lp_norm_grid(&f, 2.0, &iv(-4.0, 4.0)).unwrap();
        let energy = crate::spectral::forward_transform(&f).unwrap().energy();
        assert!((v.value * v.value - energy).abs() < 1e-8 * energy);
        assert!(lp_norm_grid(&f, 0.5, &iv(0.0, 1.0)).is_err());
        assert!(lp_norm_grid(&f, 1.0, &iv(0.0, 5.0)).is_err());
    }

    #[test]
    fn weighted_norm_examples() {
        let f = GridFunction::from_fn(2.0, 256, |x| Complex64::new(x.cos(), 0.0)).unwrap();
        let one = make_constant_weight(2.0, 256, 1.0).unwrap();
        let full = lp_norm_grid(&f, 2.0, &iv(-2.0, 2.0)).unwrap().value;
        assert!((weighted_l2_norm(&f, &one).unwrap() - full).abs() < 1e-12);
        let two = one.scaled(2.0).unwrap();
        let r = weighted_l2_norm(&f, &two).unwrap() / weighted_l2_norm(&f, &one).unwrap();
        assert!((r - libm::sqrt(2.0)).abs() < 1e-12);
        assert_eq!(weighted_l2_norm(&GridFunction::zeros(2.0, 256).unwrap(), &one).unwrap(), 0.0);
        assert!(weighted_l2_norm(&f, &make_constant_weight(2.0, 128, 1.0).unwrap()).is_err());
    }

    #[test]
    fn power_weight_examples() {
        let w0 = make_power_weight(0.0, 4.0, 64).unwrap();
        assert!(w0.samples().iter().all(|&v| v == 1.0));
        let w = make_power_weight(0.4, 3.0, 64).unwrap();
        for j in 0..64 {
            assert_eq!(w.samples()[j], w.samples()[63 - j]);
        }
        assert!(w.samples()[32..].windows(2).all(|p| p[0] < p[1]));
        assert!(make_power_weight(1.0, 1.0, 8).is_err());
        assert!(make_power_weight(-1.5, 1.0, 8).is_err());
    }

    #[test]
    fn a2_constant_and_step() {
        let w = make_constant_weight(4.0, 256, 3.0).unwrap();
        let r = a2_characteristic(&w, &A2Scan::default());
        assert!((r.characteristic - 1.0).abs() < 1e-12);
        assert!(r.family_size > 0);
        let step = make_step_weight(4.0, 512, 0.0, 1.0, 2.0, 1.0).unwrap();
        let r = a2_characteristic(&step, &A2Scan::default());
        assert!((r.characteristic - 9.0 / 8.0).abs() < 1e-3, "{}", r.characteristic);
        let s = a2_characteristic(&step.scaled(8.0).unwrap(), &A2Scan::default());
        assert_eq!(s.characteristic, r.characteristic);
        let s = a2_characteristic(&step.scaled(7.0).unwrap(), &A2Scan::default());
        assert!((s.characteristic - r.characteristic).abs() < 1e-12);
    }

    #[test]
    fn averaging_preserves_mass() {
        let w = make_power_weight(0.5, 4.0, 256).unwrap();
        let lat = DyadicLattice::new(0.0);
        let a = dyadic_average_weight(&w, 0, &lat).unwrap();
        // unit cells hold 32 samples each
        for c in 0..8 {
            let m0: f64 = w.samples()[c * 32..(c + 1) * 32].iter().sum();
            let m1: f64 = a.samples()[c * 32..(c + 1) * 32].iter().sum();
            assert!((m0 - m1).abs() < 1e-12 * m0);
        }
        let twice = dyadic_average_weight(&a, 0, &lat).unwrap();
        assert!(twice.samples().iter().zip(a.samples()).all(|(x, y)| (x - y).abs() < 1e-14 * y));
        assert!(matches!(dyadic_average_weight(&w, 6, &lat), Err(Error::ScaleTooFine { nu: 6 })));
        let c = make_constant_weight(4.0, 256, 2.5).unwrap();
        assert!(dyadic_average_weight(&c, 1, &lat).unwrap().samples().iter().all(|&v| (v - 2.5).abs() < 1e-15));
    }
}
